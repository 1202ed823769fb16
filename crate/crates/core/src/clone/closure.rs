//! Fixed-point computation of the clone generated by a set of functions.
//!
//! Rules, all on unary coefficient functions per component `i` and grade:
//! substitution of the coefficient arguments, identification of the top
//! grade into grade 1, products by composition into one variable, and
//! cross-component probes. Every stored atom carries a certificate.

use crate::arith::{FnTable, Layout, SquarefreeModulus};
use crate::error::{Error, Result};
use crate::linalg::{Subspace, TrackedBasis};
use crate::pclonoid::{extract, Builder};
use crate::poly::{component_poly, CoeffFn, CoeffRingSig, Monomial, RPoly};

use super::cert::{combination, compose, generator, linear_by_block, projection, sum, unit, CNode};
use super::probe::{self, ProbeParams, SideDomain};
use super::rep::{all_alphas, atom_poly, monomial_from_atom, place, red, reps, spread, Atom, CloneConfig, CloneRep, ProbeMode};
use super::translate::{shrink, translate, working_arity};

/// The clone generated by `gens` together with `Clo(Z_s, +)`.
pub fn from_generators(modulus: &SquarefreeModulus, gens: &[FnTable], cap: usize) -> Result<CloneRep> {
    from_generators_with(modulus, gens, &CloneConfig { cap, ..CloneConfig::default() })
}

pub fn from_generators_with(modulus: &SquarefreeModulus, gens: &[FnTable], cfg: &CloneConfig) -> Result<CloneRep> {
    modulus.check_enumerable()?;
    modulus.domain_size(cfg.cap)?;
    for g in gens {
        if g.modulus() != modulus {
            return Err(Error::ModulusMismatch);
        }
        if g.arity() > cfg.cap {
            return Err(Error::ArityAboveCap { arity: g.arity(), cap: cfg.cap });
        }
    }
    let mut e = Engine { rep: CloneRep::empty(modulus, cfg.cap, gens.to_vec()), cfg: cfg.clone(), work: Vec::new(), modes: vec![None; modulus.m()] };
    e.seed()?;
    e.run()?;
    let mut rep = e.rep;
    rep.probe_mode = e
        .modes
        .iter()
        .map(|m| m.unwrap_or(ProbeMode::Exhaustive { z_arity: if modulus.m() == 2 { cfg.probe_arity } else { 1 } }))
        .collect();
    rep.reset_levels();
    Ok(rep)
}

struct Engine {
    rep: CloneRep,
    cfg: CloneConfig,
    work: Vec<(usize, usize, usize)>,
    modes: Vec<Option<ProbeMode>>,
}

/// Side data of one other component for a probe: restricted grade spaces
/// and how to express their vectors through atoms.
struct Side {
    comp: usize,
    spaces: Vec<Subspace>,
    bases: Vec<TrackedBasis>,
    sources: Vec<Vec<(usize, Vec<Vec<u8>>)>>,
}

impl Engine {
    fn m(&self) -> usize {
        self.rep.modulus.m()
    }

    fn offer(&mut self, i: usize, g: usize, coeff: &[u8], make: impl FnOnce(&Self) -> Result<CNode>) -> Result<bool> {
        if self.rep.grades[i][g].contains(coeff) {
            return Ok(false);
        }
        let cert = make(self)?;
        debug_assert!(cert.arity == g.max(1), "atom certificate arity {} for grade {g}", cert.arity);
        let grade = &mut self.rep.grades[i][g];
        grade.basis.push(coeff);
        grade.atoms.push(Atom { coeff: coeff.to_vec(), cert });
        self.work.push((i, g, grade.atoms.len() - 1));
        self.saturate()?;
        Ok(true)
    }

    /// Substitutions of the coefficient arguments and the top grade
    /// identification, applied to every new atom.
    fn saturate(&mut self) -> Result<()> {
        let m = self.m();
        while let Some((i, g, k)) = self.work.pop() {
            let atom = self.rep.grades[i][g].atoms[k].clone();
            let sig1 = self.rep.unary_sig(i);
            let a = g.max(1);
            for alpha in all_alphas(&self.rep.modulus.others(i), 1) {
                let c = spread(&sig1, &atom.coeff, &alpha);
                if self.rep.grades[i][g].contains(&c) {
                    continue;
                }
                let padded: Vec<Vec<u8>> = alpha.iter().map(|v| (0..a).map(|x| if x == 0 { v[0] } else { 0 }).collect()).collect();
                let cert = place(m, i, &atom.cert, &padded, a, |c| c);
                let grade = &mut self.rep.grades[i][g];
                grade.basis.push(&c);
                grade.atoms.push(Atom { coeff: c, cert });
                self.work.push((i, g, grade.atoms.len() - 1));
            }
            if g == self.rep.modulus.prime(i) as usize && !self.rep.grades[i][1].contains(&atom.coeff) {
                let cert = compose(&atom.cert, vec![projection(m, 1, 0); g], 1);
                let grade = &mut self.rep.grades[i][1];
                grade.basis.push(&atom.coeff);
                grade.atoms.push(Atom { coeff: atom.coeff.clone(), cert });
                self.work.push((i, 1, grade.atoms.len() - 1));
            }
        }
        Ok(())
    }

    fn total(&self) -> usize {
        self.rep.grades.iter().flatten().map(|g| g.atoms.len()).sum()
    }

    fn seed(&mut self) -> Result<()> {
        let m = self.m();
        for i in 0..m {
            let q = self.rep.unary_sig(i).domain_size();
            let one = vec![1u8; q];
            self.offer(i, 1, &one, |_| Ok(linear_by_block(m, 1, |b| vec![(b == i) as u8])))?;
        }
        for (gi, f) in self.rep.generators.clone().iter().enumerate() {
            let n = f.arity();
            for i in 0..m {
                let poly = component_poly(f, i)?;
                if poly.is_zero() {
                    continue;
                }
                let proj = linear_by_block(m, 1, |b| vec![(b == i) as u8]);
                let fi = compose(&proj, vec![generator(gi, n)], n);
                for mono in poly.monomials().cloned().collect::<Vec<_>>() {
                    let (g, c, t) = atom_from_term(&self.rep.modulus, i, &fi, &poly, &mono)?;
                    for alpha in all_alphas(&self.rep.modulus.others(i), n) {
                        let r = c.along(&alpha)?;
                        let rv = r.into_values();
                        self.offer(i, g, &rv, |e| Ok(restrict(e.m(), i, &t, g, &alpha)))?;
                    }
                }
            }
        }
        Ok(())
    }

    fn run(&mut self) -> Result<()> {
        for _round in 0..10_000 {
            let before = self.total();
            self.products()?;
            self.probes()?;
            if self.total() == before {
                return Ok(());
            }
        }
        Err(Error::GuardExceeded("clone fixed point rounds".into()))
    }

    /// `r·x_1⋯x_{D-1}·(c·x_1⋯x_d)` for atoms `r` (grade `≥ 1`) and `c`.
    fn products(&mut self) -> Result<()> {
        let m = self.m();
        for i in 0..m {
            let p = self.rep.modulus.prime(i);
            let top = p as usize;
            for g1 in 1..=top {
                for k1 in 0..self.rep.grades[i][g1].atoms.len() {
                    for g2 in 0..=top {
                        for k2 in 0..self.rep.grades[i][g2].atoms.len() {
                            let r = self.rep.grades[i][g1].atoms[k1].clone();
                            let c = self.rep.grades[i][g2].atoms[k2].clone();
                            let prod: Vec<u8> = r.coeff.iter().zip(&c.coeff).map(|(&a, &b)| (a as u32 * b as u32 % p) as u8).collect();
                            if prod.iter().all(|&x| x == 0) {
                                continue;
                            }
                            for &d in &reps(g1, p) {
                                for &d2 in &reps(g2, p) {
                                    let target = red(d - 1 + d2, p);
                                    self.offer(i, target, &prod, |e| product_cert(&e.rep.modulus, i, (g1, &r), (g2, &c), d, d2))?;
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn side(&self, i: usize, j: usize, n: usize) -> Side {
        let dom = SideDomain::new(&self.rep.modulus, i, j, n);
        let unary = Layout::new(&self.rep.modulus.others(j), 1);
        let shape_radices: Vec<u32> = dom.shape.iter().map(|&(q, _)| q).collect();
        let pj = self.rep.modulus.prime(j);
        let dim = dom.size();
        let mut spaces = Vec::new();
        let mut bases = Vec::new();
        let mut sources = Vec::new();
        for l in 0..pj as usize {
            let mut basis = TrackedBasis::new(pj, dim);
            let mut src = Vec::new();
            'outer: for (k, atom) in self.rep.grades[j][l].atoms.iter().enumerate() {
                for alpha in alphas_of_shape(&shape_radices, &dom.shape) {
                    if basis.rank() == dim {
                        break 'outer;
                    }
                    let v = probe::restricted(&dom, &unary, &atom.coeff, &alpha);
                    basis.push(&v);
                    src.push((k, alpha));
                }
            }
            spaces.push(basis.subspace());
            bases.push(basis);
            sources.push(src);
        }
        Side { comp: j, spaces, bases, sources }
    }

    fn probes(&mut self) -> Result<()> {
        let m = self.m();
        for i in 0..m {
            let p = self.rep.modulus.prime(i);
            let others: Vec<usize> = (0..m).filter(|&b| b != i).collect();
            let mut n = if m == 2 { self.cfg.probe_arity.max(1) } else { 1 };
            let mut sides: Vec<Side> = others.iter().map(|&j| self.side(i, j, n)).collect();
            while n > 1 && probe::space_size(&sides.iter().map(|s| s.spaces.clone()).collect::<Vec<_>>()) > crate::guard::limit(self.cfg.probe_guard) {
                n -= 1;
                sides = others.iter().map(|&j| self.side(i, j, n)).collect();
            }
            let spaces: Vec<Vec<Subspace>> = sides.iter().map(|s| s.spaces.clone()).collect();
            let params = ProbeParams { n, guard: self.cfg.probe_guard, samples: self.cfg.probe_samples, seed: self.cfg.seed };
            let mut sampled = false;
            for j in 0..=p as usize {
                for k in 0..self.rep.grades[i][j].atoms.len() {
                    let r = self.rep.grades[i][j].atoms[k].clone();
                    if r.coeff.iter().all(|&x| x == r.coeff[0]) {
                        continue;
                    }
                    let out = probe::probe(&self.rep.modulus, i, &r.coeff, &spaces, &params)?;
                    sampled |= out.sampled;
                    for entry in &out.entries {
                        for &d in &reps(j, p) {
                            let target = red(d + entry.degree, p);
                            self.offer(i, target, &entry.coeff, |e| e.probe_cert(i, (j, &r), d, n, &sides, entry))?;
                        }
                    }
                }
            }
            let mode = if sampled { ProbeMode::Sampled { z_arity: n, samples: self.cfg.probe_samples } } else { ProbeMode::Exhaustive { z_arity: n } };
            self.modes[i] = Some(match self.modes[i] {
                Some(ProbeMode::Sampled { .. }) => self.modes[i].unwrap(),
                Some(ProbeMode::Exhaustive { z_arity }) if !sampled => ProbeMode::Exhaustive { z_arity: z_arity.min(n) },
                _ => mode,
            });
        }
        Ok(())
    }

    /// Certificate for the probe coefficient `entry` of atom `r` (grade `j`)
    /// used with `d` host variables.
    fn probe_cert(&self, i: usize, (j, r): (usize, &Atom), d: usize, n: usize, sides: &[Side], entry: &probe::ProbeEntry) -> Result<CNode> {
        let md = &self.rep.modulus;
        let m = md.m();
        let p = md.prime(i);
        let w = d + n;
        let host = if d == j {
            r.cert.clone()
        } else {
            monomial_from_atom(md, i, j, r, &Monomial::multilinear(d))?
        };
        // U: the probe functions of every other component, as clone terms.
        let mut terms = Vec::new();
        let mut scalars = Vec::new();
        for (s, side) in sides.iter().enumerate() {
            let jj = side.comp;
            for (l, v) in entry.witness[s].iter().enumerate() {
                let combo = side.bases[l].express(v).ok_or_else(|| Error::Precondition("probe witness outside the grade".into()))?;
                for (src, lambda) in combo {
                    let (k, alpha) = &side.sources[l][src];
                    let atom = &self.rep.grades[jj][l].atoms[*k];
                    let base = monomial_from_atom(md, jj, l, atom, &Monomial::new(vec![l as u8]))?;
                    // Source blocks of `jj` in order; block `i` reads z, the others t.
                    let mut it = alpha.iter();
                    let coeffs: Vec<Vec<u8>> = (0..m)
                        .map(|b| {
                            if b == jj {
                                unit(w, 0)
                            } else {
                                let a = it.next().expect("one vector per block");
                                let mut v = vec![0u8; w];
                                if b == i {
                                    v[d..d + n].copy_from_slice(a);
                                } else {
                                    v[0] = a[0];
                                }
                                v
                            }
                        })
                        .collect();
                    let arg = linear_by_block(m, w, |b| coeffs[b].clone());
                    let mut args = vec![arg];
                    for c in 1..base.arity {
                        args.push(linear_by_block(m, w, |b| if b == jj { unit(w, c) } else { vec![0; w] }));
                    }
                    terms.push(compose(&base, args, w));
                    scalars.push((0..m).map(|b| if b == jj { lambda } else { 0 }).collect::<Vec<u8>>());
                }
            }
        }
        let u = combination(m, terms, &scalars, w);
        let l0 = linear_by_block(m, w, |b| if b == i && d >= 1 { unit(w, 0) } else { vec![0; w] });
        let mut args = vec![sum(&l0, &u)];
        for c in 1..host.arity {
            args.push(linear_by_block(m, w, |b| if b == i { unit(w, c) } else { vec![0; w] }));
        }
        let f = compose(&host, args, w);
        // Component i of f: Σ_k e_k(t)·x_1⋯x_d·z^k.
        let data = probe::coefficients(md, i, &r.coeff, n, &entry.witness);
        let sig1 = CoeffRingSig::new(p, md.others(i), 1);
        let q = sig1.domain_size();
        let pu = p as usize;
        let mut poly_terms = Vec::new();
        for kidx in 0..pu.pow(n as u32) {
            let c = &data[kidx * q..(kidx + 1) * q];
            if c.iter().all(|&x| x == 0) {
                continue;
            }
            let mut exps = vec![1u8; d];
            let mut z = vec![0u8; n];
            let mut rem = kidx;
            for e in z.iter_mut().rev() {
                *e = (rem % pu) as u8;
                rem /= pu;
            }
            exps.extend(z);
            poly_terms.push((Monomial::new(exps), CoeffFn::new(sig1.clone(), c.to_vec())?));
        }
        let poly = RPoly::from_terms(sig1, poly_terms)?;
        let mut mono = vec![1u8; d];
        mono.extend(&entry.exps);
        let (g, _, t) = atom_from_term(md, i, &f, &poly, &Monomial::new(mono))?;
        debug_assert_eq!(g, red(d + entry.degree, p));
        Ok(shrink(&t, m, i, g.max(1)))
    }
}

/// Every `α` with one vector per block of `shape`, of the given lengths.
fn alphas_of_shape(radices: &[u32], shape: &[(u32, usize)]) -> Vec<Vec<Vec<u8>>> {
    let mut out: Vec<Vec<Vec<u8>>> = vec![Vec::new()];
    for (&q, &(_, count)) in radices.iter().zip(shape) {
        let vecs = all_alphas(&[q], count);
        out = out.into_iter().flat_map(|pre| vecs.iter().map(move |v| {
            let mut x = pre.clone();
            x.push(v[0].clone());
            x
        })).collect();
    }
    out
}

/// Restricts a certificate for `c·x_1⋯x_g` with `a`-ary coefficient `c` to
/// the unary coefficient `t ↦ c(α_1 t, ...)`.
fn restrict(m: usize, i: usize, node: &CNode, g: usize, alpha: &[Vec<u8>]) -> CNode {
    let w = node.arity;
    let k = g.max(1);
    let args = (0..w)
        .map(|c| {
            linear_by_block(m, k, |b| {
                if b == i {
                    if c < g {
                        unit(k, c)
                    } else {
                        vec![0; k]
                    }
                } else {
                    let a = &alpha[if b < i { b } else { b - 1 }];
                    let mut v = vec![0u8; k];
                    if c < a.len() {
                        v[0] = a[c];
                    }
                    v
                }
            })
        })
        .collect();
    compose(node, args, k)
}

/// From `f` (component `i` only) with component polynomial `poly`, derive
/// `c·x_1⋯x_G` for the `mono` term `c·mono`, `G = red(deg mono)`. Returns the
/// grade, the coefficient and a certificate whose coefficient arguments are
/// the first `poly.sig().arity` coordinates.
fn atom_from_term(md: &SquarefreeModulus, i: usize, f: &CNode, poly: &RPoly, mono: &Monomial) -> Result<(usize, CoeffFn, CNode)> {
    let m = md.m();
    let p = md.prime(i);
    let gens = vec![poly.clone()];
    let b = Builder::new(&gens);
    let mut node = extract::project_node(&b, b.generator(0)?, mono)?;
    let t = mono.degree();
    if t >= 1 {
        node = extract::extract_node(&b, node, mono)?;
    }
    let g = red(t, p);
    if t >= 2 && g != t {
        node = extract::degree_shift_node(&b, node, t, &Monomial::multilinear(g))?;
    }
    let c = node.claim.coeff(&Monomial::multilinear(g));
    let w = working_arity(&node, &[f.arity]);
    let cert = translate(&node, &[f.clone()], m, i, w)?;
    Ok((g, c, cert))
}

fn product_cert(md: &SquarefreeModulus, i: usize, (g1, r): (usize, &Atom), (g2, c): (usize, &Atom), d: usize, d2: usize) -> Result<CNode> {
    let m = md.m();
    let p = md.prime(i);
    let gens = vec![atom_poly(md, i, g1, &r.coeff), atom_poly(md, i, g2, &c.coeff)];
    let b = Builder::new(&gens);
    let host = if d == g1 { b.generator(0)? } else { extract::degree_shift_node(&b, b.generator(0)?, g1, &Monomial::multilinear(d))? };
    let sub = if d2 == g2 { b.generator(1)? } else { extract::degree_shift_node(&b, b.generator(1)?, g2, &Monomial::multilinear(d2))? };
    let mut node = b.compose(d - 1, d, &host, &sub)?;
    let t = d - 1 + d2;
    let g = red(t, p);
    if t >= 2 && g != t {
        node = extract::degree_shift_node(&b, node, t, &Monomial::multilinear(g))?;
    }
    let w = working_arity(&node, &[r.cert.arity, c.cert.arity]);
    let cert = translate(&node, &[r.cert.clone(), c.cert.clone()], m, i, w)?;
    Ok(shrink(&cert, m, i, g.max(1)))
}
