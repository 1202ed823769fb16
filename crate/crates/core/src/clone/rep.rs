//! Graded representation of a clone above `Clo(Z_s, +)`.
//!
//! For prime index `i` and grade `g ∈ {0, ..., p_i}` the clone stores the
//! unary coefficient functions `r` whose induced monomial
//! `r(y)·x_1⋯x_g` (with `max(g, 1)` arguments, `r` reading the first
//! coordinate of the other blocks) lies in the clone. Each stored basis
//! function (an atom) carries a certificate for that monomial.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use crate::arith::{FnTable, Layout, SquarefreeModulus};
use crate::clonoid::{ClonoidSig, LinClonoid};
use crate::error::{Error, Result};
use crate::linalg::{Subspace, TrackedBasis};
use crate::pclonoid::{extract, Builder};
use crate::poly::{component_poly, CoeffFn, CoeffRingSig, Monomial, RPoly};

use super::cert::{combination, compose, linear_by_block, unit, CNode, CloneCertificate};
use super::translate::{shrink, translate, working_arity};

/// Representative grade of a monomial degree.
pub fn red(d: usize, p: u32) -> usize {
    if d <= 1 {
        d
    } else {
        (d - 2) % (p as usize - 1) + 2
    }
}

/// Degrees worth trying for a grade: the grade itself and, from 2 on, one
/// more period.
pub fn reps(g: usize, p: u32) -> Vec<usize> {
    if g <= 1 {
        vec![g]
    } else {
        vec![g, g + p as usize - 1]
    }
}

/// A unary coefficient function together with a certificate for its
/// induced monomial.
#[derive(Clone, Debug)]
pub struct Atom {
    pub coeff: Vec<u8>,
    pub cert: CNode,
}

/// Atoms of one grade.
#[derive(Clone, Debug)]
pub struct Grade {
    pub(crate) atoms: Vec<Atom>,
    pub(crate) basis: TrackedBasis,
}

impl Grade {
    pub(crate) fn new(p: u32, dim: usize) -> Self {
        Grade { atoms: Vec::new(), basis: TrackedBasis::new(p, dim) }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn contains(&self, v: &[u8]) -> bool {
        self.basis.contains(v)
    }

    pub fn unary(&self) -> Subspace {
        self.basis.subspace()
    }
}

/// The grade at arity `n`, spanned by the atoms precomposed with every
/// linear map from `n` coordinates to one.
#[derive(Clone, Debug)]
pub struct LevelIndex {
    pub(crate) basis: TrackedBasis,
    pub(crate) sources: Vec<(usize, Vec<Vec<u8>>)>,
}

impl LevelIndex {
    pub fn subspace(&self) -> Subspace {
        self.basis.subspace()
    }
}

/// How thoroughly the cross-component rule was probed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProbeMode {
    /// Every probe function with the given number of block variables.
    Exhaustive { z_arity: usize },
    /// A seeded sample of probe functions.
    Sampled { z_arity: usize, samples: usize },
}

/// Fixed-point settings.
#[derive(Clone, Debug)]
pub struct CloneConfig {
    /// Largest arity of generators and membership queries.
    pub cap: usize,
    /// Number of block variables in cross-component probes.
    pub probe_arity: usize,
    /// Largest number of probe functions enumerated exhaustively.
    pub probe_guard: u64,
    /// Sample size when the probe space is above the guard.
    pub probe_samples: usize,
    pub seed: u64,
}

impl Default for CloneConfig {
    fn default() -> Self {
        CloneConfig { cap: 3, probe_arity: 2, probe_guard: 1 << 20, probe_samples: 1 << 15, seed: 0 }
    }
}

/// A clone above `Clo(Z_s, +)` given by its graded coefficient system.
#[derive(Clone, Debug)]
pub struct CloneRep {
    pub(crate) modulus: SquarefreeModulus,
    pub(crate) cap: usize,
    pub(crate) grades: Vec<Vec<Grade>>,
    pub(crate) generators: Vec<FnTable>,
    pub(crate) probe_mode: Vec<ProbeMode>,
    pub(crate) levels: Vec<Vec<Vec<OnceLock<Arc<LevelIndex>>>>>,
}

/// All vectors of `Π_b Z_{radix_b}^n`, in lexicographic order.
pub(crate) fn all_alphas(radices: &[u32], n: usize) -> Vec<Vec<Vec<u8>>> {
    let layout = Layout::new(radices, n);
    (0..layout.size()).map(|k| layout.decode(k)).collect()
}

/// `t ↦ coeff(⟨α_1, y_1⟩, ...)` as an `n`-ary table over the other blocks.
pub(crate) fn spread(sig1: &CoeffRingSig, coeff: &[u8], alpha: &[Vec<u8>]) -> Vec<u8> {
    let n = alpha.first().map_or(0, |a| a.len());
    let mats: Vec<Vec<Vec<u8>>> = alpha.iter().map(|a| vec![a.clone()]).collect();
    CoeffFn::new_unchecked(sig1.clone(), coeff.to_vec()).substitute(&mats, n).expect("shapes agree").into_values()
}

impl CloneRep {
    pub(crate) fn empty(modulus: &SquarefreeModulus, cap: usize, generators: Vec<FnTable>) -> Self {
        let grades = (0..modulus.m())
            .map(|i| {
                let p = modulus.prime(i);
                let dim = modulus.others(i).iter().map(|&q| q as usize).product();
                (0..=p as usize).map(|_| Grade::new(p, dim)).collect()
            })
            .collect();
        CloneRep {
            modulus: modulus.clone(),
            cap,
            grades,
            generators,
            probe_mode: Vec::new(),
            levels: Vec::new(),
        }
    }

    pub(crate) fn reset_levels(&mut self) {
        self.levels = (0..self.modulus.m())
            .map(|i| (0..=self.modulus.prime(i) as usize).map(|_| (0..=self.cap).map(|_| OnceLock::new()).collect()).collect())
            .collect();
    }

    pub fn modulus(&self) -> &SquarefreeModulus {
        &self.modulus
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn generators(&self) -> &[FnTable] {
        &self.generators
    }

    pub fn probe_mode(&self) -> &[ProbeMode] {
        &self.probe_mode
    }

    pub fn grade(&self, i: usize, g: usize) -> &Grade {
        &self.grades[i][g]
    }

    /// Unary signature of component `i`.
    pub fn unary_sig(&self, i: usize) -> CoeffRingSig {
        CoeffRingSig::new(self.modulus.prime(i), self.modulus.others(i), 1)
    }

    pub fn clonoid_sig(&self, i: usize) -> ClonoidSig {
        ClonoidSig { p: self.modulus.prime(i), sources: self.modulus.others(i) }
    }

    /// Canonical key: the unary subspace of every grade.
    pub fn key(&self) -> Vec<Vec<Subspace>> {
        self.grades.iter().map(|gs| gs.iter().map(|g| g.unary()).collect()).collect()
    }

    /// The grade at arity `n ≤ cap`, built on first use.
    pub fn level(&self, i: usize, g: usize, n: usize) -> Result<Arc<LevelIndex>> {
        if n > self.cap {
            return Err(Error::ArityAboveCap { arity: n, cap: self.cap });
        }
        Ok(self.levels[i][g][n].get_or_init(|| Arc::new(build_level(&self.modulus, i, &self.grades[i][g], n))).clone())
    }

    /// `ρ`: the grade clonoids, indexed by `[i][g]`.
    pub fn rho(&self) -> Result<Vec<Vec<LinClonoid>>> {
        (0..self.modulus.m())
            .map(|i| {
                (0..self.grades[i].len())
                    .map(|g| {
                        let levels = (0..=self.cap).map(|n| self.level(i, g, n).map(|l| l.subspace())).collect::<Result<Vec<_>>>()?;
                        Ok(LinClonoid::from_levels(self.clonoid_sig(i), self.cap, levels))
                    })
                    .collect()
            })
            .collect()
    }

    fn check(&self, other: &CloneRep) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch);
        }
        Ok(())
    }

    pub fn equal(&self, other: &CloneRep) -> Result<bool> {
        self.check(other)?;
        Ok(self.key() == other.key())
    }

    pub fn leq(&self, other: &CloneRep) -> Result<bool> {
        self.check(other)?;
        Ok(self
            .grades
            .iter()
            .zip(&other.grades)
            .all(|(a, b)| a.iter().zip(b).all(|(x, y)| x.unary().is_subspace_of(&y.unary()))))
    }

    /// One induced monomial `r·x_1⋯x_g` per unary basis function of every
    /// grade, at arity `max(g, 1)`.
    pub fn extract_generators(&self) -> Result<Vec<FnTable>> {
        let mut out = Vec::new();
        for i in 0..self.modulus.m() {
            let sig = self.unary_sig(i);
            for (g, grade) in self.grades[i].iter().enumerate() {
                for v in grade.unary().basis() {
                    let r = CoeffFn::new(sig.clone(), v.clone())?;
                    let f = RPoly::monomial(&r, Monomial::multilinear(g)).induce(&self.modulus, i, g.max(1))?;
                    debug_assert!(f.arity() <= *self.modulus.primes().iter().max().unwrap() as usize);
                    out.push(f);
                }
            }
        }
        Ok(out)
    }

    /// Membership by grade lookup of every monomial coefficient.
    pub fn contains(&self, f: &FnTable) -> Result<bool> {
        self.check_query(f)?;
        for i in 0..self.modulus.m() {
            let w = component_poly(f, i)?;
            for (m, c) in w.terms() {
                let g = red(m.degree(), self.modulus.prime(i));
                if !self.level(i, g, f.arity())?.basis.contains(c.values()) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    fn check_query(&self, f: &FnTable) -> Result<()> {
        if f.modulus() != &self.modulus {
            return Err(Error::ModulusMismatch);
        }
        if f.arity() > self.cap {
            return Err(Error::ArityAboveCap { arity: f.arity(), cap: self.cap });
        }
        Ok(())
    }

    /// Membership with a certificate when the answer is yes.
    pub fn member(&self, f: &FnTable) -> Result<(bool, Option<CloneCertificate>)> {
        self.check_query(f)?;
        let n = f.arity();
        let m = self.modulus.m();
        let mut terms: Vec<CNode> = Vec::new();
        let mut scalars: Vec<Vec<u8>> = Vec::new();
        let mut cache: HashMap<(usize, usize, usize, Monomial), CNode> = HashMap::new();
        for i in 0..m {
            let p = self.modulus.prime(i);
            let w = component_poly(f, i)?;
            for (mono, c) in w.terms() {
                let g = red(mono.degree(), p);
                let level = self.level(i, g, n)?;
                let Some(combo) = level.basis.express(c.values()) else {
                    return Ok((false, None));
                };
                for (src, lambda) in combo {
                    let (k, alpha) = &level.sources[src];
                    let key = (i, g, *k, mono.clone());
                    let base = match cache.get(&key) {
                        Some(b) => b.clone(),
                        None => {
                            let b = self.monomial_from_atom(i, g, *k, mono)?;
                            cache.insert(key, b.clone());
                            b
                        }
                    };
                    terms.push(place(m, i, &base, alpha, n, |c| c));
                    scalars.push((0..m).map(|b| if b == i { lambda } else { 0 }).collect());
                }
            }
        }
        let root = combination(m, terms, &scalars, n);
        Ok((true, Some(CloneCertificate::new(self.modulus.clone(), self.generators.clone(), root))))
    }

    /// Certificate for `r_k·x^pattern` (atom `k` of grade `g` of component
    /// `i`) at arity `max(num_vars, 1)`; `pattern` must have degree class `g`.
    pub fn monomial_from_atom(&self, i: usize, g: usize, k: usize, pattern: &Monomial) -> Result<CNode> {
        monomial_from_atom(&self.modulus, i, g, &self.grades[i][g].atoms[k], pattern)
    }
}

/// Places a monomial certificate of arity `A` into arity `n`: block-`i`
/// variable `c` goes to coordinate `coord(c)` and the coefficient reads
/// `⟨α_b, y_b⟩` in every other block `b`.
pub(crate) fn place(m: usize, i: usize, base: &CNode, alpha: &[Vec<u8>], n: usize, coord: impl Fn(usize) -> usize) -> CNode {
    let a = base.arity;
    let args = (0..a)
        .map(|c| {
            linear_by_block(m, n, |b| {
                if b == i {
                    // Unused slots of a constant or linear monomial stay at 0.
                    if c < n && coord(c) < n {
                        unit(n, coord(c))
                    } else {
                        vec![0; n]
                    }
                } else {
                    if c == 0 { alpha[if b < i { b } else { b - 1 }].clone() } else { vec![0; n] }
                }
            })
        })
        .collect();
    compose(base, args, n)
}

pub(crate) fn atom_poly(modulus: &SquarefreeModulus, i: usize, g: usize, coeff: &[u8]) -> RPoly {
    let sig = CoeffRingSig::new(modulus.prime(i), modulus.others(i), 1);
    RPoly::monomial(&CoeffFn::new_unchecked(sig, coeff.to_vec()), Monomial::multilinear(g))
}

/// Certificate for `r·x^pattern` from the atom `r·x_1⋯x_g`.
pub(crate) fn monomial_from_atom(modulus: &SquarefreeModulus, i: usize, g: usize, atom: &Atom, pattern: &Monomial) -> Result<CNode> {
    let m = modulus.m();
    let d = pattern.degree();
    let vars = pattern.num_vars();
    let target = vars.max(1);
    if d <= 1 {
        if d != g {
            return Err(Error::Precondition(format!("degree {d} monomial from grade {g}")));
        }
        if d == 0 {
            return Ok(super::cert::lift(m, &atom.cert, target));
        }
        let v = pattern.support()[0];
        let args = vec![linear_by_block(m, target, |b| if b == i { unit(target, v) } else { unit(target, 0) })];
        return Ok(compose(&atom.cert, args, target));
    }
    if pattern == &Monomial::multilinear(g) {
        return Ok(atom.cert.clone());
    }
    let gens = vec![atom_poly(modulus, i, g, &atom.coeff)];
    let b = Builder::new(&gens);
    let node = extract::degree_shift_node(&b, b.generator(0)?, g, pattern)?;
    let w = working_arity(&node, &[atom.cert.arity]);
    let t = translate(&node, &[atom.cert.clone()], m, i, w)?;
    Ok(shrink(&t, m, i, target))
}

fn build_level(modulus: &SquarefreeModulus, i: usize, grade: &Grade, n: usize) -> LevelIndex {
    let p = modulus.prime(i);
    let others = modulus.others(i);
    let sig1 = CoeffRingSig::new(p, others.clone(), 1);
    let dim = CoeffRingSig::new(p, others.clone(), n).domain_size();
    let mut basis = TrackedBasis::new(p, dim);
    let mut sources = Vec::new();
    let alphas = all_alphas(&others, n);
    'outer: for (k, atom) in grade.atoms.iter().enumerate() {
        for alpha in &alphas {
            if basis.rank() == dim {
                break 'outer;
            }
            let v = spread(&sig1, &atom.coeff, alpha);
            basis.push(&v);
            sources.push((k, alpha.clone()));
        }
    }
    LevelIndex { basis, sources }
}
