//! Bounded membership search for polynomial clonoids.

use crate::linalg::Subspace;
use crate::poly::{CoeffFn, CoeffRingSig, Monomial, RPoly};

use super::cert::composition_map;
use crate::poly::CompositionSpec;

/// Answer of the bounded membership search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

/// Coordinates of polynomials in at most `vars` variables.
struct Coords {
    sig: CoeffRingSig,
    vars: usize,
    q: usize,
}

impl Coords {
    fn dim(&self) -> usize {
        (self.sig.p as usize).pow(self.vars as u32) * self.q
    }

    fn encode(&self, f: &RPoly) -> Vec<u8> {
        let p = self.sig.p as usize;
        let mut v = vec![0u8; self.dim()];
        for (m, c) in f.terms() {
            let mut idx = 0;
            for k in 0..self.vars {
                idx = idx * p + m.exp(k) as usize;
            }
            v[idx * self.q..(idx + 1) * self.q].copy_from_slice(c.values());
        }
        v
    }

    fn decode(&self, v: &[u8]) -> RPoly {
        let p = self.sig.p as usize;
        let mut terms = Vec::new();
        for idx in 0..(p.pow(self.vars as u32)) {
            let c = &v[idx * self.q..(idx + 1) * self.q];
            if c.iter().all(|&x| x == 0) {
                continue;
            }
            let mut e = vec![0u8; self.vars];
            let mut r = idx;
            for k in (0..self.vars).rev() {
                e[k] = (r % p) as u8;
                r /= p;
            }
            terms.push((Monomial::new(e), CoeffFn::new(self.sig.clone(), c.to_vec()).expect("valid coefficients")));
        }
        RPoly::from_terms(self.sig.clone(), terms).expect("reduced terms")
    }
}

/// Elementary matrices generating every `vars × vars` substitution:
/// adjacent swaps, scalings of `x_1` (including by 0), and `x_1 += x_2`.
fn elementary(p: u32, vars: usize) -> Vec<Vec<Vec<u8>>> {
    let id = |r: usize, c: usize| (r == c) as u8;
    let mut out = Vec::new();
    for k in 0..vars.saturating_sub(1) {
        out.push(
            (0..vars)
                .map(|r| {
                    (0..vars)
                        .map(|c| {
                            let src = if r == k { k + 1 } else if r == k + 1 { k } else { r };
                            (c == src) as u8
                        })
                        .collect()
                })
                .collect(),
        );
    }
    for a in (0..p).filter(|&a| a != 1) {
        out.push((0..vars).map(|r| (0..vars).map(|c| if r == 0 && c == 0 { a as u8 } else { id(r, c) }).collect()).collect());
    }
    if vars >= 2 {
        out.push((0..vars).map(|r| (0..vars).map(|c| if r == 0 && c == 1 { 1 } else { id(r, c) }).collect()).collect());
    }
    out
}

/// Searches the polynomial clonoid generated by `gens` for `f`, working with
/// polynomials in at most `var_cap` variables.
///
/// `Yes` is always sound. `No` is returned only when the closure reached a
/// fixed point and every generator and `f` fit into `var_cap` variables;
/// restricting all derivations to the first `var_cap` variables is then a
/// derivation inside the computed space. `step_cap` bounds the number of
/// basis vectors processed.
pub fn pclonoid_member_oracle(f: &RPoly, gens: &[RPoly], var_cap: usize, step_cap: usize) -> Verdict {
    search(f, gens, var_cap, step_cap, false)
}

/// Like [`pclonoid_member_oracle`] but also closes under self-composition.
/// Answers only `Yes` or `Unknown`.
pub fn pclonoid_member_oracle_with_composition(f: &RPoly, gens: &[RPoly], var_cap: usize, step_cap: usize) -> Verdict {
    match search(f, gens, var_cap, step_cap, true) {
        Verdict::Yes => Verdict::Yes,
        _ => Verdict::Unknown,
    }
}

fn search(f: &RPoly, gens: &[RPoly], var_cap: usize, step_cap: usize, composition: bool) -> Verdict {
    let sig = f.sig().clone();
    if f.is_zero() {
        return Verdict::Yes;
    }
    if gens.iter().any(|g| g.sig() != &sig) || f.num_vars() > var_cap {
        return Verdict::Unknown;
    }
    let coords = Coords { sig: sig.clone(), vars: var_cap, q: sig.domain_size() };
    let target = coords.encode(f);
    let mut space = Subspace::zero(sig.p, coords.dim());
    let mut queue: Vec<Vec<u8>> = Vec::new();
    let mut complete = true;
    for g in gens {
        let g = if g.num_vars() > var_cap {
            complete = false;
            let keep: Vec<Vec<u8>> = (0..g.num_vars()).map(|r| (0..var_cap).map(|c| (r == c) as u8).collect()).collect();
            match g.linear_substitute(&keep) {
                Ok(h) => h,
                Err(_) => continue,
            }
        } else {
            g.clone()
        };
        let v = coords.encode(&g);
        if space.insert(&v) {
            queue.push(v);
        }
    }
    let mats = elementary(sig.p, var_cap);
    let mut steps = 0usize;
    loop {
        if space.contains(&target) {
            return Verdict::Yes;
        }
        let Some(v) = queue.pop() else { break };
        steps += 1;
        if steps > step_cap {
            return Verdict::Unknown;
        }
        let h = coords.decode(&v);
        for m in &mats {
            if let Ok(s) = h.linear_substitute(m) {
                let w = coords.encode(&s);
                if space.insert(&w) {
                    queue.push(w);
                }
            }
        }
        if composition {
            let basis: Vec<RPoly> = space.basis().iter().map(|b| coords.decode(b)).collect();
            for other in &basis {
                for (outer, inner) in [(&h, other), (other, &h)] {
                    let ov = outer.num_vars();
                    for slot in 0..ov {
                        let iv = inner.num_vars();
                        if ov + iv.saturating_sub(1) > var_cap {
                            continue;
                        }
                        let Ok(moved) = inner.rename(&composition_map(iv, slot, ov)) else { continue };
                        let Ok(c) = outer.compose_at(&CompositionSpec { slots: vec![slot], replacements: vec![moved] }) else {
                            continue;
                        };
                        let w = coords.encode(&c);
                        if space.insert(&w) {
                            queue.push(w);
                        }
                    }
                }
            }
        }
    }
    if space.contains(&target) {
        Verdict::Yes
    } else if complete && !composition {
        Verdict::No
    } else {
        Verdict::Unknown
    }
}
