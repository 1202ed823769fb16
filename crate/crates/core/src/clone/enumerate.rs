//! γ-images, clone enumeration over generator pools, and the bounded
//! composition ball used as a one-sided membership oracle.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::arith::{e_embed, linear_map, FnTable, LinearMapSpec, SquarefreeModulus};
use crate::clonoid::{enumerate_clonoids, LinClonoid};
use crate::error::{Error, Result};
use crate::guard;
use crate::linalg::Subspace;
use crate::poly::{CoeffFn, CoeffRingSig, Monomial, RPoly};

use super::closure::from_generators_with;
use super::rep::{CloneConfig, CloneRep};

/// `γ_i(C)`: the clone of all `e_i(g) + h` with `g ∈ C` and `h` linear.
pub fn gamma(i: usize, c: &LinClonoid, modulus: &SquarefreeModulus, cfg: &CloneConfig) -> Result<CloneRep> {
    modulus.check_index(i)?;
    let sig = c.sig();
    if sig.p != modulus.prime(i) || sig.sources != modulus.others(i) {
        return Err(Error::SignatureMismatch(format!("clonoid {sig:?} for component {i} of {:?}", modulus.primes())));
    }
    from_generators_with(modulus, &gamma_generators(i, c, modulus)?, cfg)
}

/// `e_i` of a unary basis of `C`.
pub fn gamma_generators(i: usize, c: &LinClonoid, modulus: &SquarefreeModulus) -> Result<Vec<FnTable>> {
    c.unary_basis().iter().map(|g| e_embed(modulus, i, g)).collect()
}

/// Generator pools for [`enumerate_clones`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pool {
    /// Generator sets of all γ-images of enumerated clonoids.
    Gamma,
    /// γ-images plus every single induced monomial `r·x^k` with a unary
    /// coefficient basis vector `r` and at most two variables.
    Monomials,
}

/// Items of a pool; each item is a generator set.
pub fn generator_pool(modulus: &SquarefreeModulus, pool: Pool, cap: usize) -> Result<Vec<Vec<FnTable>>> {
    modulus.check_enumerable()?;
    let mut items = BTreeSet::new();
    for i in 0..modulus.m() {
        let sig = crate::clonoid::ClonoidSig::new(modulus.prime(i), modulus.others(i))?;
        for c in enumerate_clonoids(&sig, cap.max(1))? {
            if !c.is_zero() {
                items.insert(gamma_generators(i, &c, modulus)?);
            }
        }
    }
    if pool == Pool::Monomials {
        for i in 0..modulus.m() {
            let p = modulus.prime(i);
            let sig1 = CoeffRingSig::new(p, modulus.others(i), 1);
            let q = sig1.domain_size();
            let vars = cap.min(2);
            let exps = super::rep::all_alphas(&vec![p; vars], 1);
            for k in 0..q {
                let mut v = vec![0u8; q];
                v[k] = 1;
                let r = CoeffFn::new(sig1.clone(), v)?;
                for e in &exps {
                    let mono = Monomial::new(e.iter().map(|v| v[0]).collect());
                    if mono.degree() <= 1 {
                        continue;
                    }
                    let f = RPoly::monomial(&r, mono).induce(modulus, i, vars.max(1))?;
                    items.insert(vec![f]);
                }
            }
        }
    }
    Ok(items.into_iter().collect())
}

/// Enumeration settings.
#[derive(Clone, Debug)]
pub struct EnumConfig {
    pub clone: CloneConfig,
    /// Largest number of pool items combined.
    pub max_subset: usize,
    /// Largest number of subsets closed.
    pub limit: u64,
}

impl Default for EnumConfig {
    fn default() -> Self {
        EnumConfig { clone: CloneConfig { cap: 2, ..CloneConfig::default() }, max_subset: 2, limit: 1 << 16 }
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..k {
        let mut next = Vec::new();
        for s in &frontier {
            let start = s.last().map_or(0, |&x: &usize| x + 1);
            for j in start..n {
                let mut t = s.clone();
                t.push(j);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Closures of all pool subsets of size at most `max_subset`, deduplicated
/// and sorted by their canonical grade key.
pub fn enumerate_clones(modulus: &SquarefreeModulus, pool: &[Vec<FnTable>], cfg: &EnumConfig) -> Result<Vec<CloneRep>> {
    let subs = subsets(pool.len(), cfg.max_subset);
    guard::check("pool subsets", subs.len() as u64, cfg.limit)?;
    let reps: Vec<CloneRep> = subs
        .par_iter()
        .map(|s| {
            let gens: Vec<FnTable> = s.iter().flat_map(|&k| pool[k].iter().cloned()).collect();
            from_generators_with(modulus, &gens, &cfg.clone)
        })
        .collect::<Result<_>>()?;
    let mut unique: BTreeMap<Vec<Vec<Subspace>>, CloneRep> = BTreeMap::new();
    for r in reps {
        unique.entry(r.key()).or_insert(r);
    }
    Ok(unique.into_values().collect())
}

/// Whether `ρ` separates the given clones.
pub fn rho_injective(clones: &[CloneRep]) -> Result<bool> {
    let mut seen = BTreeSet::new();
    for c in clones {
        let image: Vec<Vec<Vec<Subspace>>> =
            c.rho()?.iter().map(|gs| gs.iter().map(|g| g.levels().to_vec()).collect()).collect();
        if !seen.insert(image) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All functions of arity `1..=arity_cap` reachable from the projections by
/// at most `depth_cap` rounds of applying a generator or `+`.
pub fn brute_force_clg_ball(modulus: &SquarefreeModulus, gens: &[FnTable], arity_cap: usize, depth_cap: usize, limit: u64) -> Result<BTreeSet<FnTable>> {
    let plus = linear_map(modulus, &LinearMapSpec { coeffs: vec![vec![1, 1]; modulus.m()] })?;
    let ops: Vec<&FnTable> = gens.iter().chain(std::iter::once(&plus)).collect();
    let mut out = BTreeSet::new();
    for n in 1..=arity_cap {
        modulus.domain_size(n)?;
        let mut ball: BTreeSet<FnTable> = (0..n).map(|k| FnTable::projection(modulus, n, k)).collect::<Result<_>>()?;
        for _ in 0..depth_cap {
            let cur: Vec<FnTable> = ball.iter().cloned().collect();
            let mut next = ball.clone();
            for op in &ops {
                let k = op.arity();
                let total = (cur.len() as u64).checked_pow(k as u32).unwrap_or(u64::MAX);
                guard::check("ball compositions", total, limit)?;
                let found: Vec<FnTable> = (0..total)
                    .into_par_iter()
                    .map(|t| {
                        let mut rem = t as usize;
                        let args: Vec<FnTable> = (0..k)
                            .map(|_| {
                                let a = cur[rem % cur.len()].clone();
                                rem /= cur.len();
                                a
                            })
                            .collect();
                        op.compose_with_arity(&args, n)
                    })
                    .collect::<Result<_>>()?;
                next.extend(found);
                guard::check("ball size", next.len() as u64, limit)?;
            }
            ball = next;
        }
        out.extend(ball);
    }
    Ok(out)
}
