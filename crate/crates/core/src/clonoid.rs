//! Linearly closed clonoids from `Π_j Z_{q_j}` to `Z_p`.
//!
//! At every arity a clonoid is a Z_p-subspace of the coefficient functions,
//! and it is closed under precomposition with one matrix per source block.
//! The closure of a generator set is computed in one step as the span of all
//! matrix substitutions of the generators: substitutions compose, so that
//! span is already closed.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::Layout;
use crate::error::{Error, Result};
use crate::guard;
use crate::linalg::Subspace;
use crate::poly::{CoeffFn, CoeffRingSig};

/// Target prime and source primes of a clonoid.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ClonoidSig {
    pub p: u32,
    pub sources: Vec<u32>,
}

impl ClonoidSig {
    pub fn new(p: u32, sources: Vec<u32>) -> Result<Self> {
        CoeffRingSig::new(p, sources.clone(), 0).validate()?;
        Ok(ClonoidSig { p, sources })
    }

    pub fn coeff_sig(&self, arity: usize) -> CoeffRingSig {
        CoeffRingSig::new(self.p, self.sources.clone(), arity)
    }

    /// `Π q_j`, the size of the unary coefficient domain.
    pub fn source_order(&self) -> usize {
        self.sources.iter().map(|&q| q as usize).product()
    }

    fn matches(&self, c: &CoeffFn) -> bool {
        c.sig().p == self.p && c.sig().sources == self.sources
    }
}

/// A clonoid materialized at arities `0..=cap`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinClonoid {
    sig: ClonoidSig,
    cap: usize,
    levels: Vec<Subspace>,
    closed: bool,
}

/// Index maps for every tuple of substitution matrices from arity `a` to
/// arity `k`; calls `visit` with the map of each tuple.
fn for_each_substitution(sig: &ClonoidSig, a: usize, k: usize, mut visit: impl FnMut(&[usize]) -> bool) -> Result<()> {
    let t = sig.sources.len();
    let entries = a * k;
    let mut count: u64 = 1;
    for &q in &sig.sources {
        count = count.saturating_mul((q as u64).saturating_pow(entries as u32));
    }
    guard::check("substitution tuples", count, 1 << 22)?;
    let in_layout = Layout::new(&sig.sources, a);
    let out_layout = Layout::new(&sig.sources, k);
    let out_size = out_layout.size();
    // Digit columns of the output domain, per block and coordinate.
    let cols: Vec<Vec<Vec<u8>>> = (0..t).map(|j| (0..k).map(|c| out_layout.digit_column(j, c)).collect()).collect();
    let mut mats: Vec<Vec<u8>> = (0..t).map(|_| vec![0u8; entries]).collect();
    let mut map = vec![0usize; out_size];
    loop {
        map.iter_mut().for_each(|x| *x = 0);
        for j in 0..t {
            let q = sig.sources[j];
            for r in 0..a {
                let w = in_layout.weight(j, r);
                for pt in 0..out_size {
                    let mut v = 0u32;
                    for c in 0..k {
                        v += mats[j][r * k + c] as u32 * cols[j][c][pt] as u32;
                    }
                    map[pt] += (v % q) as usize * w;
                }
            }
        }
        if !visit(&map) {
            return Ok(());
        }
        // Odometer over all matrix entries.
        let mut advanced = false;
        'outer: for j in (0..t).rev() {
            for e in (0..entries).rev() {
                mats[j][e] += 1;
                if (mats[j][e] as u32) < sig.sources[j] {
                    advanced = true;
                    break 'outer;
                }
                mats[j][e] = 0;
            }
        }
        if !advanced {
            return Ok(());
        }
    }
}

/// Span of all matrix substitutions of `gens` at arity `k`.
fn span_at(sig: &ClonoidSig, gens: &[&CoeffFn], k: usize) -> Result<Subspace> {
    let dim = sig.coeff_sig(k).domain_size();
    let mut space = Subspace::zero(sig.p, dim);
    let mut arities: Vec<usize> = gens.iter().map(|g| g.arity()).collect();
    arities.sort_unstable();
    arities.dedup();
    for a in arities {
        let group: Vec<&[u8]> = gens.iter().filter(|g| g.arity() == a && !g.is_zero()).map(|g| g.values()).collect();
        if group.is_empty() {
            continue;
        }
        let mut buf = vec![0u8; dim];
        for_each_substitution(sig, a, k, |map| {
            for g in &group {
                for (b, &src) in buf.iter_mut().zip(map) {
                    *b = g[src];
                }
                space.insert(&buf);
            }
            space.rank() < dim
        })?;
    }
    Ok(space)
}

/// `Cig(gens)` materialized at arities `0..=cap`.
pub fn cig_closure(sig: &ClonoidSig, gens: &[CoeffFn], cap: usize) -> Result<LinClonoid> {
    if gens.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    if let Some(g) = gens.iter().find(|g| !sig.matches(g)) {
        return Err(Error::SignatureMismatch(format!("{:?} in clonoid {:?}", g.sig(), sig)));
    }
    let refs: Vec<&CoeffFn> = gens.iter().collect();
    let levels = (0..=cap).map(|k| span_at(sig, &refs, k)).collect::<Result<Vec<_>>>()?;
    Ok(LinClonoid { sig: sig.clone(), cap, levels, closed: true })
}

/// Closure of unary generators restricted to arity 1; cheap canonical key.
pub fn unary_closure(sig: &ClonoidSig, gens: &[CoeffFn]) -> Result<Subspace> {
    let refs: Vec<&CoeffFn> = gens.iter().collect();
    span_at(sig, &refs, 1)
}

impl LinClonoid {
    pub fn zero(sig: &ClonoidSig, cap: usize) -> Self {
        let levels = (0..=cap).map(|k| Subspace::zero(sig.p, sig.coeff_sig(k).domain_size())).collect();
        LinClonoid { sig: sig.clone(), cap, levels, closed: true }
    }

    /// All functions of every arity up to `cap`.
    pub fn full(sig: &ClonoidSig, cap: usize) -> Self {
        let levels = (0..=cap).map(|k| Subspace::full(sig.p, sig.coeff_sig(k).domain_size())).collect();
        LinClonoid { sig: sig.clone(), cap, levels, closed: true }
    }

    /// The clonoid generated by a unary subspace.
    pub fn from_unary(sig: &ClonoidSig, unary: &Subspace, cap: usize) -> Result<Self> {
        let gens: Vec<CoeffFn> = if unary.rank() == 0 {
            vec![CoeffFn::zero(sig.coeff_sig(1))]
        } else {
            unary.basis().iter().map(|v| CoeffFn::new(sig.coeff_sig(1), v.clone())).collect::<Result<_>>()?
        };
        cig_closure(sig, &gens, cap)
    }

    /// Assembles a clonoid from levels already known to be closed.
    pub(crate) fn from_levels(sig: ClonoidSig, cap: usize, levels: Vec<Subspace>) -> Self {
        debug_assert_eq!(levels.len(), cap + 1);
        LinClonoid { sig, cap, levels, closed: true }
    }

    pub fn sig(&self) -> &ClonoidSig {
        &self.sig
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn level(&self, k: usize) -> Option<&Subspace> {
        self.levels.get(k)
    }

    pub fn levels(&self) -> &[Subspace] {
        &self.levels
    }

    /// Unary level; the canonical key of the clonoid.
    pub fn unary(&self) -> &Subspace {
        &self.levels[1]
    }

    /// Sorted list of unary tables.
    pub fn unary_elements(&self) -> Vec<Vec<u8>> {
        let mut e = self.unary().elements();
        e.sort();
        e
    }

    pub fn dims(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.rank()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.levels.iter().all(|l| l.rank() == 0)
    }

    pub fn member(&self, f: &CoeffFn) -> Result<bool> {
        if !self.sig.matches(f) {
            return Err(Error::SignatureMismatch(format!("{:?} in clonoid {:?}", f.sig(), self.sig)));
        }
        let level = self.levels.get(f.arity()).ok_or(Error::ArityAboveCap { arity: f.arity(), cap: self.cap })?;
        Ok(level.contains(f.values()))
    }

    fn check(&self, other: &LinClonoid) -> Result<()> {
        if self.sig != other.sig {
            return Err(Error::SignatureMismatch(format!("{:?} vs {:?}", self.sig, other.sig)));
        }
        if self.cap != other.cap {
            return Err(Error::ArityMismatch(format!("caps {} and {}", self.cap, other.cap)));
        }
        Ok(())
    }

    pub fn leq(&self, other: &LinClonoid) -> Result<bool> {
        self.check(other)?;
        Ok(self.levels.iter().zip(&other.levels).all(|(a, b)| a.is_subspace_of(b)))
    }

    pub fn meet(&self, other: &LinClonoid) -> Result<LinClonoid> {
        self.check(other)?;
        let levels = self.levels.iter().zip(&other.levels).map(|(a, b)| a.intersect(b)).collect();
        Ok(LinClonoid { sig: self.sig.clone(), cap: self.cap, levels, closed: true })
    }

    pub fn join(&self, other: &LinClonoid) -> Result<LinClonoid> {
        self.check(other)?;
        let mut gens = self.generators();
        gens.extend(other.generators());
        cig_closure(&self.sig, &gens, self.cap)
    }

    /// Basis functions of every materialized arity (never empty).
    pub fn generators(&self) -> Vec<CoeffFn> {
        let mut out = Vec::new();
        for (k, l) in self.levels.iter().enumerate() {
            for v in l.basis() {
                out.push(CoeffFn::new_unchecked(self.sig.coeff_sig(k), v.clone()));
            }
        }
        if out.is_empty() {
            out.push(CoeffFn::zero(self.sig.coeff_sig(1)));
        }
        out
    }

    /// Unary basis functions.
    pub fn unary_basis(&self) -> Vec<CoeffFn> {
        self.unary().basis().iter().map(|v| CoeffFn::new_unchecked(self.sig.coeff_sig(1), v.clone())).collect()
    }
}

/// True iff the unary part of `c` regenerates `c` at every arity up to `cap`.
pub fn unary_generates(c: &LinClonoid, cap: usize) -> Result<bool> {
    let cap = cap.min(c.cap());
    let gens = {
        let b = c.unary_basis();
        if b.is_empty() {
            vec![CoeffFn::zero(c.sig().coeff_sig(1))]
        } else {
            b
        }
    };
    let d = cig_closure(c.sig(), &gens, cap)?;
    Ok(d.levels().iter().zip(c.levels()).all(|(a, b)| a == b))
}

/// Every clonoid of `sig`, sorted by (unary dimension, unary basis).
///
/// Closes every subset of the unary functions; requires at most 2^20 subsets.
pub fn enumerate_clonoids(sig: &ClonoidSig, cap: usize) -> Result<Vec<LinClonoid>> {
    let q = sig.source_order();
    let nfun = (sig.p as u64).checked_pow(q as u32).unwrap_or(u64::MAX);
    guard::check("unary functions for subset enumeration", nfun, 20)?;
    let funcs: Vec<CoeffFn> = (0..nfun)
        .map(|mut code| {
            let mut v = vec![0u8; q];
            for x in v.iter_mut().rev() {
                *x = (code % sig.p as u64) as u8;
                code /= sig.p as u64;
            }
            CoeffFn::new_unchecked(sig.coeff_sig(1), v)
        })
        .collect();
    let total: u64 = 1 << nfun;
    let mut keys: Vec<Subspace> = (0..total)
        .into_par_iter()
        .map(|mask| {
            let chosen: Vec<CoeffFn> = (0..nfun).filter(|&b| mask >> b & 1 == 1).map(|b| funcs[b as usize].clone()).collect();
            if chosen.is_empty() {
                Ok(Subspace::zero(sig.p, q))
            } else {
                unary_closure(sig, &chosen)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    keys.sort_by(|a, b| (a.rank(), a).cmp(&(b.rank(), b)));
    keys.dedup();
    keys.par_iter().map(|u| LinClonoid::from_unary(sig, u, cap)).collect()
}

/// Every clonoid of `sig` reachable as a join of principal clonoids.
///
/// Suited to signatures whose unary function space is too large for subset
/// enumeration; `limit` bounds the number of clonoids produced.
pub fn enumerate_clonoids_by_joins(sig: &ClonoidSig, cap: usize, limit: usize) -> Result<Vec<LinClonoid>> {
    let q = sig.source_order();
    let nfun = (sig.p as u64).checked_pow(q as u32).unwrap_or(u64::MAX);
    guard::check("unary functions for join enumeration", nfun, 1 << 16)?;
    let mut principal: Vec<Subspace> = (0..nfun)
        .into_par_iter()
        .map(|mut code| {
            let mut v = vec![0u8; q];
            for x in v.iter_mut().rev() {
                *x = (code % sig.p as u64) as u8;
                code /= sig.p as u64;
            }
            unary_closure(sig, &[CoeffFn::new_unchecked(sig.coeff_sig(1), v)])
        })
        .collect::<Result<Vec<_>>>()?;
    principal.sort();
    principal.dedup();
    let mut found: std::collections::BTreeSet<Subspace> = principal.iter().cloned().collect();
    let mut frontier: Vec<Subspace> = found.iter().cloned().collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for a in &frontier {
            for b in &principal {
                let j = unary_closure(sig, &a.sum(b).basis().iter().map(|v| CoeffFn::new_unchecked(sig.coeff_sig(1), v.clone())).collect::<Vec<_>>())?;
                if found.insert(j.clone()) {
                    if found.len() > limit {
                        return Err(Error::GuardExceeded(format!("more than {limit} clonoids")));
                    }
                    next.push(j);
                }
            }
        }
        frontier = next;
    }
    let mut keys: Vec<Subspace> = found.into_iter().collect();
    keys.sort_by(|a, b| (a.rank(), a).cmp(&(b.rank(), b)));
    keys.par_iter().map(|u| LinClonoid::from_unary(sig, u, cap)).collect()
}
