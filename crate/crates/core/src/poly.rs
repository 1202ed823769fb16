//! Reduced polynomials whose coefficients are finite functions.
//!
//! An [`RPoly`] over `(p; q_1..q_t; n)` is `Σ r_m x^m` where every exponent
//! is at most `p − 1` and every coefficient `r_m` is a table
//! `Π_j Z_{q_j}^n -> Z_p`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::arith::{coeff_index_map, FnTable, Layout, SquarefreeModulus};
use crate::error::{Error, Result};
use crate::linalg::{inv_mod, pow_mod};

/// Signature of a coefficient ring: functions `Π_j Z_{q_j}^arity -> Z_p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CoeffRingSig {
    pub p: u32,
    pub sources: Vec<u32>,
    pub arity: usize,
}

impl CoeffRingSig {
    pub fn new(p: u32, sources: Vec<u32>, arity: usize) -> Self {
        CoeffRingSig { p, sources, arity }
    }

    pub fn with_arity(&self, arity: usize) -> Self {
        CoeffRingSig { p: self.p, sources: self.sources.clone(), arity }
    }

    /// Product of the source primes.
    pub fn source_order(&self) -> usize {
        self.sources.iter().map(|&q| q as usize).product()
    }

    pub fn domain_size(&self) -> usize {
        self.source_order().pow(self.arity as u32)
    }

    pub fn layout(&self) -> Layout {
        Layout::new(&self.sources, self.arity)
    }

    pub fn validate(&self) -> Result<()> {
        if !crate::arith::is_prime(self.p as u64) {
            return Err(Error::SignatureMismatch(format!("{} is not prime", self.p)));
        }
        for (k, &q) in self.sources.iter().enumerate() {
            if !crate::arith::is_prime(q as u64) || q == self.p || self.sources[..k].contains(&q) {
                return Err(Error::SignatureMismatch(format!("bad source primes {:?} for target {}", self.sources, self.p)));
            }
        }
        Ok(())
    }
}

/// A coefficient function `Π_j Z_{q_j}^n -> Z_p` as a dense table.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CoeffFn {
    sig: CoeffRingSig,
    values: Vec<u8>,
}

impl CoeffFn {
    pub fn new(sig: CoeffRingSig, values: Vec<u8>) -> Result<Self> {
        if values.len() != sig.domain_size() {
            return Err(Error::MalformedTable(format!("{} values, expected {}", values.len(), sig.domain_size())));
        }
        if let Some(k) = values.iter().position(|&v| v as u32 >= sig.p) {
            return Err(Error::MalformedTable(format!("entry {k} not below {}", sig.p)));
        }
        Ok(CoeffFn { sig, values })
    }

    pub(crate) fn new_unchecked(sig: CoeffRingSig, values: Vec<u8>) -> Self {
        debug_assert_eq!(values.len(), sig.domain_size());
        CoeffFn { sig, values }
    }

    pub fn zero(sig: CoeffRingSig) -> Self {
        let n = sig.domain_size();
        CoeffFn { sig, values: vec![0; n] }
    }

    pub fn constant(sig: CoeffRingSig, c: u32) -> Self {
        let n = sig.domain_size();
        let c = (c % sig.p) as u8;
        CoeffFn { sig, values: vec![c; n] }
    }

    pub fn from_fn(sig: CoeffRingSig, f: impl Fn(&[Vec<u8>]) -> u32) -> Self {
        let layout = sig.layout();
        let values = (0..layout.size()).map(|k| (f(&layout.decode(k)) % sig.p) as u8).collect();
        CoeffFn { sig, values }
    }

    pub fn sig(&self) -> &CoeffRingSig {
        &self.sig
    }

    pub fn arity(&self) -> usize {
        self.sig.arity
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    pub fn into_values(self) -> Vec<u8> {
        self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    pub fn is_constant(&self) -> bool {
        self.values.windows(2).all(|w| w[0] == w[1])
    }

    fn check(&self, other: &CoeffFn) -> Result<()> {
        if self.sig != other.sig {
            return Err(Error::SignatureMismatch(format!("{:?} vs {:?}", self.sig, other.sig)));
        }
        Ok(())
    }

    pub fn add(&self, other: &CoeffFn) -> Result<CoeffFn> {
        self.check(other)?;
        let p = self.sig.p;
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| ((a as u32 + b as u32) % p) as u8).collect();
        Ok(CoeffFn { sig: self.sig.clone(), values })
    }

    pub fn scale(&self, c: u32) -> CoeffFn {
        let p = self.sig.p;
        let c = c % p;
        CoeffFn { sig: self.sig.clone(), values: self.values.iter().map(|&a| (a as u32 * c % p) as u8).collect() }
    }

    /// Pointwise product.
    pub fn mul(&self, other: &CoeffFn) -> Result<CoeffFn> {
        self.check(other)?;
        let p = self.sig.p;
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| (a as u32 * b as u32 % p) as u8).collect();
        Ok(CoeffFn { sig: self.sig.clone(), values })
    }

    /// `g(A_1 y_1, ..., A_t y_t)` where `mats[j]` is an `arity × k` matrix
    /// over `Z_{q_j}`.
    pub fn substitute(&self, mats: &[Vec<Vec<u8>>], k: usize) -> Result<CoeffFn> {
        let t = self.sig.sources.len();
        if mats.len() != t {
            return Err(Error::DimensionMismatch(format!("{} matrices for {t} source blocks", mats.len())));
        }
        let a = self.sig.arity;
        for mt in mats {
            if mt.len() != a || mt.iter().any(|r| r.len() != k) {
                return Err(Error::DimensionMismatch(format!("substitution matrix must be {a}x{k}")));
            }
        }
        let new_sig = self.sig.with_arity(k);
        let out_layout = new_sig.layout();
        let in_layout = self.sig.layout();
        let mut values = Vec::with_capacity(out_layout.size());
        for idx in 0..out_layout.size() {
            let y = out_layout.decode(idx);
            let mut src = 0usize;
            for (j, mt) in mats.iter().enumerate() {
                let q = self.sig.sources[j];
                for (r, row) in mt.iter().enumerate() {
                    let v: u32 = row.iter().zip(&y[j]).map(|(&c, &d)| c as u32 * d as u32).sum::<u32>() % q;
                    src += v as usize * in_layout.weight(j, r);
                }
            }
            values.push(self.values[src]);
        }
        Ok(CoeffFn { sig: new_sig, values })
    }

    /// The same function viewed at a larger arity (extra coordinates ignored).
    pub fn lift(&self, k: usize) -> Result<CoeffFn> {
        if k < self.sig.arity {
            return Err(Error::ArityMismatch(format!("cannot lift arity {} to {k}", self.sig.arity)));
        }
        let a = self.sig.arity;
        let pad: Vec<Vec<u8>> = (0..a).map(|r| (0..k).map(|c| (r == c) as u8).collect()).collect();
        self.substitute(&vec![pad; self.sig.sources.len()], k)
    }

    /// Unary restriction `t ↦ g(α_1 t, ..., α_t t)` with `alpha[j]` a vector
    /// of length `arity` over `Z_{q_j}`.
    pub fn along(&self, alpha: &[Vec<u8>]) -> Result<CoeffFn> {
        let mats: Vec<Vec<Vec<u8>>> = alpha.iter().map(|a| a.iter().map(|&x| vec![x]).collect()).collect();
        self.substitute(&mats, 1)
    }
}

/// Exponent vector with trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial(Vec<u8>);

impl Monomial {
    pub fn new(mut exps: Vec<u8>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    /// `x_1 ⋯ x_d`.
    pub fn multilinear(d: usize) -> Self {
        Monomial(vec![1; d])
    }

    pub fn exps(&self) -> &[u8] {
        &self.0
    }

    pub fn exp(&self, k: usize) -> u8 {
        self.0.get(k).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    /// One past the highest variable with nonzero exponent.
    pub fn num_vars(&self) -> usize {
        self.0.len()
    }

    pub fn support(&self) -> Vec<usize> {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(k, _)| k).collect()
    }

    pub fn is_multilinear(&self) -> bool {
        self.0.iter().all(|&e| e <= 1)
    }
}

/// Reduces an exponent modulo the identity `x^p = x`.
pub fn reduce_exp(e: u32, p: u32) -> u8 {
    if e == 0 {
        0
    } else {
        (((e - 1) % (p - 1)) + 1) as u8
    }
}

/// Reduced polynomial with function-valued coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RPoly {
    sig: CoeffRingSig,
    terms: BTreeMap<Monomial, Vec<u8>>,
}

/// Composition data for `g ∘_b (f_1, ..., f_h)`.
#[derive(Clone, Debug)]
pub struct CompositionSpec {
    pub slots: Vec<usize>,
    pub replacements: Vec<RPoly>,
}

impl RPoly {
    pub fn zero(sig: CoeffRingSig) -> Self {
        RPoly { sig, terms: BTreeMap::new() }
    }

    pub fn constant(c: &CoeffFn) -> Self {
        Self::monomial(c, Monomial::one())
    }

    pub fn monomial(c: &CoeffFn, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            let p = c.sig().p;
            let exps = m.0.iter().map(|&e| reduce_exp(e as u32, p)).collect();
            terms.insert(Monomial::new(exps), c.values().to_vec());
        }
        RPoly { sig: c.sig().clone(), terms }
    }

    /// The variable `x_k` with constant coefficient 1.
    pub fn var(sig: CoeffRingSig, k: usize) -> Self {
        let mut e = vec![0u8; k + 1];
        e[k] = 1;
        Self::monomial(&CoeffFn::constant(sig, 1), Monomial::new(e))
    }

    /// Reduces a polynomial given with arbitrary exponents.
    pub fn reduce(sig: CoeffRingSig, raw: &[(Vec<u32>, CoeffFn)]) -> Result<Self> {
        let mut out = RPoly::zero(sig.clone());
        for (exps, c) in raw {
            if c.sig() != &sig {
                return Err(Error::SignatureMismatch("coefficient signature".into()));
            }
            let e: Vec<u8> = exps.iter().map(|&e| reduce_exp(e, sig.p)).collect();
            out.add_term(Monomial::new(e), c.values(), 1);
        }
        Ok(out)
    }

    pub fn from_terms(sig: CoeffRingSig, terms: impl IntoIterator<Item = (Monomial, CoeffFn)>) -> Result<Self> {
        let mut out = RPoly::zero(sig.clone());
        for (m, c) in terms {
            if c.sig() != &sig {
                return Err(Error::SignatureMismatch("coefficient signature".into()));
            }
            if m.0.iter().any(|&e| e as u32 >= sig.p) {
                return Err(Error::Precondition(format!("exponent above {} in {:?}", sig.p - 1, m)));
            }
            out.add_term(m, c.values(), 1);
        }
        Ok(out)
    }

    fn add_term(&mut self, m: Monomial, c: &[u8], scale: u32) {
        let p = self.sig.p;
        let scale = scale % p;
        if scale == 0 {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_insert_with(|| vec![0; c.len()]);
        for (a, &b) in entry.iter_mut().zip(c) {
            *a = ((*a as u32 + scale * b as u32) % p) as u8;
        }
        if entry.iter().all(|&v| v == 0) {
            self.terms.remove(&m);
        }
    }

    pub fn sig(&self) -> &CoeffRingSig {
        &self.sig
    }

    pub fn p(&self) -> u32 {
        self.sig.p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, CoeffFn)> + '_ {
        self.terms.iter().map(|(m, v)| (m, CoeffFn::new_unchecked(self.sig.clone(), v.clone())))
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn coeff(&self, m: &Monomial) -> CoeffFn {
        match self.terms.get(m) {
            Some(v) => CoeffFn::new_unchecked(self.sig.clone(), v.clone()),
            None => CoeffFn::zero(self.sig.clone()),
        }
    }

    pub fn coeff_values(&self, m: &Monomial) -> Option<&[u8]> {
        self.terms.get(m).map(|v| v.as_slice())
    }

    /// Number of variables in use (one past the highest index).
    pub fn num_vars(&self) -> usize {
        self.terms.keys().map(|m| m.num_vars()).max().unwrap_or(0)
    }

    /// Maximum total degree of a monomial; `0` for the zero polynomial.
    pub fn total_degree(&self) -> usize {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    fn check(&self, other: &RPoly) -> Result<()> {
        if self.sig != other.sig {
            return Err(Error::SignatureMismatch(format!("{:?} vs {:?}", self.sig, other.sig)));
        }
        Ok(())
    }

    /// `a·self + b·other`.
    pub fn lin_comb(&self, a: u32, other: &RPoly, b: u32) -> Result<RPoly> {
        self.check(other)?;
        let mut out = RPoly::zero(self.sig.clone());
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c, a);
        }
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c, b);
        }
        Ok(out)
    }

    pub fn add(&self, other: &RPoly) -> Result<RPoly> {
        self.lin_comb(1, other, 1)
    }

    pub fn sub(&self, other: &RPoly) -> Result<RPoly> {
        self.lin_comb(1, other, self.sig.p - 1)
    }

    pub fn scale(&self, a: u32) -> RPoly {
        let mut out = RPoly::zero(self.sig.clone());
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c, a);
        }
        out
    }

    pub fn mul(&self, other: &RPoly) -> Result<RPoly> {
        self.check(other)?;
        let p = self.sig.p;
        let mut out = RPoly::zero(self.sig.clone());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let len = m1.0.len().max(m2.0.len());
                let e: Vec<u8> = (0..len).map(|k| reduce_exp(m1.exp(k) as u32 + m2.exp(k) as u32, p)).collect();
                let c: Vec<u8> = c1.iter().zip(c2).map(|(&a, &b)| (a as u32 * b as u32 % p) as u8).collect();
                out.add_term(Monomial::new(e), &c, 1);
            }
        }
        Ok(out)
    }

    fn pow(&self, e: u8) -> Result<RPoly> {
        let mut acc = RPoly::constant(&CoeffFn::constant(self.sig.clone(), 1));
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Simultaneous substitution `x_k := subs(k)` for every variable in use.
    pub fn substitute(&self, subs: &dyn Fn(usize) -> Result<RPoly>) -> Result<RPoly> {
        let vars = self.num_vars();
        let mut cache: Vec<Vec<Option<RPoly>>> = vec![vec![None; self.sig.p as usize]; vars];
        let mut base: Vec<Option<RPoly>> = vec![None; vars];
        let mut out = RPoly::zero(self.sig.clone());
        for (m, c) in &self.terms {
            let mut term = RPoly::constant(&CoeffFn::new_unchecked(self.sig.clone(), c.clone()));
            for (k, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if base[k].is_none() {
                    let s = subs(k)?;
                    self.check(&s)?;
                    base[k] = Some(s);
                }
                if cache[k][e as usize].is_none() {
                    cache[k][e as usize] = Some(base[k].as_ref().unwrap().pow(e)?);
                }
                term = term.mul(cache[k][e as usize].as_ref().unwrap())?;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// `g ∘_b (f_1, ..., f_h)`: replaces `x_{b_k}` by `f_k`, other variables
    /// stay.
    pub fn compose_at(&self, spec: &CompositionSpec) -> Result<RPoly> {
        if spec.slots.len() != spec.replacements.len() {
            return Err(Error::DimensionMismatch("slots and replacements differ in length".into()));
        }
        if spec.slots.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Precondition("slots must be strictly increasing".into()));
        }
        let vars = self.num_vars();
        if let Some(&b) = spec.slots.iter().find(|&&b| b >= vars) {
            return Err(Error::SlotOutOfRange { slot: b, vars });
        }
        for f in &spec.replacements {
            self.check(f)?;
        }
        let sig = self.sig.clone();
        self.substitute(&|k| match spec.slots.iter().position(|&b| b == k) {
            Some(pos) => Ok(spec.replacements[pos].clone()),
            None => Ok(RPoly::var(sig.clone(), k)),
        })
    }

    /// `x_i := Σ_j M[i][j] x_j` for an `k × l` matrix `M`, `k ≥ num_vars`.
    pub fn linear_substitute(&self, mat: &[Vec<u8>]) -> Result<RPoly> {
        let vars = self.num_vars();
        if mat.len() < vars {
            return Err(Error::DimensionMismatch(format!("{} rows for {vars} variables", mat.len())));
        }
        let l = mat.first().map_or(0, |r| r.len());
        if mat.iter().any(|r| r.len() != l) {
            return Err(Error::DimensionMismatch("ragged matrix".into()));
        }
        let p = self.sig.p;
        let sig = self.sig.clone();
        self.substitute(&|k| {
            let mut s = RPoly::zero(sig.clone());
            for (j, &a) in mat[k].iter().enumerate() {
                if a as u32 % p != 0 {
                    s = s.add(&RPoly::var(sig.clone(), j).scale(a as u32))?;
                }
            }
            Ok(s)
        })
    }

    /// `g ∘_(slot) 0`: drops every monomial containing `x_slot`.
    pub fn zero_substitute(&self, slot: usize) -> RPoly {
        let terms = self.terms.iter().filter(|(m, _)| m.exp(slot) == 0).map(|(m, c)| (m.clone(), c.clone())).collect();
        RPoly { sig: self.sig.clone(), terms }
    }

    /// Renames `x_k` to `x_{map[k]}` (several variables may merge).
    pub fn rename(&self, map: &[usize]) -> Result<RPoly> {
        let vars = self.num_vars();
        if map.len() < vars {
            return Err(Error::DimensionMismatch(format!("map of length {} for {vars} variables", map.len())));
        }
        let p = self.sig.p;
        let width = map.iter().copied().max().map_or(0, |w| w + 1);
        let mut out = RPoly::zero(self.sig.clone());
        for (m, c) in &self.terms {
            let mut e = vec![0u32; width];
            for (k, &x) in m.0.iter().enumerate() {
                e[map[k]] += x as u32;
            }
            let e = e.into_iter().map(|x| reduce_exp(x, p)).collect();
            out.add_term(Monomial::new(e), c, 1);
        }
        Ok(out)
    }

    /// The same polynomial with coefficients lifted to a larger arity.
    pub fn lift_coeffs(&self, k: usize) -> Result<RPoly> {
        let sig = self.sig.with_arity(k);
        let mut terms = BTreeMap::new();
        for (m, c) in self.terms() {
            terms.insert(m.clone(), c.lift(k)?.into_values());
        }
        Ok(RPoly { sig, terms })
    }

    /// Applies a coefficient map to every coefficient (used for arity changes).
    pub fn map_coeffs(&self, sig: CoeffRingSig, f: impl Fn(&CoeffFn) -> Result<CoeffFn>) -> Result<RPoly> {
        let mut out = RPoly::zero(sig.clone());
        for (m, c) in self.terms() {
            let d = f(&c)?;
            if d.sig() != &sig {
                return Err(Error::SignatureMismatch("mapped coefficient".into()));
            }
            out.add_term(m.clone(), d.values(), 1);
        }
        Ok(out)
    }

    /// Values on `Z_p^n × A^s`, index `x_index · |A^s| + a_index`.
    pub fn evaluate(&self, n: usize) -> Result<Vec<u8>> {
        if self.num_vars() > n {
            return Err(Error::ArityMismatch(format!("{} variables, {n} requested", self.num_vars())));
        }
        let p = self.sig.p as usize;
        let q = self.sig.domain_size();
        let px = p.pow(n as u32);
        let mut data = vec![0u8; px * q];
        for (m, c) in &self.terms {
            let mut idx = 0;
            for k in 0..n {
                idx = idx * p + m.exp(k) as usize;
            }
            data[idx * q..(idx + 1) * q].copy_from_slice(c);
        }
        let v = vandermonde(self.sig.p);
        transform_axes(&mut data, self.sig.p, n, q, &v);
        Ok(data)
    }

    /// The unique reduced polynomial taking the given values on
    /// `Z_p^n × A^s` (same index convention as [`RPoly::evaluate`]).
    pub fn interpolate(sig: CoeffRingSig, n: usize, values: &[u8]) -> Result<RPoly> {
        let p = sig.p as usize;
        let q = sig.domain_size();
        let px = p.checked_pow(n as u32).ok_or_else(|| Error::GuardExceeded("interpolation size".into()))?;
        if values.len() != px * q {
            return Err(Error::MalformedTable(format!("{} values, expected {}", values.len(), px * q)));
        }
        if values.iter().any(|&v| v as usize >= p) {
            return Err(Error::MalformedTable("value out of range".into()));
        }
        let mut data = values.to_vec();
        let inv = vandermonde_inverse(sig.p);
        transform_axes(&mut data, sig.p, n, q, &inv);
        let mut out = RPoly::zero(sig.clone());
        for idx in 0..px {
            let c = &data[idx * q..(idx + 1) * q];
            if c.iter().all(|&v| v == 0) {
                continue;
            }
            let mut e = vec![0u8; n];
            let mut r = idx;
            for k in (0..n).rev() {
                e[k] = (r % p) as u8;
                r /= p;
            }
            out.terms.insert(Monomial::new(e), c.to_vec());
        }
        Ok(out)
    }

    /// The s-ary function of `modulus` that is this polynomial in component
    /// `i` (variables from block `i`, coefficients reading the other blocks)
    /// and zero elsewhere.
    pub fn induce(&self, modulus: &SquarefreeModulus, i: usize, s: usize) -> Result<FnTable> {
        modulus.check_index(i)?;
        if self.sig.p != modulus.prime(i) || self.sig.sources != modulus.others(i) {
            return Err(Error::SignatureMismatch(format!("{:?} does not match component {i} of {:?}", self.sig, modulus.primes())));
        }
        if s < self.num_vars() || s < self.sig.arity {
            return Err(Error::ArityMismatch(format!("arity {s} too small for {} variables and coefficient arity {}", self.num_vars(), self.sig.arity)));
        }
        let table = self.evaluate(s)?;
        let q = self.sig.domain_size();
        let xmap = block_index_map(modulus, i, s);
        let amap = coeff_index_map(modulus, i, s, self.sig.arity);
        let size = xmap.len();
        let mut comps = vec![vec![0u8; size]; modulus.m()];
        for pt in 0..size {
            comps[i][pt] = table[xmap[pt] * q + amap[pt]];
        }
        FnTable::from_components(modulus.clone(), s, comps)
    }
}

/// For each point of the arity-`n` domain, the index of its block-`i`
/// coordinates in `Z_{p_i}^n`.
pub fn block_index_map(modulus: &SquarefreeModulus, i: usize, n: usize) -> Vec<usize> {
    let full = FnTable::layout(modulus, n);
    let p = modulus.prime(i) as usize;
    let mut map = vec![0usize; full.size()];
    for c in 0..n {
        let col = full.digit_column(i, c);
        let w = p.pow((n - 1 - c) as u32);
        for (x, d) in map.iter_mut().zip(col) {
            *x += d as usize * w;
        }
    }
    map
}

/// Component `i` of `f` as a polynomial in the block-`i` variables whose
/// coefficients are `n`-ary functions of the other blocks.
pub fn component_poly(f: &FnTable, i: usize) -> Result<RPoly> {
    let md = f.modulus();
    md.check_index(i)?;
    let n = f.arity();
    let sig = CoeffRingSig::new(md.prime(i), md.others(i), n);
    let q = sig.domain_size();
    let xmap = block_index_map(md, i, n);
    let amap = coeff_index_map(md, i, n, n);
    let mut table = vec![0u8; xmap.len()];
    for (pt, &v) in f.component(i).iter().enumerate() {
        table[xmap[pt] * q + amap[pt]] = v;
    }
    RPoly::interpolate(sig, n, &table)
}

/// In-place interpolation of a `[Z_p^n][q]` value table into its
/// coefficient table (same layout, exponents in place of points).
pub(crate) fn interpolate_raw(p: u32, n: usize, q: usize, data: &mut [u8]) {
    let inv = vandermonde_inverse(p);
    transform_axes(data, p, n, q, &inv);
}

/// Applies a `p × p` matrix along each of the `n` Z_p-axes of `data`
/// (laid out as `[Z_p^n][q]`).
fn transform_axes(data: &mut [u8], p: u32, n: usize, q: usize, mat: &[Vec<u8>]) {
    let pu = p as usize;
    let mut buf = vec![0u32; pu];
    for axis in 0..n {
        let stride = pu.pow((n - 1 - axis) as u32) * q;
        let block = stride * pu;
        for start in (0..data.len()).step_by(block) {
            for off in 0..stride {
                for (r, b) in buf.iter_mut().enumerate() {
                    let mut acc = 0u32;
                    for (c, &mc) in mat[r].iter().enumerate() {
                        acc += mc as u32 * data[start + c * stride + off] as u32;
                    }
                    *b = acc % p;
                }
                for (r, &b) in buf.iter().enumerate() {
                    data[start + r * stride + off] = b as u8;
                }
            }
        }
    }
}

/// `V[a][e] = a^e` with `0^0 = 1`.
fn vandermonde(p: u32) -> Vec<Vec<u8>> {
    (0..p).map(|a| (0..p).map(|e| if e == 0 { 1 } else { pow_mod(a, e, p) as u8 }).collect()).collect()
}

type MatCache = RwLock<HashMap<u32, Arc<Vec<Vec<u8>>>>>;

/// Inverse of the univariate evaluation matrix, computed once per prime.
///
/// The n-variable system is the n-fold Kronecker power of this matrix, so
/// inverting it axis by axis solves the full evaluation system.
fn vandermonde_inverse(p: u32) -> Arc<Vec<Vec<u8>>> {
    static CACHE: OnceLock<MatCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(m) = cache.read().expect("cache poisoned").get(&p) {
        return m.clone();
    }
    let inv = Arc::new(invert(&vandermonde(p), p));
    cache.write().expect("cache poisoned").entry(p).or_insert(inv).clone()
}

fn invert(m: &[Vec<u8>], p: u32) -> Vec<Vec<u8>> {
    let k = m.len();
    let mut a: Vec<Vec<u32>> = m
        .iter()
        .enumerate()
        .map(|(r, row)| {
            let mut v: Vec<u32> = row.iter().map(|&x| x as u32).collect();
            v.extend((0..k).map(|c| (c == r) as u32));
            v
        })
        .collect();
    for col in 0..k {
        let piv = (col..k).find(|&r| a[r][col] % p != 0).expect("evaluation matrix is invertible");
        a.swap(col, piv);
        let inv = inv_mod(a[col][col], p);
        for x in a[col].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..k {
            if r != col && a[r][col] != 0 {
                let f = a[r][col];
                let pivot_row = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(pivot_row) {
                    *x = (*x + (p - f) * y) % p;
                }
            }
        }
    }
    a.into_iter().map(|row| row[k..].iter().map(|&x| x as u8).collect()).collect()
}
