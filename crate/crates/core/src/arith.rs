//! Squarefree moduli, residue tuples and dense function tables.
//!
//! A function `f: Z_s^n -> Z_s` is stored through the CRT isomorphism as a
//! function `Π_i Z_{p_i}^n -> Π_i Z_{p_i}`. Domain points are indexed in
//! block-lexicographic order: the block of the smallest prime is most
//! significant, and inside a block coordinate 1 is most significant.
//!
//! Prime indices are 0-based throughout the library.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{CoeffFn, CoeffRingSig};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Product of distinct primes, stored as the sorted prime list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct SquarefreeModulus {
    primes: Vec<u32>,
    s: u32,
}

impl TryFrom<Vec<u32>> for SquarefreeModulus {
    type Error = Error;
    fn try_from(primes: Vec<u32>) -> Result<Self> {
        SquarefreeModulus::from_primes(primes)
    }
}

impl From<SquarefreeModulus> for Vec<u32> {
    fn from(m: SquarefreeModulus) -> Vec<u32> {
        m.primes
    }
}

impl SquarefreeModulus {
    /// Factors `n`; fails unless it is a product of distinct primes.
    pub fn new(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidModulus(format!("{n} has no prime factor")));
        }
        let mut primes = Vec::new();
        let mut rest = n;
        let mut d = 2u64;
        while d * d <= rest {
            if rest % d == 0 {
                rest /= d;
                if rest % d == 0 {
                    return Err(Error::NotSquarefree(n));
                }
                primes.push(d as u32);
            }
            d += 1;
        }
        if rest > 1 {
            primes.push(rest as u32);
        }
        Self::from_primes(primes)
    }

    pub fn from_primes(primes: Vec<u32>) -> Result<Self> {
        if primes.is_empty() {
            return Err(Error::InvalidModulus("empty prime list".into()));
        }
        for w in primes.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidModulus(format!("primes not strictly increasing: {primes:?}")));
            }
        }
        let mut s: u64 = 1;
        for &p in &primes {
            if !is_prime(p as u64) || p > 251 {
                return Err(Error::InvalidModulus(format!("{p} is not a supported prime")));
            }
            s = s.checked_mul(p as u64).filter(|&s| s <= u32::MAX as u64).ok_or_else(|| {
                Error::InvalidModulus("modulus too large".into())
            })?;
        }
        Ok(SquarefreeModulus { primes, s: s as u32 })
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    pub fn prime(&self, i: usize) -> u32 {
        self.primes[i]
    }

    pub fn m(&self) -> usize {
        self.primes.len()
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    /// The primes other than `p_i`, in increasing order.
    pub fn others(&self, i: usize) -> Vec<u32> {
        self.primes.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &p)| p).collect()
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i < self.m() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: i, m: self.m() })
        }
    }

    /// Fails when the modulus is above the enumeration guard.
    pub fn check_enumerable(&self) -> Result<()> {
        crate::guard::check("modulus for enumeration", self.s as u64, crate::guard::MAX_ENUM_MODULUS)
    }

    /// Number of domain points at arity `n`.
    pub fn domain_size(&self, n: usize) -> Result<usize> {
        (self.s as usize)
            .checked_pow(n as u32)
            .filter(|&k| k <= 1 << 26)
            .ok_or_else(|| Error::GuardExceeded(format!("domain {}^{n} too large", self.s)))
    }

    /// Residue tuple of a Z_s integer.
    pub fn split(&self, z: u64) -> Element {
        Element(self.primes.iter().map(|&p| (z % p as u64) as u8).collect())
    }

    /// Z_s integer of a residue tuple (CRT reconstruction).
    pub fn combine(&self, e: &Element) -> u32 {
        let s = self.s as u64;
        let mut acc = 0u64;
        for (i, &p) in self.primes.iter().enumerate() {
            let p = p as u64;
            let n = s / p;
            let inv = crate::linalg::inv_mod((n % p) as u32, p as u32) as u64;
            acc = (acc + e.0[i] as u64 * n % s * inv) % s;
        }
        acc as u32
    }
}

/// An element of Π_i Z_{p_i}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Element(pub Vec<u8>);

/// Mixed-radix layout of `Π_j Z_{q_j}^n` in block-lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    radices: Vec<u32>,
    arity: usize,
    weights: Vec<Vec<usize>>,
    size: usize,
}

impl Layout {
    pub fn new(radices: &[u32], arity: usize) -> Self {
        let mut weights = vec![vec![0usize; arity]; radices.len()];
        let mut w = 1usize;
        for b in (0..radices.len()).rev() {
            for c in (0..arity).rev() {
                weights[b][c] = w;
                w *= radices[b] as usize;
            }
        }
        Layout { radices: radices.to_vec(), arity, weights, size: w }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn radices(&self) -> &[u32] {
        &self.radices
    }

    pub fn weight(&self, block: usize, coord: usize) -> usize {
        self.weights[block][coord]
    }

    /// Digits of a point, `digits[block][coord]`.
    pub fn decode(&self, mut idx: usize) -> Vec<Vec<u8>> {
        let mut out = vec![vec![0u8; self.arity]; self.radices.len()];
        for b in (0..self.radices.len()).rev() {
            for c in (0..self.arity).rev() {
                let r = self.radices[b] as usize;
                out[b][c] = (idx % r) as u8;
                idx /= r;
            }
        }
        out
    }

    pub fn encode(&self, digits: &[Vec<u8>]) -> usize {
        let mut idx = 0;
        for (b, block) in digits.iter().enumerate() {
            for (c, &d) in block.iter().enumerate() {
                idx += d as usize * self.weights[b][c];
            }
        }
        idx
    }

    /// For every point, the digit at `(block, coord)`.
    pub fn digit_column(&self, block: usize, coord: usize) -> Vec<u8> {
        let w = self.weights[block][coord];
        let r = self.radices[block] as usize;
        (0..self.size).map(|i| ((i / w) % r) as u8).collect()
    }
}

/// Dense table of a function `Π_i Z_{p_i}^n -> Π_i Z_{p_i}`.
///
/// Values are stored component-major: `comps[i][point]` is the residue mod
/// `p_i` of the value at `point`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FnTable {
    modulus: SquarefreeModulus,
    arity: usize,
    comps: Vec<Vec<u8>>,
}

/// The `i`-th component of a function table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ComponentFn {
    pub modulus: SquarefreeModulus,
    pub index: usize,
    pub arity: usize,
    pub values: Vec<u8>,
}

/// Coefficient vectors `(a_1, ..., a_m)`, `a_i ∈ Z_{p_i}^k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LinearMapSpec {
    pub coeffs: Vec<Vec<u8>>,
}

impl LinearMapSpec {
    pub fn arity(&self) -> usize {
        self.coeffs.first().map_or(0, |a| a.len())
    }
}

impl FnTable {
    pub fn layout(modulus: &SquarefreeModulus, arity: usize) -> Layout {
        Layout::new(modulus.primes(), arity)
    }

    /// Builds a table from component-major residues, validating ranges.
    pub fn from_components(modulus: SquarefreeModulus, arity: usize, comps: Vec<Vec<u8>>) -> Result<Self> {
        let size = modulus.domain_size(arity)?;
        if comps.len() != modulus.m() {
            return Err(Error::MalformedTable(format!("{} components for {} primes", comps.len(), modulus.m())));
        }
        for (i, c) in comps.iter().enumerate() {
            if c.len() != size {
                return Err(Error::MalformedTable(format!("component {i} has {} entries, expected {size}", c.len())));
            }
            if let Some(pos) = c.iter().position(|&v| v as u32 >= modulus.prime(i)) {
                return Err(Error::MalformedTable(format!("entry {pos} of component {i} out of range")));
            }
        }
        Ok(FnTable { modulus, arity, comps })
    }

    /// Builds a table from one residue tuple per domain point.
    pub fn from_elements(modulus: SquarefreeModulus, arity: usize, values: &[Element]) -> Result<Self> {
        let size = modulus.domain_size(arity)?;
        if values.len() != size {
            return Err(Error::MalformedTable(format!("{} values, expected {size}", values.len())));
        }
        let mut comps = vec![Vec::with_capacity(size); modulus.m()];
        for (k, e) in values.iter().enumerate() {
            if e.0.len() != modulus.m() {
                return Err(Error::MalformedTable(format!("value {k} has {} residues", e.0.len())));
            }
            for (i, &r) in e.0.iter().enumerate() {
                comps[i].push(r);
            }
        }
        Self::from_components(modulus, arity, comps)
    }

    /// Builds a table from a closure on Z_s-integer points.
    pub fn from_fn_zs(modulus: SquarefreeModulus, arity: usize, f: impl Fn(&[u32]) -> u32) -> Result<Self> {
        let layout = Self::layout(&modulus, arity);
        let mut comps = vec![Vec::with_capacity(layout.size()); modulus.m()];
        for idx in 0..layout.size() {
            let digits = layout.decode(idx);
            let point: Vec<u32> = (0..arity)
                .map(|c| modulus.combine(&Element(digits.iter().map(|b| b[c]).collect())))
                .collect();
            let v = f(&point) % modulus.s();
            for (i, &p) in modulus.primes().iter().enumerate() {
                comps[i].push((v % p) as u8);
            }
        }
        Self::from_components(modulus, arity, comps)
    }

    pub fn zero(modulus: &SquarefreeModulus, arity: usize) -> Result<Self> {
        let size = modulus.domain_size(arity)?;
        Ok(FnTable { modulus: modulus.clone(), arity, comps: vec![vec![0; size]; modulus.m()] })
    }

    /// The `k`-th projection (0-based) of arity `n`.
    pub fn projection(modulus: &SquarefreeModulus, n: usize, k: usize) -> Result<Self> {
        if k >= n {
            return Err(Error::ArityMismatch(format!("projection {k} of arity {n}")));
        }
        let coeffs = (0..modulus.m())
            .map(|_| (0..n).map(|c| (c == k) as u8).collect())
            .collect();
        linear_map(modulus, &LinearMapSpec { coeffs })
    }

    pub fn modulus(&self) -> &SquarefreeModulus {
        &self.modulus
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.comps[0].len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn component(&self, i: usize) -> &[u8] {
        &self.comps[i]
    }

    pub fn components(&self) -> &[Vec<u8>] {
        &self.comps
    }

    pub fn value(&self, idx: usize) -> Element {
        Element(self.comps.iter().map(|c| c[idx]).collect())
    }

    pub fn values(&self) -> Vec<Element> {
        (0..self.len()).map(|k| self.value(k)).collect()
    }

    /// Values as Z_s integers in table order.
    pub fn values_zs(&self) -> Vec<u32> {
        (0..self.len()).map(|k| self.modulus.combine(&self.value(k))).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.iter().all(|&v| v == 0))
    }

    fn check_same(&self, other: &FnTable) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch);
        }
        if self.arity != other.arity {
            return Err(Error::ArityMismatch(format!("{} vs {}", self.arity, other.arity)));
        }
        Ok(())
    }

    pub fn add(&self, other: &FnTable) -> Result<FnTable> {
        self.check_same(other)?;
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .zip(self.modulus.primes())
            .map(|((a, b), &p)| a.iter().zip(b).map(|(&x, &y)| ((x as u32 + y as u32) % p) as u8).collect())
            .collect();
        Ok(FnTable { modulus: self.modulus.clone(), arity: self.arity, comps })
    }

    /// Pointwise multiple by a Z_s integer.
    pub fn scalar_mul(&self, c: u64) -> FnTable {
        let comps = self
            .comps
            .iter()
            .zip(self.modulus.primes())
            .map(|(a, &p)| {
                let c = (c % p as u64) as u32;
                a.iter().map(|&x| (x as u32 * c % p) as u8).collect()
            })
            .collect();
        FnTable { modulus: self.modulus.clone(), arity: self.arity, comps }
    }

    /// Pointwise multiple with a separate scalar per component.
    pub fn component_scale(&self, scalars: &[u32]) -> FnTable {
        let comps = self
            .comps
            .iter()
            .zip(self.modulus.primes())
            .zip(scalars)
            .map(|((a, &p), &c)| a.iter().map(|&x| (x as u32 * (c % p) % p) as u8).collect())
            .collect();
        FnTable { modulus: self.modulus.clone(), arity: self.arity, comps }
    }

    /// `self ∘ (args_1, ..., args_k)`.
    pub fn compose(&self, args: &[FnTable]) -> Result<FnTable> {
        if args.len() != self.arity {
            return Err(Error::ArityMismatch(format!("{} arguments for arity {}", args.len(), self.arity)));
        }
        let n = match args.first() {
            Some(g) => g.arity,
            None => return Err(Error::ArityMismatch("composition of a constant needs an explicit arity".into())),
        };
        for g in args {
            if g.modulus != self.modulus {
                return Err(Error::ModulusMismatch);
            }
            if g.arity != n {
                return Err(Error::ArityMismatch(format!("argument arities {} and {}", g.arity, n)));
            }
        }
        Ok(self.compose_unchecked(args, n))
    }

    /// Composition with an explicit result arity (allows `self` of arity 0).
    pub fn compose_with_arity(&self, args: &[FnTable], n: usize) -> Result<FnTable> {
        if args.len() != self.arity {
            return Err(Error::ArityMismatch(format!("{} arguments for arity {}", args.len(), self.arity)));
        }
        for g in args {
            if g.modulus != self.modulus {
                return Err(Error::ModulusMismatch);
            }
            if g.arity != n {
                return Err(Error::ArityMismatch(format!("argument arities {} and {}", g.arity, n)));
            }
        }
        Ok(self.compose_unchecked(args, n))
    }

    fn compose_unchecked(&self, args: &[FnTable], n: usize) -> FnTable {
        let outer = Self::layout(&self.modulus, self.arity);
        let size = (self.modulus.s() as usize).pow(n as u32);
        let m = self.modulus.m();
        let mut comps = vec![vec![0u8; size]; m];
        for pt in 0..size {
            let mut idx = 0usize;
            for b in 0..m {
                for (c, g) in args.iter().enumerate() {
                    idx += g.comps[b][pt] as usize * outer.weight(b, c);
                }
            }
            for b in 0..m {
                comps[b][pt] = self.comps[b][idx];
            }
        }
        FnTable { modulus: self.modulus.clone(), arity: n, comps }
    }

    /// Returns the same function with one table column per component.
    pub fn component_fn(&self, i: usize) -> Result<ComponentFn> {
        component_of(self, i)
    }
}

/// `f_i = Π_{j≠i} p_j^{p_i−1} · f` for every `i`.
pub fn crt_split(f: &FnTable) -> Vec<FnTable> {
    let md = f.modulus();
    (0..md.m())
        .map(|i| {
            let s = md.s() as u64;
            let mut c = 1u64;
            for (j, &pj) in md.primes().iter().enumerate() {
                if j != i {
                    for _ in 0..md.prime(i) - 1 {
                        c = c * pj as u64 % s;
                    }
                }
            }
            f.scalar_mul(c)
        })
        .collect()
}

pub fn component_of(f: &FnTable, i: usize) -> Result<ComponentFn> {
    f.modulus.check_index(i)?;
    Ok(ComponentFn { modulus: f.modulus.clone(), index: i, arity: f.arity, values: f.comps[i].clone() })
}

/// Rebuilds a table from all of its components.
pub fn from_components(parts: &[ComponentFn]) -> Result<FnTable> {
    let first = parts.first().ok_or(Error::EmptyGenerators)?;
    let mut comps = vec![Vec::new(); first.modulus.m()];
    for c in parts {
        if c.modulus != first.modulus {
            return Err(Error::ModulusMismatch);
        }
        if c.arity != first.arity {
            return Err(Error::ArityMismatch("component arities differ".into()));
        }
        first.modulus.check_index(c.index)?;
        comps[c.index] = c.values.clone();
    }
    FnTable::from_components(first.modulus.clone(), first.arity, comps)
}

/// The k-ary function `x ↦ (⟨a_1, x_1⟩, ..., ⟨a_m, x_m⟩)`.
pub fn linear_map(modulus: &SquarefreeModulus, spec: &LinearMapSpec) -> Result<FnTable> {
    if spec.coeffs.len() != modulus.m() {
        return Err(Error::DimensionMismatch(format!("{} coefficient vectors for {} primes", spec.coeffs.len(), modulus.m())));
    }
    let k = spec.arity();
    if spec.coeffs.iter().any(|a| a.len() != k) {
        return Err(Error::DimensionMismatch("coefficient vectors differ in length".into()));
    }
    let layout = FnTable::layout(modulus, k);
    let mut comps = Vec::with_capacity(modulus.m());
    for (i, a) in spec.coeffs.iter().enumerate() {
        let p = modulus.prime(i);
        let mut v = vec![0u8; layout.size()];
        for (c, &ac) in a.iter().enumerate() {
            let ac = ac as u32 % p;
            if ac == 0 {
                continue;
            }
            let col = layout.digit_column(i, c);
            for (x, d) in v.iter_mut().zip(col) {
                *x = ((*x as u32 + ac * d as u32) % p) as u8;
            }
        }
        comps.push(v);
    }
    Ok(FnTable { modulus: modulus.clone(), arity: k, comps })
}

/// For each point of `Π_i Z_{p_i}^n`, the index of its restriction to the
/// blocks other than `i`, first `k` coordinates of each (the coefficient
/// domain of `(p_i; others)` at arity `k`).
pub fn coeff_index_map(modulus: &SquarefreeModulus, i: usize, n: usize, k: usize) -> Vec<usize> {
    let full = FnTable::layout(modulus, n);
    let others = modulus.others(i);
    let sub = Layout::new(&others, k);
    let mut map = vec![0usize; full.size()];
    for (bo, b) in (0..modulus.m()).filter(|&b| b != i).enumerate() {
        for c in 0..k {
            let col = full.digit_column(b, c);
            let w = sub.weight(bo, c);
            for (x, d) in map.iter_mut().zip(col) {
                *x += d as usize * w;
            }
        }
    }
    map
}

/// The n-ary table that is zero outside component `i`, where it is `g`
/// applied to the other blocks.
pub fn e_embed(modulus: &SquarefreeModulus, i: usize, g: &CoeffFn) -> Result<FnTable> {
    modulus.check_index(i)?;
    let expected = CoeffRingSig::new(modulus.prime(i), modulus.others(i), g.sig().arity);
    if g.sig() != &expected {
        return Err(Error::SignatureMismatch(format!("{:?} vs {:?}", g.sig(), expected)));
    }
    let n = g.sig().arity;
    let map = coeff_index_map(modulus, i, n, n);
    let size = map.len();
    let mut comps = vec![vec![0u8; size]; modulus.m()];
    comps[i] = map.iter().map(|&k| g.values()[k]).collect();
    Ok(FnTable { modulus: modulus.clone(), arity: n, comps })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z6() -> SquarefreeModulus {
        SquarefreeModulus::new(6).unwrap()
    }

    #[test]
    fn rejects_non_squarefree() {
        assert_eq!(SquarefreeModulus::new(4), Err(Error::NotSquarefree(4)));
        assert_eq!(SquarefreeModulus::new(30).unwrap().primes(), &[2, 3, 5]);
    }

    #[test]
    fn crt_split_of_constant_one() {
        let one = FnTable::from_fn_zs(z6(), 1, |_| 1).unwrap();
        let parts = crt_split(&one);
        assert!(parts[0].values_zs().iter().all(|&v| v == 3));
        assert!(parts[1].values_zs().iter().all(|&v| v == 4));
    }

    #[test]
    fn linear_map_addition() {
        let plus = linear_map(&z6(), &LinearMapSpec { coeffs: vec![vec![1, 1], vec![1, 1]] }).unwrap();
        let direct = FnTable::from_fn_zs(z6(), 2, |x| x[0] + x[1]).unwrap();
        assert_eq!(plus, direct);
        let three_x = FnTable::from_fn_zs(z6(), 1, |x| 3 * x[0]).unwrap();
        let l = linear_map(&z6(), &LinearMapSpec { coeffs: vec![vec![1], vec![0]] }).unwrap();
        assert_eq!(l, three_x);
    }

    #[test]
    fn compose_plus_with_diagonal() {
        let plus = FnTable::from_fn_zs(z6(), 2, |x| x[0] + x[1]).unwrap();
        let id = FnTable::projection(&z6(), 1, 0).unwrap();
        let twice = plus.compose(&[id.clone(), id]).unwrap();
        assert_eq!(twice, FnTable::from_fn_zs(z6(), 1, |x| 2 * x[0]).unwrap());
    }

    #[test]
    fn layout_round_trip() {
        let l = Layout::new(&[2, 3, 5], 2);
        for k in 0..l.size() {
            assert_eq!(l.encode(&l.decode(k)), k);
        }
    }

    #[test]
    fn e_embed_indicator() {
        let g = CoeffFn::new(CoeffRingSig::new(2, vec![3], 1), vec![1, 0, 0]).unwrap();
        let f = e_embed(&z6(), 0, &g).unwrap();
        for (z, v) in f.values_zs().iter().enumerate() {
            let expect = if z % 3 == 0 { 3 } else { 0 };
            assert_eq!(*v, expect);
        }
    }
}
