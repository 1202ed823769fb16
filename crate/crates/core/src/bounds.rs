//! Cardinality bounds for clonoid and clone lattices, in exact arithmetic.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{is_prime, SquarefreeModulus};
use crate::error::{Error, Result};
use crate::guard;
use crate::linalg::inv_mod;

/// Gaussian binomial `(n choose k)_q`.
pub fn gaussian_binomial(n: u64, k: u64, q: u64) -> Result<BigUint> {
    if k > n {
        return Err(Error::Precondition(format!("k = {k} above n = {n}")));
    }
    if q < 2 {
        return Err(Error::Precondition(format!("q = {q} below 2")));
    }
    let q = BigUint::from(q);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 1..=k {
        num *= q.pow((n - k + i) as u32) - 1u32;
        den *= q.pow(i as u32) - 1u32;
    }
    debug_assert!((&num % &den).is_zero());
    Ok(num / den)
}

/// `Σ_{1 ≤ r ≤ n} (n choose r)_p`.
pub fn clonoid_count_upper(p: u64, n: u64) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    let mut acc = BigUint::zero();
    for r in 1..=n {
        acc += gaussian_binomial(n, r, p)?;
    }
    Ok(acc)
}

/// Polynomial over `Z_p`, coefficients from the constant term up.
pub type PolyZp = Vec<u32>;

fn trim(mut f: PolyZp) -> PolyZp {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> PolyZp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

/// Division by a monic divisor; `None` if the remainder is nonzero.
fn poly_div_exact(f: &[u32], d: &[u32], p: u32) -> Option<PolyZp> {
    let dd = d.len() - 1;
    if f.len() < d.len() {
        return None;
    }
    let mut r = f.to_vec();
    let mut q = vec![0u32; f.len() - dd];
    for k in (0..q.len()).rev() {
        let c = r[k + dd];
        q[k] = c;
        if c != 0 {
            for (j, &dj) in d.iter().enumerate() {
                r[k + j] = (r[k + j] + p - c * dj % p) % p;
            }
        }
    }
    r.iter().all(|&x| x == 0).then(|| trim(q))
}

/// Complete factorization of a polynomial over `Z_p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorizationZp {
    pub p: u32,
    pub input: PolyZp,
    /// Leading coefficient of the input.
    pub unit: u32,
    /// Monic irreducible factors with multiplicities, by degree.
    pub factors: Vec<(PolyZp, u32)>,
}

impl FactorizationZp {
    /// `unit · Π factor^multiplicity`.
    pub fn product(&self) -> PolyZp {
        let mut acc = vec![self.unit];
        for (f, e) in &self.factors {
            for _ in 0..*e {
                acc = poly_mul(&acc, f, self.p);
            }
        }
        acc
    }

    pub fn multiplicities(&self) -> Vec<u32> {
        self.factors.iter().map(|(_, e)| *e).collect()
    }
}

/// Factors `poly` by trial division with monic polynomials in increasing
/// degree; every divisor found this way is irreducible.
pub fn factor_over_zp(poly: &[u32], p: u32) -> Result<FactorizationZp> {
    if !is_prime(p as u64) {
        return Err(Error::InvalidModulus(format!("{p} is not prime")));
    }
    let input = trim(poly.iter().map(|&c| c % p).collect());
    if input.is_empty() {
        return Err(Error::Precondition("zero polynomial".into()));
    }
    let deg = input.len() - 1;
    guard::check("factorization degree", deg as u64, 16)?;
    let unit = *input.last().expect("nonzero");
    let inv = inv_mod(unit, p);
    let mut rest: PolyZp = input.iter().map(|&c| c * inv % p).collect();
    let mut factors = Vec::new();
    let mut d = 1;
    while 2 * d < rest.len() {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut cand = vec![0u32; d + 1];
            let mut r = idx;
            for c in cand.iter_mut().take(d) {
                *c = (r % p as u64) as u32;
                r /= p as u64;
            }
            cand[d] = 1;
            let mut mult = 0;
            while let Some(q) = poly_div_exact(&rest, &cand, p) {
                rest = q;
                mult += 1;
            }
            if mult > 0 {
                factors.push((cand, mult));
            }
        }
        d += 1;
    }
    if rest.len() > 1 {
        match factors.iter_mut().find(|(f, _)| f == &rest) {
            Some(entry) => entry.1 += 1,
            None => factors.push((rest, 1)),
        }
    }
    factors.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then(a.0.cmp(&b.0)));
    let out = FactorizationZp { p, input, unit, factors };
    if out.product() != out.input {
        return Err(Error::Precondition("factorization does not multiply back".into()));
    }
    Ok(out)
}

/// `x^k − 1` over `Z_p`.
pub fn x_pow_minus_one(k: u32, p: u32) -> PolyZp {
    let mut f = vec![0u32; k as usize + 1];
    f[0] = p - 1;
    f[k as usize] = 1;
    f
}

/// Clonoid counts entering a report.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    #[serde(with = "big_list")]
    pub formula: Vec<BigUint>,
    pub enumerated: Vec<u64>,
}

/// Bound report with consistency flags.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub modulus: Vec<u32>,
    /// `n_i = Π_{j≠i} p_j`.
    pub n: Vec<u64>,
    pub counts: Counts,
    #[serde(with = "big")]
    pub lower: BigUint,
    #[serde(with = "big")]
    pub upper: BigUint,
    #[serde(with = "big_opt")]
    pub chain_value: Option<BigUint>,
    pub flags: Vec<String>,
}

pub const FLAG_SINGLE_PRIME: &str = "single_prime";
pub const FLAG_FORMULA_COUNTS: &str = "formula_counts_substituted";
pub const FLAG_CHAIN: &str = "middle_exceeds_chain_value";
pub const FLAG_ORDER: &str = "lower_above_upper";

/// `Σ counts − m + 1 ≤ |lattice| ≤ Π counts^{p_i+1}`.
///
/// The lower bound uses the enumerated counts when given; otherwise the
/// formula counts stand in for them and the substitution is flagged. The
/// upper bound uses the larger of the formula and enumerated count per
/// prime, since the formula count can fall below the enumerated one when
/// `n_i = 1`.
pub fn clone_count_bounds(modulus: &SquarefreeModulus, enumerated: Option<&[u64]>) -> Result<BoundsReport> {
    let m = modulus.m();
    let n: Vec<u64> = (0..m).map(|i| modulus.others(i).iter().map(|&q| q as u64).product()).collect();
    let formula = (0..m).map(|i| clonoid_count_upper(modulus.prime(i) as u64, n[i])).collect::<Result<Vec<_>>>()?;
    let mut flags = Vec::new();
    if m == 1 {
        flags.push(FLAG_SINGLE_PRIME.to_string());
    }
    let counts: Vec<BigUint> = match enumerated {
        Some(c) => {
            if c.len() != m {
                return Err(Error::DimensionMismatch(format!("{} counts for {m} primes", c.len())));
            }
            c.iter().map(|&x| BigUint::from(x)).collect()
        }
        None => {
            flags.push(FLAG_FORMULA_COUNTS.to_string());
            formula.clone()
        }
    };
    let sum: BigUint = counts.iter().sum();
    let lower = sum + 1u32 - BigUint::from(m as u64);
    let mut upper = BigUint::one();
    for (i, (f, c)) in formula.iter().zip(&counts).enumerate() {
        upper *= f.max(c).pow(modulus.prime(i) + 1);
    }
    if lower > upper {
        flags.push(FLAG_ORDER.to_string());
    }
    Ok(BoundsReport {
        modulus: modulus.primes().to_vec(),
        n,
        counts: Counts { formula, enumerated: enumerated.map(|c| c.to_vec()).unwrap_or_default() },
        lower,
        upper,
        chain_value: None,
        flags,
    })
}

/// [`clone_count_bounds`] plus, for two primes, the chain value of
/// [`pq_bounds`] and its flag.
pub fn bounds_report(modulus: &SquarefreeModulus, enumerated: Option<&[u64]>) -> Result<BoundsReport> {
    let mut r = clone_count_bounds(modulus, enumerated)?;
    if modulus.m() == 2 {
        let pq = pq_bounds(modulus.prime(0), modulus.prime(1))?;
        r.chain_value = pq.chain_value;
        r.flags.extend(pq.flags);
    }
    Ok(r)
}

/// Bounds for `Z_{pq}` from the factorizations of `x^{q−1} − 1` over `Z_p`
/// (multiplicities `k_i`) and `x^{p−1} − 1` over `Z_q` (multiplicities `d_i`).
/// `upper` is the middle expression; `chain_value` is `2^{pq+p+q}`.
pub fn pq_bounds(p: u32, q: u32) -> Result<BoundsReport> {
    if p == q || !is_prime(p as u64) || !is_prime(q as u64) {
        return Err(Error::InvalidModulus(format!("need distinct primes, got {p} and {q}")));
    }
    let fp = factor_over_zp(&x_pow_minus_one(q - 1, p), p)?;
    let fq = factor_over_zp(&x_pow_minus_one(p - 1, q), q)?;
    let prod = |f: &FactorizationZp| -> BigUint { f.multiplicities().iter().map(|&k| BigUint::from(k + 1)).product() };
    let kp = prod(&fp);
    let dq = prod(&fq);
    let two = BigUint::from(2u32);
    let lower = &two * (&kp + &dq) - 1u32;
    let upper = two.pow(p + q + 2) * kp.pow(p + 1) * dq.pow(q + 1);
    let chain = two.pow(p * q + p + q);
    let mut flags = Vec::new();
    if upper > chain {
        flags.push(FLAG_CHAIN.to_string());
    }
    let (a, b) = if p < q { (p, q) } else { (q, p) };
    let (ca, cb) = if p < q { (&two * &kp, &two * &dq) } else { (&two * &dq, &two * &kp) };
    Ok(BoundsReport {
        modulus: vec![a, b],
        n: vec![b as u64, a as u64],
        counts: Counts { formula: vec![ca, cb], enumerated: Vec::new() },
        lower,
        upper,
        chain_value: Some(chain),
        flags,
    })
}

/// Exact integers as JSON numbers when they fit in `u64`, else as strings.
fn to_json(v: &BigUint) -> serde_json::Value {
    match v.to_u64() {
        Some(x) => serde_json::Value::from(x),
        None => serde_json::Value::String(v.to_str_radix(10)),
    }
}

fn from_json<E: serde::de::Error>(v: serde_json::Value) -> std::result::Result<BigUint, E> {
    match v {
        serde_json::Value::Number(n) => n.as_u64().map(BigUint::from).ok_or_else(|| E::custom("expected a nonnegative integer")),
        serde_json::Value::String(s) => BigUint::parse_bytes(s.as_bytes(), 10).ok_or_else(|| E::custom("expected a decimal integer")),
        _ => Err(E::custom("expected an integer")),
    }
}

mod big {
    use super::*;
    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
        to_json(v).serialize(s)
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigUint, D::Error> {
        from_json(serde_json::Value::deserialize(d)?)
    }
}

mod big_opt {
    use super::*;
    pub fn serialize<S: Serializer>(v: &Option<BigUint>, s: S) -> std::result::Result<S::Ok, S::Error> {
        v.as_ref().map(to_json).serialize(s)
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<BigUint>, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::Null => Ok(None),
            v => from_json(v).map(Some),
        }
    }
}

mod big_list {
    use super::*;
    pub fn serialize<S: Serializer>(v: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
        v.iter().map(to_json).collect::<Vec<_>>().serialize(s)
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<BigUint>, D::Error> {
        Vec::<serde_json::Value>::deserialize(d)?.into_iter().map(from_json).collect()
    }
}
