#![allow(dead_code)]
//! Independent reference implementations used as test oracles.

use std::collections::BTreeSet;

use clonecalc::poly::{CoeffFn, CoeffRingSig, Monomial, RPoly};

/// Naive pointwise evaluation of `f` on `Z_p^n × A^s`, index
/// `x_index · |A^s| + a_index`.
pub fn naive_eval(f: &RPoly, n: usize) -> Vec<u8> {
    let sig = f.sig();
    let p = sig.p as u64;
    let q = sig.domain_size();
    let px = (p as usize).pow(n as u32);
    let mut out = vec![0u8; px * q];
    for xi in 0..px {
        let mut x = vec![0u64; n];
        let mut r = xi;
        for k in (0..n).rev() {
            x[k] = (r % p as usize) as u64;
            r /= p as usize;
        }
        for a in 0..q {
            let mut acc = 0u64;
            for (m, c) in f.terms() {
                let mut t = c.values()[a] as u64;
                for (k, &e) in m.exps().iter().enumerate() {
                    for _ in 0..e {
                        t = t * x[k] % p;
                    }
                }
                acc = (acc + t) % p;
            }
            out[xi * q + a] = acc as u8;
        }
    }
    out
}

/// Deterministic xorshift stream for building test inputs without sharing
/// code with the library's samplers.
pub struct Stream(u64);

impl Stream {
    pub fn new(seed: u64) -> Self {
        Stream(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1)
    }

    pub fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}

/// Random unary coefficient function.
pub fn random_coeff(rng: &mut Stream, sig: &CoeffRingSig) -> CoeffFn {
    let vals = (0..sig.domain_size()).map(|_| rng.below(sig.p as u64) as u8).collect();
    CoeffFn::new(sig.clone(), vals).unwrap()
}

/// Random reduced polynomial in at most `vars` variables with up to `terms` terms.
pub fn random_poly(rng: &mut Stream, sig: &CoeffRingSig, vars: usize, terms: usize) -> RPoly {
    let mut ts = Vec::new();
    let count = 1 + rng.below(terms as u64) as usize;
    for _ in 0..count {
        let e: Vec<u8> = (0..vars).map(|_| rng.below(sig.p as u64) as u8).collect();
        ts.push((Monomial::new(e), random_coeff(rng, sig)));
    }
    let mut f = RPoly::zero(sig.clone());
    for (m, c) in ts {
        f = f.add(&RPoly::monomial(&c, m)).unwrap();
    }
    f
}

/// Stage-wise closure of explicit function tables (`p`-valued, domain size
/// per arity supplied by `substitutions`): alternately add all linear
/// combinations and all substitution images until nothing changes.
pub fn stagewise_closure(
    p: u32,
    start: &BTreeSet<Vec<u8>>,
    substitutions: &[Vec<usize>],
) -> BTreeSet<Vec<u8>> {
    let mut x = start.clone();
    loop {
        let mut next = x.clone();
        let items: Vec<Vec<u8>> = x.iter().cloned().collect();
        for f in &items {
            for g in &items {
                for a in 0..p {
                    for b in 0..p {
                        let h: Vec<u8> = f
                            .iter()
                            .zip(g)
                            .map(|(&u, &v)| ((a * u as u32 + b * v as u32) % p) as u8)
                            .collect();
                        next.insert(h);
                    }
                }
            }
        }
        for f in &items {
            for map in substitutions {
                next.insert(map.iter().map(|&i| f[i]).collect());
            }
        }
        if next.len() == x.len() {
            return x;
        }
        x = next;
    }
}

/// An `n`-ary operation on `Z_s` as a plain table, index `Σ x_c s^{n-1-c}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Op {
    pub arity: usize,
    pub table: Vec<u32>,
}

impl Op {
    pub fn from_fn(s: u32, arity: usize, f: impl Fn(&[u32]) -> u32) -> Op {
        let size = (s as usize).pow(arity as u32);
        let table = (0..size).map(|idx| f(&digits(s, arity, idx)) % s).collect();
        Op { arity, table }
    }

    pub fn eval(&self, s: u32, x: &[u32]) -> u32 {
        self.table[x.iter().fold(0usize, |acc, &d| acc * s as usize + d as usize)]
    }
}

pub fn digits(s: u32, n: usize, mut idx: usize) -> Vec<u32> {
    let mut x = vec![0u32; n];
    for c in (0..n).rev() {
        x[c] = (idx % s as usize) as u32;
        idx /= s as usize;
    }
    x
}

/// The `n`-ary part of the clone generated by `gens` and `+`, explored to
/// `depth` compositions starting from the linear maps `Σ a_c x_c`. Returns
/// `None` if a level exceeds `limit` functions.
pub fn clone_ball(s: u32, n: usize, gens: &[Op], depth: usize, limit: usize) -> Option<BTreeSet<Vec<u32>>> {
    let size = (s as usize).pow(n as u32);
    let points: Vec<Vec<u32>> = (0..size).map(|idx| digits(s, n, idx)).collect();
    let mut ball: BTreeSet<Vec<u32>> = (0..size)
        .map(|a| {
            let coeffs = digits(s, n, a);
            points.iter().map(|x| x.iter().zip(&coeffs).map(|(&u, &v)| u * v).sum::<u32>() % s).collect()
        })
        .collect();
    let plus = Op::from_fn(s, 2, |x| x[0] + x[1]);
    let ops: Vec<&Op> = gens.iter().chain(std::iter::once(&plus)).collect();
    for _ in 0..depth {
        let cur: Vec<Vec<u32>> = ball.iter().cloned().collect();
        let mut next = ball.clone();
        for op in &ops {
            let k = op.arity;
            let total = cur.len().checked_pow(k as u32)?;
            if total > limit * 16 {
                return None;
            }
            for t in 0..total {
                let mut rem = t;
                let mut args = Vec::with_capacity(k);
                for _ in 0..k {
                    args.push(&cur[rem % cur.len()]);
                    rem /= cur.len();
                }
                let h: Vec<u32> = (0..size).map(|pt| op.eval(s, &args.iter().map(|a| a[pt]).collect::<Vec<_>>())).collect();
                next.insert(h);
            }
            if next.len() > limit {
                return None;
            }
        }
        ball = next;
    }
    Some(ball)
}

/// Unary part of the clone generated by unary `gens` and `+`: the smallest
/// additive subgroup of `Z_s^s` containing the identity that is closed under
/// left composition with every generator. `None` above `limit` elements.
pub fn unary_clone_part(s: u32, gens: &[Op], limit: usize) -> Option<BTreeSet<Vec<u32>>> {
    let id: Vec<u32> = (0..s).collect();
    let mut group: BTreeSet<Vec<u32>> = BTreeSet::new();
    group.insert(vec![0; s as usize]);
    let mut pending = vec![id];
    while let Some(h) = pending.pop() {
        if group.contains(&h) {
            continue;
        }
        let mut next = group.clone();
        for u in &group {
            let mut acc = u.clone();
            for _ in 1..s {
                acc = acc.iter().zip(&h).map(|(&a, &b)| (a + b) % s).collect();
                next.insert(acc.clone());
            }
        }
        if next.len() > limit {
            return None;
        }
        for u in &next {
            if !group.contains(u) {
                for g in gens {
                    pending.push(u.iter().map(|&x| g.eval(s, &[x])).collect());
                }
            }
        }
        group = next;
    }
    Some(group)
}
