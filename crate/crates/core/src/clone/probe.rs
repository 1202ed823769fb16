//! Cross-component probes.
//!
//! For an atom `r` of component `i` and probe functions
//! `u_j(z, t) = Σ_l b_{j,l}(z, t)·t_j^l` built from grade `l` of every other
//! component `j`, the coefficients of `r(u(z, t))` as a polynomial in the
//! block-`i` variables `z` lie in the clone. Results are cached by the
//! subspaces involved, so they are shared between closures.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arith::{Layout, SquarefreeModulus};
use crate::error::{Error, Result};
use crate::guard;
use crate::linalg::Subspace;
use crate::poly::interpolate_raw;

/// The restricted probe domain of component `j`: block `i` contributes `n`
/// coordinates `z`, every other block one coordinate `t`.
#[derive(Clone, Debug)]
pub(crate) struct SideDomain {
    /// `(radix, count)` per source block of `j`, in block order.
    pub shape: Vec<(u32, usize)>,
}

impl SideDomain {
    pub fn new(modulus: &SquarefreeModulus, i: usize, j: usize, n: usize) -> Self {
        let shape = (0..modulus.m()).filter(|&b| b != j).map(|b| (modulus.prime(b), if b == i { n } else { 1 })).collect();
        SideDomain { shape }
    }

    pub fn size(&self) -> usize {
        self.shape.iter().map(|&(q, c)| (q as usize).pow(c as u32)).product()
    }
}

/// Restriction of `coeff ∘ α` to the probe domain, where `coeff` is a unary
/// coefficient function of component `j` and `α` holds one vector per source
/// block (length `n` for block `i`, length 1 otherwise).
pub(crate) fn restricted(dom: &SideDomain, unary: &Layout, coeff: &[u8], alpha: &[Vec<u8>]) -> Vec<u8> {
    let size = dom.size();
    let mut out = Vec::with_capacity(size);
    let mut digits: Vec<Vec<u8>> = dom.shape.iter().map(|&(_, c)| vec![0u8; c]).collect();
    for _ in 0..size {
        let inner: Vec<Vec<u8>> = dom
            .shape
            .iter()
            .zip(&digits)
            .zip(alpha)
            .map(|((&(q, _), d), a)| vec![(d.iter().zip(a).map(|(&x, &y)| x as u32 * y as u32).sum::<u32>() % q) as u8])
            .collect();
        out.push(coeff[unary.encode(&inner)]);
        // Odometer, last coordinate of the last block fastest.
        'adv: for (b, &(q, _)) in dom.shape.iter().enumerate().rev() {
            for c in (0..digits[b].len()).rev() {
                digits[b][c] += 1;
                if (digits[b][c] as u32) < q {
                    break 'adv;
                }
                digits[b][c] = 0;
            }
        }
    }
    out
}

/// One independent coefficient found by a probe.
#[derive(Clone, Debug)]
pub(crate) struct ProbeEntry {
    /// `|k|` for the monomial `z^k`.
    pub degree: usize,
    pub exps: Vec<u8>,
    pub coeff: Vec<u8>,
    /// Restricted probe functions, indexed `[side][l]`.
    pub witness: Arc<Vec<Vec<Vec<u8>>>>,
}

#[derive(Clone, Debug)]
pub(crate) struct ProbeOutcome {
    pub entries: Vec<ProbeEntry>,
    pub sampled: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Key {
    primes: Vec<u32>,
    i: usize,
    r: Vec<u8>,
    n: usize,
    sides: Vec<Vec<Subspace>>,
    guard: u64,
    samples: usize,
    seed: u64,
}

type Cache = Mutex<HashMap<Key, Arc<ProbeOutcome>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Settings of one probe run.
#[derive(Clone, Debug)]
pub(crate) struct ProbeParams {
    pub n: usize,
    pub guard: u64,
    pub samples: usize,
    pub seed: u64,
}

/// Runs the probe for atom `r` of component `i`. `sides[s][l]` is the
/// restricted grade-`l` subspace of the `s`-th other component.
pub(crate) fn probe(
    modulus: &SquarefreeModulus,
    i: usize,
    r: &[u8],
    sides: &[Vec<Subspace>],
    params: &ProbeParams,
) -> Result<Arc<ProbeOutcome>> {
    let key = Key {
        primes: modulus.primes().to_vec(),
        i,
        r: r.to_vec(),
        n: params.n,
        sides: sides.to_vec(),
        guard: params.guard,
        samples: params.samples,
        seed: params.seed,
    };
    if let Some(hit) = cache().lock().expect("probe cache poisoned").get(&key) {
        return Ok(hit.clone());
    }
    let out = Arc::new(run(modulus, i, r, sides, params)?);
    cache().lock().expect("probe cache poisoned").insert(key, out.clone());
    Ok(out)
}

/// Number of probe tuples, saturating.
pub(crate) fn space_size(sides: &[Vec<Subspace>]) -> u64 {
    let mut count: u64 = 1;
    for side in sides {
        for s in side {
            let e = (s.prime() as u64).checked_pow(s.rank() as u32).unwrap_or(u64::MAX);
            count = count.saturating_mul(e);
        }
    }
    count
}

struct Plan {
    p: u32,
    n: usize,
    q: usize,
    px: usize,
    /// `[side][point]` index into the restricted domain.
    ridx: Vec<Vec<usize>>,
    /// `[side][point]` value of `t_j`.
    tval: Vec<Vec<u32>>,
    side_primes: Vec<u32>,
    /// Weight of each other component's value in the unary index of `r`.
    rweight: Vec<usize>,
}

fn plan(modulus: &SquarefreeModulus, i: usize, n: usize) -> Plan {
    let p = modulus.prime(i);
    let others: Vec<usize> = (0..modulus.m()).filter(|&b| b != i).collect();
    let unary = Layout::new(&modulus.others(i), 1);
    let q = unary.size();
    let px = (p as usize).pow(n as u32);
    let mut ridx = Vec::new();
    let mut tval = Vec::new();
    for (s, &j) in others.iter().enumerate() {
        let dom = SideDomain::new(modulus, i, j, n);
        let mut ri = Vec::with_capacity(px * q);
        let mut tv = Vec::with_capacity(px * q);
        for zi in 0..px {
            let mut z = vec![0u8; n];
            let mut rem = zi;
            for c in (0..n).rev() {
                z[c] = (rem % p as usize) as u8;
                rem /= p as usize;
            }
            for ti in 0..q {
                let t = unary.decode(ti);
                // Mixed radix over the shape of side `s`.
                let mut idx = 0usize;
                let mut tb = 0usize;
                for (b, &(radix, count)) in (0..modulus.m()).filter(|&b| b != j).zip(&dom.shape) {
                    if b == i {
                        for &d in &z {
                            idx = idx * radix as usize + d as usize;
                        }
                    } else {
                        let pos = others.iter().position(|&o| o == b).expect("other block");
                        idx = idx * radix as usize + t[pos][0] as usize;
                        debug_assert_eq!(count, 1);
                    }
                    tb += 1;
                }
                debug_assert_eq!(tb, dom.shape.len());
                ri.push(idx);
                tv.push(t[s][0] as u32);
            }
        }
        ridx.push(ri);
        tval.push(tv);
    }
    let side_primes = others.iter().map(|&j| modulus.prime(j)).collect();
    let rweight = (0..others.len()).map(|s| unary.weight(s, 0)).collect();
    Plan { p, n, q, px, ridx, tval, side_primes, rweight }
}

/// Accumulates the independent coefficients per degree.
struct Acc {
    spaces: Vec<Subspace>,
    found: Vec<(usize, Vec<u8>, Vec<u8>, usize)>,
}

impl Acc {
    fn new(plan: &Plan) -> Self {
        let degrees = plan.n * (plan.p as usize - 1) + 1;
        Acc { spaces: (0..degrees).map(|_| Subspace::zero(plan.p, plan.q)).collect(), found: Vec::new() }
    }

    fn full(&self) -> bool {
        self.spaces.iter().all(|s| s.rank() == s.ambient_dim())
    }
}

fn evaluate_tuple(plan: &Plan, r: &[u8], picks: &[&[&[u8]]], data: &mut [u8]) {
    for (pt, out) in data.iter_mut().enumerate() {
        let mut idx = 0usize;
        for (s, side) in picks.iter().enumerate() {
            let qj = plan.side_primes[s];
            let t = plan.tval[s][pt];
            let ri = plan.ridx[s][pt];
            let mut u = 0u32;
            let mut tp = 1u32;
            for b in side.iter() {
                u += b[ri] as u32 * tp;
                tp = tp * t % qj;
            }
            idx += (u % qj) as usize * plan.rweight[s];
        }
        *out = r[idx];
    }
    interpolate_raw(plan.p, plan.n, plan.q, data);
}

fn absorb(plan: &Plan, acc: &mut Acc, data: &[u8], tuple: usize) {
    let p = plan.p as usize;
    for k in 0..plan.px {
        let c = &data[k * plan.q..(k + 1) * plan.q];
        if c.iter().all(|&x| x == 0) {
            continue;
        }
        let mut exps = vec![0u8; plan.n];
        let mut rem = k;
        for e in exps.iter_mut().rev() {
            *e = (rem % p) as u8;
            rem /= p;
        }
        let deg: usize = exps.iter().map(|&e| e as usize).sum();
        if acc.spaces[deg].insert(c) {
            acc.found.push((deg, exps, c.to_vec(), tuple));
        }
    }
}

fn run(modulus: &SquarefreeModulus, i: usize, r: &[u8], sides: &[Vec<Subspace>], params: &ProbeParams) -> Result<ProbeOutcome> {
    let plan = plan(modulus, i, params.n);
    let elements: Vec<Vec<Vec<Vec<u8>>>> = sides
        .iter()
        .map(|side| side.iter().map(|s| s.elements()).collect())
        .collect();
    // Flattened list of (side, l) choice sets.
    let slots: Vec<(usize, usize)> = sides.iter().enumerate().flat_map(|(s, side)| (0..side.len()).map(move |l| (s, l))).collect();
    let radices: Vec<usize> = slots.iter().map(|&(s, l)| elements[s][l].len()).collect();
    let total = space_size(sides);
    let sampled = total > guard::limit(params.guard);
    let count = if sampled { params.samples as u64 } else { total };
    let decode = |mut t: u64, rng: Option<&mut ChaCha8Rng>| -> Vec<usize> {
        match rng {
            Some(rng) => radices.iter().map(|&k| rng.gen_range(0..k)).collect(),
            None => {
                let mut out = vec![0usize; radices.len()];
                for (o, &k) in out.iter_mut().zip(&radices).rev() {
                    *o = (t % k as u64) as usize;
                    t /= k as u64;
                }
                out
            }
        }
    };
    let picks_of = |ix: &[usize]| -> Vec<Vec<&[u8]>> {
        let mut out: Vec<Vec<&[u8]>> = sides.iter().map(|_| Vec::new()).collect();
        for (&(s, l), &e) in slots.iter().zip(ix) {
            out[s].push(elements[s][l][e].as_slice());
        }
        out
    };
    let tuples: Vec<Vec<usize>> = if sampled {
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        (0..count).map(|t| decode(t, Some(&mut rng))).collect()
    } else {
        Vec::new()
    };
    let chunk = 4096u64;
    let chunks = count.div_ceil(chunk);
    let mut global = Acc::new(&plan);
    let mut entries = Vec::new();
    // Batches of chunks keep the early exit effective.
    let batch = (rayon::current_num_threads() as u64 * 4).max(1);
    let mut start = 0u64;
    while start < chunks && !global.full() {
        let end = (start + batch).min(chunks);
        let locals: Vec<(Acc, Vec<Vec<usize>>)> = (start..end)
            .into_par_iter()
            .map(|c| {
                let mut acc = Acc::new(&plan);
                let mut seen: Vec<Vec<usize>> = Vec::new();
                let mut data = vec![0u8; plan.px * plan.q];
                for t in c * chunk..((c + 1) * chunk).min(count) {
                    let ix = if sampled { tuples[t as usize].clone() } else { decode(t, None) };
                    let picks = picks_of(&ix);
                    let refs: Vec<&[&[u8]]> = picks.iter().map(|v| v.as_slice()).collect();
                    evaluate_tuple(&plan, r, &refs, &mut data);
                    let before = acc.found.len();
                    absorb(&plan, &mut acc, &data, seen.len());
                    if acc.found.len() > before {
                        seen.push(ix);
                    }
                    if acc.full() {
                        break;
                    }
                }
                (acc, seen)
            })
            .collect();
        for (acc, seen) in locals {
            for (deg, exps, c, t) in acc.found {
                if global.spaces[deg].insert(&c) {
                    let picks = picks_of(&seen[t]);
                    let witness = Arc::new(picks.iter().map(|v| v.iter().map(|x| x.to_vec()).collect()).collect());
                    entries.push(ProbeEntry { degree: deg, exps, coeff: c, witness });
                }
            }
        }
        start = end;
    }
    if entries.len() > 1 << 16 {
        return Err(Error::GuardExceeded("probe entries".into()));
    }
    Ok(ProbeOutcome { entries, sampled })
}

/// Coefficient table `[Z_p^n][t]` of `r(u(z, t))` for one probe tuple.
pub(crate) fn coefficients(modulus: &SquarefreeModulus, i: usize, r: &[u8], n: usize, witness: &[Vec<Vec<u8>>]) -> Vec<u8> {
    let plan = plan(modulus, i, n);
    let picks: Vec<Vec<&[u8]>> = witness.iter().map(|side| side.iter().map(|v| v.as_slice()).collect()).collect();
    let refs: Vec<&[&[u8]]> = picks.iter().map(|v| v.as_slice()).collect();
    let mut data = vec![0u8; plan.px * plan.q];
    evaluate_tuple(&plan, r, &refs, &mut data);
    data
}
