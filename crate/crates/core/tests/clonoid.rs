mod common;

use std::collections::BTreeSet;

use clonecalc::clonoid::{cig_closure, enumerate_clonoids, unary_generates, ClonoidSig, LinClonoid};
use clonecalc::poly::CoeffFn;
use common::{stagewise_closure, Stream};

const SIGS: [(u32, u32, usize); 2] = [(2, 3, 6), (3, 2, 4)];

fn all_tables(p: u32, len: usize) -> Vec<Vec<u8>> {
    let total = (p as usize).pow(len as u32);
    (0..total)
        .map(|mut code| {
            let mut v = vec![0u8; len];
            for x in v.iter_mut().rev() {
                *x = (code % p as usize) as u8;
                code /= p as usize;
            }
            v
        })
        .collect()
}

fn unary_substitutions(q: u32) -> Vec<Vec<usize>> {
    (0..q).map(|a| (0..q).map(|x| (a * x % q) as usize).collect()).collect()
}

fn binary_substitutions(q: u32) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for m in 0..q.pow(4) {
        let (a, b, c, d) = (m / q.pow(3), m / q.pow(2) % q, m / q % q, m % q);
        let map = (0..q * q)
            .map(|idx| {
                let (x, y) = (idx / q, idx % q);
                (((a * x + b * y) % q) * q + (c * x + d * y) % q) as usize
            })
            .collect();
        out.push(map);
    }
    out
}

/// Every closed set of unary functions, found by closing each subset.
fn oracle_unary_clonoids(p: u32, q: u32) -> BTreeSet<BTreeSet<Vec<u8>>> {
    let funcs = all_tables(p, q as usize);
    let subs = unary_substitutions(q);
    let mut out = BTreeSet::new();
    for mask in 0u32..(1 << funcs.len()) {
        let mut start: BTreeSet<Vec<u8>> = BTreeSet::from([vec![0u8; q as usize]]);
        start.extend(funcs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, f)| f.clone()));
        out.insert(stagewise_closure(p, &start, &subs));
    }
    out
}

fn random_gens(rng: &mut Stream, sig: &ClonoidSig, count: usize) -> Vec<CoeffFn> {
    (0..count)
        .map(|_| {
            let k = 1 + rng.below(2) as usize;
            let cs = sig.coeff_sig(k);
            let vals = (0..cs.domain_size()).map(|_| rng.below(sig.p as u64) as u8).collect();
            CoeffFn::new(cs, vals).unwrap()
        })
        .collect()
}

fn unary_set(c: &LinClonoid) -> BTreeSet<Vec<u8>> {
    c.unary_elements().into_iter().collect()
}

#[test]
fn counts_match_subset_closure() {
    for (p, q, n) in SIGS {
        let sig = ClonoidSig::new(p, vec![q]).unwrap();
        let elems = enumerate_clonoids(&sig, 2).unwrap();
        let oracle = oracle_unary_clonoids(p, q);
        assert_eq!(elems.len(), n);
        assert_eq!(oracle.len(), n);
        let got: BTreeSet<_> = elems.iter().map(unary_set).collect();
        assert_eq!(got, oracle);
    }
}

#[test]
fn binary_levels_match_stagewise_closure() {
    for (p, q, _) in SIGS {
        let sig = ClonoidSig::new(p, vec![q]).unwrap();
        let subs = binary_substitutions(q);
        for c in enumerate_clonoids(&sig, 2).unwrap() {
            let mut start = BTreeSet::new();
            for f in c.unary_elements() {
                for a in 0..q {
                    for b in 0..q {
                        start.insert((0..q * q).map(|idx| f[((a * (idx / q) + b * (idx % q)) % q) as usize]).collect());
                    }
                }
            }
            let level = stagewise_closure(p, &start, &subs);
            let l2 = c.level(2).unwrap();
            assert_eq!(level.len() as u64, (p as u64).pow(l2.rank() as u32));
            assert!(level.iter().all(|f| l2.contains(f)));
        }
    }
}

#[test]
fn lattice_axioms_hold() {
    for (p, q, _) in SIGS {
        let sig = ClonoidSig::new(p, vec![q]).unwrap();
        let elems = enumerate_clonoids(&sig, 2).unwrap();
        let sets: Vec<_> = elems.iter().map(unary_set).collect();
        let bottom = sets.iter().position(|s| s.len() == 1).unwrap();
        let top = sets.iter().position(|s| s.len() == (p as usize).pow(q)).unwrap();
        for (a, x) in elems.iter().enumerate() {
            assert!(x.leq(x).unwrap());
            assert!(elems[bottom].leq(x).unwrap());
            assert!(x.leq(&elems[top]).unwrap());
            for (b, y) in elems.iter().enumerate() {
                assert_eq!(x.leq(y).unwrap(), sets[a].is_subset(&sets[b]));
                if a != b {
                    assert!(!(x.leq(y).unwrap() && y.leq(x).unwrap()));
                }
                let lower: Vec<usize> = (0..sets.len()).filter(|&k| sets[k].is_subset(&sets[a]) && sets[k].is_subset(&sets[b])).collect();
                let glb = lower.iter().copied().find(|&k| lower.iter().all(|&j| sets[j].is_subset(&sets[k]))).unwrap();
                assert_eq!(unary_set(&x.meet(y).unwrap()), sets[glb]);
                let upper: Vec<usize> = (0..sets.len()).filter(|&k| sets[a].is_subset(&sets[k]) && sets[b].is_subset(&sets[k])).collect();
                let lub = upper.iter().copied().find(|&k| upper.iter().all(|&j| sets[k].is_subset(&sets[j]))).unwrap();
                assert_eq!(unary_set(&x.join(y).unwrap()), sets[lub]);
                for z in &elems {
                    if x.leq(y).unwrap() && y.leq(z).unwrap() {
                        assert!(x.leq(z).unwrap());
                    }
                }
            }
        }
    }
}

#[test]
fn closure_laws_on_seeded_sets() {
    for (p, q, _) in SIGS {
        let sig = ClonoidSig::new(p, vec![q]).unwrap();
        let mut rng = Stream::new(p as u64 * 101);
        for _ in 0..200 {
            let count = 1 + rng.below(3) as usize;
            let gens = random_gens(&mut rng, &sig, count);
            let c = cig_closure(&sig, &gens, 2).unwrap();
            assert!(gens.iter().all(|g| c.member(g).unwrap()));
            let again = cig_closure(&sig, &c.generators(), 2).unwrap();
            assert_eq!(again.levels(), c.levels());
            let mut more = gens.clone();
            more.extend(random_gens(&mut rng, &sig, 1));
            let d = cig_closure(&sig, &more, 2).unwrap();
            assert!(c.leq(&d).unwrap());
        }
    }
}

#[test]
fn unary_parts_generate_every_clonoid() {
    for (p, q, _) in SIGS {
        let sig = ClonoidSig::new(p, vec![q]).unwrap();
        for c in enumerate_clonoids(&sig, 2).unwrap() {
            assert!(unary_generates(&c, 2).unwrap());
            assert_eq!(LinClonoid::from_unary(&sig, c.unary(), 2).unwrap(), c);
        }
    }
}

#[test]
fn mismatched_signatures_are_rejected() {
    let sig = ClonoidSig::new(2, vec![3]).unwrap();
    let other = ClonoidSig::new(3, vec![2]).unwrap();
    let f = CoeffFn::zero(other.coeff_sig(1));
    assert!(cig_closure(&sig, &[f], 2).is_err());
    assert!(cig_closure(&sig, &[], 2).is_err());
    assert!(ClonoidSig::new(4, vec![3]).is_err());
}
