use clonecalc::bounds::*;
use clonecalc::SquarefreeModulus;
use num_bigint::BigUint;
use proptest::prelude::*;

/// Counts `k`-dimensional subspaces of `Z_q^n` by brute force over spanning sets.
fn subspace_count(n: u32, k: u32, q: u32) -> u64 {
    use std::collections::BTreeSet;
    let size = q.pow(n);
    let vec_of = |x: u32| -> Vec<u32> { (0..n).map(|c| x / q.pow(c) % q).collect() };
    let mut spaces: BTreeSet<Vec<u32>> = BTreeSet::new();
    let combos = (size as u64).pow(k);
    for t in 0..combos {
        let gens: Vec<Vec<u32>> = (0..k).map(|j| vec_of(((t / (size as u64).pow(j)) % size as u64) as u32)).collect();
        let mut span: BTreeSet<u32> = BTreeSet::new();
        for coef in 0..q.pow(k) {
            let mut v = vec![0u32; n as usize];
            for (j, g) in gens.iter().enumerate() {
                let a = coef / q.pow(j as u32) % q;
                for c in 0..n as usize {
                    v[c] = (v[c] + a * g[c]) % q;
                }
            }
            span.insert(v.iter().enumerate().map(|(c, &x)| x * q.pow(c as u32)).sum());
        }
        if span.len() as u32 == q.pow(k) {
            spaces.insert(span.into_iter().collect());
        }
    }
    spaces.len() as u64
}

#[test]
fn gaussian_binomials_match_subspace_counts() {
    for (n, k, q) in [(1, 1, 2), (3, 1, 2), (2, 1, 3), (3, 2, 2), (4, 2, 2), (2, 1, 5), (3, 2, 3)] {
        assert_eq!(gaussian_binomial(n, k, q).unwrap(), BigUint::from(subspace_count(n as u32, k as u32, q as u32)), "({n},{k},{q})");
    }
    assert!(gaussian_binomial(1, 2, 2).is_err());
}

#[test]
fn clonoid_count_examples() {
    assert_eq!(clonoid_count_upper(2, 3).unwrap(), BigUint::from(15u32));
    assert_eq!(clonoid_count_upper(3, 2).unwrap(), BigUint::from(5u32));
    assert_eq!(clonoid_count_upper(2, 1).unwrap(), BigUint::from(1u32));
}

#[test]
fn factorization_examples() {
    let f = factor_over_zp(&x_pow_minus_one(2, 2), 2).unwrap();
    assert_eq!(f.factors, vec![(vec![1, 1], 2)]);
    let f = factor_over_zp(&x_pow_minus_one(1, 3), 3).unwrap();
    assert_eq!(f.factors, vec![(vec![2, 1], 1)]);
    let f = factor_over_zp(&x_pow_minus_one(4, 3), 3).unwrap();
    assert_eq!(f.factors, vec![(vec![1, 1], 1), (vec![2, 1], 1), (vec![1, 0, 1], 1)]);
    assert!(factor_over_zp(&x_pow_minus_one(17, 2), 2).is_err());
    assert!(factor_over_zp(&[0, 0], 3).is_err());
}

#[test]
fn clone_bounds_for_z6() {
    let md = SquarefreeModulus::new(6).unwrap();
    let r = clone_count_bounds(&md, Some(&[6, 4])).unwrap();
    assert_eq!(r.lower, BigUint::from(9u32));
    assert!(r.flags.is_empty());
    let r = clone_count_bounds(&md, None).unwrap();
    assert_eq!(r.counts.formula, vec![BigUint::from(15u32), BigUint::from(5u32)]);
    assert_eq!(r.upper, BigUint::from(2_109_375u64));
    assert!(r.flags.contains(&FLAG_FORMULA_COUNTS.to_string()));
    let single = clone_count_bounds(&SquarefreeModulus::new(5).unwrap(), Some(&[1])).unwrap();
    assert!(single.flags.contains(&FLAG_SINGLE_PRIME.to_string()));
}

#[test]
fn pq_bounds_for_2_3() {
    let r = pq_bounds(2, 3).unwrap();
    assert_eq!(r.lower, BigUint::from(9u32));
    assert_eq!(r.upper, BigUint::from(55_296u32));
    assert_eq!(r.chain_value, Some(BigUint::from(2_048u32)));
    assert!(r.flags.contains(&FLAG_CHAIN.to_string()));
    let z6 = clone_count_bounds(&SquarefreeModulus::new(6).unwrap(), Some(&[6, 4])).unwrap();
    assert_eq!(r.lower, z6.lower);
    let r35 = pq_bounds(3, 5).unwrap();
    assert!(r35.lower <= r35.upper);
    assert!(pq_bounds(3, 3).is_err());
}

#[test]
fn report_json_round_trip() {
    let r = pq_bounds(2, 3).unwrap();
    let s = serde_json::to_string(&r).unwrap();
    let v: serde_json::Value = serde_json::from_str(&s).unwrap();
    for key in ["modulus", "counts", "lower", "upper", "chain_value", "flags"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["counts"]["formula"], serde_json::json!([6, 4]));
    let back: BoundsReport = serde_json::from_str(&s).unwrap();
    assert_eq!(back, r);
    let big = clone_count_bounds(&SquarefreeModulus::new(30).unwrap(), None).unwrap();
    let back: BoundsReport = serde_json::from_str(&serde_json::to_string(&big).unwrap()).unwrap();
    assert_eq!(back, big);
}

proptest! {
    #[test]
    fn gaussian_symmetry(n in 1u64..9, k in 0u64..9, q in prop::sample::select(vec![2u64, 3, 5, 7])) {
        prop_assume!(k <= n);
        prop_assert_eq!(gaussian_binomial(n, k, q).unwrap(), gaussian_binomial(n, n - k, q).unwrap());
    }

    #[test]
    fn factorization_multiplies_back(p in prop::sample::select(vec![2u32, 3, 5]), coeffs in prop::collection::vec(0u32..5, 1..9)) {
        let f: Vec<u32> = coeffs.iter().map(|&c| c % p).collect();
        prop_assume!(f.iter().any(|&c| c != 0));
        let fac = factor_over_zp(&f, p).unwrap();
        prop_assert_eq!(fac.product(), fac.input.clone());
        for (g, _) in &fac.factors {
            // No monic factor of an irreducible has degree in 1..deg.
            let d = g.len() - 1;
            prop_assert_eq!(factor_over_zp(g, p).unwrap().factors, vec![(g.clone(), 1)], "degree {}", d);
        }
    }
}
