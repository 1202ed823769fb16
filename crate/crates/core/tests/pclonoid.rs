mod common;

use clonecalc::pclonoid::*;
use clonecalc::poly::{CoeffFn, CoeffRingSig, Monomial, RPoly};
use common::{naive_eval, random_coeff, random_poly, Stream};

fn sig(p: u32, q: u32) -> CoeffRingSig {
    CoeffRingSig::new(p, vec![q], 1)
}

fn term(c: &CoeffFn, e: &[u8]) -> RPoly {
    RPoly::monomial(c, Monomial::new(e.to_vec()))
}

#[test]
fn isolate_removes_missing_variable_terms() {
    let s = sig(2, 3);
    let r = CoeffFn::new(s.clone(), vec![1, 0, 1]).unwrap();
    let f = term(&r, &[1, 1]).add(&term(&r, &[1])).unwrap();
    let (h, cert) = isolate_full_support(&f, 2).unwrap();
    assert_eq!(naive_eval(&h, 2), naive_eval(&term(&r, &[1, 1]), 2));
    assert_eq!(cert.replay().unwrap(), h);
    assert_eq!(cert.nodes().iter().filter(|n| n.tag() == "linear-combination").count(), 1);
}

#[test]
fn isolate_removes_constant() {
    let s = sig(3, 2);
    let r = CoeffFn::new(s.clone(), vec![1, 2]).unwrap();
    let r2 = CoeffFn::new(s.clone(), vec![2, 2]).unwrap();
    let f = term(&r, &[1, 1]).add(&RPoly::constant(&r2)).unwrap();
    let (h, cert) = isolate_full_support(&f, 2).unwrap();
    assert_eq!(h, term(&r, &[1, 1]));
    cert.verify(&h).unwrap();
}

#[test]
fn isolate_rejects_high_remainder() {
    let s = sig(3, 2);
    let r = CoeffFn::constant(s.clone(), 1);
    let f = term(&r, &[1, 1]).add(&term(&r, &[2, 1])).unwrap();
    assert!(isolate_full_support(&f, 2).is_err());
}

#[test]
fn extract_square_over_z3() {
    let s = sig(3, 2);
    let r = CoeffFn::new(s.clone(), vec![2, 1]).unwrap();
    let f = term(&r, &[2]);
    let (h, cert) = extract_max_degree_monomial(&f, &Monomial::new(vec![2])).unwrap();
    assert_eq!(naive_eval(&h, 2), naive_eval(&term(&r, &[1, 1]), 2));
    cert.verify(&h).unwrap();
}

#[test]
fn extract_cube_over_z5() {
    let s = CoeffRingSig::new(5, vec![2], 1);
    let r = CoeffFn::new(s.clone(), vec![3, 1]).unwrap();
    let (h, cert) = extract_max_degree_monomial(&term(&r, &[3]), &Monomial::new(vec![3])).unwrap();
    assert_eq!(h, term(&r, &[1, 1, 1]));
    cert.verify(&h).unwrap();
    let subs = cert.nodes().iter().filter(|n| n.tag() == "matrix-substitution").count();
    assert_eq!(subs, 2);
}

#[test]
fn degree_shift_examples() {
    let s = sig(2, 3);
    let r = CoeffFn::new(s.clone(), vec![0, 1, 1]).unwrap();
    let c = degree_shift(&r, 2, &Monomial::new(vec![1, 1, 1])).unwrap();
    assert_eq!(naive_eval(c.claim(), 3), naive_eval(&term(&r, &[1, 1, 1]), 3));
    assert_eq!(c.nodes().iter().filter(|n| n.tag() == "self-composition").count(), 1);
    c.replay().unwrap();
    let s3 = sig(3, 2);
    let r3 = CoeffFn::new(s3.clone(), vec![1, 2]).unwrap();
    let c = degree_shift(&r3, 2, &Monomial::new(vec![2])).unwrap();
    assert_eq!(c.claim(), &term(&r3, &[2]));
    assert!(degree_shift(&r3, 2, &Monomial::new(vec![1])).is_err());
    let same = degree_shift(&r3, 2, &Monomial::new(vec![1, 1])).unwrap();
    assert_eq!(same.size(), 1);
}

#[test]
fn monomials_of_examples() {
    let s = sig(2, 3);
    let r = CoeffFn::new(s.clone(), vec![1, 1, 0]).unwrap();
    let r2 = CoeffFn::new(s.clone(), vec![0, 1, 0]).unwrap();
    let f = term(&r, &[1, 1]).add(&term(&r2, &[1])).unwrap();
    let parts = monomials_of(&f).unwrap();
    assert_eq!(parts.len(), 2);
    for (h, c) in &parts {
        c.verify(h).unwrap();
        assert_eq!(pclonoid_member_oracle(h, &[f.clone()], 3, 10_000), Verdict::Yes);
    }
}

#[test]
fn oracle_examples() {
    let s = sig(2, 3);
    let r = CoeffFn::new(s.clone(), vec![1, 0, 0]).unwrap();
    let f = term(&r, &[1, 1]).add(&term(&r, &[1])).unwrap();
    assert_eq!(pclonoid_member_oracle(&term(&r, &[1, 1]), &[f.clone()], 2, 10_000), Verdict::Yes);
    let zero = RPoly::zero(s.clone());
    let x = RPoly::var(s.clone(), 0);
    assert_eq!(pclonoid_member_oracle(&x, &[zero], 2, 10_000), Verdict::No);
    assert_eq!(pclonoid_member_oracle(&f, &[f.clone()], 2, 10_000), Verdict::Yes);
}

#[test]
fn random_certificates_replay_and_are_confirmed() {
    let mut rng = Stream::new(7);
    for p in [2u32, 3] {
        let q = if p == 2 { 3 } else { 2 };
        let s = sig(p, q);
        for _ in 0..40 {
            let f = random_poly(&mut rng, &s, 3, 4);
            if f.is_zero() {
                continue;
            }
            for (h, c) in monomials_of(&f).unwrap() {
                assert_eq!(c.replay().unwrap(), h);
                assert_eq!(pclonoid_member_oracle(&h, &[f.clone()], 3, 100_000), Verdict::Yes);
            }
            let r = random_coeff(&mut rng, &s);
            let d = 2 + rng.below(p as u64 - 1 + 1) as usize;
            let e: Vec<u8> = (0..3).map(|_| rng.below(p as u64) as u8).collect();
            let m = Monomial::new(e);
            if m.degree() > 0 && (p == 2 || m.degree() % 2 == d % 2) {
                let c = degree_shift(&r, d, &m).unwrap();
                assert_eq!(naive_eval(&c.replay().unwrap(), 3), naive_eval(&term(&r, m.exps()), 3));
            }
        }
    }
}
