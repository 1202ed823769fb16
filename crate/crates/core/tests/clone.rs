mod common;

use clonecalc::clone::from_generators;
use clonecalc::{FnTable, SquarefreeModulus};
use common::{clone_ball, Op};

fn table(md: &SquarefreeModulus, op: &Op) -> FnTable {
    let s = md.s();
    FnTable::from_fn_zs(md.clone(), op.arity, |x| op.eval(s, x)).unwrap()
}

fn table_of(md: &SquarefreeModulus, n: usize, values: &[u32]) -> FnTable {
    table(md, &Op { arity: n, table: values.to_vec() })
}

fn check_ball(s: u64, gens: &[Op], n: usize, depth: usize) {
    let md = SquarefreeModulus::new(s).unwrap();
    let tables: Vec<FnTable> = gens.iter().map(|g| table(&md, g)).collect();
    let rep = from_generators(&md, &tables, 2).unwrap();
    let ball = clone_ball(md.s(), n, gens, depth, 20_000).expect("ball within limit");
    for f in &ball {
        let t = table_of(&md, n, f);
        let (yes, cert) = rep.member(&t).unwrap();
        assert!(yes, "ball member {f:?} rejected");
        cert.unwrap().verify(&t).unwrap();
    }
}

#[test]
fn multiplication_on_z6() {
    check_ball(6, &[Op::from_fn(6, 2, |x| x[0] * x[1])], 1, 3);
}

#[test]
fn square_on_z6() {
    check_ball(6, &[Op::from_fn(6, 1, |x| x[0] * x[0])], 1, 3);
}

#[test]
fn constant_on_z6() {
    check_ball(6, &[Op::from_fn(6, 0, |_| 1)], 1, 3);
}

#[test]
fn linear_clone_rejects_square() {
    let md = SquarefreeModulus::new(6).unwrap();
    let rep = from_generators(&md, &[], 2).unwrap();
    let sq = table(&md, &Op::from_fn(6, 1, |x| x[0] * x[0]));
    assert!(!rep.member(&sq).unwrap().0);
    let lin = table(&md, &Op::from_fn(6, 2, |x| 5 * x[0] + 2 * x[1]));
    let (yes, cert) = rep.member(&lin).unwrap();
    assert!(yes);
    cert.unwrap().verify(&lin).unwrap();
}

/// The unary part of the clone is the fixed point of the unary ball, so
/// membership must agree with it on every unary function.
fn check_unary_exact(s: u64, gens: &[Op]) {
    let md = SquarefreeModulus::new(s).unwrap();
    let tables: Vec<FnTable> = gens.iter().map(|g| table(&md, g)).collect();
    let rep = from_generators(&md, &tables, 2).unwrap();
    let mut depth = 1;
    let mut prev = 0;
    let ball = loop {
        let b = clone_ball(md.s(), 1, gens, depth, 50_000).expect("unary ball within limit");
        if b.len() == prev {
            break b;
        }
        prev = b.len();
        depth += 1;
    };
    let size = (s as usize).pow(s as u32);
    let mut queries: Vec<Vec<u32>> = ball.iter().cloned().collect();
    if size <= 1 << 16 {
        queries.extend((0..size).map(|idx| common::digits(s as u32, s as usize, idx)));
    } else {
        let mut rng = common::Stream::new(s);
        queries.extend((0..20_000).map(|_| common::digits(s as u32, s as usize, rng.below(size as u64) as usize)));
    }
    for values in queries {
        let t = table_of(&md, 1, &values);
        assert_eq!(rep.contains(&t).unwrap(), ball.contains(&values), "unary {values:?}");
    }
}

#[test]
fn unary_part_of_square_clone_is_exact() {
    check_unary_exact(6, &[Op::from_fn(6, 1, |x| x[0] * x[0])]);
}

#[test]
fn unary_part_of_cube_clone_is_exact() {
    check_unary_exact(6, &[Op::from_fn(6, 1, |x| x[0] * x[0] * x[0])]);
}

#[test]
fn unary_part_of_mixed_clone_is_exact() {
    check_unary_exact(6, &[Op::from_fn(6, 1, |x| 3 * x[0] * x[0] + 2 * (x[0] % 2))]);
}

#[test]
fn binary_ball_on_z6() {
    check_ball(6, &[Op::from_fn(6, 1, |x| 3 * x[0] * x[0])], 2, 2);
    check_ball(6, &[Op::from_fn(6, 2, |x| 2 * x[0] * x[1])], 2, 2);
}

#[test]
fn unary_parts_on_z10_and_z15() {
    check_unary_exact(10, &[Op::from_fn(10, 1, |x| 5 * x[0] * x[0])]);
    check_unary_exact(10, &[Op::from_fn(10, 1, |x| 6 * x[0] * x[0] * x[0])]);
    check_unary_exact(15, &[Op::from_fn(15, 1, |x| 10 * x[0] * x[0])]);
}

#[test]
fn random_unary_clones_match_additive_closure() {
    let mut rng = common::Stream::new(42);
    let mut checked = 0;
    for s in [6u64, 10] {
        let md = SquarefreeModulus::new(s).unwrap();
        for _ in 0..12 {
            let values: Vec<u32> = (0..s).map(|_| rng.below(s) as u32).collect();
            let g = Op { arity: 1, table: values };
            let Some(part) = common::unary_clone_part(s as u32, std::slice::from_ref(&g), 100_000) else { continue };
            let rep = from_generators(&md, &[table(&md, &g)], 2).unwrap();
            let mut queries: Vec<Vec<u32>> = part.iter().cloned().collect();
            queries.extend((0..2000).map(|_| (0..s).map(|_| rng.below(s) as u32).collect()));
            for q in queries {
                let t = table_of(&md, 1, &q);
                assert_eq!(rep.contains(&t).unwrap(), part.contains(&q), "generator {:?}, query {q:?}", g.table);
            }
            checked += 1;
        }
    }
    assert!(checked >= 12);
}

fn md6() -> SquarefreeModulus {
    SquarefreeModulus::new(6).unwrap()
}

fn ranks(rep: &clonecalc::clone::CloneRep) -> Vec<Vec<usize>> {
    rep.key().iter().map(|gs| gs.iter().map(|g| g.rank()).collect()).collect()
}

#[test]
fn linear_clone_grades() {
    let rep = from_generators(&md6(), &[], 2).unwrap();
    assert_eq!(ranks(&rep), vec![vec![0, 1, 0], vec![0, 1, 0, 0]]);
    assert!(rep.grade(0, 1).contains(&[1, 1, 1]));
    assert!(rep.grade(1, 1).contains(&[1, 1]));
}

#[test]
fn multiplication_reaches_grade_two() {
    let mul = table(&md6(), &Op::from_fn(6, 2, |x| x[0] * x[1]));
    let rep = from_generators(&md6(), &[mul], 2).unwrap();
    assert!(rep.grade(0, 2).contains(&[1, 1, 1]));
    assert!(rep.grade(1, 2).contains(&[1, 1]));
    let rho = rep.rho().unwrap();
    assert!(rho[0][2].unary().contains(&[1, 1, 1]));
    assert!(rho[1][2].unary().contains(&[1, 1]));
    let gens = rep.extract_generators().unwrap();
    for i in 0..2 {
        let sig = rep.unary_sig(i);
        let one = clonecalc::poly::CoeffFn::constant(sig, 1);
        let target = clonecalc::poly::RPoly::monomial(&one, clonecalc::poly::Monomial::multilinear(2)).induce(&md6(), i, 2).unwrap();
        assert!(gens.contains(&target), "component {i}");
    }
}

#[test]
fn gamma_examples() {
    use clonecalc::arith::e_embed;
    use clonecalc::clone::{gamma, CloneConfig};
    use clonecalc::clonoid::{ClonoidSig, LinClonoid};
    use clonecalc::linalg::Subspace;
    use clonecalc::poly::CoeffFn;

    let md = md6();
    let cfg = CloneConfig { cap: 2, ..CloneConfig::default() };
    let sig0 = ClonoidSig::new(2, vec![3]).unwrap();
    let sig1 = ClonoidSig::new(3, vec![2]).unwrap();
    let zero = LinClonoid::zero(&sig0, 2);
    let lin = from_generators(&md, &[], 2).unwrap();
    assert!(gamma(0, &zero, &md, &cfg).unwrap().equal(&lin).unwrap());

    let consts = LinClonoid::from_unary(&sig0, &Subspace::from_vectors(2, 3, [&[1u8, 1, 1][..]]), 2).unwrap();
    let g = gamma(0, &consts, &md, &cfg).unwrap();
    let one = e_embed(&md, 0, &CoeffFn::constant(sig0.coeff_sig(1), 1)).unwrap();
    let chi = e_embed(&md, 0, &CoeffFn::new(sig0.coeff_sig(1), vec![1, 0, 0]).unwrap()).unwrap();
    let (yes, cert) = g.member(&one).unwrap();
    assert!(yes);
    cert.unwrap().verify(&one).unwrap();
    assert!(!g.member(&chi).unwrap().0);
    assert_eq!(g.rho().unwrap()[0][0].unary(), consts.unary());

    let d = LinClonoid::full(&sig1, 2);
    let h = gamma(1, &d, &md, &cfg).unwrap();
    assert!(!g.leq(&h).unwrap());
    assert!(!h.leq(&g).unwrap());
    assert!(gamma(1, &consts, &md, &cfg).is_err());
}

fn random_op(rng: &mut common::Stream, s: u32) -> Op {
    let arity = if rng.below(4) == 0 { 2 } else { 1 };
    let size = (s as usize).pow(arity as u32);
    Op { arity, table: (0..size).map(|_| rng.below(s as u64) as u32).collect() }
}

#[test]
fn closure_laws_on_seeded_sets() {
    let md = md6();
    let mut rng = common::Stream::new(9);
    for _ in 0..200 {
        let count = 1 + rng.below(2) as usize;
        let gens: Vec<FnTable> = (0..count).map(|_| table(&md, &random_op(&mut rng, 6))).collect();
        let rep = from_generators(&md, &gens, 2).unwrap();
        for g in &gens {
            assert!(rep.contains(g).unwrap());
        }
        let extracted = rep.extract_generators().unwrap();
        assert!(extracted.iter().all(|f| f.arity() <= 3));
        assert!(from_generators(&md, &extracted, 3).unwrap().equal(&rep).unwrap());
        let mut more = gens.clone();
        more.push(table(&md, &random_op(&mut rng, 6)));
        assert!(rep.leq(&from_generators(&md, &more, 2).unwrap()).unwrap());
    }
}
