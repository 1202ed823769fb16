mod common;

use clonecalc::arith::{FnTable, SquarefreeModulus};
use clonecalc::clone::from_generators;
use clonecalc::clonoid::{enumerate_clonoids, ClonoidSig};
use clonecalc::json::*;
use clonecalc::pclonoid::{degree_shift, isolate_full_support, monomials_of};
use clonecalc::poly::{CoeffRingSig, Monomial};
use clonecalc::Error;
use common::{random_coeff, random_poly, Stream};
use serde_json::json;

fn md6() -> SquarefreeModulus {
    SquarefreeModulus::new(6).unwrap()
}

fn mul6() -> FnTable {
    FnTable::from_fn_zs(md6(), 2, |x| x[0] * x[1]).unwrap()
}

#[test]
fn table_round_trip() {
    let f = mul6();
    let v = table_to_value(&f);
    assert_eq!(v["modulus"], json!([2, 3]));
    assert_eq!(v["values"].as_array().unwrap().len(), 36);
    assert_eq!(table_from_value(&v, "$").unwrap(), f);
    let text = to_string(&v);
    assert_eq!(table_from_value(&parse(&text, "f").unwrap(), "$").unwrap(), f);
}

#[test]
fn zs_encoding_matches_residues() {
    let md = md6();
    let values: Vec<u32> = (0..6)
        .map(|k: u32| {
            let z = (3 * (k / 3) + 4 * (k % 3)) % 6;
            z * z % 6
        })
        .collect();
    let v = json!({ "modulus": [2, 3], "arity": 1, "encoding": "zs", "values": values });
    let f = table_from_value(&v, "$").unwrap();
    assert_eq!(f, FnTable::from_fn_zs(md, 1, |x| x[0] * x[0]).unwrap());
}

#[test]
fn malformed_tables_report_location() {
    let short = json!({ "modulus": [2, 3], "arity": 1, "values": [[0, 0]] });
    match table_from_value(&short, "$") {
        Err(Error::MalformedTable(m)) => assert!(m.contains("$.values"), "{m}"),
        other => panic!("{other:?}"),
    }
    let mut vals = vec![json!([0, 0]); 6];
    vals[4] = json!([0, 3]);
    let range = json!({ "modulus": [2, 3], "arity": 1, "values": vals });
    match table_from_value(&range, "$") {
        Err(Error::MalformedTable(m)) => assert!(m.contains("$.values[4][1]"), "{m}"),
        other => panic!("{other:?}"),
    }
    let zs = json!({ "modulus": 6, "arity": 1, "encoding": "zs", "values": [0, 1, 2, 3, 4, 6] });
    assert!(matches!(table_from_value(&zs, "$"), Err(Error::MalformedTable(_))));
    let sq = json!({ "modulus": 4, "arity": 1, "values": [] });
    assert!(matches!(table_from_value(&sq, "$"), Err(Error::NotSquarefree(4))));
}

#[test]
fn generator_files() {
    assert!(tables_from_value(&json!([]), "$").unwrap().is_empty());
    let one = table_to_value(&mul6());
    assert_eq!(tables_from_value(&one, "$").unwrap().len(), 1);
    assert_eq!(tables_from_value(&json!({ "generators": [one.clone(), one] }), "$").unwrap().len(), 2);
}

#[test]
fn rpoly_and_certificate_round_trip() {
    let mut rng = Stream::new(7);
    for p in [2u32, 3] {
        let sig = CoeffRingSig::new(p, vec![5 - p], 1);
        for _ in 0..20 {
            let f = random_poly(&mut rng, &sig, 3, 4);
            let v = rpoly_to_value(&f);
            assert_eq!(rpoly_from_value(&v, "$").unwrap(), f);
            if let Ok((_, cert)) = isolate_full_support(&f, 3) {
                let cv = certificate_to_value(&cert);
                let back = certificate_from_value(&cv, "$").unwrap();
                assert_eq!(back.claim(), cert.claim());
                assert_eq!(certificate_to_value(&back), cv);
            }
            if !f.is_zero() {
                for (_, cert) in monomials_of(&f).unwrap() {
                    let cv = certificate_to_value(&cert);
                    assert_eq!(certificate_to_value(&certificate_from_value(&cv, "$").unwrap()), cv);
                }
            }
        }
        let r = random_coeff(&mut rng, &sig);
        let target = if p == 2 { vec![1, 1, 1] } else { vec![2, 2] };
        let cert = degree_shift(&r, 2, &Monomial::new(target)).unwrap();
        let cv = certificate_to_value(&cert);
        assert_eq!(certificate_to_value(&certificate_from_value(&cv, "$").unwrap()), cv);
    }
}

#[test]
fn tampered_claim_is_rejected() {
    let sig = CoeffRingSig::new(2, vec![3], 1);
    let mut rng = Stream::new(3);
    let r = random_coeff(&mut rng, &sig);
    let cert = degree_shift(&r, 2, &Monomial::new(vec![1, 1, 1])).unwrap();
    let mut cv = certificate_to_value(&cert);
    let last = cv["nodes"].as_array().unwrap().len() - 1;
    cv["nodes"][last]["claim"]["terms"] = json!([]);
    assert!(matches!(certificate_from_value(&cv, "$"), Err(Error::Replay(_))));
}

#[test]
fn clone_rep_and_certificate_round_trip() {
    let md = md6();
    let rep = from_generators(&md, &[mul6()], 2).unwrap();
    let v = clone_rep_to_value(&rep);
    let back = clone_rep_from_value(&v, "$").unwrap();
    assert!(back.equal(&rep).unwrap());
    assert_eq!(clone_rep_to_value(&back), v);
    assert_eq!(to_string(&clone_rep_to_value(&back)), to_string(&v));

    let (yes, cert) = back.member(&mul6()).unwrap();
    assert!(yes);
    let cert = cert.unwrap();
    cert.verify(&mul6()).unwrap();
    let cv = clone_certificate_to_value(&cert);
    let again = clone_certificate_from_value(&cv, "$").unwrap();
    again.verify(&mul6()).unwrap();
    assert_eq!(clone_certificate_to_value(&again), cv);
}

#[test]
fn clonoid_lattice_round_trip() {
    for (p, q, count) in [(2u32, 3u32, 6usize), (3, 2, 4)] {
        let sig = ClonoidSig::new(p, vec![q]).unwrap();
        let elems = enumerate_clonoids(&sig, 2).unwrap();
        let v = clonoid_lattice_to_value(&sig, 2, &elems).unwrap();
        assert_eq!(v["count"], json!(count));
        let back = clonoid_lattice_from_value(&v, "$").unwrap();
        assert_eq!(back.elements, elems);
        assert_eq!(clonoid_lattice_to_value(&back.sig, back.cap, &back.elements).unwrap(), v);
    }
}

#[test]
fn clone_lattice_round_trip() {
    let md = md6();
    let a = from_generators(&md, &[], 2).unwrap();
    let b = from_generators(&md, &[mul6()], 2).unwrap();
    let v = clone_lattice_to_value(&md, &[a, b], true).unwrap();
    assert_eq!(v["hasse"], json!([[0, 1]]));
    let back = clone_lattice_from_value(&v, "$").unwrap();
    assert_eq!(clone_lattice_to_value(&md, &back, true).unwrap(), v);
}
