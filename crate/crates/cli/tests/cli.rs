use std::path::PathBuf;

use clonecalc::json;
use clonecalc_cli::{run, Outcome, EXIT_FLAGS, EXIT_INPUT, EXIT_OK};
use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn cli(args: &[&str]) -> Outcome {
    run(std::iter::once("clonecalc").chain(args.iter().copied()))
}

fn value(out: &Outcome) -> Value {
    serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", out.stdout))
}

#[test]
fn bounds_modulus_6() {
    let out = cli(&["bounds", "--modulus", "6"]);
    assert_eq!(out.code, EXIT_FLAGS);
    let v = value(&out);
    assert_eq!(v["lower"], 9);
    assert_eq!(v["upper"], 2_109_375);
    assert_eq!(v["chain_value"], 2048);
    assert_eq!(v["flags"][0], "middle_exceeds_chain_value");
}

#[test]
fn bounds_rejects_non_squarefree() {
    let out = cli(&["bounds", "--modulus", "4"]);
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.stderr.contains("modulus not squarefree"), "{}", out.stderr);
    assert!(out.stdout.is_empty());
}

#[test]
fn bounds_pq_2_3() {
    let out = cli(&["bounds", "--pq", "2", "3"]);
    assert_eq!(out.code, EXIT_FLAGS);
    let v = value(&out);
    assert_eq!(v["lower"], 9);
    assert_eq!(v["upper"], 55_296);
}

#[test]
fn bounds_without_flags_exit_zero() {
    let out = cli(&["bounds", "--modulus", "7"]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(value(&out)["flags"][0], "single_prime");
}

#[test]
fn clonoid_lattices() {
    for (p, q, n) in [("2", "3", 6), ("3", "2", 4)] {
        let out = cli(&["clonoids", "--p", p, "--others", q]);
        assert_eq!(out.code, EXIT_OK);
        let v = value(&out);
        assert_eq!(v["count"], n);
        let back = json::clonoid_lattice_from_value(&v, "$").unwrap();
        assert_eq!(back.elements.len(), n);
    }
    let dot = cli(&["clonoids", "--p", "2", "--others", "3", "--format", "dot"]).stdout;
    assert!(dot.starts_with("digraph"));
    assert!(dot.trim_end().ends_with('}'));
    assert_eq!(dot.lines().filter(|l| l.contains("[label=")).count(), 6);
    assert_eq!(dot.lines().filter(|l| l.contains("->")).count(), 7);
}

#[test]
fn member_in_linear_clone_is_no() {
    let out = cli(&["clone", "member", "--gens", &data("empty.json"), "--query", &data("mul6.json")]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let v = value(&out);
    assert_eq!(v["member"], "no");
    assert!(v["certificate"].is_null());
}

#[test]
fn member_certificate_replays() {
    let out = cli(&["clone", "member", "--gens", &data("mul6gens.json"), "--query", &data("mul6.json")]);
    let v = value(&out);
    assert_eq!(v["member"], "yes");
    let cert = json::clone_certificate_from_value(&v["certificate"], "$").unwrap();
    let q = json::table_from_value(&v["query"], "$").unwrap();
    cert.verify(&q).unwrap();
}

#[test]
fn zs_query_is_accepted() {
    let out = cli(&["clone", "member", "--gens", &data("mul6gens.json"), "--query", &data("square6_zs.json")]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert_eq!(value(&out)["member"], "yes");
}

#[test]
fn generators_have_arity_at_most_3() {
    let out = cli(&["clone", "generators", "--gens", &data("mul6gens.json")]);
    let v = value(&out);
    assert!(v["max_arity"].as_u64().unwrap() <= 3);
    assert!(v["count"].as_u64().unwrap() > 0);
}

#[test]
fn closure_round_trips_and_is_deterministic() {
    let args = ["clone", "closure", "--gens", &data("mul6gens.json")];
    let a = cli(&args);
    let b = cli(&args);
    assert_eq!(a.stdout, b.stdout);
    let v = value(&a);
    let rep = json::clone_rep_from_value(&v["clone"], "$").unwrap();
    assert_eq!(json::clone_rep_to_value(&rep), v["clone"]);
}

#[test]
fn empty_generators_need_a_modulus() {
    let out = cli(&["clone", "closure", "--gens", &data("empty.json")]);
    assert_eq!(out.code, EXIT_INPUT);
    let out = cli(&["clone", "closure", "--gens", &data("empty.json"), "--modulus", "6"]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(value(&out)["ranks"], serde_json::json!([[0, 1, 0], [0, 1, 0, 0]]));
}

#[test]
fn malformed_table_reports_location() {
    let dir = std::env::temp_dir().join(format!("clonecalc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(&path, r#"[{"modulus":[2,3],"arity":1,"values":[[0,0],[0,0],[0,0],[0,0],[0,0],[2,0]]}]"#).unwrap();
    let out = cli(&["clone", "closure", "--gens", path.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.stderr.contains("[0].values[5][0]"), "{}", out.stderr);
    std::fs::write(&path, r#"{"modulus":[2,3],"arity":1,"values":[[0,0]]}"#).unwrap();
    let out = cli(&["clone", "closure", "--gens", path.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.stderr.contains("1 entries, expected 6"), "{}", out.stderr);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn enumerate_gamma_pool() {
    let out = cli(&["clone", "enumerate", "--modulus", "6", "--pool", "gamma"]);
    assert_eq!(out.code, EXIT_OK);
    let v = value(&out);
    assert!(v["count"].as_u64().unwrap() >= 9);
    assert_eq!(v["rho_injective"], true);
}

#[test]
fn verify_suites() {
    let out = cli(&["verify", "--suite", "clonoid-lattice"]);
    assert_eq!(out.code, EXIT_OK);
    let v = value(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["checks"][0]["detail"]["count"], 6);
    assert_eq!(v["checks"][2]["detail"]["count"], 4);
    assert_eq!(cli(&["verify", "--suite", "bogus"]).code, EXIT_INPUT);
    let a = cli(&["verify", "--suite", "bounds", "--seed", "5"]);
    let b = cli(&["verify", "--suite", "bounds", "--seed", "5"]);
    assert_eq!(a.code, EXIT_OK);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn output_file() {
    let dir = std::env::temp_dir().join(format!("clonecalc-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("b.json");
    let out = cli(&["bounds", "--pq", "2", "3", "--output", path.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_FLAGS);
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let report: clonecalc::bounds::BoundsReport = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_value(&report).unwrap(), serde_json::from_str::<Value>(&text).unwrap());
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(cli(&["bounds"]).code, EXIT_INPUT);
    assert_eq!(cli(&["frobnicate"]).code, EXIT_INPUT);
    assert_eq!(cli(&["--help"]).code, EXIT_OK);
}
