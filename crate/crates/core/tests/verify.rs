use clonecalc::verify::{run_suite, SUITES};
use clonecalc::Error;

#[test]
fn fast_suites_pass() {
    for name in ["clonoid-lattice", "embedding", "bounds"] {
        let report = run_suite(name, 42).unwrap();
        assert!(report.passed, "{name}: {:?}", report.checks.iter().filter(|c| !c.passed).map(|c| &c.name).collect::<Vec<_>>());
        assert!(!report.checks.is_empty());
    }
}

#[test]
fn reports_are_deterministic() {
    let a = serde_json::to_string(&run_suite("clonoid-lattice", 3).unwrap()).unwrap();
    let b = serde_json::to_string(&run_suite("clonoid-lattice", 3).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn unknown_suite_is_rejected() {
    assert!(matches!(run_suite("nope", 0), Err(Error::Precondition(_))));
    assert_eq!(SUITES.len(), 7);
}
