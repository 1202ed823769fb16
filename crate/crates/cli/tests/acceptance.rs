//! One pass/fail line per acceptance criterion, with runtime and limit.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use clonecalc::bounds::{clone_count_bounds, pq_bounds};
use clonecalc::clone::from_generators;
use clonecalc::clonoid::{cig_closure, enumerate_clonoids, ClonoidSig};
use clonecalc::verify::{lattice_axiom_failures, run_suite, z6_clones};
use clonecalc::{CoeffFn, FnTable, SquarefreeModulus};
use clonecalc_cli::{run, EXIT_INPUT};

const SEED: u64 = 42;

struct Xorshift(u64);

impl Xorshift {
    fn below(&mut self, n: u64) -> u64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        self.0 % n
    }
}

fn suite(name: &str) -> Result<String, String> {
    let report = run_suite(name, SEED).map_err(|e| e.to_string())?;
    let detail: Vec<String> = report.checks.iter().map(|c| format!("{}={}", c.name, c.detail)).collect();
    let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    if failed.is_empty() {
        Ok(detail.join("; "))
    } else {
        Err(format!("failed checks {failed:?}: {}", detail.join("; ")))
    }
}

fn ensure(ok: bool, msg: String) -> Result<String, String> {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn bound_arithmetic() -> Result<String, String> {
    let pq = pq_bounds(2, 3).map_err(|e| e.to_string())?;
    let md = SquarefreeModulus::new(6).unwrap();
    let full = clone_count_bounds(&md, None).map_err(|e| e.to_string())?;
    let chain = pq.flags.iter().any(|f| f == "middle_exceeds_chain_value");
    let ok = pq.lower.to_string() == "9" && pq.upper.to_string() == "55296" && full.upper.to_string() == "2109375" && chain;
    ensure(ok, format!("pq lower {} upper {}, formula upper {}, chain flag {chain}", pq.lower, pq.upper, full.upper))
}

fn dichotomy() -> Result<String, String> {
    let md = SquarefreeModulus::new(6).unwrap();
    let clones = z6_clones(SEED).map_err(|e| e.to_string())?;
    let counts: Vec<u64> = [(2u32, 3u32), (3, 2)]
        .iter()
        .map(|&(p, q)| enumerate_clonoids(&ClonoidSig::new(p, vec![q]).unwrap(), 2).map(|e| e.len() as u64))
        .collect::<clonecalc::Result<_>>()
        .map_err(|e| e.to_string())?;
    let b = clone_count_bounds(&md, Some(&counts)).map_err(|e| e.to_string())?;
    let n = clones.len() as u128;
    let lower: u128 = b.lower.to_string().parse().unwrap();
    let upper: u128 = b.upper.to_string().parse().unwrap();
    let exit = run(["clonecalc", "bounds", "--modulus", "4"]).code;
    let ok = lower <= n && n <= upper && exit == EXIT_INPUT;
    ensure(ok, format!("{n} clones in [{lower}, {upper}], modulus 4 exit {exit}"))
}

fn closure_laws() -> Result<String, String> {
    let mut rng = Xorshift(0x2545_F491_4F6C_DD1D);
    let mut sets = 0;
    for (p, q) in [(2u32, 3u32), (3, 2)] {
        let sig = ClonoidSig::new(p, vec![q]).unwrap();
        let gen = |rng: &mut Xorshift| {
            let cs = sig.coeff_sig(1 + rng.below(2) as usize);
            let vals = (0..cs.domain_size()).map(|_| rng.below(p as u64) as u8).collect();
            CoeffFn::new(cs, vals).unwrap()
        };
        for _ in 0..100 {
            let gens: Vec<CoeffFn> = (0..1 + rng.below(3)).map(|_| gen(&mut rng)).collect();
            let c = cig_closure(&sig, &gens, 2).map_err(|e| e.to_string())?;
            let again = cig_closure(&sig, &c.generators(), 2).map_err(|e| e.to_string())?;
            let mut more = gens.clone();
            more.push(gen(&mut rng));
            let d = cig_closure(&sig, &more, 2).map_err(|e| e.to_string())?;
            if again.levels() != c.levels() || !c.leq(&d).unwrap() || !gens.iter().all(|g| c.member(g).unwrap()) {
                return Err(format!("cig_closure law broken for {gens:?}"));
            }
            sets += 1;
        }
        let elems = enumerate_clonoids(&sig, 2).map_err(|e| e.to_string())?;
        let failures = lattice_axiom_failures(&elems).map_err(|e| e.to_string())?;
        if !failures.is_empty() {
            return Err(format!("lattice axioms for ({p}, {q}): {failures:?}"));
        }
    }
    let md = SquarefreeModulus::new(6).unwrap();
    let table = |rng: &mut Xorshift| {
        let arity = if rng.below(4) == 0 { 2 } else { 1 };
        let vals: Vec<u32> = (0..6usize.pow(arity)).map(|_| rng.below(6) as u32).collect();
        FnTable::from_fn_zs(md.clone(), arity as usize, |x| vals[x.iter().fold(0, |a, &d| a * 6 + d as usize)]).unwrap()
    };
    for _ in 0..200 {
        let gens: Vec<FnTable> = (0..1 + rng.below(2)).map(|_| table(&mut rng)).collect();
        let rep = from_generators(&md, &gens, 2).map_err(|e| e.to_string())?;
        let again = from_generators(&md, &rep.extract_generators().unwrap(), 3).map_err(|e| e.to_string())?;
        let mut more = gens.clone();
        more.push(table(&mut rng));
        let bigger = from_generators(&md, &more, 2).map_err(|e| e.to_string())?;
        if !again.equal(&rep).unwrap() || !rep.leq(&bigger).unwrap() || !gens.iter().all(|g| rep.contains(g).unwrap()) {
            return Err("from_generators law broken".into());
        }
        sets += 1;
    }
    Ok(format!("{sets} generator sets, lattice axioms on 6 and 4 clonoids"))
}

fn main() -> ExitCode {
    type Criterion = (u32, &'static str, u64, Box<dyn Fn() -> Result<String, String>>);
    let criteria: Vec<Criterion> = vec![
        (1, "clonoid lattice enumeration", 10, Box::new(|| suite("clonoid-lattice"))),
        (2, "bound arithmetic", 1, Box::new(bound_arithmetic)),
        (3, "certificate soundness", 120, Box::new(|| suite("certificates"))),
        (4, "oracle agreement for clones", 300, Box::new(|| suite("oracle-agreement"))),
        (5, "embedding", 60, Box::new(|| suite("embedding"))),
        (6, "injectivity of rho", 600, Box::new(|| suite("rho-injectivity"))),
        (7, "generator arity bound", 600, Box::new(|| suite("arity-bound"))),
        (8, "dichotomy sanity", 600, Box::new(dichotomy)),
        (9, "closure laws", 120, Box::new(closure_laws)),
    ];
    let mut all = true;
    for (k, name, limit, f) in criteria {
        let start = Instant::now();
        let result = f();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(limit);
        let pass = result.is_ok() && in_time;
        all &= pass;
        let detail = match result {
            Ok(d) | Err(d) => d,
        };
        println!(
            "criterion {k} [{}] {name}: {:.2}s (limit {limit}s){} {detail}",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            if in_time { "" } else { " over time limit" }
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
