//! The `clonecalc` command line.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use clonecalc::bounds::{bounds_report, pq_bounds, BoundsReport, FLAG_CHAIN, FLAG_ORDER};
use clonecalc::clone::{enumerate_clones, from_generators_with, generator_pool, rho_injective, CloneConfig, EnumConfig, Pool};
use clonecalc::clonoid::{enumerate_clonoids, ClonoidSig};
use clonecalc::json;
use clonecalc::lattice::{hasse, to_dot};
use clonecalc::verify::{run_suite, SUITES};
use clonecalc::{Error, FnTable, SquarefreeModulus};
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_FLAGS: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "clonecalc", version, about = "Clones above Clo(Z_s, +) for squarefree s")]
pub struct Cli {
    /// Write the report here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Cardinality bounds for the clone lattice.
    Bounds(BoundsArgs),
    /// Enumerate a clonoid lattice.
    Clonoids(ClonoidsArgs),
    /// Clone closure, membership, generators and enumeration.
    #[command(subcommand)]
    Clone(CloneCommand),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct BoundsTarget {
    /// Squarefree modulus s.
    #[arg(long)]
    pub modulus: Option<u64>,
    /// Two distinct primes p q.
    #[arg(long, num_args = 2, value_names = ["P", "Q"])]
    pub pq: Option<Vec<u32>>,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub target: BoundsTarget,
    /// Use the formula counts even when the clonoid lattices can be enumerated.
    #[arg(long)]
    pub no_enumerate: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Args, Debug)]
pub struct ClonoidsArgs {
    /// Target prime.
    #[arg(long)]
    pub p: u32,
    /// Source primes.
    #[arg(long, num_args = 1.., required = true)]
    pub others: Vec<u32>,
    /// Largest arity materialized.
    #[arg(long, default_value_t = 2)]
    pub cap: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct CloneOpts {
    /// Largest arity of generators and queries.
    #[arg(long, default_value_t = 2)]
    pub cap: usize,
    /// Seed for sampled cross-component probes.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl CloneOpts {
    fn config(&self, min_cap: usize) -> CloneConfig {
        CloneConfig { cap: self.cap.max(min_cap), seed: self.seed, ..CloneConfig::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PoolArg {
    Gamma,
    Monomials,
}

#[derive(Subcommand, Debug)]
pub enum CloneCommand {
    /// The clone generated by tables, as graded data.
    Closure {
        /// Generator file: a table, an array of tables or {"generators": [...]}.
        #[arg(long)]
        gens: PathBuf,
        /// Modulus, required when the generator file is empty.
        #[arg(long)]
        modulus: Option<u64>,
        #[command(flatten)]
        opts: CloneOpts,
    },
    /// Membership of a table, with a certificate when it is a member.
    Member {
        #[arg(long)]
        gens: PathBuf,
        #[arg(long)]
        query: PathBuf,
        #[command(flatten)]
        opts: CloneOpts,
    },
    /// Generators of arity at most max(p_i) for the generated clone.
    Generators {
        #[arg(long)]
        gens: PathBuf,
        #[arg(long)]
        modulus: Option<u64>,
        #[command(flatten)]
        opts: CloneOpts,
    },
    /// Closures of generator-pool subsets.
    Enumerate {
        #[arg(long)]
        modulus: u64,
        #[arg(long, value_enum, default_value_t = PoolArg::Gamma)]
        pool: PoolArg,
        /// Largest number of pool items combined.
        #[arg(long, default_value_t = 2)]
        max_subset: usize,
        /// Include every clone in full.
        #[arg(long)]
        full: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        opts: CloneOpts,
    },
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Suite name, or "all".
    #[arg(long)]
    pub suite: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Exit code and output of one invocation.
#[derive(Debug, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: EXIT_INPUT, message: e.to_string() }
    }
}

type Res<T> = std::result::Result<T, Failure>;

fn input(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_INPUT, message: message.into() }
}

fn read_json(path: &PathBuf) -> Res<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
    Ok(json::parse(&text, &path.display().to_string())?)
}

fn read_tables(path: &PathBuf) -> Res<Vec<FnTable>> {
    let v = read_json(path)?;
    Ok(json::tables_from_value(&v, &path.display().to_string())?)
}

fn modulus_of(tables: &[FnTable], given: Option<u64>) -> Res<SquarefreeModulus> {
    let from_tables = tables.first().map(|t| t.modulus().clone());
    match (from_tables, given) {
        (Some(m), Some(s)) if m.s() as u64 != s => Err(input(format!("tables are over Z_{}, not Z_{s}", m.s()))),
        (Some(m), _) => Ok(m),
        (None, Some(s)) => Ok(SquarefreeModulus::new(s)?),
        (None, None) => Err(input("empty generator set needs --modulus")),
    }
}

fn max_arity(tables: &[FnTable]) -> usize {
    tables.iter().map(|t| t.arity()).max().unwrap_or(0)
}

struct Report {
    code: i32,
    body: String,
}

fn json_report(v: &Value, code: i32) -> Report {
    Report { code, body: json::to_string(v) }
}

fn cmd_bounds(a: &BoundsArgs) -> Res<Report> {
    let report: BoundsReport = match (&a.target.modulus, &a.target.pq) {
        (Some(s), _) => {
            let md = SquarefreeModulus::new(*s)?;
            let counts = if a.no_enumerate { None } else { enumerated_counts(&md) };
            bounds_report(&md, counts.as_deref())?
        }
        (None, Some(pq)) => pq_bounds(pq[0], pq[1])?,
        (None, None) => return Err(input("one of --modulus or --pq is required")),
    };
    let v = serde_json::to_value(&report).map_err(|e| input(e.to_string()))?;
    let raised = report.flags.iter().any(|f| f == FLAG_CHAIN || f == FLAG_ORDER);
    Ok(json_report(&v, if raised { EXIT_FLAGS } else { EXIT_OK }))
}

/// Clonoid counts by enumeration, or `None` when a guard stops it.
fn enumerated_counts(md: &SquarefreeModulus) -> Option<Vec<u64>> {
    md.check_enumerable().ok()?;
    (0..md.m())
        .map(|i| {
            let sig = ClonoidSig::new(md.prime(i), md.others(i)).ok()?;
            enumerate_clonoids(&sig, 2).ok().map(|c| c.len() as u64)
        })
        .collect()
}

fn cmd_clonoids(a: &ClonoidsArgs) -> Res<Report> {
    let mut others = a.others.clone();
    others.sort_unstable();
    let sig = ClonoidSig::new(a.p, others)?;
    let elems = enumerate_clonoids(&sig, a.cap)?;
    let body = match a.format {
        Format::Json => json::to_string(&json::clonoid_lattice_to_value(&sig, a.cap, &elems)?),
        Format::Dot => {
            let edges = hasse(elems.len(), |x, y| elems[x].leq(&elems[y]))?;
            let labels: Vec<String> = elems.iter().enumerate().map(|(k, c)| format!("C{k} dims {:?}", c.dims())).collect();
            to_dot(&format!("clonoids_p{}_over_{:?}", sig.p, sig.sources), &labels, &edges)
        }
        Format::Text => {
            let mut s = format!("clonoids p={} sources={:?} cap={} count={}\n", sig.p, sig.sources, a.cap, elems.len());
            for (k, c) in elems.iter().enumerate() {
                s.push_str(&format!("C{k} dims={:?} unary={:?}\n", c.dims(), c.unary().basis()));
            }
            s
        }
    };
    Ok(Report { code: EXIT_OK, body })
}

fn ranks(c: &clonecalc::clone::CloneRep) -> Vec<Vec<usize>> {
    c.key().iter().map(|gs| gs.iter().map(|s| s.rank()).collect()).collect()
}

fn cmd_clone(c: &CloneCommand) -> Res<Report> {
    match c {
        CloneCommand::Closure { gens, modulus, opts } => {
            let tables = read_tables(gens)?;
            let md = modulus_of(&tables, *modulus)?;
            let rep = from_generators_with(&md, &tables, &opts.config(max_arity(&tables)))?;
            Ok(json_report(&json!({ "ranks": ranks(&rep), "clone": json::clone_rep_to_value(&rep) }), EXIT_OK))
        }
        CloneCommand::Member { gens, query, opts } => {
            let tables = read_tables(gens)?;
            let q = json::table_from_value(&read_json(query)?, &query.display().to_string())?;
            let md = modulus_of(&tables, Some(q.modulus().s() as u64))?;
            let rep = from_generators_with(&md, &tables, &opts.config(max_arity(&tables).max(q.arity())))?;
            let (yes, cert) = rep.member(&q)?;
            let cert_v = match &cert {
                Some(c) => {
                    c.verify(&q)?;
                    json::clone_certificate_to_value(c)
                }
                None => Value::Null,
            };
            let v = json!({ "member": if yes { "yes" } else { "no" }, "query": json::table_to_value(&q), "certificate": cert_v });
            Ok(json_report(&v, EXIT_OK))
        }
        CloneCommand::Generators { gens, modulus, opts } => {
            let tables = read_tables(gens)?;
            let md = modulus_of(&tables, *modulus)?;
            let rep = from_generators_with(&md, &tables, &opts.config(max_arity(&tables)))?;
            let out = rep.extract_generators()?;
            let v = json!({ "count": out.len(), "max_arity": max_arity(&out), "generators": json::tables_to_value(&out) });
            Ok(json_report(&v, EXIT_OK))
        }
        CloneCommand::Enumerate { modulus, pool, max_subset, full, format, opts } => {
            let md = SquarefreeModulus::new(*modulus)?;
            let pool = match pool {
                PoolArg::Gamma => Pool::Gamma,
                PoolArg::Monomials => Pool::Monomials,
            };
            let items = generator_pool(&md, pool, opts.cap)?;
            let cfg = EnumConfig { clone: opts.config(0), max_subset: *max_subset, ..EnumConfig::default() };
            let clones = enumerate_clones(&md, &items, &cfg)?;
            let inj = rho_injective(&clones)?;
            let body = match format {
                Format::Json if *full => json::to_string(&json::clone_lattice_to_value(&md, &clones, inj)?),
                Format::Json => {
                    let edges = hasse(clones.len(), |x, y| clones[x].leq(&clones[y]))?;
                    let elems: Vec<Value> = clones.iter().enumerate().map(|(k, c)| json!({ "index": k, "ranks": ranks(c) })).collect();
                    json::to_string(&json!({
                        "modulus": md.primes(),
                        "pool_items": items.len(),
                        "count": clones.len(),
                        "rho_injective": inj,
                        "elements": elems,
                        "hasse": edges,
                    }))
                }
                Format::Dot => {
                    let edges = hasse(clones.len(), |x, y| clones[x].leq(&clones[y]))?;
                    let labels: Vec<String> = clones.iter().enumerate().map(|(k, c)| format!("K{k} {:?}", ranks(c))).collect();
                    to_dot(&format!("clones_z{}", md.s()), &labels, &edges)
                }
                Format::Text => {
                    let mut s = format!("clones on Z_{} count={} rho_injective={inj}\n", md.s(), clones.len());
                    for (k, c) in clones.iter().enumerate() {
                        s.push_str(&format!("K{k} ranks={:?}\n", ranks(c)));
                    }
                    s
                }
            };
            Ok(Report { code: EXIT_OK, body })
        }
    }
}

fn cmd_verify(a: &VerifyArgs) -> Res<Report> {
    let names: Vec<&str> = if a.suite == "all" {
        SUITES.to_vec()
    } else if SUITES.contains(&a.suite.as_str()) {
        vec![a.suite.as_str()]
    } else {
        return Err(input(format!("unknown suite \"{}\"; expected one of {SUITES:?} or \"all\"", a.suite)));
    };
    let reports = names.iter().map(|n| run_suite(n, a.seed)).collect::<clonecalc::Result<Vec<_>>>()?;
    let passed = reports.iter().all(|r| r.passed);
    let v = if reports.len() == 1 {
        serde_json::to_value(&reports[0])
    } else {
        serde_json::to_value(json!({ "passed": passed, "suites": reports }))
    }
    .map_err(|e| input(e.to_string()))?;
    Ok(json_report(&v, if passed { EXIT_OK } else { EXIT_FAIL }))
}

fn dispatch(cli: &Cli) -> Res<Report> {
    match &cli.command {
        Command::Bounds(a) => cmd_bounds(a),
        Command::Clonoids(a) => cmd_clonoids(a),
        Command::Clone(c) => cmd_clone(c),
        Command::Verify(a) => cmd_verify(a),
    }
}

/// Parses arguments and runs one subcommand.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match dispatch(&cli) {
        Ok(r) => match &cli.output {
            Some(path) => match std::fs::write(path, &r.body) {
                Ok(()) => Outcome { code: r.code, ..Outcome::default() },
                Err(e) => Outcome { code: EXIT_INPUT, stdout: String::new(), stderr: format!("error: {}: {e}\n", path.display()) },
            },
            None => Outcome { code: r.code, stdout: r.body, stderr: String::new() },
        },
        Err(f) => Outcome { code: f.code, stdout: String::new(), stderr: format!("error: {}\n", f.message) },
    }
}
