//! JSON forms of tables, polynomials, certificates, clones and lattices.
//!
//! Objects use sorted keys, so equal values serialize to identical bytes.

use std::collections::HashMap;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::arith::{Element, FnTable, LinearMapSpec, SquarefreeModulus};
use crate::clone::cert::{compose, generator, linear, plus};
use crate::clone::{Atom, CNode, CloneCertificate, CloneRep, CloneStep, ProbeMode};
use crate::clonoid::{ClonoidSig, LinClonoid};
use crate::error::{Error, Result};
use crate::lattice::hasse;
use crate::linalg::Subspace;
use crate::pclonoid::{Builder, CertNode, Certificate, Node, Step};
use crate::poly::{CoeffFn, CoeffRingSig, Monomial, RPoly};

fn bad(path: &str, msg: impl std::fmt::Display) -> Error {
    Error::Format(format!("{path}: {msg}"))
}

fn field<'a>(v: &'a Value, path: &str, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| bad(path, format!("missing field \"{key}\"")))
}

fn uint(v: &Value, path: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| bad(path, "expected a nonnegative integer"))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| bad(path, "expected an array"))
}

fn uints(v: &Value, path: &str) -> Result<Vec<u64>> {
    array(v, path)?.iter().enumerate().map(|(k, x)| uint(x, &format!("{path}[{k}]"))).collect()
}

fn residues(v: &Value, path: &str, p: u32) -> Result<Vec<u8>> {
    uints(v, path)?
        .into_iter()
        .enumerate()
        .map(|(k, x)| if x < p as u64 { Ok(x as u8) } else { Err(bad(&format!("{path}[{k}]"), format!("{x} out of range for Z_{p}"))) })
        .collect()
}

fn matrix(v: &Value, path: &str) -> Result<Vec<Vec<u8>>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(k, row)| residues(row, &format!("{path}[{k}]"), 256))
        .collect()
}

fn usizes(v: &Value, path: &str) -> Result<Vec<usize>> {
    Ok(uints(v, path)?.into_iter().map(|x| x as usize).collect())
}

fn index(v: &Value, path: &str, key: &str) -> Result<usize> {
    Ok(uint(field(v, path, key)?, &format!("{path}.{key}"))? as usize)
}

/// Reads `[2,3]` or `6`.
pub fn modulus_from_value(v: &Value, path: &str) -> Result<SquarefreeModulus> {
    if let Some(n) = v.as_u64() {
        return SquarefreeModulus::new(n);
    }
    let primes = uints(v, path)?;
    SquarefreeModulus::from_primes(primes.into_iter().map(|p| p as u32).collect())
}

pub fn table_to_value(f: &FnTable) -> Value {
    let values: Vec<Value> = f.values().into_iter().map(|e| json!(e.0)).collect();
    json!({ "modulus": f.modulus().primes(), "arity": f.arity(), "values": values })
}

/// Parses a table given by residue tuples or, with `"encoding": "zs"`, by
/// integers in `Z_s`; values are in block-lexicographic point order.
pub fn table_from_value(v: &Value, path: &str) -> Result<FnTable> {
    let modulus = modulus_from_value(field(v, path, "modulus")?, &format!("{path}.modulus"))?;
    let arity = index(v, path, "arity")?;
    let size = modulus.domain_size(arity)?;
    let zs = match v.get("encoding") {
        None => false,
        Some(e) => match e.as_str() {
            Some("zs") => true,
            Some("residues") => false,
            _ => return Err(bad(&format!("{path}.encoding"), "expected \"zs\" or \"residues\"")),
        },
    };
    let vpath = format!("{path}.values");
    let values = array(field(v, path, "values")?, &vpath)?;
    if values.len() != size {
        return Err(Error::MalformedTable(format!("{vpath}: {} entries, expected {size}", values.len())));
    }
    let mut elems = Vec::with_capacity(size);
    for (k, x) in values.iter().enumerate() {
        let at = format!("{vpath}[{k}]");
        if zs {
            let z = uint(x, &at)?;
            if z >= modulus.s() as u64 {
                return Err(Error::MalformedTable(format!("{at}: {z} out of range for Z_{}", modulus.s())));
            }
            elems.push(modulus.split(z));
        } else {
            let tuple = uints(x, &at)?;
            if tuple.len() != modulus.m() {
                return Err(Error::MalformedTable(format!("{at}: {} residues, expected {}", tuple.len(), modulus.m())));
            }
            let mut e = Vec::with_capacity(tuple.len());
            for (i, &r) in tuple.iter().enumerate() {
                if r >= modulus.prime(i) as u64 {
                    return Err(Error::MalformedTable(format!("{at}[{i}]: {r} out of range for Z_{}", modulus.prime(i))));
                }
                e.push(r as u8);
            }
            elems.push(Element(e));
        }
    }
    FnTable::from_elements(modulus, arity, &elems)
}

/// A generator file: one table, an array of tables, or
/// `{"generators": [...]}`.
pub fn tables_from_value(v: &Value, path: &str) -> Result<Vec<FnTable>> {
    if let Some(g) = v.get("generators") {
        return tables_from_value(g, &format!("{path}.generators"));
    }
    match v.as_array() {
        Some(a) => a.iter().enumerate().map(|(k, t)| table_from_value(t, &format!("{path}[{k}]"))).collect(),
        None => Ok(vec![table_from_value(v, path)?]),
    }
}

pub fn tables_to_value(fs: &[FnTable]) -> Value {
    Value::Array(fs.iter().map(table_to_value).collect())
}

fn sig_to_value(sig: &CoeffRingSig) -> Value {
    json!({ "p": sig.p, "sources": sig.sources, "arity": sig.arity })
}

fn sig_from_value(v: &Value, path: &str) -> Result<CoeffRingSig> {
    let p = index(v, path, "p")? as u32;
    let sources = uints(field(v, path, "sources")?, &format!("{path}.sources"))?.into_iter().map(|q| q as u32).collect();
    let sig = CoeffRingSig::new(p, sources, index(v, path, "arity")?);
    sig.validate()?;
    Ok(sig)
}

pub fn rpoly_to_value(f: &RPoly) -> Value {
    let terms: Vec<Value> = f.terms().map(|(m, c)| json!({ "exps": m.exps(), "coeff": c.values() })).collect();
    json!({ "sig": sig_to_value(f.sig()), "terms": terms })
}

pub fn rpoly_from_value(v: &Value, path: &str) -> Result<RPoly> {
    let sig = sig_from_value(field(v, path, "sig")?, &format!("{path}.sig"))?;
    let tpath = format!("{path}.terms");
    let mut terms = Vec::new();
    for (k, t) in array(field(v, path, "terms")?, &tpath)?.iter().enumerate() {
        let at = format!("{tpath}[{k}]");
        let exps = residues(field(t, &at, "exps")?, &format!("{at}.exps"), sig.p)?;
        let coeff = residues(field(t, &at, "coeff")?, &format!("{at}.coeff"), sig.p)?;
        terms.push((Monomial::new(exps), CoeffFn::new(sig.clone(), coeff)?));
    }
    RPoly::from_terms(sig, terms)
}

/// Numbers the nodes reachable from `roots`, children first.
fn number<T>(roots: &[Arc<T>], children: impl Fn(&T) -> Vec<&Arc<T>>) -> (Vec<Arc<T>>, HashMap<*const T, usize>) {
    let mut order = Vec::new();
    let mut ids: HashMap<*const T, usize> = HashMap::new();
    for root in roots {
        let mut stack: Vec<(Arc<T>, bool)> = vec![(root.clone(), false)];
        while let Some((n, expanded)) = stack.pop() {
            let key = Arc::as_ptr(&n);
            if ids.contains_key(&key) {
                continue;
            }
            if expanded {
                ids.insert(key, order.len());
                order.push(n);
                continue;
            }
            stack.push((n.clone(), true));
            for c in children(&n).into_iter().rev() {
                if !ids.contains_key(&Arc::as_ptr(c)) {
                    stack.push((c.clone(), false));
                }
            }
        }
    }
    (order, ids)
}

fn child_id<T>(ids: &HashMap<*const T, usize>, n: &Arc<T>) -> usize {
    ids[&Arc::as_ptr(n)]
}

fn earlier<T: Clone>(built: &[T], v: &Value, path: &str, key: &str) -> Result<T> {
    let k = index(v, path, key)?;
    built.get(k).cloned().ok_or_else(|| bad(&format!("{path}.{key}"), format!("node {k} is not defined earlier")))
}

/// Node list in children-first order; every node names its step by `"tag"`.
pub fn certificate_to_value(c: &Certificate) -> Value {
    let (order, ids) = number(std::slice::from_ref(&c.root), CertNode::children);
    let nodes: Vec<Value> = order
        .iter()
        .map(|n| {
            let mut o = Map::new();
            o.insert("tag".into(), json!(n.tag()));
            match &n.step {
                Step::Generator(k) => {
                    o.insert("index".into(), json!(k));
                }
                Step::LinearCombination { a, b, left, right } => {
                    o.insert("a".into(), json!(a));
                    o.insert("b".into(), json!(b));
                    o.insert("left".into(), json!(child_id(&ids, left)));
                    o.insert("right".into(), json!(child_id(&ids, right)));
                }
                Step::MatrixSubstitution { matrix, child } => {
                    o.insert("matrix".into(), json!(matrix));
                    o.insert("child".into(), json!(child_id(&ids, child)));
                }
                Step::ZeroSubstitution { slot, child } => {
                    o.insert("slot".into(), json!(slot));
                    o.insert("child".into(), json!(child_id(&ids, child)));
                }
                Step::VariableIdentification { map, child } => {
                    o.insert("map".into(), json!(map));
                    o.insert("child".into(), json!(child_id(&ids, child)));
                }
                Step::SelfComposition { slot, fresh, outer, inner } => {
                    o.insert("slot".into(), json!(slot));
                    o.insert("fresh".into(), json!(fresh));
                    o.insert("outer".into(), json!(child_id(&ids, outer)));
                    o.insert("inner".into(), json!(child_id(&ids, inner)));
                }
            }
            o.insert("claim".into(), rpoly_to_value(&n.claim));
            Value::Object(o)
        })
        .collect();
    let generators: Vec<Value> = c.generators.iter().map(rpoly_to_value).collect();
    json!({ "generators": generators, "nodes": nodes, "root": order.len() - 1 })
}

/// Rebuilds a certificate, recomputing every claim and rejecting nodes whose
/// stored claim differs.
pub fn certificate_from_value(v: &Value, path: &str) -> Result<Certificate> {
    let gpath = format!("{path}.generators");
    let generators: Vec<RPoly> =
        array(field(v, path, "generators")?, &gpath)?.iter().enumerate().map(|(k, g)| rpoly_from_value(g, &format!("{gpath}[{k}]"))).collect::<Result<_>>()?;
    let b = Builder::new(&generators);
    let npath = format!("{path}.nodes");
    let mut built: Vec<Node> = Vec::new();
    for (k, n) in array(field(v, path, "nodes")?, &npath)?.iter().enumerate() {
        let at = format!("{npath}[{k}]");
        let tag = field(n, &at, "tag")?.as_str().ok_or_else(|| bad(&at, "tag is not a string"))?;
        let node = match tag {
            "generator" => b.generator(index(n, &at, "index")?)?,
            "linear-combination" => b.lin(
                index(n, &at, "a")? as u32,
                &earlier(&built, n, &at, "left")?,
                index(n, &at, "b")? as u32,
                &earlier(&built, n, &at, "right")?,
            )?,
            "matrix-substitution" => b.matrix(matrix(field(n, &at, "matrix")?, &format!("{at}.matrix"))?, &earlier(&built, n, &at, "child")?)?,
            "zero-substitution" => b.zero_sub(index(n, &at, "slot")?, &earlier(&built, n, &at, "child")?)?,
            "variable-identification" => b.identify(usizes(field(n, &at, "map")?, &format!("{at}.map"))?, &earlier(&built, n, &at, "child")?)?,
            "self-composition" => b.compose(
                index(n, &at, "slot")?,
                index(n, &at, "fresh")?,
                &earlier(&built, n, &at, "outer")?,
                &earlier(&built, n, &at, "inner")?,
            )?,
            other => return Err(bad(&format!("{at}.tag"), format!("unknown tag \"{other}\""))),
        };
        let claim = rpoly_from_value(field(n, &at, "claim")?, &format!("{at}.claim"))?;
        if claim != node.claim {
            return Err(Error::Replay(format!("{at}: stored claim differs from the recomputed one")));
        }
        built.push(node);
    }
    let root = earlier(&built, v, path, "root")?;
    Ok(Certificate { generators, root })
}

fn clone_nodes_to_value(roots: &[CNode]) -> (Vec<Value>, HashMap<*const crate::clone::CloneNode, usize>) {
    let (order, ids) = number(roots, crate::clone::CloneNode::children);
    let nodes = order
        .iter()
        .map(|n| {
            let mut o = Map::new();
            o.insert("tag".into(), json!(n.tag()));
            o.insert("arity".into(), json!(n.arity));
            match &n.step {
                CloneStep::Generator(k) => {
                    o.insert("index".into(), json!(k));
                }
                CloneStep::Linear(spec) => {
                    o.insert("coeffs".into(), json!(spec.coeffs));
                }
                CloneStep::Plus => {}
                CloneStep::Compose { outer, args } => {
                    o.insert("outer".into(), json!(child_id(&ids, outer)));
                    o.insert("args".into(), json!(args.iter().map(|a| child_id(&ids, a)).collect::<Vec<_>>()));
                }
            }
            Value::Object(o)
        })
        .collect();
    (nodes, ids)
}

fn clone_nodes_from_value(v: &Value, path: &str) -> Result<Vec<CNode>> {
    let mut built: Vec<CNode> = Vec::new();
    for (k, n) in array(v, path)?.iter().enumerate() {
        let at = format!("{path}[{k}]");
        let arity = index(n, &at, "arity")?;
        let tag = field(n, &at, "tag")?.as_str().ok_or_else(|| bad(&at, "tag is not a string"))?;
        let node = match tag {
            "generator" => generator(index(n, &at, "index")?, arity),
            "linear" => linear(LinearMapSpec { coeffs: matrix(field(n, &at, "coeffs")?, &format!("{at}.coeffs"))? }),
            "plus" => plus(),
            "compose" => {
                let outer = earlier(&built, n, &at, "outer")?;
                let args = usizes(field(n, &at, "args")?, &format!("{at}.args"))?
                    .into_iter()
                    .map(|a| built.get(a).cloned().ok_or_else(|| bad(&format!("{at}.args"), format!("node {a} is not defined earlier"))))
                    .collect::<Result<Vec<_>>>()?;
                if args.len() != outer.arity {
                    return Err(bad(&at, format!("{} arguments for arity {}", args.len(), outer.arity)));
                }
                if let Some(a) = args.iter().find(|a| a.arity != arity) {
                    return Err(bad(&at, format!("argument of arity {} in a node of arity {arity}", a.arity)));
                }
                compose(&outer, args, arity)
            }
            other => return Err(bad(&format!("{at}.tag"), format!("unknown tag \"{other}\""))),
        };
        if node.arity != arity {
            return Err(bad(&format!("{at}.arity"), format!("stated {arity}, actual {}", node.arity)));
        }
        built.push(node);
    }
    Ok(built)
}

pub fn clone_certificate_to_value(c: &CloneCertificate) -> Value {
    let (nodes, ids) = clone_nodes_to_value(std::slice::from_ref(&c.root));
    json!({
        "modulus": c.modulus.primes(),
        "generators": tables_to_value(&c.generators),
        "nodes": nodes,
        "root": child_id(&ids, &c.root),
    })
}

pub fn clone_certificate_from_value(v: &Value, path: &str) -> Result<CloneCertificate> {
    let modulus = modulus_from_value(field(v, path, "modulus")?, &format!("{path}.modulus"))?;
    let generators = tables_from_value(field(v, path, "generators")?, &format!("{path}.generators"))?;
    if generators.iter().any(|g| g.modulus() != &modulus) {
        return Err(Error::ModulusMismatch);
    }
    let built = clone_nodes_from_value(field(v, path, "nodes")?, &format!("{path}.nodes"))?;
    let root = earlier(&built, v, path, "root")?;
    Ok(CloneCertificate::new(modulus, generators, root))
}

fn probe_mode_to_value(m: &ProbeMode) -> Value {
    match m {
        ProbeMode::Exhaustive { z_arity } => json!({ "mode": "exhaustive", "z_arity": z_arity }),
        ProbeMode::Sampled { z_arity, samples } => json!({ "mode": "sampled", "z_arity": z_arity, "samples": samples }),
    }
}

fn probe_mode_from_value(v: &Value, path: &str) -> Result<ProbeMode> {
    let z_arity = index(v, path, "z_arity")?;
    match field(v, path, "mode")?.as_str() {
        Some("exhaustive") => Ok(ProbeMode::Exhaustive { z_arity }),
        Some("sampled") => Ok(ProbeMode::Sampled { z_arity, samples: index(v, path, "samples")? }),
        _ => Err(bad(&format!("{path}.mode"), "expected \"exhaustive\" or \"sampled\"")),
    }
}

/// Grades with their atoms; atom certificates share one node list.
pub fn clone_rep_to_value(c: &CloneRep) -> Value {
    let m = c.modulus().m();
    let roots: Vec<CNode> = (0..m)
        .flat_map(|i| (0..=c.modulus().prime(i) as usize).flat_map(move |g| c.grade(i, g).atoms().iter().map(|a| a.cert.clone())))
        .collect();
    let (nodes, ids) = clone_nodes_to_value(&roots);
    let grades: Vec<Value> = (0..m)
        .map(|i| {
            let gs: Vec<Value> = (0..=c.modulus().prime(i) as usize)
                .map(|g| {
                    let grade = c.grade(i, g);
                    let atoms: Vec<Value> =
                        grade.atoms().iter().map(|a| json!({ "coeff": a.coeff, "cert": child_id(&ids, &a.cert) })).collect();
                    json!({ "grade": g, "basis": grade.unary().basis(), "atoms": atoms })
                })
                .collect();
            Value::Array(gs)
        })
        .collect();
    json!({
        "modulus": c.modulus().primes(),
        "cap": c.cap(),
        "generators": tables_to_value(c.generators()),
        "probe_mode": c.probe_mode().iter().map(probe_mode_to_value).collect::<Vec<_>>(),
        "nodes": nodes,
        "grades": grades,
    })
}

pub fn clone_rep_from_value(v: &Value, path: &str) -> Result<CloneRep> {
    let modulus = modulus_from_value(field(v, path, "modulus")?, &format!("{path}.modulus"))?;
    let cap = index(v, path, "cap")?;
    let generators = tables_from_value(field(v, path, "generators")?, &format!("{path}.generators"))?;
    let nodes = clone_nodes_from_value(field(v, path, "nodes")?, &format!("{path}.nodes"))?;
    let mut rep = CloneRep::empty(&modulus, cap, generators);
    let ppath = format!("{path}.probe_mode");
    rep.probe_mode =
        array(field(v, path, "probe_mode")?, &ppath)?.iter().enumerate().map(|(k, x)| probe_mode_from_value(x, &format!("{ppath}[{k}]"))).collect::<Result<_>>()?;
    let gpath = format!("{path}.grades");
    let comps = array(field(v, path, "grades")?, &gpath)?;
    if comps.len() != modulus.m() {
        return Err(bad(&gpath, format!("{} components for {} primes", comps.len(), modulus.m())));
    }
    for (i, comp) in comps.iter().enumerate() {
        let p = modulus.prime(i);
        let cpath = format!("{gpath}[{i}]");
        let gs = array(comp, &cpath)?;
        if gs.len() != p as usize + 1 {
            return Err(bad(&cpath, format!("{} grades, expected {}", gs.len(), p + 1)));
        }
        let dim: usize = modulus.others(i).iter().map(|&q| q as usize).product();
        for (g, gv) in gs.iter().enumerate() {
            let at = format!("{cpath}[{g}]");
            let apath = format!("{at}.atoms");
            for (k, a) in array(field(gv, &at, "atoms")?, &apath)?.iter().enumerate() {
                let aat = format!("{apath}[{k}]");
                let coeff = residues(field(a, &aat, "coeff")?, &format!("{aat}.coeff"), p)?;
                if coeff.len() != dim {
                    return Err(bad(&format!("{aat}.coeff"), format!("{} entries, expected {dim}", coeff.len())));
                }
                let cert = earlier(&nodes, a, &aat, "cert")?;
                let grade = &mut rep.grades[i][g];
                grade.basis.push(&coeff);
                grade.atoms.push(Atom { coeff, cert });
            }
            let basis = matrix(field(gv, &at, "basis")?, &format!("{at}.basis"))?;
            if rep.grades[i][g].unary().basis() != basis.as_slice() {
                return Err(bad(&format!("{at}.basis"), "does not match the span of the atoms"));
            }
        }
    }
    rep.reset_levels();
    Ok(rep)
}

fn subspace_value(s: &Subspace) -> Value {
    json!(s.basis())
}

/// Clonoids with their unary parts and the covering relation.
pub fn clonoid_lattice_to_value(sig: &ClonoidSig, cap: usize, elements: &[LinClonoid]) -> Result<Value> {
    let edges = hasse(elements.len(), |a, b| elements[a].leq(&elements[b]))?;
    let elems: Vec<Value> = elements
        .iter()
        .enumerate()
        .map(|(k, c)| {
            json!({
                "index": k,
                "dims": c.dims(),
                "unary": subspace_value(c.unary()),
                "unary_elements": c.unary_elements(),
            })
        })
        .collect();
    Ok(json!({
        "sig": { "p": sig.p, "sources": sig.sources },
        "cap": cap,
        "count": elements.len(),
        "elements": elems,
        "hasse": edges,
    }))
}

/// Clonoid lattice data read back from [`clonoid_lattice_to_value`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClonoidLattice {
    pub sig: ClonoidSig,
    pub cap: usize,
    pub elements: Vec<LinClonoid>,
    pub hasse: Vec<(usize, usize)>,
}

pub fn clonoid_lattice_from_value(v: &Value, path: &str) -> Result<ClonoidLattice> {
    let spath = format!("{path}.sig");
    let s = field(v, path, "sig")?;
    let sig = ClonoidSig::new(index(s, &spath, "p")? as u32, uints(field(s, &spath, "sources")?, &format!("{spath}.sources"))?.into_iter().map(|q| q as u32).collect())?;
    let cap = index(v, path, "cap")?;
    let epath = format!("{path}.elements");
    let dim = sig.coeff_sig(1).domain_size();
    let mut elements = Vec::new();
    for (k, e) in array(field(v, path, "elements")?, &epath)?.iter().enumerate() {
        let at = format!("{epath}[{k}]");
        let rows = matrix(field(e, &at, "unary")?, &format!("{at}.unary"))?;
        let unary = Subspace::from_vectors(sig.p, dim, rows.iter().map(|r| r.as_slice()));
        let c = LinClonoid::from_unary(&sig, &unary, cap)?;
        if c.dims() != usizes(field(e, &at, "dims")?, &format!("{at}.dims"))? {
            return Err(bad(&format!("{at}.dims"), "do not match the clonoid generated by the unary part"));
        }
        elements.push(c);
    }
    let hpath = format!("{path}.hasse");
    let hasse = array(field(v, path, "hasse")?, &hpath)?
        .iter()
        .enumerate()
        .map(|(k, e)| {
            let pair = usizes(e, &format!("{hpath}[{k}]"))?;
            match pair.as_slice() {
                [a, b] if *a < elements.len() && *b < elements.len() => Ok((*a, *b)),
                _ => Err(bad(&format!("{hpath}[{k}]"), "expected a pair of element indices")),
            }
        })
        .collect::<Result<_>>()?;
    Ok(ClonoidLattice { sig, cap, elements, hasse })
}

/// Enumerated clones with the covering relation of their order.
pub fn clone_lattice_to_value(modulus: &SquarefreeModulus, clones: &[CloneRep], rho_injective: bool) -> Result<Value> {
    let edges = hasse(clones.len(), |a, b| clones[a].leq(&clones[b]))?;
    let elems: Vec<Value> = clones
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let ranks: Vec<Vec<usize>> = c.key().iter().map(|gs| gs.iter().map(|s| s.rank()).collect()).collect();
            json!({ "index": k, "ranks": ranks, "clone": clone_rep_to_value(c) })
        })
        .collect();
    Ok(json!({
        "modulus": modulus.primes(),
        "count": clones.len(),
        "rho_injective": rho_injective,
        "elements": elems,
        "hasse": edges,
    }))
}

pub fn clone_lattice_from_value(v: &Value, path: &str) -> Result<Vec<CloneRep>> {
    let epath = format!("{path}.elements");
    array(field(v, path, "elements")?, &epath)?
        .iter()
        .enumerate()
        .map(|(k, e)| {
            let at = format!("{epath}[{k}]");
            clone_rep_from_value(field(e, &at, "clone")?, &format!("{at}.clone"))
        })
        .collect()
}

/// Pretty JSON with a trailing newline.
pub fn to_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

pub fn parse(text: &str, path: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| bad(path, e))
}
