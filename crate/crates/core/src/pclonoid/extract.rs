//! Monomial extraction with certificates.

use crate::error::{Error, Result};
use crate::linalg::{inv_mod, pow_mod};
use crate::poly::{CoeffFn, Monomial, RPoly};

use super::cert::{Builder, Certificate, Node};

fn single(gen: &RPoly, body: impl FnOnce(&Builder, Node) -> Result<Node>) -> Result<Certificate> {
    let generators = vec![gen.clone()];
    let root = {
        let b = Builder::new(&generators);
        let g = b.generator(0)?;
        body(&b, g)?
    };
    Ok(Certificate { generators, root })
}

/// Zeroes every variable in `vars` that occurs in the node's claim.
fn zero_vars(b: &Builder, mut node: Node, vars: impl IntoIterator<Item = usize>) -> Result<Node> {
    for k in vars {
        if node.claim.monomials().any(|m| m.exp(k) > 0) {
            node = b.zero_sub(k, &node)?;
        }
    }
    Ok(node)
}

/// From a node claiming `r·x_1⋯x_d + g` derive `r·x_1⋯x_d`.
pub fn isolate_node(b: &Builder, node: Node, d: usize) -> Result<Node> {
    let vars = node.claim.num_vars();
    let mut cur = zero_vars(b, node, d..vars)?;
    let full = Monomial::multilinear(d);
    let p = cur.claim.p();
    if cur.claim.coeff_values(&full).is_none() {
        return Err(Error::Precondition(format!("no x_1⋯x_{d} term to isolate")));
    }
    if cur.claim.monomials().any(|m| m != &full && m.degree() > d) {
        return Err(Error::Precondition(format!("remainder has total degree above {d}")));
    }
    loop {
        let l = (0..d).find(|&l| cur.claim.monomials().any(|m| m != &full && m.exp(l) == 0));
        let Some(l) = l else { break };
        let zeroed = b.zero_sub(l, &cur)?;
        cur = b.lin(1, &cur, p - 1, &zeroed)?;
    }
    if cur.claim.len() != 1 {
        return Err(Error::Precondition("remainder shares the full support".into()));
    }
    Ok(cur)
}

/// Isolates the `x_1⋯x_d` term of `f` (variables beyond `x_d` are zeroed first).
pub fn isolate_full_support(f: &RPoly, d: usize) -> Result<(RPoly, Certificate)> {
    let cert = single(f, |b, g| isolate_node(b, g, d))?;
    Ok((cert.claim().clone(), cert))
}

/// From a node whose claim contains `m` as a monomial of maximal total
/// degree `d` with coefficient `r`, derive `r·x_1⋯x_d`.
pub fn extract_node(b: &Builder, node: Node, m: &Monomial) -> Result<Node> {
    let f = &node.claim;
    let d = m.degree();
    if f.coeff_values(m).is_none() {
        return Err(Error::Precondition(format!("{m:?} is not a monomial of the polynomial")));
    }
    if f.total_degree() != d {
        return Err(Error::Precondition(format!("{m:?} does not have maximal total degree")));
    }
    let p = f.p();
    let vars = f.num_vars();
    let support = m.support();
    let mut cur = zero_vars(b, node.clone(), (0..vars).filter(|k| m.exp(*k) == 0))?;
    // Move the support to x_1..x_u.
    let u = support.len();
    let mut map = vec![0usize; vars.max(1)];
    let mut next = u;
    for k in 0..vars {
        map[k] = match support.iter().position(|&s| s == k) {
            Some(pos) => pos,
            None => {
                next += 1;
                next - 1
            }
        };
    }
    if map.iter().enumerate().any(|(k, &t)| k != t) && cur.claim.num_vars() > 0 {
        cur = b.identify(map[..cur.claim.num_vars()].to_vec(), &cur)?;
    }
    let mut exps: Vec<u8> = support.iter().map(|&k| m.exp(k)).collect();
    while let Some(j) = exps.iter().position(|&e| e > 1) {
        let s = exps[j] as u32;
        let fresh = exps.len();
        let width = fresh + 1;
        let matrix: Vec<Vec<u8>> = (0..fresh)
            .map(|r| {
                let mut row = vec![0u8; width];
                row[r] = 1;
                if r == j {
                    row[fresh] = 1;
                }
                row
            })
            .collect();
        let moved = b.matrix(matrix, &cur)?;
        cur = b.lin(inv_mod(s % p, p), &moved, 0, &moved)?;
        exps[j] -= 1;
        exps.push(1);
    }
    isolate_node(b, cur, d)
}

/// `r·x_1⋯x_d` from a maximal-degree monomial `m` of `f`.
pub fn extract_max_degree_monomial(f: &RPoly, m: &Monomial) -> Result<(RPoly, Certificate)> {
    let cert = single(f, |b, g| extract_node(b, g, m))?;
    Ok((cert.claim().clone(), cert))
}

/// Maps the variables of `x_1⋯x_D` onto the exponent pattern `m`: the first
/// `m_1` variables go to `x_1`, and so on; the last variable of the support
/// takes whatever remains.
fn identification_map(total: usize, m: &Monomial) -> Vec<usize> {
    let support = m.support();
    let last = *support.last().expect("nonzero target");
    let mut map = Vec::with_capacity(total);
    for &k in &support {
        let take = if k == last { total - map.len() } else { m.exp(k) as usize };
        map.extend(std::iter::repeat(k).take(take));
    }
    map
}

fn congruent(p: u32, a: usize, b: usize) -> bool {
    let q = (p - 1) as usize;
    a % q == b % q
}

/// From a node claiming `r·x_1⋯x_d` (`d ≥ 2`) derive `r·x^m`.
pub fn degree_shift_node(b: &Builder, node: Node, d: usize, m: &Monomial) -> Result<Node> {
    let p = node.claim.p();
    if d < 2 {
        return Err(Error::Precondition(format!("degree shift needs d >= 2, got {d}")));
    }
    if m.exps().is_empty() {
        return Err(Error::Precondition("target monomial is constant".into()));
    }
    if m.exps().iter().any(|&e| e as u32 >= p) {
        return Err(Error::Precondition("target exponent above p - 1".into()));
    }
    let target = m.degree();
    if !congruent(p, target, d) {
        return Err(Error::Precondition(format!("degree {target} is not congruent to {d} mod {}", p - 1)));
    }
    let step = (p as usize - 1) * (d - 1);
    let mut s = 0usize;
    while d + s * step < target {
        s += 1;
    }
    let mut cur = node.clone();
    let mut width = d;
    for _ in 0..s * (p as usize - 1) {
        cur = b.compose(width - 1, width, &cur, &node)?;
        width += d - 1;
    }
    let map = identification_map(width, m);
    if map.iter().enumerate().all(|(k, &t)| k == t) {
        return Ok(cur);
    }
    b.identify(map, &cur)
}

/// Certificate deriving `r·x^m` from `r·x_1⋯x_d`.
pub fn degree_shift(r: &CoeffFn, d: usize, m: &Monomial) -> Result<Certificate> {
    let base = RPoly::monomial(r, Monomial::multilinear(d));
    single(&base, |b, g| degree_shift_node(b, g, d, m))
}

/// Every monomial of `f`, each certified to lie in the clonoid generated by `f`.
///
/// Repeatedly peels the smallest monomial of maximal degree: extract it as
/// `r·x_1⋯x_d`, identify variables back to its exponent pattern, subtract.
pub fn monomials_of(f: &RPoly) -> Result<Vec<(RPoly, Certificate)>> {
    if f.is_zero() {
        return Err(Error::Precondition("zero polynomial has no monomials".into()));
    }
    let generators = vec![f.clone()];
    let b = Builder::new(&generators);
    let p = f.p();
    let mut cur = b.generator(0)?;
    let mut out = Vec::new();
    while !cur.claim.is_zero() {
        let d = cur.claim.total_degree();
        let m = cur.claim.monomials().find(|m| m.degree() == d).expect("nonzero").clone();
        let h = if cur.claim.len() == 1 {
            cur.clone()
        } else {
            let flat = extract_node(&b, cur.clone(), &m)?;
            if m.is_multilinear() && m.support() == (0..d).collect::<Vec<_>>() {
                flat
            } else {
                b.identify(identification_map(d, &m), &flat)?
            }
        };
        out.push((h.claim.clone(), Certificate { generators: generators.clone(), root: h.clone() }));
        if Node::ptr_eq(&h, &cur) {
            break;
        }
        cur = b.lin(1, &cur, p - 1, &h)?;
    }
    Ok(out)
}

/// From a node whose claim contains `m`, derive the single term `r·x^m` by
/// zeroing, support isolation and character sums over scalings.
pub fn project_node(b: &Builder, node: Node, m: &Monomial) -> Result<Node> {
    if node.claim.coeff_values(m).is_none() {
        return Err(Error::Precondition(format!("{m:?} is not a monomial of the polynomial")));
    }
    let p = node.claim.p();
    let vars = node.claim.num_vars();
    let mut cur = zero_vars(b, node, (0..vars).filter(|&k| m.exp(k) == 0))?;
    let support = m.support();
    for &v in &support {
        if cur.claim.monomials().any(|x| x.exp(v) == 0) {
            let z = b.zero_sub(v, &cur)?;
            cur = b.lin(1, &cur, p - 1, &z)?;
        }
    }
    let width = cur.claim.num_vars();
    for &v in &support {
        if cur.claim.monomials().all(|x| x.exp(v) == m.exp(v)) {
            continue;
        }
        // Σ_{a ≠ 0} a^{-e} f(x_v := a x_v) = (p − 1)·(terms with exponent e at x_v).
        let e = m.exp(v) as u32;
        let norm = p - 1; // (p − 1)^{-1} = −1 in Z_p
        let mut acc: Option<Node> = None;
        for a in 1..p {
            let matrix: Vec<Vec<u8>> = (0..width)
                .map(|r| (0..width).map(|c| if r != c { 0 } else if r == v { a as u8 } else { 1 }).collect())
                .collect();
            let scaled = b.matrix(matrix, &cur)?;
            let c = norm * inv_mod(pow_mod(a, e, p), p) % p;
            acc = Some(match acc {
                None => b.lin(c, &scaled, 0, &scaled)?,
                Some(prev) => b.lin(1, &prev, c, &scaled)?,
            });
        }
        cur = acc.expect("p >= 2");
    }
    if cur.claim.len() != 1 {
        return Err(Error::Precondition("projection left extra terms".into()));
    }
    Ok(cur)
}

/// Certificate deriving the `m`-term of `f`.
pub fn project_monomial(f: &RPoly, m: &Monomial) -> Result<(RPoly, Certificate)> {
    let cert = single(f, |b, g| project_node(b, g, m))?;
    Ok((cert.claim().clone(), cert))
}
