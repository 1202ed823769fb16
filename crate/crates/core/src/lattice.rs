//! Hasse diagrams of finite posets and their DOT export.

use crate::error::Result;

/// Covering pairs `(a, b)` with `a < b`, by transitive reduction of `leq`.
pub fn hasse(n: usize, leq: impl Fn(usize, usize) -> Result<bool>) -> Result<Vec<(usize, usize)>> {
    let mut le = vec![vec![false; n]; n];
    for (a, row) in le.iter_mut().enumerate() {
        for (b, cell) in row.iter_mut().enumerate() {
            *cell = a == b || leq(a, b)?;
        }
    }
    let lt = |a: usize, b: usize| a != b && le[a][b] && !le[b][a];
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if lt(a, b) && !(0..n).any(|c| lt(a, c) && lt(c, b)) {
                edges.push((a, b));
            }
        }
    }
    Ok(edges)
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// DOT digraph with one node per label and one edge per covering pair,
/// drawn bottom to top.
pub fn to_dot(name: &str, labels: &[String], edges: &[(usize, usize)]) -> String {
    let mut out = format!("digraph \"{}\" {{\n  rankdir=BT;\n  node [shape=box];\n", escape(name));
    for (k, l) in labels.iter().enumerate() {
        out.push_str(&format!("  n{k} [label=\"{}\"];\n", escape(l)));
    }
    for (a, b) in edges {
        out.push_str(&format!("  n{a} -> n{b};\n"));
    }
    out.push_str("}\n");
    out
}
