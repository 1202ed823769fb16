//! Composition certificates for clone membership.

use std::collections::HashMap;
use std::sync::Arc;

use crate::arith::{linear_map, FnTable, LinearMapSpec, SquarefreeModulus};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub enum CloneStep {
    /// Generator of the clone, by index.
    Generator(usize),
    /// A linear map `x ↦ (⟨a_1, x_1⟩, ..., ⟨a_m, x_m⟩)`.
    Linear(LinearMapSpec),
    /// Binary addition.
    Plus,
    /// `outer ∘ (args...)`.
    Compose { outer: CNode, args: Vec<CNode> },
}

#[derive(Debug)]
pub struct CloneNode {
    pub step: CloneStep,
    pub arity: usize,
}

pub type CNode = Arc<CloneNode>;

/// Composition tree (shared as a DAG) over generators, linear maps and `+`.
#[derive(Clone, Debug)]
pub struct CloneCertificate {
    pub modulus: SquarefreeModulus,
    pub generators: Vec<FnTable>,
    pub root: CNode,
}

impl CloneNode {
    pub fn children(&self) -> Vec<&CNode> {
        match &self.step {
            CloneStep::Compose { outer, args } => std::iter::once(outer).chain(args.iter()).collect(),
            _ => vec![],
        }
    }

    pub fn tag(&self) -> &'static str {
        match &self.step {
            CloneStep::Generator(_) => "generator",
            CloneStep::Linear(_) => "linear",
            CloneStep::Plus => "plus",
            CloneStep::Compose { .. } => "compose",
        }
    }
}

pub fn generator(k: usize, arity: usize) -> CNode {
    Arc::new(CloneNode { step: CloneStep::Generator(k), arity })
}

pub fn linear(spec: LinearMapSpec) -> CNode {
    let arity = spec.arity();
    Arc::new(CloneNode { step: CloneStep::Linear(spec), arity })
}

pub fn plus() -> CNode {
    Arc::new(CloneNode { step: CloneStep::Plus, arity: 2 })
}

/// `outer ∘ args`, all arguments of arity `arity`.
pub fn compose(outer: &CNode, args: Vec<CNode>, arity: usize) -> CNode {
    debug_assert_eq!(outer.arity, args.len());
    debug_assert!(args.iter().all(|a| a.arity == arity));
    Arc::new(CloneNode { step: CloneStep::Compose { outer: outer.clone(), args }, arity })
}

/// `a + b`.
pub fn sum(a: &CNode, b: &CNode) -> CNode {
    compose(&plus(), vec![a.clone(), b.clone()], a.arity)
}

/// Linear map of arity `k` whose block-`b` coefficient vector is `f(b)`.
pub fn linear_by_block(m: usize, k: usize, f: impl Fn(usize) -> Vec<u8>) -> CNode {
    let coeffs = (0..m)
        .map(|b| {
            let v = f(b);
            debug_assert_eq!(v.len(), k);
            v
        })
        .collect();
    linear(LinearMapSpec { coeffs })
}

pub fn unit(k: usize, c: usize) -> Vec<u8> {
    (0..k).map(|j| (j == c) as u8).collect()
}

/// The `c`-th projection of arity `k`.
pub fn projection(m: usize, k: usize, c: usize) -> CNode {
    linear_by_block(m, k, |_| unit(k, c))
}

/// Views a node of arity `a ≤ k` at arity `k` (extra variables ignored).
pub fn lift(m: usize, node: &CNode, k: usize) -> CNode {
    if node.arity == k {
        return node.clone();
    }
    let args = (0..node.arity).map(|c| projection(m, k, c)).collect();
    compose(node, args, k)
}

/// `Σ_t node_t` with block-wise scalars: `scalars[t][b]` multiplies the
/// block-`b` component of `nodes[t]`. Built as a balanced tree of binary
/// sums so every intermediate table keeps the arity of the terms.
pub fn combination(m: usize, nodes: Vec<CNode>, scalars: &[Vec<u8>], arity: usize) -> CNode {
    if nodes.is_empty() {
        return linear_by_block(m, arity, |_| vec![0; arity]);
    }
    let mut layer: Vec<CNode> = nodes
        .iter()
        .zip(scalars)
        .map(|(n, s)| {
            if s.iter().all(|&x| x == 1) {
                n.clone()
            } else {
                compose(&linear_by_block(m, 1, |b| vec![s[b]]), vec![n.clone()], arity)
            }
        })
        .collect();
    while layer.len() > 1 {
        layer = layer.chunks(2).map(|c| if c.len() == 2 { sum(&c[0], &c[1]) } else { c[0].clone() }).collect();
    }
    layer.pop().expect("nonempty")
}

impl CloneCertificate {
    pub fn new(modulus: SquarefreeModulus, generators: Vec<FnTable>, root: CNode) -> Self {
        CloneCertificate { modulus, generators, root }
    }

    /// Nodes in children-first order, each once.
    pub fn nodes(&self) -> Vec<CNode> {
        let mut order = Vec::new();
        let mut seen: HashMap<*const CloneNode, ()> = HashMap::new();
        let mut stack: Vec<(CNode, bool)> = vec![(self.root.clone(), false)];
        while let Some((n, expanded)) = stack.pop() {
            let key = Arc::as_ptr(&n);
            if expanded {
                if seen.insert(key, ()).is_none() {
                    order.push(n);
                }
                continue;
            }
            if seen.contains_key(&key) {
                continue;
            }
            stack.push((n.clone(), true));
            for c in n.children() {
                if !seen.contains_key(&Arc::as_ptr(c)) {
                    stack.push((c.clone(), false));
                }
            }
        }
        order
    }

    pub fn size(&self) -> usize {
        self.nodes().len()
    }

    /// Evaluates the tree; every intermediate table is computed once.
    pub fn replay(&self) -> Result<FnTable> {
        let mut done: HashMap<*const CloneNode, FnTable> = HashMap::new();
        let md = &self.modulus;
        for n in self.nodes() {
            let table = match &n.step {
                CloneStep::Generator(k) => {
                    let g = self.generators.get(*k).ok_or_else(|| Error::Replay(format!("no generator {k}")))?;
                    if g.arity() != n.arity {
                        return Err(Error::Replay(format!("generator {k} has arity {}", g.arity())));
                    }
                    g.clone()
                }
                CloneStep::Linear(spec) => linear_map(md, spec)?,
                CloneStep::Plus => linear_map(md, &LinearMapSpec { coeffs: vec![vec![1, 1]; md.m()] })?,
                CloneStep::Compose { outer, args } => {
                    let o = &done[&Arc::as_ptr(outer)];
                    let a: Vec<FnTable> = args.iter().map(|x| done[&Arc::as_ptr(x)].clone()).collect();
                    o.compose_with_arity(&a, n.arity)?
                }
            };
            if table.arity() != n.arity {
                return Err(Error::Replay(format!("{} node has arity {}, expected {}", n.tag(), table.arity(), n.arity)));
            }
            done.insert(Arc::as_ptr(&n), table);
        }
        Ok(done.remove(&Arc::as_ptr(&self.root)).expect("root visited"))
    }

    pub fn verify(&self, expected: &FnTable) -> Result<()> {
        if &self.replay()? != expected {
            return Err(Error::Replay("certificate evaluates to a different table".into()));
        }
        Ok(())
    }
}
