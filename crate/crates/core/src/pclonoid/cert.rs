//! Derivation DAGs for polynomial clonoid membership.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::{CompositionSpec, RPoly};

/// One derivation step.
#[derive(Clone, Debug)]
pub enum Step {
    /// The generator with this index.
    Generator(usize),
    /// `a·left + b·right`.
    LinearCombination { a: u32, b: u32, left: Node, right: Node },
    /// `x_r := Σ_c matrix[r][c] x_c`.
    MatrixSubstitution { matrix: Vec<Vec<u8>>, child: Node },
    /// `x_slot := 0`.
    ZeroSubstitution { slot: usize, child: Node },
    /// `x_k := x_{map[k]}`.
    VariableIdentification { map: Vec<usize>, child: Node },
    /// Substitutes `inner` into `slot` of `outer`; the first variable of
    /// `inner` becomes `x_slot` and its variable `k ≥ 1` becomes
    /// `x_{fresh + k − 1}`.
    SelfComposition { slot: usize, fresh: usize, outer: Node, inner: Node },
}

#[derive(Debug)]
pub struct CertNode {
    pub step: Step,
    pub claim: RPoly,
}

pub type Node = Arc<CertNode>;

/// A derivation of `root.claim` from `generators`.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub generators: Vec<RPoly>,
    pub root: Node,
}

/// Variable map used by a self-composition step.
pub fn composition_map(inner_vars: usize, slot: usize, fresh: usize) -> Vec<usize> {
    (0..inner_vars).map(|k| if k == 0 { slot } else { fresh + k - 1 }).collect()
}

fn apply(step: &Step, claims: &dyn Fn(&Node) -> RPoly, generators: &[RPoly]) -> Result<RPoly> {
    match step {
        Step::Generator(k) => generators.get(*k).cloned().ok_or_else(|| Error::Replay(format!("no generator {k}"))),
        Step::LinearCombination { a, b, left, right } => claims(left).lin_comb(*a, &claims(right), *b),
        Step::MatrixSubstitution { matrix, child } => claims(child).linear_substitute(matrix),
        Step::ZeroSubstitution { slot, child } => Ok(claims(child).zero_substitute(*slot)),
        Step::VariableIdentification { map, child } => claims(child).rename(map),
        Step::SelfComposition { slot, fresh, outer, inner } => {
            let o = claims(outer);
            let i = claims(inner);
            let moved = i.rename(&composition_map(i.num_vars(), *slot, *fresh))?;
            o.compose_at(&CompositionSpec { slots: vec![*slot], replacements: vec![moved] })
        }
    }
}

impl CertNode {
    pub fn children(&self) -> Vec<&Node> {
        match &self.step {
            Step::Generator(_) => vec![],
            Step::LinearCombination { left, right, .. } => vec![left, right],
            Step::MatrixSubstitution { child, .. }
            | Step::ZeroSubstitution { child, .. }
            | Step::VariableIdentification { child, .. } => vec![child],
            Step::SelfComposition { outer, inner, .. } => vec![outer, inner],
        }
    }

    pub fn tag(&self) -> &'static str {
        match &self.step {
            Step::Generator(_) => "generator",
            Step::LinearCombination { .. } => "linear-combination",
            Step::MatrixSubstitution { .. } => "matrix-substitution",
            Step::ZeroSubstitution { .. } => "zero-substitution",
            Step::VariableIdentification { .. } => "variable-identification",
            Step::SelfComposition { .. } => "self-composition",
        }
    }
}

/// Builds nodes whose claims are computed from their children.
pub struct Builder<'a> {
    generators: &'a [RPoly],
}

impl<'a> Builder<'a> {
    pub fn new(generators: &'a [RPoly]) -> Self {
        Builder { generators }
    }

    fn node(&self, step: Step) -> Result<Node> {
        let claim = apply(&step, &|n: &Node| n.claim.clone(), self.generators)?;
        Ok(Arc::new(CertNode { step, claim }))
    }

    pub fn generator(&self, k: usize) -> Result<Node> {
        self.node(Step::Generator(k))
    }

    pub fn lin(&self, a: u32, left: &Node, b: u32, right: &Node) -> Result<Node> {
        self.node(Step::LinearCombination { a, b, left: left.clone(), right: right.clone() })
    }

    pub fn matrix(&self, matrix: Vec<Vec<u8>>, child: &Node) -> Result<Node> {
        self.node(Step::MatrixSubstitution { matrix, child: child.clone() })
    }

    pub fn zero_sub(&self, slot: usize, child: &Node) -> Result<Node> {
        self.node(Step::ZeroSubstitution { slot, child: child.clone() })
    }

    pub fn identify(&self, map: Vec<usize>, child: &Node) -> Result<Node> {
        self.node(Step::VariableIdentification { map, child: child.clone() })
    }

    pub fn compose(&self, slot: usize, fresh: usize, outer: &Node, inner: &Node) -> Result<Node> {
        self.node(Step::SelfComposition { slot, fresh, outer: outer.clone(), inner: inner.clone() })
    }
}

impl Certificate {
    pub fn claim(&self) -> &RPoly {
        &self.root.claim
    }

    /// Nodes in children-first order, each listed once.
    pub fn nodes(&self) -> Vec<Node> {
        let mut order = Vec::new();
        let mut seen: HashMap<*const CertNode, ()> = HashMap::new();
        let mut stack: Vec<(Node, bool)> = vec![(self.root.clone(), false)];
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

    /// Recomputes every node from the generators and checks its claim;
    /// returns the recomputed root.
    pub fn replay(&self) -> Result<RPoly> {
        let mut done: HashMap<*const CertNode, RPoly> = HashMap::new();
        for n in self.nodes() {
            let value = {
                let lookup = |c: &Node| done[&Arc::as_ptr(c)].clone();
                apply(&n.step, &lookup, &self.generators)?
            };
            if value != n.claim {
                return Err(Error::Replay(format!("{} node disagrees with its claim", n.tag())));
            }
            done.insert(Arc::as_ptr(&n), value);
        }
        Ok(done.remove(&Arc::as_ptr(&self.root)).expect("root visited"))
    }

    /// Replays and compares with `expected`.
    pub fn verify(&self, expected: &RPoly) -> Result<()> {
        let got = self.replay()?;
        if &got != expected {
            return Err(Error::Replay("certificate derives a different polynomial".into()));
        }
        Ok(())
    }
}
