//! Turns polynomial clonoid derivations into composition certificates.
//!
//! A polynomial `h` in component `i` stands for its induced function. Each
//! polynomial step becomes a composition with linear maps: the block-`i`
//! coordinates carry the polynomial variables, the other blocks carry the
//! coefficient arguments unchanged.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::pclonoid::{CertNode, Certificate, Node, Step};

use super::cert::{combination, compose, lift, linear_by_block, projection, sum, unit, CNode};

/// Smallest working arity that accommodates every step of the derivation.
pub fn working_arity(root: &Node, leaf_arities: &[usize]) -> usize {
    let cert = Certificate { generators: vec![], root: root.clone() };
    let mut w = leaf_arities.iter().copied().max().unwrap_or(0);
    for n in cert.nodes() {
        w = w.max(n.claim.num_vars()).max(n.claim.sig().arity);
        match &n.step {
            Step::MatrixSubstitution { matrix, .. } => {
                w = w.max(matrix.len()).max(matrix.first().map_or(0, |r| r.len()));
            }
            Step::VariableIdentification { map, .. } => {
                w = w.max(map.len()).max(map.iter().map(|&x| x + 1).max().unwrap_or(0));
            }
            Step::SelfComposition { slot, fresh, inner, .. } => {
                w = w.max(slot + 1).max(fresh + inner.claim.num_vars().saturating_sub(1));
            }
            _ => {}
        }
    }
    w.max(1)
}

/// Translates the derivation rooted at `root` into a clone certificate of
/// arity `w` for component `i` of an `m`-prime modulus. `leaves[k]` certifies
/// the induced function of generator `k`.
pub fn translate(root: &Node, leaves: &[CNode], m: usize, i: usize, w: usize) -> Result<CNode> {
    let cert = Certificate { generators: vec![], root: root.clone() };
    let mut done: HashMap<*const CertNode, CNode> = HashMap::new();
    let get = |done: &HashMap<*const CertNode, CNode>, n: &Node| done[&Arc::as_ptr(n)].clone();
    // Argument list for a substitution: block i gets `row(r)`, the others keep coordinate r.
    let subst_args = |row: &dyn Fn(usize) -> Vec<u8>| -> Vec<CNode> {
        (0..w).map(|r| linear_by_block(m, w, |b| if b == i { row(r) } else { unit(w, r) })).collect()
    };
    for n in cert.nodes() {
        let out = match &n.step {
            Step::Generator(k) => {
                let leaf = leaves.get(*k).ok_or_else(|| Error::Replay(format!("no leaf certificate for generator {k}")))?;
                if leaf.arity > w {
                    return Err(Error::ArityMismatch(format!("leaf arity {} above working arity {w}", leaf.arity)));
                }
                lift(m, leaf, w)
            }
            Step::LinearCombination { a, b, left, right } => {
                let scal = |x: u32| (0..m).map(|bl| if bl == i { x as u8 } else { 0 }).collect::<Vec<u8>>();
                combination(m, vec![get(&done, left), get(&done, right)], &[scal(*a), scal(*b)], w)
            }
            Step::MatrixSubstitution { matrix, child } => {
                let row = |r: usize| {
                    let mut v = vec![0u8; w];
                    if let Some(mr) = matrix.get(r) {
                        v[..mr.len()].copy_from_slice(mr);
                    }
                    v
                };
                compose(&get(&done, child), subst_args(&row), w)
            }
            Step::ZeroSubstitution { slot, child } => {
                let row = |r: usize| if r == *slot { vec![0u8; w] } else { unit(w, r) };
                compose(&get(&done, child), subst_args(&row), w)
            }
            Step::VariableIdentification { map, child } => {
                let row = |r: usize| unit(w, map.get(r).copied().unwrap_or(r));
                compose(&get(&done, child), subst_args(&row), w)
            }
            Step::SelfComposition { slot, fresh, outer, inner } => {
                let iv = inner.claim.num_vars();
                let moved_row = |c: usize| {
                    if c >= iv {
                        vec![0u8; w]
                    } else if c == 0 {
                        unit(w, *slot)
                    } else {
                        unit(w, fresh + c - 1)
                    }
                };
                let moved = compose(&get(&done, inner), subst_args(&moved_row), w);
                let carry = linear_by_block(m, w, |b| if b == i { vec![0; w] } else { unit(w, *slot) });
                let args = (0..w)
                    .map(|c| if c == *slot { sum(&moved, &carry) } else { projection(m, w, c) })
                    .collect();
                compose(&get(&done, outer), args, w)
            }
        };
        done.insert(Arc::as_ptr(&n), out);
    }
    Ok(done.remove(&Arc::as_ptr(root)).expect("root visited"))
}

/// Restricts a certificate of arity `w` whose block-`i` variables beyond `k`
/// are unused and whose coefficients read only coordinate 1 to arity `k`.
pub fn shrink(node: &CNode, m: usize, i: usize, k: usize) -> CNode {
    let w = node.arity;
    if w == k {
        return node.clone();
    }
    let args = (0..w)
        .map(|c| {
            linear_by_block(m, k, |b| {
                if b == i {
                    if c < k {
                        unit(k, c)
                    } else {
                        vec![0; k]
                    }
                } else if c == 0 {
                    unit(k, 0)
                } else {
                    vec![0; k]
                }
            })
        })
        .collect();
    compose(node, args, k)
}
