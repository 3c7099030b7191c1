//! Closures of a formula set under the lattice connectives (and optionally
//! negation). Closures are infinite, so they are exposed as a membership
//! predicate plus a size-bounded enumerator.

use std::collections::BTreeSet;

use super::formula::{LFormula, LKind};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum ClosureMode {
    /// Closure under `∧`, `∨`.
    AndOr,
    /// Closure under `∧`, `∨`, `¬`.
    AndOrNot,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClosureSpec {
    pub base: BTreeSet<LFormula>,
    pub mode: ClosureMode,
    pub size_bound: usize,
}

impl ClosureSpec {
    pub fn new(
        base: impl IntoIterator<Item = LFormula>,
        mode: ClosureMode,
        size_bound: usize,
    ) -> Self {
        ClosureSpec {
            base: base.into_iter().collect(),
            mode,
            size_bound,
        }
    }
}

pub fn closure_contains(spec: &ClosureSpec, f: &LFormula) -> bool {
    if spec.base.contains(f) {
        return true;
    }
    match f.kind() {
        LKind::And(a, b) | LKind::Or(a, b) => {
            closure_contains(spec, a) && closure_contains(spec, b)
        }
        LKind::Not(a) if spec.mode == ClosureMode::AndOrNot => closure_contains(spec, a),
        _ => false,
    }
}

/// All members of size at most `size_bound`, sorted by the formula order
/// (size first), without duplicates.
pub fn enumerate_closure(spec: &ClosureSpec) -> Vec<LFormula> {
    let mut out = Vec::new();
    for_each_in_closure(spec, |f| out.push(f.clone()));
    out
}

/// Streaming form of [`enumerate_closure`]: the largest size layer is never
/// materialised.
pub fn for_each_in_closure(spec: &ClosureSpec, mut visit: impl FnMut(&LFormula)) {
    let mut layers: Vec<Vec<LFormula>> = Vec::new();
    for s in 0..=spec.size_bound {
        let base_s: Vec<LFormula> = spec
            .base
            .iter()
            .filter(|f| f.size() == s)
            .cloned()
            .collect();
        let last = s == spec.size_bound;
        if s == 0 {
            base_s.iter().for_each(&mut visit);
            layers.push(base_s);
            continue;
        }
        // Generated members come out already sorted: connectives in rank
        // order, then children in order.
        let mut gen: Vec<LFormula> = Vec::new();
        for ctor in [
            LFormula::and as fn(&LFormula, &LFormula) -> LFormula,
            LFormula::or,
        ] {
            for i in 0..s {
                for a in &layers[i] {
                    for b in &layers[s - 1 - i] {
                        gen.push(ctor(a, b));
                    }
                }
            }
        }
        if spec.mode == ClosureMode::AndOrNot {
            for a in &layers[s - 1] {
                gen.push(LFormula::not(a));
            }
        }
        let merged = merge_sorted(gen, base_s);
        merged.iter().for_each(&mut visit);
        if !last {
            layers.push(merged);
        }
    }
}

fn merge_sorted(a: Vec<LFormula>, b: Vec<LFormula>) -> Vec<LFormula> {
    if b.is_empty() {
        return a;
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let pick_a = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) => match x.cmp(y) {
                std::cmp::Ordering::Less => true,
                std::cmp::Ordering::Greater => false,
                std::cmp::Ordering::Equal => {
                    j += 1;
                    true
                }
            },
            (Some(_), None) => true,
            _ => false,
        };
        if pick_a {
            out.push(a[i].clone());
            i += 1;
        } else {
            out.push(b[j].clone());
            j += 1;
        }
    }
    out
}

/// Number of members of each size up to the bound, without building them.
pub fn closure_layer_counts(spec: &ClosureSpec) -> Vec<u128> {
    // Only exact when no base member is itself a lattice compound of other
    // members; used for sizing reports.
    let mut n: Vec<u128> = Vec::new();
    for s in 0..=spec.size_bound {
        let base_s = spec.base.iter().filter(|f| f.size() == s).count() as u128;
        if s == 0 {
            n.push(base_s);
            continue;
        }
        let pairs: u128 = (0..s).map(|i| n[i] * n[s - 1 - i]).sum();
        let neg = if spec.mode == ClosureMode::AndOrNot {
            n[s - 1]
        } else {
            0
        };
        n.push(2 * pairs + neg + base_s);
    }
    n
}
