//! Decision procedure for the distributive-lattice layer of simple sequents
//! `A ⇒ B`. Formulas other than `∧`, `∨`, `⊤`, `⊥` are treated as opaque
//! generators. The antecedent is distributed into a join of meets, and a
//! meet lies below `B` exactly when `B` is true under the valuation that
//! makes the meet's conjuncts true. Every step is an explicit `D`, `∧`, `∨`
//! or cut node, so the result goes through the ordinary checker.

use std::cell::Cell;

use super::build::{and_l, and_r, bot, comm_and, dist, id, or_l, or_r, proj, top, trans};
use super::derivation::{Proof, Rule};
use crate::syntax::{LFormula, LKind, Sequent, StructTree};

/// Meets examined before giving up; the distributed form can be exponential.
const MEET_BUDGET: usize = 4096;

/// A derivation of `goal` from the lattice laws alone, if the sequent is
/// simple and valid in every distributive lattice over its generators.
pub fn lattice_proof(goal: &Sequent) -> Option<Proof> {
    let a = goal.simple_lhs()?;
    let budget = Cell::new(MEET_BUDGET);
    prove(a, &goal.succedent, &budget)
}

fn prove(a: &LFormula, b: &LFormula, budget: &Cell<usize>) -> Option<Proof> {
    if a == b {
        return Some(id(a));
    }
    match b.kind() {
        LKind::Top => return Some(top(Some(StructTree::leaf(a)))),
        LKind::And(b1, b2) => return Some(and_r(&prove(a, b1, budget)?, &prove(a, b2, budget)?)),
        _ => {}
    }
    match a.kind() {
        LKind::Or(a1, a2) => {
            return Some(or_l(&[], &prove(a1, b, budget)?, &prove(a2, b, budget)?));
        }
        LKind::Bottom => return Some(bot(StructTree::leaf(a), Vec::new(), b)),
        _ => {}
    }
    if let Some((d, a1, a2)) = split(a) {
        let rest = or_l(&[], &prove(&a1, b, budget)?, &prove(&a2, b, budget)?);
        return Some(trans(&d, &rest));
    }
    budget.set(budget.get().checked_sub(1)?);
    if let Some(to_bot) = proj(a, &LFormula::bot()) {
        return Some(trans(&to_bot, &bot(StructTree::leaf(&LFormula::bot()), Vec::new(), b)));
    }
    below(a, b)
}

/// For a meet `a` that contains a disjunction: `a ⇒ a1 ∨ a2`, where each
/// `a_i` has one disjunction fewer.
fn split(a: &LFormula) -> Option<(Proof, LFormula, LFormula)> {
    match a.kind() {
        LKind::Or(x, y) => Some((id(a), x.clone(), y.clone())),
        LKind::And(x, y) => {
            if let Some((dx, x1, x2)) = split(x) {
                // x∧y ⇒ (x1∨x2)∧y ⇒ y∧(x1∨x2) ⇒ (y∧x1)∨(y∧x2) ⇒ (x1∧y)∨(x2∧y)
                let x12 = LFormula::or(&x1, &x2);
                let lift = if dx.rule == Rule::Id {
                    id(a)
                } else {
                    and_r(&and_l(&dx, &[], 1, y), &and_l(&id(y), &[], 2, x))
                };
                let (l1, l2) = (LFormula::and(&x1, y), LFormula::and(&x2, y));
                let back = or_l(
                    &[],
                    &or_r(&comm_and(y, &x1), 1, &l2),
                    &or_r(&comm_and(y, &x2), 2, &l1),
                );
                let d = trans(
                    &trans(&trans(&lift, &comm_and(&x12, y)), &dist(y, &x1, &x2)),
                    &back,
                );
                Some((d, l1, l2))
            } else {
                let (dy, y1, y2) = split(y)?;
                // x∧y ⇒ x∧(y1∨y2) ⇒ (x∧y1)∨(x∧y2)
                let lift = if dy.rule == Rule::Id {
                    id(a)
                } else {
                    and_r(&and_l(&id(x), &[], 1, y), &and_l(&dy, &[], 2, x))
                };
                let d = trans(&lift, &dist(x, &y1, &y2));
                Some((d, LFormula::and(x, &y1), LFormula::and(x, &y2)))
            }
        }
        _ => None,
    }
}

/// `a ⇒ b` for a disjunction-free meet `a` without `⊥`.
fn below(a: &LFormula, b: &LFormula) -> Option<Proof> {
    if let Some(p) = proj(a, b) {
        return Some(p);
    }
    match b.kind() {
        LKind::Top => Some(top(Some(StructTree::leaf(a)))),
        LKind::And(b1, b2) => Some(and_r(&below(a, b1)?, &below(a, b2)?)),
        LKind::Or(b1, b2) => {
            if holds(a, b1) {
                Some(or_r(&below(a, b1)?, 1, b2))
            } else {
                Some(or_r(&below(a, b2)?, 2, b1))
            }
        }
        _ => None,
    }
}

/// Truth of `b` when exactly the conjuncts of the meet `a` are true.
fn holds(a: &LFormula, b: &LFormula) -> bool {
    match b.kind() {
        LKind::Top => true,
        LKind::Bottom => false,
        LKind::And(x, y) => holds(a, x) && holds(a, y),
        LKind::Or(x, y) => holds(a, x) || holds(a, y),
        _ => proj(a, b).is_some(),
    }
}
