//! Constructors for derivation nodes. Each one computes its conclusion from
//! its premises; a misuse produces a node the checker rejects, so callers
//! validate the final derivation rather than every step.

use super::derivation::{Derivation, Inst, Proof, Rule};
use crate::syntax::{LFormula, LKind, Sequent, Step, StructTree};

fn ant(p: &Proof) -> Option<&StructTree> {
    p.conclusion.antecedent.as_ref()
}

fn succ(p: &Proof) -> &LFormula {
    &p.conclusion.succedent
}

fn leaf_at(p: &Proof, path: &[Step]) -> LFormula {
    ant(p)
        .and_then(|t| t.at(path))
        .and_then(StructTree::as_leaf)
        .cloned()
        .expect("premise has a formula at the given position")
}

fn replaced(p: &Proof, path: &[Step], with: StructTree) -> StructTree {
    ant(p)
        .and_then(|t| t.replace(path, with))
        .expect("premise has the given position")
}

pub fn id(a: &LFormula) -> Proof {
    Derivation::leaf(Sequent::simple(a, a), Rule::Id)
}

pub fn assumption(s: &Sequent) -> Proof {
    Derivation::leaf(s.clone(), Rule::Assumption)
}

/// `Γ ⇒ ⊤`.
pub fn top(antecedent: Option<StructTree>) -> Proof {
    Derivation::leaf(Sequent::new(antecedent, LFormula::top()), Rule::Top)
}

/// `Γ[⊥] ⇒ A` with the `⊥` leaf at `path`.
pub fn bot(antecedent: StructTree, path: Vec<Step>, a: &LFormula) -> Proof {
    Derivation::new(
        Sequent::tree(antecedent, a),
        Rule::Bot,
        Inst::at(path),
        Vec::new(),
    )
}

/// `A ∧ (B ∨ C) ⇒ (A ∧ B) ∨ (A ∧ C)`.
pub fn dist(a: &LFormula, b: &LFormula, c: &LFormula) -> Proof {
    let lhs = LFormula::and(a, &LFormula::or(b, c));
    let rhs = LFormula::or(&LFormula::and(a, b), &LFormula::and(a, c));
    Derivation::leaf(Sequent::simple(&lhs, &rhs), Rule::D)
}

/// `A ∧ ¬A ⇒ ⊥`.
pub fn neg1(a: &LFormula) -> Proof {
    let lhs = LFormula::and(a, &LFormula::not(a));
    Derivation::leaf(Sequent::simple(&lhs, &LFormula::bot()), Rule::Neg1)
}

/// `⊤ ⇒ A ∨ ¬A`.
pub fn neg2(a: &LFormula) -> Proof {
    let rhs = LFormula::or(a, &LFormula::not(a));
    Derivation::leaf(Sequent::simple(&LFormula::top(), &rhs), Rule::Neg2)
}

/// From `Δ ⇒ A` and `Γ[A] ⇒ B` (with `A` at `path`) infer `Γ[Δ] ⇒ B`.
/// An empty `Δ` is allowed when `Γ[A]` is just `A`.
pub fn cut(path: &[Step], left: &Proof, right: &Proof) -> Proof {
    let a = succ(left).clone();
    let antecedent = match ant(left) {
        Some(delta) => Some(replaced(right, path, delta.clone())),
        None => None,
    };
    let inst = Inst {
        path: path.to_vec(),
        index: None,
        formula: Some(a),
    };
    Derivation::new(
        Sequent::new(antecedent, succ(right).clone()),
        Rule::Cut,
        inst,
        vec![left.clone(), right.clone()],
    )
}

/// Cut at the root: `Γ ⇒ A` and `A ⇒ B` give `Γ ⇒ B`.
pub fn trans(left: &Proof, right: &Proof) -> Proof {
    if right.rule == Rule::Id {
        return left.clone();
    }
    if left.rule == Rule::Id {
        return right.clone();
    }
    cut(&[], left, right)
}

/// `∧L`: the leaf at `path` of the premise is replaced by `A_i ∧ other`
/// (`i = 1`) or `other ∧ A_i` (`i = 2`).
pub fn and_l(prem: &Proof, path: &[Step], i: u8, other: &LFormula) -> Proof {
    let ai = leaf_at(prem, path);
    let conj = if i == 1 {
        LFormula::and(&ai, other)
    } else {
        LFormula::and(other, &ai)
    };
    let antecedent = replaced(prem, path, StructTree::leaf(&conj));
    Derivation::new(
        Sequent::tree(antecedent, succ(prem)),
        Rule::AndL,
        Inst {
            path: path.to_vec(),
            index: Some(i),
            formula: None,
        },
        vec![prem.clone()],
    )
}

pub fn and_r(left: &Proof, right: &Proof) -> Proof {
    let c = LFormula::and(succ(left), succ(right));
    Derivation::new(
        Sequent::new(left.conclusion.antecedent.clone(), c),
        Rule::AndR,
        Inst::default(),
        vec![left.clone(), right.clone()],
    )
}

/// `∨L` at `path`; the premises carry the two disjuncts there.
pub fn or_l(path: &[Step], left: &Proof, right: &Proof) -> Proof {
    let d = LFormula::or(&leaf_at(left, path), &leaf_at(right, path));
    let antecedent = replaced(left, path, StructTree::leaf(&d));
    Derivation::new(
        Sequent::tree(antecedent, succ(left)),
        Rule::OrL,
        Inst::at(path.to_vec()),
        vec![left.clone(), right.clone()],
    )
}

/// `∨R`: `Γ ⇒ A_i` gives `Γ ⇒ A_i ∨ other` (`i = 1`) or `Γ ⇒ other ∨ A_i`.
pub fn or_r(prem: &Proof, i: u8, other: &LFormula) -> Proof {
    let d = if i == 1 {
        LFormula::or(succ(prem), other)
    } else {
        LFormula::or(other, succ(prem))
    };
    Derivation::new(
        Sequent::new(prem.conclusion.antecedent.clone(), d),
        Rule::OrR,
        Inst::index(i),
        vec![prem.clone()],
    )
}

/// `·R`: `Γ ⇒ A` and `Δ ⇒ B` give `Γ ∘ Δ ⇒ A · B`.
pub fn prod_r(left: &Proof, right: &Proof) -> Proof {
    let t = StructTree::node(
        ant(left).expect("nonempty").clone(),
        ant(right).expect("nonempty").clone(),
    );
    Derivation::new(
        Sequent::tree(t, &LFormula::prod(succ(left), succ(right))),
        Rule::ProdR,
        Inst::default(),
        vec![left.clone(), right.clone()],
    )
}

/// `·L` at `path`, where the premise has `A ∘ B` with formula leaves.
pub fn prod_l(prem: &Proof, path: &[Step]) -> Proof {
    let node = ant(prem).and_then(|t| t.at(path)).expect("position exists");
    let StructTree::Node(l, r) = node else {
        panic!("·L needs a ∘ node")
    };
    let f = LFormula::prod(
        l.as_leaf().expect("formula leaf"),
        r.as_leaf().expect("formula leaf"),
    );
    let antecedent = replaced(prem, path, StructTree::leaf(&f));
    Derivation::new(
        Sequent::tree(antecedent, succ(prem)),
        Rule::ProdL,
        Inst::at(path.to_vec()),
        vec![prem.clone()],
    )
}

/// `\L`: from `Δ ⇒ A` and `Γ[B] ⇒ C` (with `B` at `path`) infer
/// `Γ[Δ ∘ (A\B)] ⇒ C`, where `ab` is `A\B`.
pub fn under_l(path: &[Step], left: &Proof, right: &Proof, ab: &LFormula) -> Proof {
    let delta = ant(left).expect("nonempty").clone();
    let antecedent = replaced(right, path, StructTree::node(delta, StructTree::leaf(ab)));
    Derivation::new(
        Sequent::tree(antecedent, succ(right)),
        Rule::UnderL,
        Inst::at(path.to_vec()),
        vec![left.clone(), right.clone()],
    )
}

/// `/L`: from `Γ[A] ⇒ C` (with `A` at `path`) and `Δ ⇒ B` infer
/// `Γ[(A/B) ∘ Δ] ⇒ C`, where `ab` is `A/B`.
pub fn over_l(path: &[Step], left: &Proof, right: &Proof, ab: &LFormula) -> Proof {
    let delta = ant(right).expect("nonempty").clone();
    let antecedent = replaced(left, path, StructTree::node(StructTree::leaf(ab), delta));
    Derivation::new(
        Sequent::tree(antecedent, succ(left)),
        Rule::OverL,
        Inst::at(path.to_vec()),
        vec![left.clone(), right.clone()],
    )
}

/// `A ∧ B ⇒ B ∧ A`.
pub fn comm_and(a: &LFormula, b: &LFormula) -> Proof {
    and_r(&and_l(&id(b), &[], 2, a), &and_l(&id(a), &[], 1, b))
}

/// `A ∨ B ⇒ B ∨ A`.
pub fn comm_or(a: &LFormula, b: &LFormula) -> Proof {
    or_l(&[], &or_r(&id(a), 2, b), &or_r(&id(b), 1, a))
}

/// `A ∘ B ⇒ C` from the assumption `A · B ⇒ C`.
pub fn two_leaf(s: &Sequent) -> Option<Proof> {
    let lhs = s.simple_lhs()?;
    let LKind::Prod(a, b) = lhs.kind() else {
        return None;
    };
    Some(cut(&[], &prod_r(&id(a), &id(b)), &assumption(s)))
}

/// Right-nested conjunction of a nonempty list.
pub fn conj(items: &[LFormula]) -> LFormula {
    let (last, init) = items.split_last().expect("nonempty conjunction");
    init.iter()
        .rev()
        .fold(last.clone(), |acc, x| LFormula::and(x, &acc))
}

/// Right-nested disjunction of a nonempty list.
pub fn disj(items: &[LFormula]) -> LFormula {
    let (last, init) = items.split_last().expect("nonempty disjunction");
    init.iter()
        .rev()
        .fold(last.clone(), |acc, x| LFormula::or(x, &acc))
}

/// `C ⇒ target` by `∧L` steps when `target` is a conjunct (at any depth)
/// of `c`.
pub fn proj(c: &LFormula, target: &LFormula) -> Option<Proof> {
    if c == target {
        return Some(id(c));
    }
    let LKind::And(a, b) = c.kind() else {
        return None;
    };
    if let Some(p) = proj(a, target) {
        return Some(and_l(&p, &[], 1, b));
    }
    proj(b, target).map(|p| and_l(&p, &[], 2, a))
}

/// `D ⇒ ⋁ items` from `D ⇒ items[k]`.
pub fn inject(prem: &Proof, items: &[LFormula], k: usize) -> Proof {
    if items.len() == 1 {
        return prem.clone();
    }
    if k == 0 {
        or_r(prem, 1, &disj(&items[1..]))
    } else {
        or_r(&inject(prem, &items[1..], k - 1), 2, &items[0])
    }
}

/// `Γ ⇒ φ(Γ)` for a bracket-free tree.
pub fn to_phi(t: &StructTree) -> Option<Proof> {
    match t {
        StructTree::Leaf(a) => Some(id(a)),
        StructTree::Node(l, r) => Some(prod_r(&to_phi(l)?, &to_phi(r)?)),
        StructTree::Bracket(_) => None,
    }
}
