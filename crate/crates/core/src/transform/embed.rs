//! The translations `†`, `~`, `‡` and `§`, the assumption sets `Ψ` and
//! `Θ`, and their composition from modal K down to DFNL* with assumptions.

use std::collections::BTreeSet;

use serde_json::{json, Value};

use super::models::M_LETTER;
use crate::calculus::{Proof, Rule, SystemSpec};
use crate::error::{Error, Result};
use crate::syntax::{
    subformulas_of_sequents, FreshTag, LFormula, LKind, ModalFormula, Sequent, StructTree,
};

/// `p† = p`, `(A ⊃ B)† = ¬A† ∨ B†`, `(◇A)† = m·A†`, homomorphic otherwise.
pub fn dagger(a: &ModalFormula) -> Result<LFormula> {
    Ok(match a {
        ModalFormula::Atom(p) if p == M_LETTER => return Err(Error::MCollision(p.clone())),
        ModalFormula::Atom(p) => LFormula::atom(p),
        ModalFormula::Bottom => LFormula::bot(),
        ModalFormula::And(x, y) => LFormula::and(&dagger(x)?, &dagger(y)?),
        ModalFormula::Or(x, y) => LFormula::or(&dagger(x)?, &dagger(y)?),
        ModalFormula::Implies(x, y) => LFormula::or(&LFormula::not(&dagger(x)?), &dagger(y)?),
        ModalFormula::Not(x) => LFormula::not(&dagger(x)?),
        ModalFormula::Diamond(x) => LFormula::prod(&LFormula::atom(M_LETTER), &dagger(x)?),
    })
}

/// A formula that `~` does not decompose: anything other than `∧`, `∨`,
/// `¬`, the bounds and the fresh complement letters.
pub fn is_prime(a: &LFormula) -> bool {
    !matches!(
        a.kind(),
        LKind::And(..)
            | LKind::Or(..)
            | LKind::Not(_)
            | LKind::Top
            | LKind::Bottom
            | LKind::Fresh(FreshTag::NegOf(_))
    )
}

/// The complement map: bounds swap, `∧`/`∨` dualize, a prime `A` becomes
/// `p_A`, and `p_A` goes back to `A`, so the map is an involution.
pub fn complement(a: &LFormula) -> Result<LFormula> {
    Ok(match a.kind() {
        LKind::Top => LFormula::bot(),
        LKind::Bottom => LFormula::top(),
        LKind::And(x, y) => LFormula::or(&complement(x)?, &complement(y)?),
        LKind::Or(x, y) => LFormula::and(&complement(x)?, &complement(y)?),
        LKind::Fresh(FreshTag::NegOf(x)) => x.clone(),
        LKind::Not(_) => return Err(Error::NegationFound(a.to_string())),
        _ => LFormula::neg_letter(a),
    })
}

/// `A~` for `A` in the `∧`/`∨` closure of `t` together with the letters
/// `p_B` (`B ∈ t`).
pub fn tilde(a: &LFormula, t: &BTreeSet<LFormula>) -> Result<LFormula> {
    if !in_tilde_domain(a, t) {
        return Err(Error::Closure(format!("{a} is outside c(T)")));
    }
    complement(a)
}

fn in_tilde_domain(a: &LFormula, t: &BTreeSet<LFormula>) -> bool {
    if t.contains(a) {
        return true;
    }
    match a.kind() {
        LKind::Fresh(FreshTag::NegOf(b)) => is_prime(b) && t.contains(b),
        LKind::And(x, y) | LKind::Or(x, y) => in_tilde_domain(x, t) && in_tilde_domain(y, t),
        _ => false,
    }
}

/// `{A ∧ p_A ⇒ ⊥, ⊤ ⇒ A ∨ p_A | A ∈ t, A ≠ ⊤, ⊥}`.
pub fn psi_set(t: &BTreeSet<LFormula>) -> Vec<Sequent> {
    let (top, bot) = (LFormula::top(), LFormula::bot());
    t.iter()
        .filter(|a| !matches!(a.kind(), LKind::Top | LKind::Bottom))
        .flat_map(|a| {
            let pa = LFormula::neg_letter(a);
            [
                Sequent::simple(&LFormula::and(a, &pa), &bot),
                Sequent::simple(&top, &LFormula::or(a, &pa)),
            ]
        })
        .collect()
}

/// The `¬`-free members of `t`.
pub fn exn(t: &BTreeSet<LFormula>) -> BTreeSet<LFormula> {
    t.iter()
        .filter(|a| !a.any_sub(&|b| matches!(b.kind(), LKind::Not(_))))
        .cloned()
        .collect()
}

/// `⊥ ↦ p_⊥` and `⊤ ↦ p_⊤` throughout a formula.
fn replace_bounds(a: &LFormula) -> LFormula {
    match a.kind() {
        LKind::Bottom => LFormula::p_bot(),
        LKind::Top => LFormula::p_top(),
        _ => a
            .map_children(|c| Ok::<_, ()>(replace_bounds(c)))
            .expect("infallible"),
    }
}

pub fn ec(t: &BTreeSet<LFormula>) -> BTreeSet<LFormula> {
    t.iter().map(replace_bounds).collect()
}

/// `p‡ = p`, homomorphic on binary connectives, `(¬A)‡ = (A‡)~`.
pub fn ddagger(a: &LFormula) -> LFormula {
    match a.kind() {
        LKind::Not(x) => complement(&ddagger(x)).expect("the image of ‡ is ¬-free"),
        _ => a
            .map_children(|c| Ok::<_, ()>(ddagger(c)))
            .expect("infallible"),
    }
}

fn ddagger_sequent(s: &Sequent) -> Sequent {
    s.map_formulas(&mut |f| Ok::<_, ()>(ddagger(f)))
        .expect("infallible")
}

/// The `¬`-free counterpart of a BFNL* problem.
#[derive(Clone, Debug)]
pub struct DdaggerProblem {
    pub goal: Sequent,
    pub assumptions: Vec<Sequent>,
    /// Prime formulas whose complement letters `Ψ` governs.
    pub primes: BTreeSet<LFormula>,
}

/// `(Γ‡ ⇒ A‡, Ψ)` where `Ψ` ranges over the `‡`-images of the prime
/// subformulas of the sequent.
pub fn ddagger_problem(s: &Sequent) -> DdaggerProblem {
    let primes: BTreeSet<LFormula> = subformulas_of_sequents([s])
        .into_iter()
        .filter(is_prime)
        .map(|f| ddagger(&f))
        .collect();
    DdaggerProblem {
        goal: ddagger_sequent(s),
        assumptions: psi_set(&primes),
        primes,
    }
}

/// Replace each complement letter `p_A` by `¬A`, innermost first.
pub fn restore_negation(a: &LFormula) -> LFormula {
    match a.kind() {
        LKind::Fresh(FreshTag::NegOf(x)) => LFormula::not(&restore_negation(x)),
        _ => a
            .map_children(|c| Ok::<_, ()>(restore_negation(c)))
            .expect("infallible"),
    }
}

/// Rewrite a BDFNL* derivation from `Ψ` into BFNL*: `p_A` becomes `¬A`,
/// and the `Ψ` leaves, now `A ∧ ¬A ⇒ ⊥` and `⊤ ⇒ A ∨ ¬A`, become the
/// negation axioms.
pub fn restore_negation_in(d: &Proof) -> Proof {
    d.map_formulas(&mut restore_negation, &|s, rule| {
        if rule != Rule::Assumption {
            return rule;
        }
        let neg_pair = |x: &LFormula, y: &LFormula| *y == LFormula::not(x);
        match (s.simple_lhs().map(LFormula::kind), s.succedent.kind()) {
            (Some(LKind::And(x, y)), LKind::Bottom) if neg_pair(x, y) => Rule::Neg1,
            (Some(LKind::Top), LKind::Or(x, y)) if neg_pair(x, y) => Rule::Neg2,
            _ => rule,
        }
    })
}

/// `p_⊥ ⇒ A`, `A·p_⊥ ⇒ p_⊥`, `p_⊥·A ⇒ p_⊥`, `A ⇒ p_⊤`, `A·p_⊤ ⇒ p_⊤`,
/// `p_⊤·A ⇒ p_⊤` for each `A ∈ t`, without repetitions.
pub fn theta_set(t: &BTreeSet<LFormula>) -> Vec<Sequent> {
    let (pb, pt) = (LFormula::p_bot(), LFormula::p_top());
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for a in t {
        for s in [
            Sequent::simple(&pb, a),
            Sequent::simple(&LFormula::prod(a, &pb), &pb),
            Sequent::simple(&LFormula::prod(&pb, a), &pb),
            Sequent::simple(a, &pt),
            Sequent::simple(&LFormula::prod(a, &pt), &pt),
            Sequent::simple(&LFormula::prod(&pt, a), &pt),
        ] {
            if seen.insert(s.clone()) {
                out.push(s);
            }
        }
    }
    out
}

/// `⊥§ = p_⊥`, `⊤§ = p_⊤`, homomorphic elsewhere.
pub fn section(a: &LFormula) -> Result<LFormula> {
    if a.any_sub(&|b| matches!(b.kind(), LKind::Not(_))) {
        return Err(Error::NegationFound(a.to_string()));
    }
    Ok(replace_bounds(a))
}

/// `(s§, Φ§ ∪ Θ[ec(T)])`. An empty antecedent becomes `p_⊤`, since `⇒ A`
/// and `⊤ ⇒ A` are interderivable in BDFNL*.
pub fn section_embed(s: &Sequent, phi: &[Sequent]) -> Result<(Sequent, Vec<Sequent>)> {
    let mut t = subformulas_of_sequents(std::iter::once(s).chain(phi));
    t.insert(LFormula::top());
    t.insert(LFormula::bot());
    let sec = |q: &Sequent| q.map_formulas(&mut |f| section(f));
    let mut goal = sec(s)?;
    if goal.antecedent.is_none() {
        goal.antecedent = Some(StructTree::leaf(&LFormula::p_top()));
    }
    let mut assumptions = Vec::new();
    let mut seen = BTreeSet::new();
    for q in phi
        .iter()
        .map(sec)
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .chain(theta_set(&ec(&t)))
    {
        if seen.insert(q.clone()) {
            assumptions.push(q);
        }
    }
    Ok((goal, assumptions))
}

/// Every stage of the reduction from K to DFNL* with assumptions.
#[derive(Clone, Debug)]
pub struct Pipeline {
    pub source: ModalFormula,
    pub dagger: LFormula,
    pub bdfnl: DdaggerProblem,
    pub system: SystemSpec,
    pub goal: Sequent,
    pub assumptions: Vec<Sequent>,
}

pub fn pipeline_k_to_dfnl(a: &ModalFormula) -> Result<Pipeline> {
    let d = dagger(a)?;
    let bdfnl = ddagger_problem(&Sequent::empty(&d));
    let (goal, assumptions) = section_embed(&bdfnl.goal, &bdfnl.assumptions)?;
    Ok(Pipeline {
        source: a.clone(),
        dagger: d,
        bdfnl,
        system: SystemSpec::dfnl_star(),
        goal,
        assumptions,
    })
}

impl Pipeline {
    /// Total connectives and structure across the final goal and assumptions.
    pub fn output_size(&self) -> usize {
        self.goal.size() + self.assumptions.iter().map(Sequent::size).sum::<usize>()
    }

    pub fn bundle(&self) -> Value {
        json!({
            "system": self.system.slug(),
            "goal": self.goal.to_string(),
            "assumptions": self.assumptions.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "provenance": ["dagger", "ddagger", "section"],
        })
    }
}
