//! Independent derivation checker. Each node is validated locally against
//! its rule schema; the prover is never consulted.

use rustc_hash::{FxHashMap as HashMap, FxHashSet as HashSet};
use std::cell::RefCell;
use std::sync::Arc;

use super::cache::Memo;
use super::derivation::{path_to_string, Derivation, Proof, Rule};
use super::system::SystemSpec;
use crate::syntax::{features, LFormula, LKind, Sequent, StructTree};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub valid: bool,
    /// Distinct nodes inspected.
    pub nodes: usize,
    /// On failure: the offending node first, then its ancestors up to the root.
    pub trail: Vec<String>,
}

/// Why a sequent is outside the language of `sys`, if it is.
pub fn language_violation(sys: &SystemSpec, s: &Sequent) -> Option<String> {
    if s.antecedent.is_none() && !sys.allow_empty_antecedent {
        return Some("empty antecedent".into());
    }
    if s.has_bracket() && sys.modal.is_none() {
        return Some("structural brackets".into());
    }
    let mut allowed = 0u8;
    if sys.negation {
        allowed |= features::NEGATION;
    }
    if sys.bounded {
        allowed |= features::BOUNDS;
    }
    if sys.unit {
        allowed |= features::UNIT;
    }
    if sys.modal.is_some() {
        allowed |= features::MODAL;
    }
    let mut used = 0u8;
    s.for_each_formula(&mut |f| used |= f.features());
    let extra = used & !allowed;
    if extra == 0 {
        return None;
    }
    let what = [
        (features::NEGATION, "negation"),
        (features::BOUNDS, "the constants ⊤/⊥"),
        (features::UNIT, "the constant 1"),
        (features::MODAL, "modal operators"),
    ]
    .into_iter()
    .filter(|(bit, _)| extra & bit != 0)
    .map(|(_, n)| n)
    .collect::<Vec<_>>()
    .join(", ");
    Some(what)
}

fn rule_allowed(sys: &SystemSpec, rule: Rule) -> bool {
    match rule {
        Rule::Neg1 | Rule::Neg2 => sys.negation,
        Rule::Bot | Rule::Top => sys.bounded,
        Rule::Exch => sys.exchange,
        Rule::DiaL | Rule::DiaR | Rule::BoxL | Rule::BoxR => sys.modal.is_some(),
        Rule::AxT => sys.modal.is_some_and(|m| m.has_t()),
        Rule::Ax4 => sys.modal.is_some_and(|m| m.has_4()),
        Rule::Ax5 => sys.modal.is_some_and(|m| m.has_5()),
        Rule::OneR | Rule::OneLl | Rule::OneLr => sys.unit,
        _ => true,
    }
}

fn leaf(t: Option<&StructTree>) -> Option<&LFormula> {
    t.and_then(StructTree::as_leaf)
}

fn ensure(cond: bool, msg: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.to_string())
    }
}

/// Check one node given its premises' conclusions.
fn check_node(
    sys: &SystemSpec,
    in_phi: &dyn Fn(&Sequent) -> bool,
    d: &Derivation,
) -> Result<(), String> {
    let c = &d.conclusion;
    if let Some(why) = language_violation(sys, c) {
        return Err(format!("conclusion uses {why}, not available in {sys}"));
    }
    if !rule_allowed(sys, d.rule) {
        return Err(format!("rule {} is not a rule of {sys}", d.rule));
    }
    if d.premises.len() != d.rule.arity() {
        return Err(format!(
            "rule {} takes {} premises, found {}",
            d.rule,
            d.rule.arity(),
            d.premises.len()
        ));
    }
    let p: Vec<&Sequent> = d.premises.iter().map(|q| &q.conclusion).collect();
    let path = &d.inst.path;
    let ant = c.antecedent.as_ref();
    let succ = &c.succedent;
    // The conclusion's subtree at the instantiation path.
    let hole = || {
        ant.and_then(|t| t.at(path))
            .ok_or_else(|| "path does not exist in the conclusion".to_string())
    };
    // The conclusion's antecedent with the hole filled by `t`.
    let fill = |t: StructTree| ant.and_then(|g| g.replace(path, t));
    let same_succ = |q: &Sequent| {
        ensure(
            &q.succedent == succ,
            "premise succedent differs from the conclusion",
        )
    };

    match d.rule {
        Rule::Id => ensure(leaf(ant) == Some(succ), "not of the form A ⇒ A"),
        Rule::D => {
            let ok = match (leaf(ant).map(LFormula::kind), succ.kind()) {
                (Some(LKind::And(a, bc)), LKind::Or(ab, ac2)) => {
                    match (bc.kind(), ab.kind(), ac2.kind()) {
                        (LKind::Or(b, c1), LKind::And(a1, b1), LKind::And(a2, c2)) => {
                            a1 == a && a2 == a && b1 == b && c2 == c1
                        }
                        _ => false,
                    }
                }
                _ => false,
            };
            ensure(ok, "not of the form A∧(B∨C) ⇒ (A∧B)∨(A∧C)")
        }
        Rule::Bot => ensure(
            matches!(hole()?.as_leaf().map(LFormula::kind), Some(LKind::Bottom)),
            "no ⊥ at the indicated position",
        ),
        Rule::Top => ensure(matches!(succ.kind(), LKind::Top), "succedent is not ⊤"),
        Rule::Neg1 => {
            let ok = matches!(succ.kind(), LKind::Bottom)
                && matches!(leaf(ant).map(LFormula::kind),
                    Some(LKind::And(a, na)) if matches!(na.kind(), LKind::Not(b) if b == a));
            ensure(ok, "not of the form A∧¬A ⇒ ⊥")
        }
        Rule::Neg2 => {
            let ok = matches!(leaf(ant).map(LFormula::kind), Some(LKind::Top))
                && matches!(succ.kind(), LKind::Or(a, na) if matches!(na.kind(), LKind::Not(b) if b == a));
            ensure(ok, "not of the form ⊤ ⇒ A∨¬A")
        }
        Rule::AxT => ensure(
            matches!(succ.kind(), LKind::Dia(a) if leaf(ant) == Some(a)),
            "not of the form A ⇒ ◇A",
        ),
        Rule::Ax4 => ensure(
            matches!(succ.kind(), LKind::Dia(a)
                if leaf(ant).is_some_and(|l| matches!(l.kind(), LKind::Dia(x) if matches!(x.kind(), LKind::Dia(y) if y == a)))),
            "not of the form ◇◇A ⇒ ◇A",
        ),
        Rule::Ax5 => {
            let ok = leaf(ant).is_some_and(|l| {
                matches!(l.kind(), LKind::Dia(_))
                    && *succ == LFormula::not(&LFormula::dia(&LFormula::not(l)))
            });
            ensure(ok, "not of the form ◇A ⇒ ¬◇¬◇A")
        }
        Rule::OneR => ensure(
            ant.is_none() && matches!(succ.kind(), LKind::Unit),
            "not of the form ⇒ 1",
        ),
        Rule::Assumption => ensure(in_phi(c), "not a member of the assumption set"),
        Rule::UnderL => {
            let (delta, ab) = match hole()? {
                StructTree::Node(l, r) => (l, r),
                _ => return Err("no Δ∘(A\\B) at the indicated position".into()),
            };
            let Some(LKind::Under(a, b)) = ab.as_leaf().map(LFormula::kind) else {
                return Err("no Δ∘(A\\B) at the indicated position".into());
            };
            ensure(
                p[0].antecedent.as_ref() == Some(&**delta) && &p[0].succedent == a,
                "left premise is not Δ ⇒ A",
            )?;
            ensure(
                p[1].antecedent == fill(StructTree::leaf(b)),
                "right premise is not Γ[B] ⇒ C",
            )?;
            same_succ(p[1])
        }
        Rule::OverL => {
            let (ab, delta) = match hole()? {
                StructTree::Node(l, r) => (l, r),
                _ => return Err("no (A/B)∘Δ at the indicated position".into()),
            };
            let Some(LKind::Over(a, b)) = ab.as_leaf().map(LFormula::kind) else {
                return Err("no (A/B)∘Δ at the indicated position".into());
            };
            ensure(
                p[0].antecedent == fill(StructTree::leaf(a)),
                "left premise is not Γ[A] ⇒ C",
            )?;
            same_succ(p[0])?;
            ensure(
                p[1].antecedent.as_ref() == Some(&**delta) && &p[1].succedent == b,
                "right premise is not Δ ⇒ B",
            )
        }
        Rule::UnderR => {
            let LKind::Under(a, b) = succ.kind() else {
                return Err("succedent is not A\\B".into());
            };
            let want = match ant {
                Some(g) => StructTree::node(StructTree::leaf(a), g.clone()),
                None => StructTree::leaf(a),
            };
            ensure(
                p[0].antecedent.as_ref() == Some(&want) && &p[0].succedent == b,
                "premise is not A∘Γ ⇒ B",
            )
        }
        Rule::OverR => {
            let LKind::Over(a, b) = succ.kind() else {
                return Err("succedent is not A/B".into());
            };
            let want = match ant {
                Some(g) => StructTree::node(g.clone(), StructTree::leaf(b)),
                None => StructTree::leaf(b),
            };
            ensure(
                p[0].antecedent.as_ref() == Some(&want) && &p[0].succedent == a,
                "premise is not Γ∘B ⇒ A",
            )
        }
        Rule::ProdL => {
            let Some(LKind::Prod(a, b)) = hole()?.as_leaf().map(LFormula::kind) else {
                return Err("no A·B at the indicated position".into());
            };
            let want = fill(StructTree::node(StructTree::leaf(a), StructTree::leaf(b)));
            ensure(p[0].antecedent == want, "premise is not Γ[A∘B] ⇒ C")?;
            same_succ(p[0])
        }
        Rule::ProdR => {
            let LKind::Prod(a, b) = succ.kind() else {
                return Err("succedent is not A·B".into());
            };
            let Some(StructTree::Node(g, dl)) = ant else {
                return Err("antecedent is not Γ∘Δ".into());
            };
            ensure(
                p[0].antecedent.as_ref() == Some(&**g) && &p[0].succedent == a,
                "left premise is not Γ ⇒ A",
            )?;
            ensure(
                p[1].antecedent.as_ref() == Some(&**dl) && &p[1].succedent == b,
                "right premise is not Δ ⇒ B",
            )
        }
        Rule::Cut => {
            let a = d.inst.formula.as_ref().ok_or("cut formula missing")?;
            ensure(
                &p[0].succedent == a,
                "left premise does not end in the cut formula",
            )?;
            same_succ(p[1])?;
            match ant {
                None => {
                    ensure(path.is_empty(), "empty Δ must sit at the root")?;
                    ensure(
                        p[0].antecedent.is_none(),
                        "left premise must have an empty antecedent",
                    )?;
                    ensure(
                        p[1].antecedent == Some(StructTree::leaf(a)),
                        "right premise is not A ⇒ B",
                    )
                }
                Some(_) => {
                    let delta = hole()?;
                    ensure(
                        p[0].antecedent.as_ref() == Some(delta),
                        "left premise is not Δ ⇒ A",
                    )?;
                    ensure(
                        p[1].antecedent == fill(StructTree::leaf(a)),
                        "right premise is not Γ[A] ⇒ B",
                    )
                }
            }
        }
        Rule::AndL => {
            let Some(LKind::And(a1, a2)) = hole()?.as_leaf().map(LFormula::kind) else {
                return Err("no A∧B at the indicated position".into());
            };
            let ai = match d.inst.index {
                Some(1) => a1,
                Some(2) => a2,
                _ => return Err("∧L needs index 1 or 2".into()),
            };
            ensure(
                p[0].antecedent == fill(StructTree::leaf(ai)),
                "premise is not Γ[A_i] ⇒ B",
            )?;
            same_succ(p[0])
        }
        Rule::AndR => {
            let LKind::And(a, b) = succ.kind() else {
                return Err("succedent is not A∧B".into());
            };
            ensure(
                p[0].antecedent.as_ref() == ant && &p[0].succedent == a,
                "left premise is not Γ ⇒ A",
            )?;
            ensure(
                p[1].antecedent.as_ref() == ant && &p[1].succedent == b,
                "right premise is not Γ ⇒ B",
            )
        }
        Rule::OrL => {
            let Some(LKind::Or(a1, a2)) = hole()?.as_leaf().map(LFormula::kind) else {
                return Err("no A∨B at the indicated position".into());
            };
            ensure(
                p[0].antecedent == fill(StructTree::leaf(a1)),
                "left premise is not Γ[A1] ⇒ B",
            )?;
            ensure(
                p[1].antecedent == fill(StructTree::leaf(a2)),
                "right premise is not Γ[A2] ⇒ B",
            )?;
            same_succ(p[0])?;
            same_succ(p[1])
        }
        Rule::OrR => {
            let LKind::Or(a1, a2) = succ.kind() else {
                return Err("succedent is not A∨B".into());
            };
            let ai = match d.inst.index {
                Some(1) => a1,
                Some(2) => a2,
                _ => return Err("∨R needs index 1 or 2".into()),
            };
            ensure(
                p[0].antecedent.as_ref() == ant && &p[0].succedent == ai,
                "premise is not Γ ⇒ A_i",
            )
        }
        Rule::Exch => {
            let StructTree::Node(x, y) = hole()? else {
                return Err("no Δ2∘Δ1 at the indicated position".into());
            };
            let want = fill(StructTree::node((**y).clone(), (**x).clone()));
            ensure(p[0].antecedent == want, "premise is not Γ[Δ1∘Δ2] ⇒ A")?;
            same_succ(p[0])
        }
        Rule::DiaL => {
            let Some(LKind::Dia(a)) = hole()?.as_leaf().map(LFormula::kind) else {
                return Err("no ◇A at the indicated position".into());
            };
            ensure(
                p[0].antecedent == fill(StructTree::bracket(StructTree::leaf(a))),
                "premise is not Γ[⟨A⟩] ⇒ B",
            )?;
            same_succ(p[0])
        }
        Rule::DiaR => {
            let LKind::Dia(a) = succ.kind() else {
                return Err("succedent is not ◇A".into());
            };
            let Some(StructTree::Bracket(g)) = ant else {
                return Err("antecedent is not ⟨Γ⟩".into());
            };
            ensure(
                p[0].antecedent.as_ref() == Some(&**g) && &p[0].succedent == a,
                "premise is not Γ ⇒ A",
            )
        }
        Rule::BoxL => {
            let inner = match hole()? {
                StructTree::Bracket(t) => t.as_leaf(),
                _ => None,
            };
            let Some(LKind::BoxDown(a)) = inner.map(LFormula::kind) else {
                return Err("no ⟨□↓A⟩ at the indicated position".into());
            };
            ensure(
                p[0].antecedent == fill(StructTree::leaf(a)),
                "premise is not Γ[A] ⇒ B",
            )?;
            same_succ(p[0])
        }
        Rule::BoxR => {
            let LKind::BoxDown(a) = succ.kind() else {
                return Err("succedent is not □↓A".into());
            };
            let g = ant.ok_or("□↓R needs a nonempty antecedent")?;
            ensure(
                p[0].antecedent == Some(StructTree::bracket(g.clone())) && &p[0].succedent == a,
                "premise is not ⟨Γ⟩ ⇒ A",
            )
        }
        Rule::OneLl | Rule::OneLr => {
            let one_leaf =
                |t: &StructTree| matches!(t.as_leaf().map(LFormula::kind), Some(LKind::Unit));
            let h = hole()?;
            let want = match h {
                // Δ empty: only meaningful for the whole antecedent.
                StructTree::Leaf(_) if one_leaf(h) => {
                    ensure(path.is_empty(), "a lone 1 can only be dropped at the root")?;
                    None
                }
                StructTree::Node(l, r) if d.rule == Rule::OneLl && one_leaf(l) => {
                    fill((**r).clone())
                }
                StructTree::Node(l, r) if d.rule == Rule::OneLr && one_leaf(r) => {
                    fill((**l).clone())
                }
                _ => return Err("no 1∘Δ (or Δ∘1) at the indicated position".into()),
            };
            ensure(p[0].antecedent == want, "premise is not Γ[Δ] ⇒ A")?;
            same_succ(p[0])
        }
    }
}

pub fn check_derivation(sys: &SystemSpec, phi: &[Sequent], d: &Proof) -> CheckReport {
    let phi: HashSet<&Sequent> = phi.iter().collect();
    let nodes = d.nodes();
    for n in &nodes {
        if let Err(why) = check_node(sys, &|s| phi.contains(s), n) {
            return CheckReport {
                valid: false,
                nodes: nodes.len(),
                trail: trail(&nodes, n, &why),
            };
        }
    }
    CheckReport {
        valid: true,
        nodes: nodes.len(),
        trail: Vec::new(),
    }
}

/// Checker for one system and assumption set that remembers which nodes
/// it has already validated. Derivations built by the same prover share
/// subproofs, so each shared node is checked once. Validated nodes are
/// kept alive so their addresses cannot be reused by other nodes.
pub struct Checker {
    sys: SystemSpec,
    phi: HashSet<Sequent>,
    verified: Memo<*const Derivation, Proof>,
    seen: RefCell<HashSet<*const Derivation>>,
}

impl Checker {
    pub fn new(sys: SystemSpec, phi: &[Sequent]) -> Self {
        Checker {
            sys,
            phi: phi.iter().cloned().collect(),
            verified: Memo::default(),
            seen: RefCell::default(),
        }
    }

    /// Same verdict as [`check_derivation`]; trails come from a full recheck.
    pub fn check(&self, d: &Proof) -> bool {
        let in_phi = |s: &Sequent| self.phi.contains(s);
        let mut seen = self.seen.borrow_mut();
        seen.clear();
        let mut fresh: Vec<&Proof> = Vec::new();
        let mut stack = vec![d];
        while let Some(n) = stack.pop() {
            let ptr = Arc::as_ptr(n);
            if self.verified.contains(&ptr) || !seen.insert(ptr) {
                continue;
            }
            if check_node(&self.sys, &in_phi, n).is_err() {
                return false;
            }
            stack.extend(n.premises.iter());
            fresh.push(n);
        }
        for n in fresh {
            self.verified.put(Arc::as_ptr(n), n.clone());
        }
        true
    }
}

/// The failing node, then its ancestors up to the root.
fn trail(nodes: &[Proof], bad: &Proof, why: &str) -> Vec<String> {
    let mut parent: HashMap<*const Derivation, &Proof> = HashMap::default();
    for n in nodes {
        for q in &n.premises {
            parent.entry(Arc::as_ptr(q)).or_insert(n);
        }
    }
    let mut out = vec![describe(bad, why)];
    let mut cur = Arc::as_ptr(bad);
    while let Some(up) = parent.get(&cur) {
        out.push(describe(up, "ancestor"));
        cur = Arc::as_ptr(up);
    }
    out
}

fn describe(d: &Derivation, why: &str) -> String {
    let at = if d.inst.path.is_empty() {
        String::new()
    } else {
        format!(" at {}", path_to_string(&d.inst.path))
    };
    format!("{} [{}{at}]: {why}", d.conclusion, d.rule)
}

#[cfg(test)]
mod tests {
    use super::super::derivation::Inst;
    use super::*;
    use crate::syntax::{parse_lambek, parse_sequent, Step};

    fn seq(s: &str) -> Sequent {
        parse_sequent(s).unwrap()
    }

    fn check(d: &Proof) -> bool {
        check_derivation(&SystemSpec::bfnl_star(), &[], d).valid
    }

    #[test]
    fn identity_and_mislabelled_identity() {
        assert!(check(&Derivation::leaf(seq("p => p"), Rule::Id)));
        let bad = Derivation::leaf(seq("p => p"), Rule::Top);
        let r = check_derivation(&SystemSpec::bfnl_star(), &[], &bad);
        assert!(!r.valid && r.trail[0].contains("not ⊤"));
    }

    #[test]
    fn exchange_needs_the_exchange_system() {
        let prem = Derivation::new(
            seq("p o q => p * q"),
            Rule::ProdR,
            Inst::default(),
            vec![
                Derivation::leaf(seq("p => p"), Rule::Id),
                Derivation::leaf(seq("q => q"), Rule::Id),
            ],
        );
        let d = Derivation::new(
            seq("q o p => p * q"),
            Rule::Exch,
            Inst::default(),
            vec![prem],
        );
        assert!(!check(&d));
        assert!(check_derivation(&SystemSpec::bfnl_e_star(), &[], &d).valid);
    }

    #[test]
    fn cut_with_empty_antecedent() {
        // ⇒ ⊤ and ⊤ ⇒ p ∨ ¬p give ⇒ p ∨ ¬p.
        let top = Derivation::leaf(seq("=> top"), Rule::Top);
        let lem = Derivation::leaf(seq("top => p \\/ ~p"), Rule::Neg2);
        let inst = Inst {
            formula: Some(parse_lambek("top").unwrap()),
            ..Default::default()
        };
        let d = Derivation::new(
            seq("=> p \\/ ~p"),
            Rule::Cut,
            inst.clone(),
            vec![top.clone(), lem.clone()],
        );
        assert!(check(&d));
        let wrong = Derivation::new(
            seq("=> p \\/ ~p"),
            Rule::Cut,
            Inst::default(),
            vec![top, lem],
        );
        assert!(!check(&wrong));
        assert!(!check_derivation(&SystemSpec::dfnl(), &[], &d).valid);
    }

    #[test]
    fn left_rules_respect_the_context() {
        let prem = Derivation::leaf(seq("r o (p o q) => top"), Rule::Top);
        let good = Derivation::new(
            seq("r o p * q => top"),
            Rule::ProdL,
            Inst::at(vec![Step::Right]),
            vec![prem.clone()],
        );
        assert!(check(&good));
        let wrong_path = Derivation::new(
            seq("r o p * q => top"),
            Rule::ProdL,
            Inst::at(vec![Step::Left]),
            vec![prem],
        );
        assert!(!check(&wrong_path));
    }

    #[test]
    fn under_rules() {
        // p ∘ p\q ⇒ q by \L, then p\q ⇒ p\q by \R.
        let l = Derivation::new(
            seq("p o p \\ q => q"),
            Rule::UnderL,
            Inst::default(),
            vec![
                Derivation::leaf(seq("p => p"), Rule::Id),
                Derivation::leaf(seq("q => q"), Rule::Id),
            ],
        );
        assert!(check(&l));
        let r = Derivation::new(
            seq("p \\ q => p \\ q"),
            Rule::UnderR,
            Inst::default(),
            vec![l],
        );
        assert!(check(&r));
    }

    #[test]
    fn assumptions_must_be_listed() {
        let d = Derivation::leaf(seq("p => q"), Rule::Assumption);
        assert!(!check(&d));
        assert!(check_derivation(&SystemSpec::bfnl_star(), &[seq("p => q")], &d).valid);
    }

    #[test]
    fn language_is_enforced() {
        let d = Derivation::leaf(seq("~p => ~p"), Rule::Id);
        assert!(!check_derivation(&SystemSpec::bdfnl_star(), &[], &d).valid);
        let d = Derivation::leaf(seq("<p> => p"), Rule::Id);
        assert!(!check(&d));
    }
}
