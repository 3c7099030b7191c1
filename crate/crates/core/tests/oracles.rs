//! Hand-checked verdicts: textbook theorems and non-theorems of the
//! nonassociative calculi, and K validities checked against brute-force model
//! enumeration.

use nlwb::calculus::{
    check_derivation, derive, ModalLogic, ProofResult, SearchBudget, SystemSpec,
};
use nlwb::kprover::{k_decide, TableauVerdict};
use nlwb::semantics::{enumerate_kripke, eval_modal_at, falsifying_state};
use nlwb::syntax::{parse_modal, parse_sequent, Sequent};
use nlwb::transform::psi_set;

fn run(sys: &SystemSpec, phi: &[&str], goal: &str) -> (ProofResult, Sequent, Vec<Sequent>) {
    let phi: Vec<Sequent> = phi.iter().map(|s| parse_sequent(s).unwrap()).collect();
    let goal = parse_sequent(goal).unwrap();
    let r = derive(sys, &phi, &goal, &SearchBudget::default()).unwrap();
    (r, goal, phi)
}

fn assert_proved(sys: &SystemSpec, phi: &[&str], goal: &str) {
    let (r, _, phi) = run(sys, phi, goal);
    let d = r
        .proof()
        .unwrap_or_else(|| panic!("{goal} in {}: {}", sys.slug(), r.verdict()));
    assert!(check_derivation(sys, &phi, d).valid, "{goal}");
    assert_eq!(&d.conclusion, &parse_sequent(goal).unwrap());
}

fn assert_refuted(sys: &SystemSpec, goal: &str) {
    let (r, g, phi) = run(sys, &[], goal);
    match r {
        ProofResult::Refuted { model, .. } => {
            assert!(falsifying_state(&model, &g, &phi).is_some(), "{goal}")
        }
        r => panic!("{goal} in {}: expected a countermodel, got {}", sys.slug(), r.verdict()),
    }
}

#[test]
fn nl_theorems() {
    let sys = SystemSpec::bfnl_star();
    for goal in [
        "p => p",
        "p => (p * q) / q",
        "p => q \\ (q * p)",
        "p * (p \\ q) => q",
        "(q / p) * p => q",
        "p => (q / p) \\ q",
    ] {
        assert_proved(&sys, &[], goal);
    }
}

#[test]
fn nl_non_theorems() {
    let sys = SystemSpec::bfnl_star();
    for goal in [
        "(p * q) * r => p * (q * r)",
        "p * (q * r) => (p * q) * r",
        "p * q => q * p",
        "p => p * p",
        "p * p => p",
        "(p / q) * (q / r) => p / r",
        "p / q => (p / r) / (q / r)",
    ] {
        assert_refuted(&sys, goal);
    }
}

#[test]
fn boolean_layer() {
    let sys = SystemSpec::bfnl_star();
    for goal in [
        "~~p => p",
        "p => ~~p",
        " => p \\/ ~p",
        "p /\\ ~p => bot",
        "~(p \\/ q) => ~p /\\ ~q",
        "~p \\/ ~q => ~(p /\\ q)",
        "p /\\ (q \\/ r) => (p /\\ q) \\/ (p /\\ r)",
        "p * (q \\/ r) => (p * q) \\/ (p * r)",
        "p * bot => bot",
    ] {
        assert_proved(&sys, &[], goal);
    }
    assert_refuted(&sys, "p \\/ q => p");
    assert_refuted(&sys, "top => p * top");
}

#[test]
fn distributive_lattice_without_negation() {
    let sys = SystemSpec::dfnl_star();
    assert_proved(&sys, &[], "p /\\ (q \\/ r) => (p /\\ q) \\/ (p /\\ r)");
    assert_proved(&sys, &[], "(p \\/ q) /\\ (p \\/ r) => p \\/ (q /\\ r)");
    assert_proved(&sys, &["p => q", "q => r"], "p => r");
}

#[test]
fn psi_restores_complements() {
    let t = ["p"].iter().map(|s| nlwb::syntax::parse_lambek(s).unwrap()).collect();
    let psi: Vec<String> = psi_set(&t).iter().map(ToString::to_string).collect();
    let psi: Vec<&str> = psi.iter().map(String::as_str).collect();
    let sys = SystemSpec::bdfnl_star();
    assert_proved(&sys, &psi, "p /\\ p{p} => bot");
    assert_proved(&sys, &psi, "top => p \\/ p{p}");
}

#[test]
fn exchange_commutes_products() {
    let e = SystemSpec::bfnl_e_star();
    assert_proved(&e, &[], "p * q => q * p");
    assert_proved(&e, &[], "p => (p \\ q) \\ q");
    assert_refuted(&e, "(p * q) * r => p * (q * r)");
}

#[test]
fn modal_axioms_by_frame_class() {
    let k = SystemSpec::bfnl_star_modal(ModalLogic::K);
    assert_proved(&k, &[], "<>[v]p => p");
    assert_proved(&k, &[], "p => [v]<>p");
    // Countermodels are not trusted for modal sequents, so the most a
    // non-theorem can get is Unknown.
    for goal in ["[v]p => p", "p => <>p"] {
        assert!(!run(&k, &[], goal).0.is_proved(), "{goal}");
    }
    let t = SystemSpec::bfnl_star_modal(ModalLogic::T);
    assert_proved(&t, &[], "p => <>p");
    let s4 = SystemSpec::bfnl_star_modal(ModalLogic::S4);
    assert_proved(&s4, &[], "<><>p => <>p");
    // Valid on reflexive frames, but the proof needs a cut on `<>[v]p`,
    // which lies outside the analytic cut window. The prover must not
    // claim a countermodel.
    let (r, _, _) = run(&t, &[], "[v]p => p");
    assert!(!matches!(r, ProofResult::Refuted { .. }));
}

/// The tableau verdict matches truth in every Kripke model with at most
/// three states over the formula's atoms.
#[test]
fn tableau_agrees_with_enumeration() {
    for src in [
        "[](p -> q) -> ([]p -> []q)",
        "[]p -> p",
        "<>p -> []p",
        "~<>bot",
        "<>(p \\/ q) -> (<>p \\/ <>q)",
        "(<>p /\\ <>q) -> <>(p /\\ q)",
        "[]p /\\ <>q -> <>(p /\\ q)",
        "[][]p -> []p",
    ] {
        let a = parse_modal(src).unwrap();
        let atoms: Vec<String> = a.atoms().into_iter().collect();
        let brute = (1..=3).all(|n| {
            enumerate_kripke(n, &atoms)
                .unwrap()
                .all(|m| (0..m.len()).all(|w| eval_modal_at(&m, w, &a)))
        });
        match k_decide(&a) {
            TableauVerdict::Valid(_) => assert!(brute, "{src}"),
            TableauVerdict::Invalid { model, root } => {
                assert!(!brute, "{src}");
                let w = model.state_index(&root).unwrap();
                assert!(!eval_modal_at(&model, w, &a), "{src}");
            }
        }
    }
}
