//! Property tests. Formulas come from the seeded generators, so proptest
//! explores seeds and sizes and shrinks towards small ones.

use std::collections::BTreeSet;

use nlwb::calculus::{
    check_derivation, derive, Derivation, ProofResult, SearchBudget, SystemSpec,
};
use nlwb::kprover::{k_decide, TableauVerdict};
use nlwb::semantics::{
    enumerate_kripke, eval_lambek, eval_modal_at, falsifying_state, sequent_true_everywhere,
    KripkeSampler, TernarySampler,
};
use nlwb::syntax::json::{lformula_from_json, lformula_to_json, modal_from_json, modal_to_json};
use nlwb::syntax::{
    parse_lambek, parse_modal, parse_sequent, random_lambek, random_modal, Conn, LFormula,
    Sequent,
};
use nlwb::transform::{build_ternary_model, dagger, first_copy, tilde};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const ALL: &[Conn] = &[
    Conn::And,
    Conn::Or,
    Conn::Not,
    Conn::Prod,
    Conn::Under,
    Conn::Over,
    Conn::Dia,
    Conn::BoxDown,
];

fn atoms() -> Vec<LFormula> {
    ["p", "q", "r", "top", "bot"]
        .iter()
        .map(|s| parse_lambek(s).unwrap())
        .collect()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn quick() -> SearchBudget {
    SearchBudget {
        max_depth: 14,
        max_goals: 3000,
        time_cap: std::time::Duration::from_millis(300),
        ..SearchBudget::default()
    }
}

/// Truth of a lattice formula under the 0/1 valuation `v` of `p`, `q`, `r`.
fn eval01(f: &LFormula, v: u8) -> bool {
    use nlwb::syntax::LKind::*;
    match f.kind() {
        Top => true,
        Bottom => false,
        And(a, b) => eval01(a, v) && eval01(b, v),
        Or(a, b) => eval01(a, v) || eval01(b, v),
        Atom(name) => match &**name {
            "p" => v & 1 != 0,
            "q" => v & 2 != 0,
            _ => v & 4 != 0,
        },
        k => panic!("not a lattice formula: {k:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lambek_text_and_json_round_trip(seed: u64, size in 0usize..12) {
        let f = random_lambek(&mut rng(seed), &atoms(), ALL, size);
        prop_assert_eq!(parse_lambek(&f.to_string()).unwrap(), f.clone());
        prop_assert_eq!(lformula_from_json(&lformula_to_json(&f)).unwrap(), f);
    }

    #[test]
    fn modal_text_and_json_round_trip(seed: u64, size in 0usize..12) {
        let a = random_modal(&mut rng(seed), &["p", "q"], size);
        prop_assert_eq!(parse_modal(&a.to_string()).unwrap(), a.clone());
        prop_assert_eq!(modal_from_json(&modal_to_json(&a)).unwrap(), a);
    }

    #[test]
    fn tilde_is_an_involution_on_lattice_members(seed: u64, size in 0usize..8) {
        let t: BTreeSet<LFormula> = ["p", "q", "top", "bot"]
            .iter()
            .map(|s| parse_lambek(s).unwrap())
            .collect();
        let leaves: Vec<LFormula> = t.iter().cloned().collect();
        let a = random_lambek(&mut rng(seed), &leaves, Conn::LATTICE, size);
        let at = tilde(&a, &t).unwrap();
        prop_assert_eq!(at.size(), a.size());
        prop_assert_eq!(tilde(&at, &t).unwrap(), a);
    }

    #[test]
    fn dagger_preserves_truth(seed: u64, size in 0usize..9) {
        let mut r = rng(seed);
        let a = random_modal(&mut r, &["p", "q"], size);
        let names = vec!["p".to_string(), "q".to_string()];
        let m = KripkeSampler::new(seed, 4, &names).next().unwrap();
        let j = build_ternary_model(&m);
        let d = dagger(&a).unwrap();
        for w in 0..m.len() {
            let there = eval_lambek(&j, &j.states()[first_copy(w)], &d).unwrap();
            prop_assert_eq!(eval_modal_at(&m, w, &a), there);
        }
    }

    /// The tableau agrees with every Kripke model on at most two states, and
    /// its countermodels falsify the formula at the root.
    #[test]
    fn tableau_is_sound_and_its_countermodels_check(seed: u64, size in 0usize..7) {
        let a = random_modal(&mut rng(seed), &["p"], size);
        let atoms = vec!["p".to_string()];
        match k_decide(&a) {
            TableauVerdict::Valid(_) => {
                for n in 1..=2 {
                    for m in enumerate_kripke(n, &atoms).unwrap() {
                        prop_assert!((0..m.len()).all(|w| eval_modal_at(&m, w, &a)));
                    }
                }
            }
            TableauVerdict::Invalid { model, root } => {
                let w = model.state_index(&root).unwrap();
                prop_assert!(!eval_modal_at(&model, w, &a));
            }
        }
    }

    /// On lattice sequents the prover decides distributive-lattice validity,
    /// which coincides with truth under every 0/1 valuation.
    #[test]
    fn lattice_sequents_are_decided(seed: u64, l in 0usize..5, r in 0usize..5) {
        let mut g = rng(seed);
        let leaves = atoms();
        let a = random_lambek(&mut g, &leaves, Conn::LATTICE, l);
        let b = random_lambek(&mut g, &leaves, Conn::LATTICE, r);
        let goal = Sequent::simple(&a, &b);
        let valid = (0..8).all(|v| !eval01(&a, v) || eval01(&b, v));
        let res = derive(&SystemSpec::bdfnl_star(), &[], &goal, &quick()).unwrap();
        prop_assert_eq!(res.is_proved(), valid, "{}", goal);
    }

    /// Proofs check and hold in sampled models; countermodels falsify.
    #[test]
    fn verdicts_agree_with_the_semantics(seed: u64, l in 0usize..4, r in 0usize..4) {
        let mut g = rng(seed);
        let leaves = atoms();
        let a = random_lambek(&mut g, &leaves, Conn::BFNL, l);
        let b = random_lambek(&mut g, &leaves, Conn::BFNL, r);
        let goal = Sequent::simple(&a, &b);
        let sys = SystemSpec::bfnl_star();
        match derive(&sys, &[], &goal, &quick()).unwrap() {
            ProofResult::Proved(d) => {
                prop_assert!(check_derivation(&sys, &[], &d).valid);
                let names = vec!["p".to_string(), "q".to_string(), "r".to_string()];
                for j in TernarySampler::new(seed, 4, &names).take(20) {
                    prop_assert!(sequent_true_everywhere(&j, &goal).unwrap(), "{}", goal);
                }
            }
            ProofResult::Refuted { model, .. } => {
                prop_assert!(falsifying_state(&model, &goal, &[]).is_some());
            }
            ProofResult::Unknown(_) => {}
        }
    }
}

#[test]
fn derivation_json_round_trips() {
    let sys = SystemSpec::bfnl_star();
    for goal in ["p * (p \\ q) => q", "~(p /\\ q) => ~p \\/ ~q", "(p \\/ q) /\\ r => (p /\\ r) \\/ (q /\\ r)"] {
        let goal = parse_sequent(goal).unwrap();
        let d = derive(&sys, &[], &goal, &SearchBudget::default())
            .unwrap()
            .proof()
            .cloned()
            .unwrap();
        let back = Derivation::from_json(&d.to_json()).unwrap();
        assert_eq!(back, d);
        assert!(check_derivation(&sys, &[], &back).valid);
    }
}
