//! Bounded search for countermodels. A returned model is re-evaluated
//! before it is handed out; finding nothing proves nothing.

use std::collections::BTreeSet;

use super::kripke::{eval_modal_at, KripkeModel};
use super::sampling::{enumerate_kripke, enumerate_ternary, Rel2Class, TernarySampler};
use super::ternary::{satisfies_assumptions, sequent_true, TernaryModel};
use crate::syntax::{LKind, ModalFormula, Sequent};
use crate::transform::{build_ternary_model, build_ternary_model_exchange};

#[derive(Clone, Debug)]
pub struct CountermodelBudget {
    pub seed: u64,
    /// Random ternary models to try after the exhaustive phase.
    pub random_samples: usize,
    pub max_random_states: usize,
    /// Skip an exhaustive size class with more models than this.
    pub exhaustive_limit: u64,
    /// Only consider relations closed under swapping the last two places.
    pub exchange: bool,
    /// Attach a binary relation of this class for `◇`/`□↓`.
    pub rel2: Option<Rel2Class>,
}

impl Default for CountermodelBudget {
    fn default() -> Self {
        CountermodelBudget {
            seed: 0,
            random_samples: 2000,
            max_random_states: 4,
            exhaustive_limit: 1 << 18,
            exchange: false,
            rel2: None,
        }
    }
}

fn plain_atoms(goal: &Sequent, phi: &[Sequent]) -> Vec<String> {
    let mut names = BTreeSet::new();
    for s in std::iter::once(goal).chain(phi) {
        s.for_each_formula(&mut |f| {
            f.for_each_sub(&mut |g| {
                if let LKind::Atom(n) = g.kind() {
                    names.insert(n.to_string());
                }
            })
        });
    }
    names.into_iter().collect()
}

fn is_symmetric(j: &TernaryModel) -> bool {
    j.rel3()
        .iter()
        .all(|&(u, v, w)| j.rel3().contains(&(u, w, v)))
}

/// A state of `j` where `goal` fails, provided `j` satisfies `phi`.
pub fn falsifying_state(j: &TernaryModel, goal: &Sequent, phi: &[Sequent]) -> Option<String> {
    let ext = j.sequent_extension(goal).ok()?;
    let u = ext.iter().position(|b| !b)?;
    satisfies_assumptions(j, phi).then(|| j.states()[u].clone())
}

fn identity_rel2(j: TernaryModel) -> TernaryModel {
    let n = j.len();
    j.with_rel2((0..n).map(|u| (u, u)))
        .expect("indices are in range")
}

pub fn find_countermodel(
    goal: &Sequent,
    phi: &[Sequent],
    budget: &CountermodelBudget,
) -> Option<(TernaryModel, String)> {
    let atoms = plain_atoms(goal, phi);
    let prepare = |j: TernaryModel| {
        if budget.rel2.is_some() {
            identity_rel2(j)
        } else {
            j
        }
    };
    let verified = |j: TernaryModel| -> Option<(TernaryModel, String)> {
        let u = falsifying_state(&j, goal, phi)?;
        // Independent re-check through the public entry points.
        let ok = !sequent_true(&j, &u, goal).ok()? && satisfies_assumptions(&j, phi);
        ok.then_some((j, u))
    };

    for n in 1..=2usize {
        let count = 1u64
            .checked_shl((n * n * n + n * atoms.len()) as u32)
            .unwrap_or(u64::MAX);
        if count > budget.exhaustive_limit {
            break;
        }
        let Ok(models) = enumerate_ternary(n, &atoms) else {
            break;
        };
        for j in models {
            if budget.exchange && !is_symmetric(&j) {
                continue;
            }
            if let Some(hit) = verified(prepare(j)) {
                return Some(hit);
            }
        }
    }

    // Two-copy models of small Kripke models, which interpret `m·A` as `◇A`.
    let katoms: Vec<String> = atoms.iter().filter(|a| *a != "m").cloned().collect();
    for n in 1..=2usize {
        let count = 1u64
            .checked_shl((n * n + n * katoms.len()) as u32)
            .unwrap_or(u64::MAX);
        if count > budget.exhaustive_limit {
            break;
        }
        let Ok(models) = enumerate_kripke(n, &katoms) else {
            break;
        };
        for m in models {
            let j = if budget.exchange {
                build_ternary_model_exchange(&m)
            } else {
                build_ternary_model(&m)
            };
            if let Some(hit) = verified(prepare(j)) {
                return Some(hit);
            }
        }
    }

    let mut sampler = TernarySampler::new(budget.seed, budget.max_random_states, &atoms);
    sampler.symmetric = budget.exchange;
    sampler.rel2 = budget.rel2;
    for j in sampler.take(budget.random_samples) {
        if let Some(hit) = verified(j) {
            return Some(hit);
        }
    }
    None
}

/// Exhaustive search over Kripke models with up to `max_states` states
/// (capped at 3).
pub fn find_kripke_countermodel(
    a: &ModalFormula,
    max_states: usize,
) -> Option<(KripkeModel, String)> {
    let atoms: Vec<String> = a.atoms().into_iter().collect();
    for n in 1..=max_states.min(3) {
        let Ok(models) = enumerate_kripke(n, &atoms) else {
            break;
        };
        for m in models {
            if let Some(w) = (0..n).find(|&w| !eval_modal_at(&m, w, a)) {
                let name = m.states()[w].clone();
                return Some((m, name));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_modal, parse_sequent};

    #[test]
    fn atom_is_refuted_by_one_state() {
        let goal = parse_sequent("=> p").unwrap();
        let (j, u) = find_countermodel(&goal, &[], &CountermodelBudget::default()).unwrap();
        assert_eq!(j.len(), 1);
        assert!(!sequent_true(&j, &u, &goal).unwrap());
    }

    #[test]
    fn excluded_middle_has_no_countermodel() {
        let goal = parse_sequent("=> ~p \\/ p").unwrap();
        let budget = CountermodelBudget {
            random_samples: 200,
            ..Default::default()
        };
        assert!(find_countermodel(&goal, &[], &budget).is_none());
    }

    #[test]
    fn assumption_blocks_refutation() {
        let goal = parse_sequent("p => q").unwrap();
        let phi = [goal.clone()];
        let budget = CountermodelBudget {
            random_samples: 200,
            ..Default::default()
        };
        assert!(find_countermodel(&goal, &phi, &budget).is_none());
    }

    #[test]
    fn kripke_search_separates_k_from_t() {
        let (m, w) = find_kripke_countermodel(&parse_modal("[]p -> p").unwrap(), 3).unwrap();
        assert!(!crate::semantics::eval_modal(&m, &w, &parse_modal("[]p -> p").unwrap()).unwrap());
        assert!(find_kripke_countermodel(&parse_modal("p \\/ ~p").unwrap(), 3).is_none());
    }
}
