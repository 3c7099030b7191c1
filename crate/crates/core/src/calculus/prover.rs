//! The `derive` pipeline.
//!
//! Stages, cheapest first: two-leaf assumptions, the refutation engine, a
//! shallow cut-free search, a semantic countermodel search
//! (only where the semantics is sound for the system), and finally the full
//! iterative-deepening search with analytic cut. A derivation is reported
//! only after the checker accepts it.

use rustc_hash::FxHashSet as HashSet;
use std::fmt;
use std::time::Instant;

use serde_json::{json, Value};

use super::budget::SearchBudget;
use super::build::two_leaf;
use super::checker::{language_violation, Checker};
use super::lattice::lattice_proof;
use super::derivation::Proof;
use super::engine::Engine;
use super::search::{cut_formulas, Dfs, Stop};
use super::system::SystemSpec;
use super::world::World;
use crate::error::{Error, Result};
use crate::semantics::{
    find_countermodel, model_json::ternary_to_json, CountermodelBudget, TernaryModel,
};
use crate::syntax::{features, LFormula, LKind, Sequent, StructTree};

/// Goals the shallow cut-free pass may expand.
const CHEAP_GOALS: usize = 2_000;
const CHEAP_DEPTH: usize = 4;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchReport {
    /// Goals expanded by the backward searches.
    pub goals: usize,
    /// Steps taken by the refutation engine.
    pub engine_steps: usize,
    pub stop: Option<Stop>,
    /// Whether a countermodel search ran (and found nothing).
    pub semantic_search: bool,
}

impl fmt::Display for SearchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let why = match self.stop {
            Some(Stop::Depth) => "depth bound reached",
            Some(Stop::Goals) => "goal budget exhausted",
            Some(Stop::Time) => "time cap reached",
            None => "search incomplete",
        };
        write!(
            f,
            "{why} after {} goals and {} engine steps",
            self.goals, self.engine_steps
        )?;
        if self.semantic_search {
            write!(f, "; no countermodel found")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub enum ProofResult {
    Proved(Proof),
    Refuted { model: TernaryModel, state: String },
    Unknown(SearchReport),
}

impl ProofResult {
    pub fn verdict(&self) -> &'static str {
        match self {
            ProofResult::Proved(_) => "proved",
            ProofResult::Refuted { .. } => "refuted",
            ProofResult::Unknown(_) => "unknown",
        }
    }

    pub fn proof(&self) -> Option<&Proof> {
        match self {
            ProofResult::Proved(p) => Some(p),
            _ => None,
        }
    }

    pub fn is_proved(&self) -> bool {
        matches!(self, ProofResult::Proved(_))
    }

    pub fn to_json(&self) -> Value {
        match self {
            ProofResult::Proved(p) => json!({
                "verdict": "proved",
                "nodes": p.node_count(),
                "derivation": p.to_json(),
            }),
            ProofResult::Refuted { model, state } => json!({
                "verdict": "refuted",
                "state": state,
                "model": ternary_to_json(model),
            }),
            ProofResult::Unknown(r) => json!({
                "verdict": "unknown",
                "goals": r.goals,
                "engine_steps": r.engine_steps,
                "reason": r.to_string(),
            }),
        }
    }
}

/// A prover for one system and assumption set. The engine's caches persist
/// across goals, which matters for batch runs.
pub struct Prover {
    sys: SystemSpec,
    phi: Vec<Sequent>,
    phi_set: HashSet<Sequent>,
    budget: SearchBudget,
    engine: Option<Engine>,
    checker: Checker,
    pub countermodels: CountermodelBudget,
}

impl Prover {
    pub fn new(sys: SystemSpec, phi: &[Sequent], budget: SearchBudget) -> Result<Self> {
        sys.validate()?;
        budget.validate()?;
        for s in phi {
            if !s.is_simple() {
                return Err(ill_formed(
                    &sys,
                    format!("assumption `{s}` is not a simple sequent"),
                ));
            }
            if let Some(why) = language_violation(&sys, s) {
                return Err(ill_formed(&sys, format!("assumption `{s}` uses {why}")));
            }
        }
        let countermodels = CountermodelBudget {
            exchange: sys.exchange,
            rel2: sys.modal.map(|m| m.frame_class()),
            ..CountermodelBudget::default()
        };
        Ok(Prover {
            sys,
            phi: phi.to_vec(),
            phi_set: phi.iter().cloned().collect(),
            budget,
            engine: World::for_system(&sys, phi).map(Engine::new),
            checker: Checker::new(sys, phi),
            countermodels,
        })
    }

    pub fn system(&self) -> &SystemSpec {
        &self.sys
    }

    pub fn assumptions(&self) -> &[Sequent] {
        &self.phi
    }

    pub fn budget(&self) -> &SearchBudget {
        &self.budget
    }

    fn checked(&self, p: Proof) -> Option<Proof> {
        self.checker.check(&p).then_some(p)
    }

    pub fn derive(&self, goal: &Sequent) -> Result<ProofResult> {
        if let Some(why) = language_violation(&self.sys, goal) {
            return Err(ill_formed(&self.sys, format!("goal uses {why}")));
        }
        let deadline = Instant::now() + self.budget.time_cap;
        let mut report = SearchReport::default();

        if let Some(p) = self.two_leaf_assumption(goal).and_then(|p| self.checked(p)) {
            return Ok(ProofResult::Proved(p));
        }

        if let Some(engine) = &self.engine {
            engine.arm(self.budget.max_goals, Some(deadline));
            let found = engine.prove(goal);
            report.engine_steps = engine.steps();
            if let Some(p) = found.and_then(|p| self.checked(p)) {
                return Ok(ProofResult::Proved(p));
            }
        }

        if let Some(p) = lattice_proof(goal).and_then(|p| self.checked(p)) {
            return Ok(ProofResult::Proved(p));
        }

        let mut cheap = Dfs::new(
            &self.sys,
            &self.phi_set,
            &[],
            CHEAP_GOALS.min(self.budget.max_goals),
            deadline,
        );
        let found = cheap.run(goal, CHEAP_DEPTH.min(self.budget.max_depth));
        report.goals += cheap.goals;
        if let Some(p) = found.and_then(|p| self.checked(p)) {
            return Ok(ProofResult::Proved(p));
        }

        if semantics_sound_for(&self.sys, goal, &self.phi) {
            report.semantic_search = true;
            if let Some((model, state)) = find_countermodel(goal, &self.phi, &self.countermodels) {
                return Ok(ProofResult::Refuted { model, state });
            }
        }

        let cuts = cut_formulas(&self.sys, goal, &self.phi, &self.budget);
        let mut full = Dfs::new(
            &self.sys,
            &self.phi_set,
            &cuts,
            self.budget.max_goals,
            deadline,
        );
        let found = full.run(goal, self.budget.max_depth);
        report.goals += full.goals;
        report.stop = full.stop;
        if let Some(p) = found.and_then(|p| self.checked(p)) {
            return Ok(ProofResult::Proved(p));
        }
        Ok(ProofResult::Unknown(report))
    }

    /// `A ∘ B ⇒ C` straight from an assumption `A · B ⇒ C`.
    fn two_leaf_assumption(&self, goal: &Sequent) -> Option<Proof> {
        let Some(StructTree::Node(l, r)) = &goal.antecedent else {
            return None;
        };
        let (a, b) = (l.as_leaf()?, r.as_leaf()?);
        let s = Sequent::simple(&LFormula::prod(a, b), &goal.succedent);
        self.phi_set.contains(&s).then(|| two_leaf(&s)).flatten()
    }
}

fn ill_formed(sys: &SystemSpec, reason: String) -> Error {
    Error::IllFormed {
        system: sys.to_string(),
        reason,
    }
}

/// Whether a verified ternary countermodel shows the goal underivable. The
/// relational semantics is sound for the unit-free systems on bracket-free
/// sequents without `1`, `◇`, `□↓`; with an empty antecedent, `\R` and `/R`
/// may discharge their last formula, which the state-wise reading does not
/// validate, so such goals are only refuted when no residual occurs.
pub fn semantics_sound_for(sys: &SystemSpec, goal: &Sequent, phi: &[Sequent]) -> bool {
    if sys.unit || goal.has_bracket() {
        return false;
    }
    let mut used = 0u8;
    let mut residual = false;
    for s in std::iter::once(goal).chain(phi) {
        s.for_each_formula(&mut |f| {
            used |= f.features();
            residual |= f.any_sub(&|g| matches!(g.kind(), LKind::Under(..) | LKind::Over(..)));
        });
    }
    if used & (features::UNIT | features::MODAL) != 0 {
        return false;
    }
    goal.antecedent.is_some() || !residual
}

/// One-shot form of [`Prover::derive`].
pub fn derive(
    sys: &SystemSpec,
    phi: &[Sequent],
    goal: &Sequent,
    budget: &SearchBudget,
) -> Result<ProofResult> {
    Prover::new(*sys, phi, *budget)?.derive(goal)
}
