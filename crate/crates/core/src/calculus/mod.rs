//! Sequent systems, derivations, the derivation checker and proof search.

mod budget;
pub mod build;
mod cache;
mod checker;
mod derivation;
mod engine;
mod facts;
mod lattice;
mod prover;
mod search;
mod system;
mod world;

pub use budget::SearchBudget;
pub use checker::{check_derivation, language_violation, CheckReport, Checker};
pub use derivation::{path_from_string, path_to_string, Derivation, Inst, Proof, Rule};
pub use engine::Engine;
pub use facts::{facts_corpus, FactCase};
pub use prover::{derive, semantics_sound_for, ProofResult, Prover, SearchReport};
pub use search::{cut_formulas, rule_instances, Dfs, RuleInstance, Stop};
pub use system::{ModalLogic, SystemSpec};
pub use world::{World, WorldKind};
