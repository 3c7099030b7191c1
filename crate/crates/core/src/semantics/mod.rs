//! Kripke models for the modal language, ternary relational models for the
//! Lambek-family language, model generation and countermodel search.

mod countermodel;
mod kripke;
pub mod model_json;
mod sampling;
mod ternary;

pub use countermodel::{
    falsifying_state, find_countermodel, find_kripke_countermodel, CountermodelBudget,
};
pub use kripke::{eval_modal, eval_modal_at, KripkeModel};
pub use sampling::{
    enumerate_kripke, enumerate_ternary, KripkeSampler, Rel2Class, TernarySampler,
    KRIPKE_EXHAUSTIVE_CAP, TERNARY_EXHAUSTIVE_CAP,
};
pub use ternary::{
    eval_lambek, satisfies_assumptions, sequent_true, sequent_true_everywhere, TernaryModel,
};
