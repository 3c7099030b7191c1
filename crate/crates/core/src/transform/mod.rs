//! Translations between the logics and the model constructions that
//! witness them.

mod embed;
mod models;

pub use embed::{
    complement, dagger, ddagger, ddagger_problem, ec, exn, is_prime, pipeline_k_to_dfnl, psi_set,
    restore_negation, restore_negation_in, section, section_embed, theta_set, tilde,
    DdaggerProblem, Pipeline,
};
pub use models::{
    build_ternary_model, build_ternary_model_exchange, extend_with_unit, first_copy, second_copy,
    M_LETTER,
};
