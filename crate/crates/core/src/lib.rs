//! Workbench for nonassociative Lambek calculi with Boolean, distributive and
//! modal connectives.
//!
//! The crate is organised bottom-up:
//!
//! * [`syntax`]: formulas, structured antecedents, sequents, grammar and
//!   closures.
//! * [`semantics`]: Kripke and ternary relational models, evaluation and
//!   countermodel search.
//! * [`calculus`]: rule schemas, the system registry, proof search and an
//!   independent derivation checker.
//! * [`transform`]: the translations between modal logic K, BFNL*, BDFNL*
//!   and DFNL*, and the model constructions that witness them.
//! * [`kprover`]: a tableau decision procedure for K used as an oracle.

pub mod calculus;
pub mod error;
pub mod kprover;
pub mod semantics;
pub mod syntax;
pub mod transform;

pub use error::{Error, Result};
