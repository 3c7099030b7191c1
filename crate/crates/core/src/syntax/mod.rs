//! Abstract syntax for the modal and Lambek-family languages, the concrete
//! ASCII grammar, and structural utilities.

mod closure;
mod formula;
pub mod json;
mod lexer;
mod modal;
mod parser;
mod random;
mod render;
mod tree;

pub use closure::{
    closure_contains, closure_layer_counts, enumerate_closure, for_each_in_closure, ClosureMode,
    ClosureSpec,
};
pub use formula::{features, FreshTag, LFormula, LKind};
pub use modal::ModalFormula;
pub use parser::{parse_lambek, parse_modal, parse_sequent, parse_tree};
pub use random::{random_lambek, random_modal, random_tree, Conn};
pub use tree::{phi_of_tree, subformulas, subformulas_of_sequents, Sequent, Step, StructTree};
