//! Formulas of the basic modal language.

use std::collections::BTreeSet;

#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum ModalFormula {
    Atom(String),
    Bottom,
    And(Box<ModalFormula>, Box<ModalFormula>),
    Or(Box<ModalFormula>, Box<ModalFormula>),
    Implies(Box<ModalFormula>, Box<ModalFormula>),
    Not(Box<ModalFormula>),
    Diamond(Box<ModalFormula>),
}

impl ModalFormula {
    pub fn atom(name: &str) -> Self {
        ModalFormula::Atom(name.to_string())
    }
    pub fn and(a: ModalFormula, b: ModalFormula) -> Self {
        ModalFormula::And(Box::new(a), Box::new(b))
    }
    pub fn or(a: ModalFormula, b: ModalFormula) -> Self {
        ModalFormula::Or(Box::new(a), Box::new(b))
    }
    pub fn implies(a: ModalFormula, b: ModalFormula) -> Self {
        ModalFormula::Implies(Box::new(a), Box::new(b))
    }
    pub fn not(a: ModalFormula) -> Self {
        ModalFormula::Not(Box::new(a))
    }
    pub fn diamond(a: ModalFormula) -> Self {
        ModalFormula::Diamond(Box::new(a))
    }
    /// `[]A`, which abbreviates `~<>~A`.
    pub fn boxed(a: ModalFormula) -> Self {
        Self::not(Self::diamond(Self::not(a)))
    }

    pub fn size(&self) -> usize {
        match self {
            ModalFormula::Atom(_) | ModalFormula::Bottom => 0,
            ModalFormula::Not(a) | ModalFormula::Diamond(a) => 1 + a.size(),
            ModalFormula::And(a, b) | ModalFormula::Or(a, b) | ModalFormula::Implies(a, b) => {
                1 + a.size() + b.size()
            }
        }
    }

    /// Nesting depth of `<>`.
    pub fn modal_depth(&self) -> usize {
        match self {
            ModalFormula::Atom(_) | ModalFormula::Bottom => 0,
            ModalFormula::Not(a) => a.modal_depth(),
            ModalFormula::Diamond(a) => 1 + a.modal_depth(),
            ModalFormula::And(a, b) | ModalFormula::Or(a, b) | ModalFormula::Implies(a, b) => {
                a.modal_depth().max(b.modal_depth())
            }
        }
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            ModalFormula::Atom(n) => {
                out.insert(n.clone());
            }
            ModalFormula::Bottom => {}
            ModalFormula::Not(a) | ModalFormula::Diamond(a) => a.collect_atoms(out),
            ModalFormula::And(a, b) | ModalFormula::Or(a, b) | ModalFormula::Implies(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }
}
