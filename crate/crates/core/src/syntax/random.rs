//! Seeded random formulas and structure trees for property and acceptance
//! testing. Every generator takes the connective count exactly, so callers
//! control size distributions themselves.

use rand::seq::SliceRandom;
use rand::Rng;

use super::formula::LFormula;
use super::modal::ModalFormula;
use super::tree::StructTree;

/// Connectives a Lambek-family generator may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Conn {
    And,
    Or,
    Not,
    Prod,
    Under,
    Over,
    Dia,
    BoxDown,
}

impl Conn {
    pub const LATTICE: &'static [Conn] = &[Conn::And, Conn::Or];
    pub const BOOLEAN: &'static [Conn] = &[Conn::And, Conn::Or, Conn::Not];
    pub const LAMBEK: &'static [Conn] = &[Conn::Prod, Conn::Under, Conn::Over];
    pub const BFNL: &'static [Conn] = &[
        Conn::And,
        Conn::Or,
        Conn::Not,
        Conn::Prod,
        Conn::Under,
        Conn::Over,
    ];
    pub const DFNL: &'static [Conn] = &[Conn::And, Conn::Or, Conn::Prod, Conn::Under, Conn::Over];

    fn unary(self) -> bool {
        matches!(self, Conn::Not | Conn::Dia | Conn::BoxDown)
    }
}

/// A formula with exactly `size` connectives drawn from `conns` and leaves
/// drawn from `leaves`.
pub fn random_lambek<R: Rng + ?Sized>(
    rng: &mut R,
    leaves: &[LFormula],
    conns: &[Conn],
    size: usize,
) -> LFormula {
    assert!(!leaves.is_empty() && !conns.is_empty());
    if size == 0 {
        return leaves.choose(rng).unwrap().clone();
    }
    let c = *conns.choose(rng).unwrap();
    if c.unary() {
        let a = random_lambek(rng, leaves, conns, size - 1);
        return match c {
            Conn::Not => LFormula::not(&a),
            Conn::Dia => LFormula::dia(&a),
            _ => LFormula::box_down(&a),
        };
    }
    let left = rng.gen_range(0..size);
    let a = random_lambek(rng, leaves, conns, left);
    let b = random_lambek(rng, leaves, conns, size - 1 - left);
    match c {
        Conn::And => LFormula::and(&a, &b),
        Conn::Or => LFormula::or(&a, &b),
        Conn::Prod => LFormula::prod(&a, &b),
        Conn::Under => LFormula::under(&a, &b),
        _ => LFormula::over(&a, &b),
    }
}

/// A modal formula with exactly `size` connectives among `¬ ∧ ∨ → ◇` over
/// `atoms`, plus `⊥` as an occasional leaf.
pub fn random_modal<R: Rng + ?Sized>(rng: &mut R, atoms: &[&str], size: usize) -> ModalFormula {
    if size == 0 {
        return if rng.gen_ratio(1, 8) {
            ModalFormula::Bottom
        } else {
            ModalFormula::atom(atoms.choose(rng).unwrap())
        };
    }
    let pick = rng.gen_range(0..5);
    if pick >= 3 {
        let a = random_modal(rng, atoms, size - 1);
        return if pick == 3 {
            ModalFormula::not(a)
        } else {
            ModalFormula::diamond(a)
        };
    }
    let left = rng.gen_range(0..size);
    let a = random_modal(rng, atoms, left);
    let b = random_modal(rng, atoms, size - 1 - left);
    match pick {
        0 => ModalFormula::and(a, b),
        1 => ModalFormula::or(a, b),
        _ => ModalFormula::implies(a, b),
    }
}

/// A bracket-free structure tree with exactly `n ≥ 1` leaves.
pub fn random_tree<R: Rng + ?Sized>(rng: &mut R, leaves: &[LFormula], n: usize) -> StructTree {
    assert!(n >= 1 && !leaves.is_empty());
    if n == 1 {
        return StructTree::leaf(leaves.choose(rng).unwrap());
    }
    let left = rng.gen_range(1..n);
    StructTree::node(
        random_tree(rng, leaves, left),
        random_tree(rng, leaves, n - left),
    )
}
