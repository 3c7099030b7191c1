//! Structured antecedents and sequents.
//!
//! A context `Γ[·]` is represented by a path from the root of a tree to the
//! hole, so left rules and cut can name the position they act on.

use std::collections::BTreeSet;

use super::formula::LFormula;
use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Step {
    Left,
    Right,
    Inside,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum StructTree {
    Leaf(LFormula),
    /// `Γ ∘ Δ`
    Node(Box<StructTree>, Box<StructTree>),
    /// `⟨Γ⟩`
    Bracket(Box<StructTree>),
}

impl StructTree {
    pub fn leaf(f: &LFormula) -> Self {
        StructTree::Leaf(f.clone())
    }
    pub fn node(l: StructTree, r: StructTree) -> Self {
        StructTree::Node(Box::new(l), Box::new(r))
    }
    pub fn bracket(t: StructTree) -> Self {
        StructTree::Bracket(Box::new(t))
    }

    pub fn as_leaf(&self) -> Option<&LFormula> {
        match self {
            StructTree::Leaf(f) => Some(f),
            _ => None,
        }
    }

    pub fn at(&self, path: &[Step]) -> Option<&StructTree> {
        let Some((step, rest)) = path.split_first() else {
            return Some(self);
        };
        match (self, step) {
            (StructTree::Node(l, _), Step::Left) => l.at(rest),
            (StructTree::Node(_, r), Step::Right) => r.at(rest),
            (StructTree::Bracket(c), Step::Inside) => c.at(rest),
            _ => None,
        }
    }

    /// The tree with the subtree at `path` replaced by `with`.
    pub fn replace(&self, path: &[Step], with: StructTree) -> Option<StructTree> {
        let Some((step, rest)) = path.split_first() else {
            return Some(with);
        };
        match (self, step) {
            (StructTree::Node(l, r), Step::Left) => {
                Some(StructTree::node(l.replace(rest, with)?, (**r).clone()))
            }
            (StructTree::Node(l, r), Step::Right) => {
                Some(StructTree::node((**l).clone(), r.replace(rest, with)?))
            }
            (StructTree::Bracket(c), Step::Inside) => {
                Some(StructTree::bracket(c.replace(rest, with)?))
            }
            _ => None,
        }
    }

    /// Every position in the tree, outermost-leftmost first.
    pub fn positions(&self) -> Vec<Vec<Step>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        self.walk(&mut cur, &mut out);
        out
    }

    fn walk(&self, cur: &mut Vec<Step>, out: &mut Vec<Vec<Step>>) {
        out.push(cur.clone());
        match self {
            StructTree::Leaf(_) => {}
            StructTree::Node(l, r) => {
                cur.push(Step::Left);
                l.walk(cur, out);
                cur.pop();
                cur.push(Step::Right);
                r.walk(cur, out);
                cur.pop();
            }
            StructTree::Bracket(c) => {
                cur.push(Step::Inside);
                c.walk(cur, out);
                cur.pop();
            }
        }
    }

    /// Leaf formulas with their paths, left to right.
    pub fn leaves(&self) -> Vec<(Vec<Step>, LFormula)> {
        self.positions()
            .into_iter()
            .filter_map(|p| {
                self.at(&p)
                    .and_then(|t| t.as_leaf().cloned())
                    .map(|f| (p, f))
            })
            .collect()
    }

    pub fn for_each_formula(&self, f: &mut impl FnMut(&LFormula)) {
        match self {
            StructTree::Leaf(a) => f(a),
            StructTree::Node(l, r) => {
                l.for_each_formula(f);
                r.for_each_formula(f);
            }
            StructTree::Bracket(c) => c.for_each_formula(f),
        }
    }

    /// Apply `f` to every leaf formula, keeping the shape.
    pub fn map_formulas<E>(
        &self,
        f: &mut impl FnMut(&LFormula) -> std::result::Result<LFormula, E>,
    ) -> std::result::Result<StructTree, E> {
        Ok(match self {
            StructTree::Leaf(a) => StructTree::Leaf(f(a)?),
            StructTree::Node(l, r) => StructTree::node(l.map_formulas(f)?, r.map_formulas(f)?),
            StructTree::Bracket(c) => StructTree::bracket(c.map_formulas(f)?),
        })
    }

    pub fn has_bracket(&self) -> bool {
        match self {
            StructTree::Leaf(_) => false,
            StructTree::Node(l, r) => l.has_bracket() || r.has_bracket(),
            StructTree::Bracket(_) => true,
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            StructTree::Leaf(_) => 1,
            StructTree::Node(l, r) => l.leaf_count() + r.leaf_count(),
            StructTree::Bracket(c) => c.leaf_count(),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            StructTree::Leaf(_) => 0,
            StructTree::Node(l, r) => 1 + l.node_count() + r.node_count(),
            StructTree::Bracket(c) => c.node_count(),
        }
    }
}

/// `φ(A) = A`, `φ(Γ ∘ Δ) = φ(Γ) · φ(Δ)`.
pub fn phi_of_tree(t: &StructTree) -> Result<LFormula> {
    match t {
        StructTree::Leaf(a) => Ok(a.clone()),
        StructTree::Node(l, r) => Ok(LFormula::prod(&phi_of_tree(l)?, &phi_of_tree(r)?)),
        StructTree::Bracket(_) => Err(Error::UnsupportedStructure(
            "bracket has no associated formula".into(),
        )),
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Sequent {
    /// `None` is the empty antecedent.
    pub antecedent: Option<StructTree>,
    pub succedent: LFormula,
}

impl Sequent {
    pub fn new(antecedent: Option<StructTree>, succedent: LFormula) -> Self {
        Sequent {
            antecedent,
            succedent,
        }
    }

    /// `A ⇒ B`
    pub fn simple(a: &LFormula, b: &LFormula) -> Self {
        Sequent::new(Some(StructTree::leaf(a)), b.clone())
    }

    /// `⇒ B`
    pub fn empty(b: &LFormula) -> Self {
        Sequent::new(None, b.clone())
    }

    pub fn tree(t: StructTree, b: &LFormula) -> Self {
        Sequent::new(Some(t), b.clone())
    }

    pub fn is_simple(&self) -> bool {
        matches!(self.antecedent, Some(StructTree::Leaf(_)))
    }

    /// The antecedent formula of a simple sequent.
    pub fn simple_lhs(&self) -> Option<&LFormula> {
        self.antecedent.as_ref().and_then(StructTree::as_leaf)
    }

    pub fn for_each_formula(&self, f: &mut impl FnMut(&LFormula)) {
        if let Some(t) = &self.antecedent {
            t.for_each_formula(f);
        }
        f(&self.succedent);
    }

    pub fn formulas(&self) -> Vec<LFormula> {
        let mut out = Vec::new();
        self.for_each_formula(&mut |f| out.push(f.clone()));
        out
    }

    /// Apply `f` to every formula, keeping the shape.
    pub fn map_formulas<E>(
        &self,
        f: &mut impl FnMut(&LFormula) -> std::result::Result<LFormula, E>,
    ) -> std::result::Result<Sequent, E> {
        let antecedent = match &self.antecedent {
            Some(t) => Some(t.map_formulas(f)?),
            None => None,
        };
        Ok(Sequent::new(antecedent, f(&self.succedent)?))
    }

    pub fn has_bracket(&self) -> bool {
        self.antecedent
            .as_ref()
            .is_some_and(StructTree::has_bracket)
    }

    /// Connectives in formulas plus structural operations.
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.for_each_formula(&mut |f| n += f.size());
        n + self.antecedent.as_ref().map_or(0, StructTree::node_count)
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.for_each_formula(&mut |f| f.collect_atoms(&mut out));
        out
    }
}

pub fn subformulas(f: &LFormula) -> BTreeSet<LFormula> {
    let mut out = BTreeSet::new();
    f.for_each_sub(&mut |g| {
        out.insert(g.clone());
    });
    out
}

/// Union of the subformula sets of every formula in the given sequents.
pub fn subformulas_of_sequents<'a>(
    seqs: impl IntoIterator<Item = &'a Sequent>,
) -> BTreeSet<LFormula> {
    let mut out = BTreeSet::new();
    for s in seqs {
        s.for_each_formula(&mut |f| {
            f.for_each_sub(&mut |g| {
                out.insert(g.clone());
            })
        });
    }
    out
}
