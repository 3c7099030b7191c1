//! Ternary relational models and truth of Lambek-family formulas.
//!
//! Fresh letters missing from the valuation get their intended reading:
//! `p_A` is the complement of `A`, `p_bot` is empty and `p_top` is
//! everything. An explicit valuation entry always wins.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::kripke::state_index;
use crate::error::{Error, Result};
use crate::syntax::{FreshTag, LFormula, LKind, Sequent, StructTree};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TernaryModel {
    states: Vec<String>,
    index: HashMap<String, usize>,
    rel3: BTreeSet<(usize, usize, usize)>,
    val: BTreeMap<String, BTreeSet<usize>>,
    unit: Option<usize>,
    /// Binary relation for `◇`/`□↓`; an extension beyond the ternary frame.
    rel2: Option<BTreeSet<(usize, usize)>>,
}

impl TernaryModel {
    pub fn new(
        states: Vec<String>,
        rel3: impl IntoIterator<Item = (usize, usize, usize)>,
        val: BTreeMap<String, BTreeSet<usize>>,
    ) -> Result<Self> {
        let index = state_index(&states)?;
        let n = states.len();
        let rel3: BTreeSet<_> = rel3.into_iter().collect();
        if rel3.iter().any(|&(a, b, c)| a >= n || b >= n || c >= n)
            || val.values().flatten().any(|&w| w >= n)
        {
            return Err(Error::InvalidModel("state index out of range".into()));
        }
        Ok(TernaryModel {
            states,
            index,
            rel3,
            val,
            unit: None,
            rel2: None,
        })
    }

    /// States named `u0, u1, ...`.
    pub fn from_indices(
        n: usize,
        rel3: impl IntoIterator<Item = (usize, usize, usize)>,
        val: BTreeMap<String, BTreeSet<usize>>,
    ) -> Result<Self> {
        Self::new((0..n).map(|i| format!("u{i}")).collect(), rel3, val)
    }

    /// Designate a unit element, checking `R(u,1,u)` and `R(u,u,1)` for all u.
    pub fn with_unit(mut self, unit: usize) -> Result<Self> {
        if unit >= self.len() {
            return Err(Error::InvalidModel("unit index out of range".into()));
        }
        for u in 0..self.len() {
            if !self.rel3.contains(&(u, unit, u)) || !self.rel3.contains(&(u, u, unit)) {
                return Err(Error::InvalidModel(format!(
                    "unit conditions fail at state `{}`",
                    self.states[u]
                )));
            }
        }
        self.unit = Some(unit);
        Ok(self)
    }

    pub fn with_rel2(mut self, rel2: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let r: BTreeSet<_> = rel2.into_iter().collect();
        if r.iter().any(|&(a, b)| a >= self.len() || b >= self.len()) {
            return Err(Error::InvalidModel("state index out of range".into()));
        }
        self.rel2 = Some(r);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_index(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownState(name.to_string()))
    }

    pub fn rel3(&self) -> &BTreeSet<(usize, usize, usize)> {
        &self.rel3
    }

    pub fn rel2(&self) -> Option<&BTreeSet<(usize, usize)>> {
        self.rel2.as_ref()
    }

    pub fn val(&self) -> &BTreeMap<String, BTreeSet<usize>> {
        &self.val
    }

    pub fn unit(&self) -> Option<usize> {
        self.unit
    }

    /// The set of states where `a` holds.
    pub fn extension(&self, a: &LFormula) -> Result<Vec<bool>> {
        let n = self.len();
        let un = |x: &LFormula, f: &dyn Fn(bool) -> bool| -> Result<Vec<bool>> {
            Ok(self.extension(x)?.into_iter().map(f).collect())
        };
        let bin =
            |x: &LFormula, y: &LFormula, f: &dyn Fn(bool, bool) -> bool| -> Result<Vec<bool>> {
                let (ex, ey) = (self.extension(x)?, self.extension(y)?);
                Ok(ex.into_iter().zip(ey).map(|(p, q)| f(p, q)).collect())
            };
        Ok(match a.kind() {
            LKind::Atom(_) | LKind::Fresh(_) => {
                let entry = match a.kind() {
                    LKind::Atom(name) => self.val.get(&**name),
                    _ => self.val.get(&a.to_string()),
                };
                match (entry, a.kind()) {
                    (Some(s), _) => (0..n).map(|w| s.contains(&w)).collect(),
                    (None, LKind::Fresh(FreshTag::NegOf(x))) => un(x, &|b| !b)?,
                    (None, LKind::Fresh(FreshTag::TopMark)) => vec![true; n],
                    _ => vec![false; n],
                }
            }
            LKind::Bottom => vec![false; n],
            LKind::Top => vec![true; n],
            LKind::Unit => {
                let e = self.unit.ok_or(Error::MissingUnit)?;
                (0..n).map(|w| w == e).collect()
            }
            LKind::And(x, y) => bin(x, y, &|p, q| p && q)?,
            LKind::Or(x, y) => bin(x, y, &|p, q| p || q)?,
            LKind::Not(x) => un(x, &|b| !b)?,
            LKind::Prod(x, y) => {
                let (ex, ey) = (self.extension(x)?, self.extension(y)?);
                let mut e = vec![false; n];
                for &(u, v, w) in &self.rel3 {
                    if ex[v] && ey[w] {
                        e[u] = true;
                    }
                }
                e
            }
            // A/B at u: for all (w,u,v) in R, v ⊨ B implies w ⊨ A.
            LKind::Over(x, y) => {
                let (ex, ey) = (self.extension(x)?, self.extension(y)?);
                let mut e = vec![true; n];
                for &(w, u, v) in &self.rel3 {
                    if ey[v] && !ex[w] {
                        e[u] = false;
                    }
                }
                e
            }
            // A\B at u: for all (v,w,u) in R, w ⊨ A implies v ⊨ B.
            LKind::Under(x, y) => {
                let (ex, ey) = (self.extension(x)?, self.extension(y)?);
                let mut e = vec![true; n];
                for &(v, w, u) in &self.rel3 {
                    if ex[w] && !ey[v] {
                        e[u] = false;
                    }
                }
                e
            }
            LKind::Dia(x) => {
                let r2 = self.require_rel2()?;
                let ex = self.extension(x)?;
                let mut e = vec![false; n];
                for &(u, v) in r2 {
                    if ex[v] {
                        e[u] = true;
                    }
                }
                e
            }
            LKind::BoxDown(x) => {
                let r2 = self.require_rel2()?;
                let ex = self.extension(x)?;
                let mut e = vec![true; n];
                for &(v, u) in r2 {
                    if !ex[v] {
                        e[u] = false;
                    }
                }
                e
            }
        })
    }

    fn require_rel2(&self) -> Result<&BTreeSet<(usize, usize)>> {
        self.rel2
            .as_ref()
            .ok_or_else(|| Error::InvalidModel("modal connectives need a binary relation".into()))
    }

    /// Where a sequent holds: `φ(Γ)` implies the succedent; an empty
    /// antecedent means the succedent itself.
    pub fn sequent_extension(&self, s: &Sequent) -> Result<Vec<bool>> {
        let succ = self.extension(&s.succedent)?;
        match &s.antecedent {
            None => Ok(succ),
            Some(t) => {
                let ant = self.tree_extension(t)?;
                Ok(ant.into_iter().zip(succ).map(|(a, b)| !a || b).collect())
            }
        }
    }

    fn tree_extension(&self, t: &StructTree) -> Result<Vec<bool>> {
        match t {
            StructTree::Leaf(f) => self.extension(f),
            StructTree::Node(l, r) => {
                let (el, er) = (self.tree_extension(l)?, self.tree_extension(r)?);
                let mut e = vec![false; self.len()];
                for &(u, v, w) in &self.rel3 {
                    if el[v] && er[w] {
                        e[u] = true;
                    }
                }
                Ok(e)
            }
            StructTree::Bracket(_) => Err(Error::UnsupportedStructure(
                "sequent truth is defined for bracket-free antecedents".into(),
            )),
        }
    }
}

/// `J, u ⊨ A`.
pub fn eval_lambek(j: &TernaryModel, u: &str, a: &LFormula) -> Result<bool> {
    let i = j.state_index(u)?;
    Ok(j.extension(a)?[i])
}

pub fn sequent_true(j: &TernaryModel, u: &str, s: &Sequent) -> Result<bool> {
    let i = j.state_index(u)?;
    Ok(j.sequent_extension(s)?[i])
}

pub fn sequent_true_everywhere(j: &TernaryModel, s: &Sequent) -> Result<bool> {
    Ok(j.sequent_extension(s)?.into_iter().all(|b| b))
}

/// Every assumption holds at every state. Evaluation errors count as failure.
pub fn satisfies_assumptions(j: &TernaryModel, phi: &[Sequent]) -> bool {
    phi.iter()
        .all(|s| sequent_true_everywhere(j, s).unwrap_or(false))
}
