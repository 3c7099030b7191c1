//! Finite Kripke models and truth of modal formulas.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::syntax::ModalFormula;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KripkeModel {
    states: Vec<String>,
    index: HashMap<String, usize>,
    rel: BTreeSet<(usize, usize)>,
    succ: Vec<Vec<usize>>,
    val: BTreeMap<String, BTreeSet<usize>>,
}

impl KripkeModel {
    /// Build a model from state names, edges and a valuation, rejecting
    /// dangling state names and an empty state set.
    pub fn new(
        states: Vec<String>,
        rel: impl IntoIterator<Item = (String, String)>,
        val: BTreeMap<String, Vec<String>>,
    ) -> Result<Self> {
        let index = state_index(&states)?;
        let look = |s: &str| {
            index
                .get(s)
                .copied()
                .ok_or_else(|| Error::UnknownState(s.to_string()))
        };
        let mut pairs = Vec::new();
        for (u, v) in rel {
            pairs.push((look(&u)?, look(&v)?));
        }
        let mut ival = BTreeMap::new();
        for (p, ws) in val {
            let set = ws
                .iter()
                .map(|w| look(w))
                .collect::<Result<BTreeSet<_>>>()?;
            ival.insert(p, set);
        }
        Ok(Self::from_parts(states, index, pairs, ival))
    }

    /// States named `w0, w1, ...`.
    pub fn from_indices(
        n: usize,
        rel: impl IntoIterator<Item = (usize, usize)>,
        val: BTreeMap<String, BTreeSet<usize>>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidModel(
                "a model needs at least one state".into(),
            ));
        }
        let states: Vec<String> = (0..n).map(|i| format!("w{i}")).collect();
        let index = state_index(&states)?;
        let pairs: Vec<_> = rel.into_iter().collect();
        if pairs.iter().any(|&(u, v)| u >= n || v >= n) || val.values().flatten().any(|&w| w >= n) {
            return Err(Error::InvalidModel("state index out of range".into()));
        }
        Ok(Self::from_parts(states, index, pairs, val))
    }

    fn from_parts(
        states: Vec<String>,
        index: HashMap<String, usize>,
        pairs: Vec<(usize, usize)>,
        val: BTreeMap<String, BTreeSet<usize>>,
    ) -> Self {
        let rel: BTreeSet<_> = pairs.into_iter().collect();
        let mut succ = vec![Vec::new(); states.len()];
        for &(u, v) in &rel {
            succ[u].push(v);
        }
        KripkeModel {
            states,
            index,
            rel,
            succ,
            val,
        }
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

    pub fn rel(&self) -> &BTreeSet<(usize, usize)> {
        &self.rel
    }

    pub fn successors(&self, w: usize) -> &[usize] {
        &self.succ[w]
    }

    pub fn val(&self) -> &BTreeMap<String, BTreeSet<usize>> {
        &self.val
    }

    /// `V(p)`, empty when `p` is not mentioned.
    pub fn val_of(&self, p: &str) -> BTreeSet<usize> {
        self.val.get(p).cloned().unwrap_or_default()
    }

    /// The set of states where `a` holds.
    pub fn extension(&self, a: &ModalFormula) -> Vec<bool> {
        let n = self.len();
        match a {
            ModalFormula::Atom(p) => {
                let mut e = vec![false; n];
                if let Some(s) = self.val.get(p) {
                    for &w in s {
                        e[w] = true;
                    }
                }
                e
            }
            ModalFormula::Bottom => vec![false; n],
            ModalFormula::And(x, y) => zip(self.extension(x), self.extension(y), |a, b| a && b),
            ModalFormula::Or(x, y) => zip(self.extension(x), self.extension(y), |a, b| a || b),
            ModalFormula::Implies(x, y) => {
                zip(self.extension(x), self.extension(y), |a, b| !a || b)
            }
            ModalFormula::Not(x) => self.extension(x).into_iter().map(|b| !b).collect(),
            ModalFormula::Diamond(x) => {
                let ex = self.extension(x);
                (0..n)
                    .map(|w| self.succ[w].iter().any(|&u| ex[u]))
                    .collect()
            }
        }
    }
}

fn zip(a: Vec<bool>, b: Vec<bool>, f: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.into_iter().zip(b).map(|(x, y)| f(x, y)).collect()
}

pub(crate) fn state_index(states: &[String]) -> Result<HashMap<String, usize>> {
    if states.is_empty() {
        return Err(Error::InvalidModel(
            "a model needs at least one state".into(),
        ));
    }
    let mut index = HashMap::new();
    for (i, s) in states.iter().enumerate() {
        if index.insert(s.clone(), i).is_some() {
            return Err(Error::InvalidModel(format!("duplicate state `{s}`")));
        }
    }
    Ok(index)
}

/// `M, w ⊨ A`.
pub fn eval_modal(m: &KripkeModel, w: &str, a: &ModalFormula) -> Result<bool> {
    let i = m.state_index(w)?;
    Ok(m.extension(a)[i])
}

/// `M, w ⊨ A` with the state given by index.
pub fn eval_modal_at(m: &KripkeModel, w: usize, a: &ModalFormula) -> bool {
    m.extension(a)[w]
}
