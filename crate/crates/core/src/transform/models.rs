//! Ternary models built from Kripke models.
//!
//! Each Kripke state `w` becomes two copies `w_1` (index `2i`) and `w_2`
//! (index `2i+1`), and the distinguished letter `m` is true everywhere, so
//! that `m·A` behaves like `◇A` at first copies.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::semantics::{KripkeModel, TernaryModel};

pub const M_LETTER: &str = "m";

pub fn first_copy(w: usize) -> usize {
    2 * w
}

pub fn second_copy(w: usize) -> usize {
    2 * w + 1
}

fn copies(m: &KripkeModel) -> (Vec<String>, BTreeMap<String, BTreeSet<usize>>) {
    let states = m
        .states()
        .iter()
        .flat_map(|w| [format!("{w}_1"), format!("{w}_2")])
        .collect::<Vec<_>>();
    let mut val: BTreeMap<String, BTreeSet<usize>> = m
        .val()
        .iter()
        .filter(|(p, _)| p.as_str() != M_LETTER)
        .map(|(p, ws)| {
            let set = ws
                .iter()
                .flat_map(|&w| [first_copy(w), second_copy(w)])
                .collect();
            (p.clone(), set)
        })
        .collect();
    val.insert(M_LETTER.to_string(), (0..states.len()).collect());
    (states, val)
}

/// `R' = {(w_1, w_2, u_1) | wRu}`.
pub fn build_ternary_model(m: &KripkeModel) -> TernaryModel {
    let (states, val) = copies(m);
    let rel = m
        .rel()
        .iter()
        .map(|&(w, u)| (first_copy(w), second_copy(w), first_copy(u)));
    TernaryModel::new(states, rel, val).expect("copies are in range")
}

/// `R' = {(v_i, u_1, u_2), (v_i, u_2, u_1) | vRu, i = 1, 2}`.
pub fn build_ternary_model_exchange(m: &KripkeModel) -> TernaryModel {
    let (states, val) = copies(m);
    let rel = m.rel().iter().flat_map(|&(v, u)| {
        let (v1, v2, u1, u2) = (first_copy(v), second_copy(v), first_copy(u), second_copy(u));
        [(v1, u1, u2), (v1, u2, u1), (v2, u1, u2), (v2, u2, u1)]
    });
    TernaryModel::new(states, rel, val).expect("copies are in range")
}

/// Add a unit state `1` with `R(u,1,u)` and `R(u,u,1)` for every state
/// (including `1`), putting `1` into `V'(p)` exactly when `V(p)` is all of
/// the source model. `m` stays true everywhere.
pub fn extend_with_unit(j: &TernaryModel, base: &KripkeModel) -> Result<TernaryModel> {
    if j.unit().is_some() {
        return Err(Error::UnitPresent);
    }
    let one = j.len();
    let mut states = j.states().to_vec();
    states.push("1".to_string());
    let mut rel = j.rel3().clone();
    for u in 0..=one {
        rel.insert((u, one, u));
        rel.insert((u, u, one));
    }
    let mut val = j.val().clone();
    for (p, set) in val.iter_mut() {
        let everywhere = if p == M_LETTER {
            true
        } else {
            base.val_of(p).len() == base.len()
        };
        if everywhere {
            set.insert(one);
        }
    }
    let mut out = TernaryModel::new(states, rel, val)?;
    if let Some(r2) = j.rel2() {
        out = out.with_rel2(r2.iter().copied())?;
    }
    out.with_unit(one)
}
