//! JSON model files:
//! `{"states":[...], "rel":[[u,v],...] or [[u,v,w],...], "val":{"p":[...]}, "unit":"e"}`.
//! Ternary models may also carry `"rel2":[[u,v],...]` for the modal
//! connectives.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::kripke::KripkeModel;
use super::ternary::TernaryModel;
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
struct ModelDoc {
    states: Vec<String>,
    #[serde(default)]
    rel: Vec<Vec<String>>,
    #[serde(default)]
    val: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    unit: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rel2: Option<Vec<Vec<String>>>,
}

fn names(states: &[String], idx: impl IntoIterator<Item = usize>) -> Vec<String> {
    idx.into_iter().map(|i| states[i].clone()).collect()
}

fn val_doc(
    states: &[String],
    val: &BTreeMap<String, BTreeSet<usize>>,
) -> BTreeMap<String, Vec<String>> {
    val.iter()
        .map(|(p, s)| (p.clone(), names(states, s.iter().copied())))
        .collect()
}

pub fn kripke_to_json(m: &KripkeModel) -> Value {
    let st = m.states();
    let doc = ModelDoc {
        states: st.to_vec(),
        rel: m.rel().iter().map(|&(u, v)| names(st, [u, v])).collect(),
        val: val_doc(st, m.val()),
        unit: None,
        rel2: None,
    };
    serde_json::to_value(doc).expect("model documents serialize")
}

pub fn ternary_to_json(j: &TernaryModel) -> Value {
    let st = j.states();
    let doc = ModelDoc {
        states: st.to_vec(),
        rel: j
            .rel3()
            .iter()
            .map(|&(u, v, w)| names(st, [u, v, w]))
            .collect(),
        val: val_doc(st, j.val()),
        unit: j.unit().map(|u| st[u].clone()),
        rel2: j
            .rel2()
            .map(|r| r.iter().map(|&(u, v)| names(st, [u, v])).collect()),
    };
    serde_json::to_value(doc).expect("model documents serialize")
}

fn parse_doc(v: &Value) -> Result<ModelDoc> {
    Ok(serde_json::from_value(v.clone())?)
}

fn lookup(doc: &ModelDoc, s: &str) -> Result<usize> {
    doc.states
        .iter()
        .position(|x| x == s)
        .ok_or_else(|| Error::UnknownState(s.to_string()))
}

fn tuple(doc: &ModelDoc, t: &[String], arity: usize) -> Result<Vec<usize>> {
    if t.len() != arity {
        return Err(Error::InvalidModel(format!(
            "expected {arity}-tuples in `rel`, found {}",
            t.len()
        )));
    }
    t.iter().map(|s| lookup(doc, s)).collect()
}

fn index_val(doc: &ModelDoc) -> Result<BTreeMap<String, BTreeSet<usize>>> {
    doc.val
        .iter()
        .map(|(p, ws)| {
            Ok((
                p.clone(),
                ws.iter().map(|w| lookup(doc, w)).collect::<Result<_>>()?,
            ))
        })
        .collect()
}

pub fn kripke_from_json(v: &Value) -> Result<KripkeModel> {
    let doc = parse_doc(v)?;
    if doc.unit.is_some() || doc.rel2.is_some() {
        return Err(Error::InvalidModel(
            "Kripke models have no unit or rel2".into(),
        ));
    }
    let rel = doc
        .rel
        .iter()
        .map(|t| tuple(&doc, t, 2).map(|x| (doc.states[x[0]].clone(), doc.states[x[1]].clone())))
        .collect::<Result<Vec<_>>>()?;
    KripkeModel::new(doc.states.clone(), rel, doc.val.clone())
}

pub fn ternary_from_json(v: &Value) -> Result<TernaryModel> {
    let doc = parse_doc(v)?;
    let rel = doc
        .rel
        .iter()
        .map(|t| tuple(&doc, t, 3).map(|x| (x[0], x[1], x[2])))
        .collect::<Result<Vec<_>>>()?;
    let mut j = TernaryModel::new(doc.states.clone(), rel, index_val(&doc)?)?;
    if let Some(r2) = &doc.rel2 {
        let pairs = r2
            .iter()
            .map(|t| tuple(&doc, t, 2).map(|x| (x[0], x[1])))
            .collect::<Result<Vec<_>>>()?;
        j = j.with_rel2(pairs)?;
    }
    if let Some(u) = &doc.unit {
        j = j.with_unit(lookup(&doc, u)?)?;
    }
    Ok(j)
}

/// True when the `rel` entries are pairs (or the relation is empty and
/// there is no unit), i.e. the document describes a Kripke model.
pub fn looks_binary(v: &Value) -> bool {
    match v.get("rel").and_then(Value::as_array) {
        Some(r) if !r.is_empty() => r[0].as_array().is_some_and(|t| t.len() == 2),
        _ => v.get("unit").is_none() && v.get("rel2").is_none(),
    }
}
