//! Rule-labelled derivations.
//!
//! Premises are shared through `Arc`, so a derivation is a DAG; lemmas used
//! many times are stored once. Serialization keeps the nested shape and
//! emits later occurrences of a shared node as `{"ref": n}`.

use rustc_hash::{FxHashMap as HashMap, FxHashSet as HashSet};
use std::fmt::{self, Write as _};
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::syntax::{parse_lambek, parse_sequent, LFormula, Sequent, Step};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Id,
    D,
    Bot,
    Top,
    Neg1,
    Neg2,
    UnderL,
    UnderR,
    OverL,
    OverR,
    ProdL,
    ProdR,
    Cut,
    AndL,
    AndR,
    OrL,
    OrR,
    Exch,
    DiaL,
    DiaR,
    BoxL,
    BoxR,
    AxT,
    Ax4,
    Ax5,
    OneR,
    OneLl,
    OneLr,
    Assumption,
}

impl Rule {
    pub const ALL: [Rule; 29] = [
        Rule::Id,
        Rule::D,
        Rule::Bot,
        Rule::Top,
        Rule::Neg1,
        Rule::Neg2,
        Rule::UnderL,
        Rule::UnderR,
        Rule::OverL,
        Rule::OverR,
        Rule::ProdL,
        Rule::ProdR,
        Rule::Cut,
        Rule::AndL,
        Rule::AndR,
        Rule::OrL,
        Rule::OrR,
        Rule::Exch,
        Rule::DiaL,
        Rule::DiaR,
        Rule::BoxL,
        Rule::BoxR,
        Rule::AxT,
        Rule::Ax4,
        Rule::Ax5,
        Rule::OneR,
        Rule::OneLl,
        Rule::OneLr,
        Rule::Assumption,
    ];

    /// Machine name used in JSON.
    pub fn name(self) -> &'static str {
        match self {
            Rule::Id => "id",
            Rule::D => "d",
            Rule::Bot => "bot",
            Rule::Top => "top",
            Rule::Neg1 => "neg1",
            Rule::Neg2 => "neg2",
            Rule::UnderL => "under_l",
            Rule::UnderR => "under_r",
            Rule::OverL => "over_l",
            Rule::OverR => "over_r",
            Rule::ProdL => "prod_l",
            Rule::ProdR => "prod_r",
            Rule::Cut => "cut",
            Rule::AndL => "and_l",
            Rule::AndR => "and_r",
            Rule::OrL => "or_l",
            Rule::OrR => "or_r",
            Rule::Exch => "exch",
            Rule::DiaL => "dia_l",
            Rule::DiaR => "dia_r",
            Rule::BoxL => "box_l",
            Rule::BoxR => "box_r",
            Rule::AxT => "ax_t",
            Rule::Ax4 => "ax_4",
            Rule::Ax5 => "ax_5",
            Rule::OneR => "one_r",
            Rule::OneLl => "one_l_l",
            Rule::OneLr => "one_l_r",
            Rule::Assumption => "assumption",
        }
    }

    /// Conventional label used in text output.
    pub fn label(self) -> &'static str {
        match self {
            Rule::Id => "Id",
            Rule::D => "D",
            Rule::Bot => "⊥",
            Rule::Top => "⊤",
            Rule::Neg1 => "¬1",
            Rule::Neg2 => "¬2",
            Rule::UnderL => "\\L",
            Rule::UnderR => "\\R",
            Rule::OverL => "/L",
            Rule::OverR => "/R",
            Rule::ProdL => "·L",
            Rule::ProdR => "·R",
            Rule::Cut => "Cut",
            Rule::AndL => "∧L",
            Rule::AndR => "∧R",
            Rule::OrL => "∨L",
            Rule::OrR => "∨R",
            Rule::Exch => "·E",
            Rule::DiaL => "◇L",
            Rule::DiaR => "◇R",
            Rule::BoxL => "□↓L",
            Rule::BoxR => "□↓R",
            Rule::AxT => "T",
            Rule::Ax4 => "4",
            Rule::Ax5 => "5",
            Rule::OneR => "1R",
            Rule::OneLl => "1L_l",
            Rule::OneLr => "1L_r",
            Rule::Assumption => "Asm",
        }
    }

    pub fn from_name(s: &str) -> Option<Rule> {
        Rule::ALL.into_iter().find(|r| r.name() == s)
    }

    pub fn arity(self) -> usize {
        match self {
            Rule::Id
            | Rule::D
            | Rule::Bot
            | Rule::Top
            | Rule::Neg1
            | Rule::Neg2
            | Rule::AxT
            | Rule::Ax4
            | Rule::Ax5
            | Rule::OneR
            | Rule::Assumption => 0,
            Rule::UnderL | Rule::OverL | Rule::ProdR | Rule::Cut | Rule::AndR | Rule::OrL => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// What a rule application needs beyond its conclusion and premises: the
/// position it acts on, the disjunct/conjunct index of `∧L`/`∨R`, and the
/// cut formula.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Inst {
    pub path: Vec<Step>,
    pub index: Option<u8>,
    pub formula: Option<LFormula>,
}

impl Inst {
    pub fn at(path: Vec<Step>) -> Self {
        Inst {
            path,
            ..Default::default()
        }
    }

    pub fn index(i: u8) -> Self {
        Inst {
            index: Some(i),
            ..Default::default()
        }
    }
}

pub fn path_to_string(path: &[Step]) -> String {
    path.iter()
        .map(|s| match s {
            Step::Left => 'L',
            Step::Right => 'R',
            Step::Inside => 'I',
        })
        .collect()
}

pub fn path_from_string(s: &str) -> Result<Vec<Step>> {
    s.chars()
        .map(|c| match c {
            'L' => Ok(Step::Left),
            'R' => Ok(Step::Right),
            'I' => Ok(Step::Inside),
            _ => Err(Error::Json(format!("bad path step `{c}`"))),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub conclusion: Sequent,
    pub rule: Rule,
    pub inst: Inst,
    pub premises: Vec<Proof>,
}

pub type Proof = Arc<Derivation>;

impl Derivation {
    pub fn new(conclusion: Sequent, rule: Rule, inst: Inst, premises: Vec<Proof>) -> Proof {
        Arc::new(Derivation {
            conclusion,
            rule,
            inst,
            premises,
        })
    }

    pub fn leaf(conclusion: Sequent, rule: Rule) -> Proof {
        Self::new(conclusion, rule, Inst::default(), Vec::new())
    }

    /// Distinct nodes, each listed once, parents before children.
    pub fn nodes(self: &Arc<Self>) -> Vec<Proof> {
        // Reverse postorder, so shared subproofs come after every parent.
        let mut seen = HashSet::default();
        let mut post = Vec::new();
        let mut stack = vec![(self.clone(), false)];
        while let Some((d, expanded)) = stack.pop() {
            if expanded {
                post.push(d);
            } else if seen.insert(Arc::as_ptr(&d)) {
                stack.push((d.clone(), true));
                stack.extend(d.premises.iter().map(|p| (p.clone(), false)));
            }
        }
        post.reverse();
        post
    }

    /// Number of distinct nodes.
    pub fn node_count(self: &Arc<Self>) -> usize {
        self.nodes().len()
    }

    /// Longest root-to-leaf path, counted in nodes.
    pub fn height(self: &Arc<Self>) -> usize {
        let mut memo: HashMap<*const Derivation, usize> = HashMap::default();
        let nodes = self.nodes();
        for d in nodes.iter().rev() {
            let h = 1 + d
                .premises
                .iter()
                .map(|p| memo.get(&Arc::as_ptr(p)).copied().unwrap_or(0))
                .max()
                .unwrap_or(0);
            memo.insert(Arc::as_ptr(d), h);
        }
        memo[&Arc::as_ptr(self)]
    }

    /// Every formula occurring in some conclusion.
    pub fn for_each_formula(self: &Arc<Self>, f: &mut impl FnMut(&LFormula)) {
        for d in self.nodes() {
            d.conclusion.for_each_formula(f);
            if let Some(a) = &d.inst.formula {
                f(a);
            }
        }
    }

    /// Apply a formula map to every conclusion and cut formula, preserving
    /// sharing. `relabel` may change the rule of a node after mapping.
    pub fn map_formulas(
        self: &Arc<Self>,
        f: &mut impl FnMut(&LFormula) -> LFormula,
        relabel: &impl Fn(&Sequent, Rule) -> Rule,
    ) -> Proof {
        let mut done: HashMap<*const Derivation, Proof> = HashMap::default();
        for d in self.nodes().iter().rev() {
            let conclusion = d
                .conclusion
                .map_formulas(&mut |a| Ok::<_, ()>(f(a)))
                .expect("infallible");
            let premises = d
                .premises
                .iter()
                .map(|p| done[&Arc::as_ptr(p)].clone())
                .collect();
            let inst = Inst {
                formula: d.inst.formula.as_ref().map(&mut *f),
                ..d.inst.clone()
            };
            let rule = relabel(&conclusion, d.rule);
            done.insert(
                Arc::as_ptr(d),
                Derivation::new(conclusion, rule, inst, premises),
            );
        }
        done[&Arc::as_ptr(self)].clone()
    }

    pub fn to_json(self: &Arc<Self>) -> Value {
        let shared = self.shared_nodes();
        let mut ids = HashMap::default();
        self.json_node(&shared, &mut ids)
    }

    fn shared_nodes(self: &Arc<Self>) -> HashSet<*const Derivation> {
        let mut count: HashMap<*const Derivation, usize> = HashMap::default();
        for d in self.nodes() {
            for p in &d.premises {
                *count.entry(Arc::as_ptr(p)).or_default() += 1;
            }
        }
        count
            .into_iter()
            .filter(|&(_, c)| c > 1)
            .map(|(p, _)| p)
            .collect()
    }

    fn json_node(
        self: &Arc<Self>,
        shared: &HashSet<*const Derivation>,
        ids: &mut HashMap<*const Derivation, usize>,
    ) -> Value {
        let ptr = Arc::as_ptr(self);
        if let Some(id) = ids.get(&ptr) {
            return json!({ "ref": id });
        }
        let mut obj = Map::new();
        if shared.contains(&ptr) {
            let id = ids.len();
            ids.insert(ptr, id);
            obj.insert("id".into(), json!(id));
        }
        obj.insert("seq".into(), json!(self.conclusion.to_string()));
        obj.insert("rule".into(), json!(self.rule.name()));
        let mut inst = Map::new();
        if !self.inst.path.is_empty() {
            inst.insert("path".into(), json!(path_to_string(&self.inst.path)));
        }
        if let Some(i) = self.inst.index {
            inst.insert("index".into(), json!(i));
        }
        if let Some(a) = &self.inst.formula {
            inst.insert("formula".into(), json!(a.to_string()));
        }
        if !inst.is_empty() {
            obj.insert("inst".into(), Value::Object(inst));
        }
        let premises: Vec<Value> = self
            .premises
            .iter()
            .map(|p| p.json_node(shared, ids))
            .collect();
        if !premises.is_empty() {
            obj.insert("premises".into(), Value::Array(premises));
        }
        Value::Object(obj)
    }

    pub fn from_json(v: &Value) -> Result<Proof> {
        let mut ids = HashMap::default();
        Self::parse_node(v, &mut ids)
    }

    fn parse_node(v: &Value, ids: &mut HashMap<u64, Proof>) -> Result<Proof> {
        let bad = |m: &str| Error::Json(m.to_string());
        let obj = v
            .as_object()
            .ok_or_else(|| bad("derivation node must be an object"))?;
        if let Some(r) = obj.get("ref") {
            let id = r.as_u64().ok_or_else(|| bad("`ref` must be a number"))?;
            return ids
                .get(&id)
                .cloned()
                .ok_or_else(|| bad("`ref` to an unknown node"));
        }
        let seq = obj
            .get("seq")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("missing `seq`"))?;
        let rule_name = obj
            .get("rule")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("missing `rule`"))?;
        let rule = Rule::from_name(rule_name)
            .ok_or_else(|| bad(&format!("unknown rule `{rule_name}`")))?;
        let mut inst = Inst::default();
        if let Some(i) = obj.get("inst") {
            if let Some(p) = i.get("path").and_then(Value::as_str) {
                inst.path = path_from_string(p)?;
            }
            if let Some(k) = i.get("index").and_then(Value::as_u64) {
                inst.index = Some(u8::try_from(k).map_err(|_| bad("index out of range"))?);
            }
            if let Some(a) = i.get("formula").and_then(Value::as_str) {
                inst.formula = Some(parse_lambek(a)?);
            }
        }
        let premises = match obj.get("premises") {
            Some(Value::Array(ps)) => ps
                .iter()
                .map(|p| Self::parse_node(p, ids))
                .collect::<Result<Vec<_>>>()?,
            Some(_) => return Err(bad("`premises` must be an array")),
            None => Vec::new(),
        };
        let d = Derivation::new(parse_sequent(seq)?, rule, inst, premises);
        if let Some(id) = obj.get("id").and_then(Value::as_u64) {
            ids.insert(id, d.clone());
        }
        Ok(d)
    }

    /// Indented tree, conclusion first, premises below and indented. A
    /// shared node is printed once and referred to by number afterwards.
    pub fn to_text(self: &Arc<Self>) -> String {
        let shared = self.shared_nodes();
        let mut ids = HashMap::default();
        let mut out = String::new();
        self.text_node(0, &shared, &mut ids, &mut out);
        out
    }

    fn text_node(
        self: &Arc<Self>,
        depth: usize,
        shared: &HashSet<*const Derivation>,
        ids: &mut HashMap<*const Derivation, usize>,
        out: &mut String,
    ) {
        let pad = "  ".repeat(depth);
        let ptr = Arc::as_ptr(self);
        if let Some(id) = ids.get(&ptr) {
            let _ = writeln!(out, "{pad}{}    (see #{id})", self.conclusion);
            return;
        }
        let tag = if shared.contains(&ptr) {
            let id = ids.len() + 1;
            ids.insert(ptr, id);
            format!(" #{id}")
        } else {
            String::new()
        };
        let _ = writeln!(out, "{pad}{}    [{}]{tag}", self.conclusion, self.rule);
        for p in &self.premises {
            p.text_node(depth + 1, shared, ids, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str) -> Sequent {
        parse_sequent(s).unwrap()
    }

    fn sample() -> Proof {
        let id = Derivation::leaf(seq("p => p"), Rule::Id);
        Derivation::new(
            seq("p => p /\\ p"),
            Rule::AndR,
            Inst::default(),
            vec![id.clone(), id],
        )
    }

    #[test]
    fn names_round_trip() {
        for r in Rule::ALL {
            assert_eq!(Rule::from_name(r.name()), Some(r));
        }
        assert_eq!(Rule::Cut.arity(), 2);
        assert_eq!(Rule::Assumption.arity(), 0);
    }

    #[test]
    fn json_round_trip_keeps_sharing() {
        let d = sample();
        let v = d.to_json();
        assert_eq!(v["premises"][1]["ref"], 0);
        let back = Derivation::from_json(&v).unwrap();
        assert_eq!(back, d);
        assert_eq!(back.node_count(), 2);
        assert_eq!(back.height(), 2);
    }

    #[test]
    fn nodes_put_shared_subproofs_after_all_parents() {
        // The identity leaf is reached directly from the root and again
        // through the middle node.
        let id = Derivation::leaf(seq("p => p"), Rule::Id);
        let mid = Derivation::new(seq("p => p \\/ q"), Rule::OrR, Inst::default(), vec![id.clone()]);
        let root = Derivation::new(
            seq("p => p /\\ (p \\/ q)"),
            Rule::AndR,
            Inst::default(),
            vec![id.clone(), mid],
        );
        let order = root.nodes();
        let pos = |d: &Proof| order.iter().position(|n| Arc::ptr_eq(n, d)).unwrap();
        for d in &order {
            for p in &d.premises {
                assert!(pos(d) < pos(p));
            }
        }
        assert_eq!(root.height(), 3);
        let renamed = root.map_formulas(&mut |f| f.clone(), &|_, r| r);
        assert_eq!(renamed, root);
    }

    #[test]
    fn text_mentions_each_rule() {
        let t = sample().to_text();
        assert!(t.contains("[∧R]") && t.contains("[Id] #1") && t.contains("(see #1)"));
    }

    #[test]
    fn bad_json_is_rejected() {
        assert!(Derivation::from_json(&json!({"seq": "p => p", "rule": "nope"})).is_err());
        assert!(Derivation::from_json(&json!({"ref": 3})).is_err());
        assert!(Derivation::from_json(&json!({"seq": "p =>", "rule": "id"})).is_err());
    }
}
