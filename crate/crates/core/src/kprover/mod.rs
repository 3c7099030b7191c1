//! A tableau decision procedure for the modal logic K.
//!
//! The formula is negated and put in negation normal form. Each tableau node
//! is one world: Boolean rules are saturated (branching on `∨`), then every
//! `◇B` spawns a successor carrying `B` and the bodies of all `□C`. A closed
//! tableau certifies validity; an open one is read off as a finite tree model
//! whose depth is at most the modal depth of the input.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

use crate::semantics::{model_json::kripke_to_json, KripkeModel};
use crate::syntax::ModalFormula;

/// Modal formulas in negation normal form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Nnf {
    Lit(String, bool),
    Top,
    Bot,
    And(Box<Nnf>, Box<Nnf>),
    Or(Box<Nnf>, Box<Nnf>),
    Dia(Box<Nnf>),
    Box(Box<Nnf>),
}

impl Nnf {
    /// The normal form of `a` (of `¬a` when `positive` is false).
    fn of(a: &ModalFormula, positive: bool) -> Nnf {
        let pair = |x: Nnf, y: Nnf, and: bool| {
            if and {
                Nnf::And(Box::new(x), Box::new(y))
            } else {
                Nnf::Or(Box::new(x), Box::new(y))
            }
        };
        match a {
            ModalFormula::Atom(p) => Nnf::Lit(p.clone(), positive),
            ModalFormula::Bottom if positive => Nnf::Bot,
            ModalFormula::Bottom => Nnf::Top,
            ModalFormula::Not(x) => Nnf::of(x, !positive),
            ModalFormula::And(x, y) => pair(Nnf::of(x, positive), Nnf::of(y, positive), positive),
            ModalFormula::Or(x, y) => pair(Nnf::of(x, positive), Nnf::of(y, positive), !positive),
            ModalFormula::Implies(x, y) => {
                pair(Nnf::of(x, !positive), Nnf::of(y, positive), !positive)
            }
            ModalFormula::Diamond(x) if positive => Nnf::Dia(Box::new(Nnf::of(x, true))),
            ModalFormula::Diamond(x) => Nnf::Box(Box::new(Nnf::of(x, false))),
        }
    }

    fn to_modal(&self) -> ModalFormula {
        match self {
            Nnf::Lit(p, true) => ModalFormula::atom(p),
            Nnf::Lit(p, false) => ModalFormula::not(ModalFormula::atom(p)),
            Nnf::Top => ModalFormula::not(ModalFormula::Bottom),
            Nnf::Bot => ModalFormula::Bottom,
            Nnf::And(x, y) => ModalFormula::and(x.to_modal(), y.to_modal()),
            Nnf::Or(x, y) => ModalFormula::or(x.to_modal(), y.to_modal()),
            Nnf::Dia(x) => ModalFormula::diamond(x.to_modal()),
            Nnf::Box(x) => ModalFormula::boxed(x.to_modal()),
        }
    }
}

impl fmt::Display for Nnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_modal())
    }
}

/// Why a tableau node closed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "step", rename_all = "lowercase")]
pub enum Closure {
    /// The node contains `formula` and its complement, or `⊥`.
    Clash { formula: String },
    /// Both branches of the disjunction `on` closed.
    Branch {
        on: String,
        left: Box<Closure>,
        right: Box<Closure>,
    },
    /// The successor spawned for `via` closed.
    Successor { via: String, closed: Box<Closure> },
}

impl Closure {
    /// Number of closed tableau nodes.
    pub fn size(&self) -> usize {
        match self {
            Closure::Clash { .. } => 1,
            Closure::Branch { left, right, .. } => 1 + left.size() + right.size(),
            Closure::Successor { closed, .. } => 1 + closed.size(),
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, indent: usize) -> fmt::Result {
        let pad = "  ".repeat(indent);
        match self {
            Closure::Clash { formula } => writeln!(f, "{pad}clash on {formula}"),
            Closure::Branch { on, left, right } => {
                writeln!(f, "{pad}split {on}")?;
                left.write(f, indent + 1)?;
                right.write(f, indent + 1)
            }
            Closure::Successor { via, closed } => {
                writeln!(f, "{pad}successor for {via}")?;
                closed.write(f, indent + 1)
            }
        }
    }
}

impl fmt::Display for Closure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}

#[derive(Clone, Debug)]
pub enum TableauVerdict {
    /// The tableau for `¬A` closed.
    Valid(Closure),
    /// A tree model falsifying `A` at `root`.
    Invalid { model: KripkeModel, root: String },
}

impl TableauVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, TableauVerdict::Valid(_))
    }

    pub fn to_json(&self) -> Value {
        match self {
            TableauVerdict::Valid(c) => json!({
                "verdict": "valid",
                "closed_nodes": c.size(),
                "tableau": c,
            }),
            TableauVerdict::Invalid { model, root } => json!({
                "verdict": "invalid",
                "root": root,
                "model": kripke_to_json(model),
            }),
        }
    }
}

/// An open, saturated node: the atoms true there and its successors.
struct Tree {
    atoms: BTreeSet<String>,
    children: Vec<Tree>,
}

/// Saturate one world from `todo`, `seen` holding what is already on the
/// branch.
fn saturate(mut todo: Vec<Nnf>, mut seen: BTreeSet<Nnf>) -> Result<Tree, Closure> {
    // Linear rules go first; a disjunction is only split once nothing else
    // is pending.
    while let Some(i) = todo
        .iter()
        .position(|f| !matches!(f, Nnf::Or(..)))
        .or_else(|| todo.len().checked_sub(1))
    {
        let f = todo.swap_remove(i);
        if seen.contains(&f) {
            continue;
        }
        match &f {
            Nnf::Bot => {
                return Err(Closure::Clash {
                    formula: f.to_string(),
                })
            }
            Nnf::Lit(p, s) if seen.contains(&Nnf::Lit(p.clone(), !s)) => {
                return Err(Closure::Clash {
                    formula: ModalFormula::atom(p).to_string(),
                })
            }
            Nnf::And(x, y) => todo.extend([(**x).clone(), (**y).clone()]),
            Nnf::Or(x, y) if seen.contains(x) || seen.contains(y) => {}
            Nnf::Or(x, y) => {
                seen.insert(f.clone());
                let branch = |g: &Nnf| {
                    let mut t = todo.clone();
                    t.push(g.clone());
                    saturate(t, seen.clone())
                };
                let left = match branch(x) {
                    Ok(t) => return Ok(t),
                    Err(c) => c,
                };
                let right = match branch(y) {
                    Ok(t) => return Ok(t),
                    Err(c) => c,
                };
                return Err(Closure::Branch {
                    on: f.to_string(),
                    left: Box::new(left),
                    right: Box::new(right),
                });
            }
            _ => {}
        }
        seen.insert(f);
    }

    let boxes: Vec<Nnf> = seen
        .iter()
        .filter_map(|f| match f {
            Nnf::Box(b) => Some((**b).clone()),
            _ => None,
        })
        .collect();
    let mut children = Vec::new();
    for f in &seen {
        let Nnf::Dia(d) = f else { continue };
        let mut todo = boxes.clone();
        todo.push((**d).clone());
        match saturate(todo, BTreeSet::new()) {
            Ok(t) => children.push(t),
            Err(c) => {
                return Err(Closure::Successor {
                    via: f.to_string(),
                    closed: Box::new(c),
                })
            }
        }
    }
    let atoms = seen
        .iter()
        .filter_map(|f| match f {
            Nnf::Lit(p, true) => Some(p.clone()),
            _ => None,
        })
        .collect();
    Ok(Tree { atoms, children })
}

/// Number the tree in preorder, recording edges and the valuation.
fn flatten(
    t: &Tree,
    rel: &mut Vec<(usize, usize)>,
    val: &mut BTreeMap<String, BTreeSet<usize>>,
    next: &mut usize,
) -> usize {
    let me = *next;
    *next += 1;
    for p in &t.atoms {
        val.entry(p.clone()).or_default().insert(me);
    }
    for c in &t.children {
        let child = flatten(c, rel, val, next);
        rel.push((me, child));
    }
    me
}

/// Decide `⊢_K a`: `Valid` with the closed tableau for `¬a`, or `Invalid`
/// with a tree model falsifying `a` at its root.
pub fn k_decide(a: &ModalFormula) -> TableauVerdict {
    match saturate(vec![Nnf::of(a, false)], BTreeSet::new()) {
        Err(c) => TableauVerdict::Valid(c),
        Ok(tree) => {
            let mut rel = Vec::new();
            let mut val: BTreeMap<String, BTreeSet<usize>> = a
                .atoms()
                .into_iter()
                .map(|p| (p, BTreeSet::new()))
                .collect();
            let mut n = 0;
            flatten(&tree, &mut rel, &mut val, &mut n);
            let model = KripkeModel::from_indices(n, rel, val).expect("indices come from the tree");
            let root = model.states()[0].clone();
            TableauVerdict::Invalid { model, root }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{eval_modal, find_kripke_countermodel};
    use crate::syntax::parse_modal;

    fn decide(s: &str) -> TableauVerdict {
        k_decide(&parse_modal(s).unwrap())
    }

    fn falsified(s: &str) -> KripkeModel {
        let a = parse_modal(s).unwrap();
        match k_decide(&a) {
            TableauVerdict::Invalid { model, root } => {
                assert!(!eval_modal(&model, &root, &a).unwrap(), "{s}");
                model
            }
            TableauVerdict::Valid(c) => panic!("{s} closed:\n{c}"),
        }
    }

    #[test]
    fn k_axiom_and_tautologies_are_valid() {
        for s in [
            "[](p -> q) -> ([]p -> []q)",
            "p \\/ ~p",
            "[](p /\\ q) -> []p",
            "<>(p \\/ q) -> <>p \\/ <>q",
            "~<>bot",
            "[]~bot",
        ] {
            assert!(decide(s).is_valid(), "{s}");
        }
    }

    #[test]
    fn countermodels_falsify_at_the_root() {
        let m = falsified("<>p");
        assert_eq!(m.len(), 1);
        assert!(m.rel().is_empty());
        let t = falsified("[]p -> p");
        assert!(t.len() <= 2);
        falsified("p");
        falsified("<>p -> []p");
        falsified("[][]p -> []p");
    }

    #[test]
    fn models_are_no_deeper_than_the_formula() {
        let a = parse_modal("<>q -> <>(<>p /\\ q)").unwrap();
        let TableauVerdict::Invalid { model, .. } = k_decide(&a) else {
            panic!("invalid formula");
        };
        // A tree: every state but the root has exactly one predecessor.
        let mut depth = vec![0usize; model.len()];
        for &(u, v) in model.rel() {
            depth[v] = depth[u] + 1;
        }
        assert!(depth.iter().all(|&d| d <= a.modal_depth()));
    }

    #[test]
    fn closure_under_necessitation_and_modus_ponens() {
        let valid = ["p -> p", "[](p -> q) -> ([]p -> []q)", "p /\\ q -> q"];
        for s in valid {
            let a = parse_modal(s).unwrap();
            assert!(k_decide(&ModalFormula::boxed(a)).is_valid(), "{s}");
        }
        let a = parse_modal("[]p -> []p").unwrap();
        let ab = parse_modal("([]p -> []p) -> <>p \\/ ~<>p").unwrap();
        assert!(k_decide(&a).is_valid() && k_decide(&ab).is_valid());
        assert!(decide("<>p \\/ ~<>p").is_valid());
    }

    #[test]
    fn small_models_never_contradict_a_valid_verdict() {
        for s in [
            "[]p -> <>p",
            "<><>p -> <>p",
            "p -> []<>p",
            "[](p \\/ q) -> []p \\/ []q",
            "<>p /\\ <>q -> <>(p /\\ q)",
            "[](p -> q) -> ([]p -> []q)",
        ] {
            let a = parse_modal(s).unwrap();
            let found = find_kripke_countermodel(&a, 3).is_some();
            assert_eq!(k_decide(&a).is_valid(), !found, "{s}");
        }
    }

    #[test]
    fn trace_renders_and_serialises() {
        let v = decide("p \\/ ~p");
        let TableauVerdict::Valid(c) = &v else {
            panic!("valid");
        };
        assert!(c.to_string().contains("clash"));
        assert_eq!(v.to_json()["verdict"], "valid");
        assert_eq!(
            decide("<>p").to_json()["model"]["states"]
                .as_array()
                .unwrap()
                .len(),
            1
        );
    }
}
