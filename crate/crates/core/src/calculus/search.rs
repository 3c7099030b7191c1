//! Backward rule application and budgeted depth-first proof search.

use rustc_hash::{FxHashMap as HashMap, FxHashSet as HashSet};
use std::time::Instant;

use super::budget::SearchBudget;
use super::derivation::{Derivation, Inst, Proof, Rule};
use super::system::SystemSpec;
use crate::syntax::{enumerate_closure, LFormula, LKind, Sequent, Step, StructTree};

/// One backward application of a rule: the premises that would yield the
/// goal. Axioms and assumptions have no premises.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleInstance {
    pub rule: Rule,
    pub inst: Inst,
    pub premises: Vec<Sequent>,
}

impl RuleInstance {
    fn axiom(rule: Rule) -> Self {
        RuleInstance {
            rule,
            inst: Inst::default(),
            premises: Vec::new(),
        }
    }

    fn at(rule: Rule, path: &[Step], premises: Vec<Sequent>) -> Self {
        RuleInstance {
            rule,
            inst: Inst::at(path.to_vec()),
            premises,
        }
    }
}

/// Cut formulas for a problem: its subformulas and the small members of
/// their closure, in the closure order.
pub fn cut_formulas(
    sys: &SystemSpec,
    goal: &Sequent,
    phi: &[Sequent],
    budget: &SearchBudget,
) -> Vec<LFormula> {
    let spec = budget.cut_candidates(sys, goal, phi);
    let mut out: Vec<LFormula> = spec.base.iter().cloned().collect();
    let known: HashSet<LFormula> = out.iter().cloned().collect();
    out.extend(
        enumerate_closure(&spec)
            .into_iter()
            .filter(|f| !known.contains(f)),
    );
    out.sort();
    out
}

/// Every backward rule application for `goal`, in search order: axioms and
/// assumptions, invertible rules, the remaining logical and structural
/// rules, then analytic cuts over `cuts`.
pub fn rule_instances(
    sys: &SystemSpec,
    goal: &Sequent,
    phi: &HashSet<Sequent>,
    cuts: &[LFormula],
) -> Vec<RuleInstance> {
    let mut first = Vec::new();
    let mut second = Vec::new();
    let mut third = Vec::new();
    let ant = goal.antecedent.as_ref();
    let c = &goal.succedent;
    let seq = |t: StructTree, b: &LFormula| Sequent::tree(t, b);
    let leaf = StructTree::leaf;

    // Axioms.
    let lone = ant.and_then(StructTree::as_leaf);
    if lone == Some(c) {
        first.push(RuleInstance::axiom(Rule::Id));
    }
    if phi.contains(goal) {
        first.push(RuleInstance::axiom(Rule::Assumption));
    }
    if let Some(a) = lone {
        if is_dist(a, c) {
            first.push(RuleInstance::axiom(Rule::D));
        }
        if sys.negation && is_neg1(a, c) {
            first.push(RuleInstance::axiom(Rule::Neg1));
        }
        if sys.negation && is_neg2(a, c) {
            first.push(RuleInstance::axiom(Rule::Neg2));
        }
        if let Some(m) = sys.modal {
            let dia_of = |x: &LFormula| match x.kind() {
                LKind::Dia(y) => Some(y.clone()),
                _ => None,
            };
            if m.has_t() && dia_of(c).as_ref() == Some(a) {
                first.push(RuleInstance::axiom(Rule::AxT));
            }
            if m.has_4()
                && dia_of(a)
                    .and_then(|x| dia_of(&x))
                    .is_some_and(|y| Some(&y) == dia_of(c).as_ref())
            {
                first.push(RuleInstance::axiom(Rule::Ax4));
            }
            if m.has_5()
                && dia_of(a).is_some()
                && *c == LFormula::not(&LFormula::dia(&LFormula::not(a)))
            {
                first.push(RuleInstance::axiom(Rule::Ax5));
            }
        }
    }
    if sys.bounded && matches!(c.kind(), LKind::Top) {
        first.push(RuleInstance::axiom(Rule::Top));
    }
    if sys.unit && ant.is_none() && matches!(c.kind(), LKind::Unit) {
        first.push(RuleInstance::axiom(Rule::OneR));
    }

    // Right rules.
    match c.kind() {
        LKind::And(a, b) => second.push(RuleInstance {
            rule: Rule::AndR,
            inst: Inst::default(),
            premises: vec![
                Sequent::new(ant.cloned(), a.clone()),
                Sequent::new(ant.cloned(), b.clone()),
            ],
        }),
        LKind::Or(a, b) => {
            for (i, x) in [(1, a), (2, b)] {
                third.push(RuleInstance {
                    rule: Rule::OrR,
                    inst: Inst::index(i),
                    premises: vec![Sequent::new(ant.cloned(), x.clone())],
                });
            }
        }
        LKind::Under(a, b) => {
            let t = match ant {
                Some(g) => StructTree::node(leaf(a), g.clone()),
                None => leaf(a),
            };
            second.push(RuleInstance::at(Rule::UnderR, &[], vec![seq(t, b)]));
        }
        LKind::Over(a, b) => {
            let t = match ant {
                Some(g) => StructTree::node(g.clone(), leaf(b)),
                None => leaf(b),
            };
            second.push(RuleInstance::at(Rule::OverR, &[], vec![seq(t, a)]));
        }
        LKind::Prod(a, b) => {
            if let Some(StructTree::Node(l, r)) = ant {
                third.push(RuleInstance::at(
                    Rule::ProdR,
                    &[],
                    vec![seq((**l).clone(), a), seq((**r).clone(), b)],
                ));
            }
        }
        LKind::Dia(a) if sys.modal.is_some() => {
            if let Some(StructTree::Bracket(g)) = ant {
                third.push(RuleInstance::at(
                    Rule::DiaR,
                    &[],
                    vec![seq((**g).clone(), a)],
                ));
            }
        }
        LKind::BoxDown(a) if sys.modal.is_some() => {
            if let Some(g) = ant {
                second.push(RuleInstance::at(
                    Rule::BoxR,
                    &[],
                    vec![seq(StructTree::bracket(g.clone()), a)],
                ));
            }
        }
        _ => {}
    }

    // Left and structural rules at every position.
    if let Some(g) = ant {
        if sys.unit
            && sys.allow_empty_antecedent
            && matches!(lone.map(LFormula::kind), Some(LKind::Unit))
        {
            third.push(RuleInstance::at(
                Rule::OneLl,
                &[],
                vec![Sequent::new(None, c.clone())],
            ));
        }
        for path in g.positions() {
            let hole = g.at(&path).expect("position from the tree");
            let fill = |t: StructTree| seq(g.replace(&path, t).expect("position from the tree"), c);
            match hole {
                StructTree::Leaf(f) => match f.kind() {
                    LKind::Bottom if sys.bounded => {
                        first.push(RuleInstance::at(Rule::Bot, &path, vec![]))
                    }
                    LKind::Prod(a, b) => second.push(RuleInstance::at(
                        Rule::ProdL,
                        &path,
                        vec![fill(StructTree::node(leaf(a), leaf(b)))],
                    )),
                    LKind::Or(a, b) => second.push(RuleInstance::at(
                        Rule::OrL,
                        &path,
                        vec![fill(leaf(a)), fill(leaf(b))],
                    )),
                    LKind::And(a, b) => {
                        for (i, x) in [(1, a), (2, b)] {
                            third.push(RuleInstance {
                                rule: Rule::AndL,
                                inst: Inst {
                                    path: path.clone(),
                                    index: Some(i),
                                    formula: None,
                                },
                                premises: vec![fill(leaf(x))],
                            });
                        }
                    }
                    LKind::Dia(a) if sys.modal.is_some() => second.push(RuleInstance::at(
                        Rule::DiaL,
                        &path,
                        vec![fill(StructTree::bracket(leaf(a)))],
                    )),
                    _ => {}
                },
                StructTree::Node(l, r) => {
                    if let Some(LKind::Under(a, b)) = r.as_leaf().map(LFormula::kind) {
                        third.push(RuleInstance::at(
                            Rule::UnderL,
                            &path,
                            vec![seq((**l).clone(), a), fill(leaf(b))],
                        ));
                    }
                    if let Some(LKind::Over(a, b)) = l.as_leaf().map(LFormula::kind) {
                        third.push(RuleInstance::at(
                            Rule::OverL,
                            &path,
                            vec![fill(leaf(a)), seq((**r).clone(), b)],
                        ));
                    }
                    if sys.unit && matches!(l.as_leaf().map(LFormula::kind), Some(LKind::Unit)) {
                        second.push(RuleInstance::at(
                            Rule::OneLl,
                            &path,
                            vec![fill((**r).clone())],
                        ));
                    }
                    if sys.unit && matches!(r.as_leaf().map(LFormula::kind), Some(LKind::Unit)) {
                        second.push(RuleInstance::at(
                            Rule::OneLr,
                            &path,
                            vec![fill((**l).clone())],
                        ));
                    }
                    if sys.exchange {
                        third.push(RuleInstance::at(
                            Rule::Exch,
                            &path,
                            vec![fill(StructTree::node((**r).clone(), (**l).clone()))],
                        ));
                    }
                }
                StructTree::Bracket(t) => {
                    if let Some(LKind::BoxDown(a)) = t.as_leaf().map(LFormula::kind) {
                        if sys.modal.is_some() {
                            second.push(RuleInstance::at(Rule::BoxL, &path, vec![fill(leaf(a))]));
                        }
                    }
                }
            }
        }
    }

    // Analytic cuts.
    for a in cuts {
        let inst = |path: &[Step]| Inst {
            path: path.to_vec(),
            index: None,
            formula: Some(a.clone()),
        };
        match ant {
            None => {
                if a != c {
                    third.push(RuleInstance {
                        rule: Rule::Cut,
                        inst: inst(&[]),
                        premises: vec![Sequent::new(None, a.clone()), Sequent::simple(a, c)],
                    });
                }
            }
            Some(g) => {
                for path in g.positions() {
                    let delta = g.at(&path).expect("position from the tree");
                    if delta.as_leaf() == Some(a) || (path.is_empty() && a == c) {
                        continue;
                    }
                    let rest = g.replace(&path, leaf(a)).expect("position from the tree");
                    third.push(RuleInstance {
                        rule: Rule::Cut,
                        inst: inst(&path),
                        premises: vec![seq(delta.clone(), a), seq(rest, c)],
                    });
                }
            }
        }
    }

    first.extend(second);
    first.extend(third);
    first
}

fn is_dist(a: &LFormula, c: &LFormula) -> bool {
    let (LKind::And(x, yz), LKind::Or(l, r)) = (a.kind(), c.kind()) else {
        return false;
    };
    let LKind::Or(y, z) = yz.kind() else {
        return false;
    };
    *l == LFormula::and(x, y) && *r == LFormula::and(x, z)
}

fn is_neg1(a: &LFormula, c: &LFormula) -> bool {
    matches!(c.kind(), LKind::Bottom)
        && matches!(a.kind(), LKind::And(x, nx) if matches!(nx.kind(), LKind::Not(y) if y == x))
}

fn is_neg2(a: &LFormula, c: &LFormula) -> bool {
    matches!(a.kind(), LKind::Top)
        && matches!(c.kind(), LKind::Or(x, nx) if matches!(nx.kind(), LKind::Not(y) if y == x))
}

/// Why a search gave up.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stop {
    /// Every branch failed within the depth bound.
    Depth,
    Goals,
    Time,
}

/// Iterative-deepening depth-first search with a goal memo, a failure memo
/// keyed by remaining depth, and cycle detection on the current branch.
pub struct Dfs<'a> {
    sys: &'a SystemSpec,
    phi: &'a HashSet<Sequent>,
    cuts: &'a [LFormula],
    proved: HashMap<Sequent, Proof>,
    failed: HashMap<Sequent, usize>,
    branch: HashSet<Sequent>,
    pub goals: usize,
    max_goals: usize,
    deadline: Instant,
    pub stop: Option<Stop>,
}

impl<'a> Dfs<'a> {
    pub fn new(
        sys: &'a SystemSpec,
        phi: &'a HashSet<Sequent>,
        cuts: &'a [LFormula],
        max_goals: usize,
        deadline: Instant,
    ) -> Self {
        Dfs {
            sys,
            phi,
            cuts,
            proved: HashMap::default(),
            failed: HashMap::default(),
            branch: HashSet::default(),
            goals: 0,
            max_goals,
            deadline,
            stop: None,
        }
    }

    /// Search with depth bounds `1..=max_depth`.
    pub fn run(&mut self, goal: &Sequent, max_depth: usize) -> Option<Proof> {
        for depth in 1..=max_depth {
            if let Some(p) = self.search(goal, depth) {
                return Some(p);
            }
            if self.stop.is_some() {
                return None;
            }
        }
        self.stop = Some(Stop::Depth);
        None
    }

    fn search(&mut self, goal: &Sequent, depth: usize) -> Option<Proof> {
        if let Some(p) = self.proved.get(goal) {
            return Some(p.clone());
        }
        if depth == 0 || self.stop.is_some() || self.branch.contains(goal) {
            return None;
        }
        if self.failed.get(goal).is_some_and(|&d| d >= depth) {
            return None;
        }
        self.goals += 1;
        if self.goals > self.max_goals {
            self.stop = Some(Stop::Goals);
            return None;
        }
        if self.goals % 128 == 0 && Instant::now() >= self.deadline {
            self.stop = Some(Stop::Time);
            return None;
        }
        self.branch.insert(goal.clone());
        let mut found = None;
        'rules: for ri in rule_instances(self.sys, goal, self.phi, self.cuts) {
            let mut proofs = Vec::with_capacity(ri.premises.len());
            for p in &ri.premises {
                match self.search(p, depth - 1) {
                    Some(d) => proofs.push(d),
                    None if self.stop.is_some() => break 'rules,
                    None => continue 'rules,
                }
            }
            found = Some(Derivation::new(goal.clone(), ri.rule, ri.inst, proofs));
            break;
        }
        self.branch.remove(goal);
        match &found {
            Some(p) => {
                self.proved.insert(goal.clone(), p.clone());
            }
            None if self.stop.is_none() => {
                let d = self.failed.entry(goal.clone()).or_insert(0);
                *d = (*d).max(depth);
            }
            None => {}
        }
        found
    }
}
