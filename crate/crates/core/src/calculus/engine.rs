//! Goal-directed refutation engine for the Boolean and distributive
//! fragments.
//!
//! The engine proves `conj(S) ⇒ β` for a finite set `S` of formulas by
//! running a tableau over `S`: conjunctions are flattened, disjunctions and
//! negated compounds are split with `lem` and distribution, complementary
//! pairs close with `clash`, and a product `C·D` is confronted with the
//! negated products `¬(Cᵢ·Dᵢ)` of `S` by splitting each side on the `Cᵢ`
//! and `Dᵢ` (the modal step of a K tableau when `C` is the letter `m`). Every
//! step builds its derivation directly, so a success is a derivation the
//! checker can validate; a failure means nothing.

use rustc_hash::FxHashSet as HashSet;
use std::cell::{Cell, RefCell};
use std::time::Instant;

use super::build::{
    and_l, and_r, comm_and, conj, cut, disj, dist, id, inject, or_l, or_r, over_l, prod_l, prod_r,
    proj, to_phi, trans, under_l,
};
use super::cache::Memo;
use super::derivation::Proof;
use super::world::{World, WorldKind};
use crate::syntax::{LFormula, LKind, Sequent, Step, StructTree};

type Set = Vec<LFormula>;

fn norm(mut v: Set) -> Set {
    v.sort();
    v.dedup();
    v
}

fn with(s: &[LFormula], extra: &[&LFormula]) -> Set {
    norm(
        s.iter()
            .cloned()
            .chain(extra.iter().map(|f| (*f).clone()))
            .collect(),
    )
}

fn has(s: &[LFormula], f: &LFormula) -> bool {
    s.binary_search(f).is_ok()
}

/// `c ⇒ conj(items)` when every item is a conjunct of `c`.
fn reshape(c: &LFormula, items: &[LFormula]) -> Option<Proof> {
    match items {
        [] => None,
        [one] => proj(c, one),
        _ if *c == conj(items) => Some(id(c)),
        [first, rest @ ..] => Some(and_r(&proj(c, first)?, &reshape(c, rest)?)),
    }
}

/// A negative member `n` of the current set with complement `e`; `parts`
/// holds `(Cᵢ, Dᵢ)` when `e = Cᵢ · Dᵢ`.
struct Neg {
    n: LFormula,
    e: LFormula,
    parts: Option<(LFormula, LFormula)>,
}

pub struct Engine {
    pub world: World,
    memo: Memo<Set, Option<Proof>>,
    active: RefCell<HashSet<Set>>,
    steps: Cell<usize>,
    limit: Cell<usize>,
    deadline: Cell<Option<Instant>>,
    exhausted: Cell<bool>,
}

impl Engine {
    pub fn new(world: World) -> Self {
        Engine {
            world,
            memo: Memo::default(),
            active: RefCell::default(),
            steps: Cell::new(0),
            limit: Cell::new(usize::MAX),
            deadline: Cell::new(None),
            exhausted: Cell::new(false),
        }
    }

    /// Reset the per-goal budget.
    pub fn arm(&self, max_steps: usize, deadline: Option<Instant>) {
        self.steps.set(0);
        self.limit.set(max_steps);
        self.deadline.set(deadline);
        self.exhausted.set(false);
    }

    /// Whether the last attempt stopped on the budget rather than failing.
    pub fn exhausted(&self) -> bool {
        self.exhausted.get()
    }

    pub fn steps(&self) -> usize {
        self.steps.get()
    }

    fn tick(&self) -> bool {
        let n = self.steps.get() + 1;
        self.steps.set(n);
        let late = n % 256 == 0 && self.deadline.get().is_some_and(|d| Instant::now() >= d);
        if n > self.limit.get() || late {
            self.exhausted.set(true);
        }
        !self.exhausted.get()
    }

    /// A derivation of `goal`, if the engine finds one.
    pub fn prove(&self, goal: &Sequent) -> Option<Proof> {
        let w = &self.world;
        let b = &goal.succedent;
        match &goal.antecedent {
            None => {
                if w.kind == WorldKind::Simulated {
                    return None;
                }
                let top = w.top_intro(None)?;
                if w.is_tau(b) {
                    return Some(top);
                }
                let body = self.prove_simple(&w.tau, b)?;
                Some(cut(&[], &top, &body))
            }
            Some(StructTree::Leaf(a)) => self.prove_simple(a, b),
            Some(g) => {
                if w.is_tau(b) {
                    if let Some(p) = w.top_intro(Some(g)) {
                        return Some(p);
                    }
                }
                if let Some((path, _)) = g.leaves().into_iter().find(|(_, f)| w.is_beta(f)) {
                    if let Some(p) = w.bot_elim(g, &path, b) {
                        return Some(p);
                    }
                }
                let to = to_phi(g)?;
                let body = self.prove_simple(&to.conclusion.succedent, b)?;
                Some(trans(&to, &body))
            }
        }
    }

    /// `A ⇒ B`: split `A` on `B` and refute the `B'` branch.
    fn prove_simple(&self, a: &LFormula, b: &LFormula) -> Option<Proof> {
        let w = &self.world;
        if w.is_tau(b) {
            return w.top_intro(Some(&StructTree::leaf(a)));
        }
        if w.is_beta(a) {
            return w.bot_elim(&StructTree::leaf(a), &[], b);
        }
        if w.is_beta(b) {
            return self.refute(&[a.clone()]);
        }
        if let Some(p) = self.derive_simple(&[a.clone()], a, b) {
            return Some(p);
        }
        let bc = w.comp(b)?;
        let yes = and_l(&id(b), &[], 2, a);
        let set = norm(vec![a.clone(), bc.clone()]);
        let c = LFormula::and(a, &bc);
        let no = trans(
            &trans(&reshape(&c, &set)?, &self.refute(&set)?),
            &w.below(b)?,
        );
        self.split_in(&StructTree::leaf(a), &[], a, b, &bc, &yes, &no)
    }

    /// From `Γ[c ∧ x] ⇒ G` and `Γ[c ∧ x'] ⇒ G` infer `Γ[c] ⇒ G`, with `c`
    /// at `path`.
    #[allow(clippy::too_many_arguments)]
    fn split_in(
        &self,
        g: &StructTree,
        path: &[Step],
        c: &LFormula,
        x: &LFormula,
        xc: &LFormula,
        yes: &Proof,
        no: &Proof,
    ) -> Option<Proof> {
        let w = &self.world;
        let joined = or_l(path, yes, no);
        let spread = cut(path, &dist(c, x, xc), &joined);
        let widen = and_r(
            &id(c),
            &trans(&w.top_intro(Some(&StructTree::leaf(c)))?, &w.lem(x)?),
        );
        let out = cut(path, &widen, &spread);
        debug_assert_eq!(out.conclusion.antecedent.as_ref(), Some(g));
        Some(out)
    }

    /// `c ⇒ w` from membership, `τ`, `∨R` and `∧R` alone.
    fn derive_simple(&self, s: &[LFormula], c: &LFormula, w: &LFormula) -> Option<Proof> {
        if has(s, w) {
            return proj(c, w);
        }
        if self.world.is_tau(w) {
            return self.world.top_intro(Some(&StructTree::leaf(c)));
        }
        match w.kind() {
            LKind::Or(x, y) => self
                .derive_simple(s, c, x)
                .map(|p| or_r(&p, 1, y))
                .or_else(|| self.derive_simple(s, c, y).map(|p| or_r(&p, 2, x))),
            LKind::And(x, y) => Some(and_r(
                &self.derive_simple(s, c, x)?,
                &self.derive_simple(s, c, y)?,
            )),
            _ => None,
        }
    }

    fn holds(&self, s: &[LFormula], w: &LFormula) -> bool {
        if has(s, w) || self.world.is_tau(w) {
            return true;
        }
        match w.kind() {
            LKind::Or(x, y) => self.holds(s, x) || self.holds(s, y),
            LKind::And(x, y) => self.holds(s, x) && self.holds(s, y),
            _ => false,
        }
    }

    /// `conj(s) ⇒ β`.
    pub fn refute(&self, s: &[LFormula]) -> Option<Proof> {
        let s = norm(s.to_vec());
        if let Some(hit) = self.memo.get(&s) {
            return hit;
        }
        if self.exhausted.get() || !self.tick() || !self.active.borrow_mut().insert(s.clone()) {
            return None;
        }
        let out = self.refute_uncached(&s);
        self.active.borrow_mut().remove(&s);
        if out.is_some() || !self.exhausted.get() {
            self.memo.put(s, out.clone());
        }
        out
    }

    /// `c ⇒ β` through the set `s` whose members are conjuncts of `c`.
    fn via(&self, c: &LFormula, s: Set) -> Option<Proof> {
        Some(trans(&reshape(c, &s)?, &self.refute(&s)?))
    }

    /// Refute `s` by refuting `s + x` and `s + x'`.
    fn split(&self, s: &[LFormula], c: &LFormula, x: &LFormula) -> Option<Proof> {
        let xc = self.world.comp(x)?;
        let yes = self.via(&LFormula::and(c, x), with(s, &[x]))?;
        let no = self.via(&LFormula::and(c, &xc), with(s, &[&xc]))?;
        self.split_in(&StructTree::leaf(c), &[], c, x, &xc, &yes, &no)
    }

    fn refute_uncached(&self, s: &[LFormula]) -> Option<Proof> {
        let w = &self.world;
        let c = conj(s);
        if let Some(b) = s.iter().find(|f| w.is_beta(f)) {
            return proj(&c, b);
        }
        // Complementary pairs, including a compound `X ∧ X'` as one member.
        for z in s {
            if let LKind::And(x, y) = z.kind() {
                if w.comp(x).as_ref() == Some(y) {
                    return Some(trans(&proj(&c, z)?, &w.clash(x)?));
                }
            }
        }
        for z in s {
            let Some(zc) = w.comp(z) else { continue };
            if let Some(d) = self.derive_simple(s, &c, &zc) {
                return Some(trans(&and_r(&proj(&c, z)?, &d), &w.clash(z)?));
            }
        }
        if let Some(z) = s.iter().find(|z| matches!(z.kind(), LKind::And(..))) {
            let LKind::And(x, y) = z.kind() else {
                unreachable!()
            };
            let rest: Set = s.iter().filter(|f| *f != z).cloned().collect();
            return self.via(&c, with(&rest, &[x, y]));
        }
        if w.kind == WorldKind::Classical {
            for z in s {
                let LKind::Not(inner) = z.kind() else {
                    continue;
                };
                let pick = match inner.kind() {
                    LKind::Not(v) if !self.holds(s, v) => Some(v.clone()),
                    LKind::Or(x, y) => {
                        let (xc, yc) = (w.comp(x)?, w.comp(y)?);
                        if !self.holds(s, &xc) {
                            Some(x.clone())
                        } else if !self.holds(s, &yc) {
                            Some(y.clone())
                        } else {
                            None
                        }
                    }
                    LKind::And(x, y) => {
                        let (xc, yc) = (w.comp(x)?, w.comp(y)?);
                        if self.holds(s, &xc) || self.holds(s, &yc) {
                            None
                        } else if !self.holds(s, x) {
                            Some(x.clone())
                        } else {
                            Some(y.clone())
                        }
                    }
                    _ => None,
                };
                if let Some(x) = pick {
                    return self.split(s, &c, &x);
                }
            }
        }
        for z in s {
            let LKind::Or(x, y) = z.kind() else { continue };
            if self.holds(s, x) || self.holds(s, y) {
                continue;
            }
            let rest: Set = s.iter().filter(|f| *f != z).cloned().collect();
            if rest.is_empty() {
                let l = self.refute(&[x.clone()])?;
                let r = self.refute(&[y.clone()])?;
                return Some(or_l(&[], &l, &r));
            }
            let c0 = conj(&rest);
            let to = and_r(&reshape(&c, &rest)?, &proj(&c, z)?);
            let l = self.via(&LFormula::and(&c0, x), with(&rest, &[x]))?;
            let r = self.via(&LFormula::and(&c0, y), with(&rest, &[y]))?;
            return Some(trans(&to, &trans(&dist(&c0, x, y), &or_l(&[], &l, &r))));
        }
        // Negated products, plus (when residuals may fire) every negative
        // member whose complement a residual could produce.
        let negs_of = |all: bool| -> Vec<Neg> {
            s.iter()
                .filter_map(|n| {
                    let e = w.comp(n)?;
                    let parts = match e.kind() {
                        LKind::Prod(ci, di) => Some((ci.clone(), di.clone())),
                        _ if all
                            && !w.is_tau(&e)
                            && matches!(n.kind(), LKind::Not(_) | LKind::Fresh(_)) =>
                        {
                            None
                        }
                        _ => return None,
                    };
                    Some(Neg {
                        n: n.clone(),
                        e,
                        parts,
                    })
                })
                .collect()
        };
        let residual =
            |f: &LFormula| f.any_sub(&|g| matches!(g.kind(), LKind::Under(..) | LKind::Over(..)));
        for z in s {
            let LKind::Prod(l, r) = z.kind() else {
                continue;
            };
            let negs = negs_of(residual(z));
            if negs.iter().any(|n| n.n == *z) {
                continue;
            }
            if let Some(p) = self.product_step(&c, z, l, r, &negs) {
                return Some(p);
            }
            if self.exhausted.get() {
                return None;
            }
        }
        None
    }

    /// Refute `c` through its conjunct `z = l · r` against the negated
    /// products `negs`.
    fn product_step(
        &self,
        c: &LFormula,
        z: &LFormula,
        l: &LFormula,
        r: &LFormula,
        negs: &[Neg],
    ) -> Option<Proof> {
        let w = &self.world;
        let goal = if negs.is_empty() {
            w.beta.clone()
        } else {
            disj(&negs.iter().map(|n| n.e.clone()).collect::<Vec<_>>())
        };
        let core = self.product_core(&[l.clone()], &[r.clone()], negs, &goal)?;
        let folded = prod_l(&core, &[]);
        if negs.is_empty() {
            return Some(trans(&proj(c, z)?, &folded));
        }
        let ns: Vec<LFormula> = negs.iter().map(|n| n.n.clone()).collect();
        let cn = conj(&ns);
        let to = and_r(&proj(c, z)?, &reshape(c, &ns)?);
        let lift = and_r(&and_l(&folded, &[], 1, &cn), &and_l(&id(&cn), &[], 2, z));
        let spread = self.close_disjuncts(&cn, negs)?;
        Some(trans(
            &to,
            &trans(&lift, &trans(&comm_and(&goal, &cn), &spread)),
        ))
    }

    /// `cn ∧ (E₁ ∨ … ∨ Eₖ) ⇒ β`, each `Eᵢ` clashing with its `Nᵢ`.
    fn close_disjuncts(&self, cn: &LFormula, negs: &[Neg]) -> Option<Proof> {
        let w = &self.world;
        let close = |n: &Neg| -> Option<Proof> {
            let pair = and_r(
                &and_l(&proj(cn, &n.n)?, &[], 1, &n.e),
                &and_l(&id(&n.e), &[], 2, cn),
            );
            Some(trans(&pair, &w.clash(&n.n)?))
        };
        match negs {
            [] => None,
            [one] => close(one),
            [first, rest @ ..] => {
                let tail = disj(&rest.iter().map(|n| n.e.clone()).collect::<Vec<_>>());
                let d = dist(cn, &first.e, &tail);
                Some(trans(
                    &d,
                    &or_l(&[], &close(first)?, &self.close_disjuncts(cn, rest)?),
                ))
            }
        }
    }

    /// `cl ∘ cr ⇒ goal` by `\L` on a member `A\B` of `rs` (or `/L` on a
    /// member `B/A` of `ls`) whose argument the other side yields and whose
    /// value is one of the goal's disjuncts.
    fn residual_close(
        &self,
        ls: &[LFormula],
        rs: &[LFormula],
        cl: &LFormula,
        cr: &LFormula,
        goal: &LFormula,
    ) -> Option<Proof> {
        for x in rs {
            let LKind::Under(a, b) = x.kind() else {
                continue;
            };
            let (Some(pa), Some(pb)) = (
                self.derive_simple(ls, cl, a),
                self.derive_simple(&[b.clone()], b, goal),
            ) else {
                continue;
            };
            let inner = under_l(&[], &pa, &pb, x);
            return Some(cut(&[Step::Right], &proj(cr, x)?, &inner));
        }
        for x in ls {
            let LKind::Over(b, a) = x.kind() else {
                continue;
            };
            let (Some(pa), Some(pb)) = (
                self.derive_simple(rs, cr, a),
                self.derive_simple(&[b.clone()], b, goal),
            ) else {
                continue;
            };
            let inner = over_l(&[], &pb, &pa, x);
            return Some(cut(&[Step::Left], &proj(cl, x)?, &inner));
        }
        None
    }

    /// `conj(ls) ∘ conj(rs) ⇒ goal`.
    fn product_core(
        &self,
        ls: &[LFormula],
        rs: &[LFormula],
        negs: &[Neg],
        goal: &LFormula,
    ) -> Option<Proof> {
        if !self.tick() {
            return None;
        }
        let w = &self.world;
        let (cl, cr) = (conj(ls), conj(rs));
        let tree = StructTree::node(StructTree::leaf(&cl), StructTree::leaf(&cr));
        let items: Vec<LFormula> = negs.iter().map(|n| n.e.clone()).collect();
        for (i, n) in negs.iter().enumerate() {
            let Some((ci, di)) = &n.parts else { continue };
            if let (Some(pc), Some(pd)) = (
                self.derive_simple(ls, &cl, ci),
                self.derive_simple(rs, &cr, di),
            ) {
                return Some(inject(&prod_r(&pc, &pd), &items, i));
            }
        }
        if let Some(p) = self.residual_close(ls, rs, &cl, &cr, goal) {
            return Some(p);
        }
        for n in negs {
            let Some((ci, di)) = &n.parts else { continue };
            let l_no = w.comp(ci).is_some_and(|x| self.holds(ls, &x));
            let r_no = w.comp(di).is_some_and(|x| self.holds(rs, &x));
            if l_no || r_no {
                continue;
            }
            let on_left = !self.holds(ls, ci);
            let (side, x) = if on_left { (ls, ci) } else { (rs, di) };
            let Some(xc) = w.comp(x) else { continue };
            let (cside, step) = if on_left {
                (&cl, Step::Left)
            } else {
                (&cr, Step::Right)
            };
            let branch = |lit: &LFormula| -> Option<Proof> {
                let grown = with(side, &[lit]);
                let shape = reshape(&LFormula::and(cside, lit), &grown)?;
                let inner = if on_left {
                    self.product_core(&grown, rs, negs, goal)?
                } else {
                    self.product_core(ls, &grown, negs, goal)?
                };
                Some(cut(&[step], &shape, &inner))
            };
            let yes = branch(x)?;
            let no = branch(&xc)?;
            return self.split_in(&tree, &[step], cside, x, &xc, &yes, &no);
        }
        if let Some(p) = self.refute(ls) {
            let hole = StructTree::node(StructTree::leaf(&w.beta), StructTree::leaf(&cr));
            return Some(cut(
                &[Step::Left],
                &p,
                &w.bot_elim(&hole, &[Step::Left], goal)?,
            ));
        }
        if let Some(p) = self.refute(rs) {
            let hole = StructTree::node(StructTree::leaf(&cl), StructTree::leaf(&w.beta));
            return Some(cut(
                &[Step::Right],
                &p,
                &w.bot_elim(&hole, &[Step::Right], goal)?,
            ));
        }
        None
    }
}
