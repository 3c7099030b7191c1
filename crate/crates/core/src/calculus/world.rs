//! The bounded lattice a refutation runs in.
//!
//! A world fixes a bottom `β`, a top `τ` and a partial complement map, and
//! knows how to derive the basic laws about them:
//!
//! * `clash(Z)`: `Z ∧ Z' ⇒ β` where `Z'` is the complement of `Z`;
//! * `lem(Z)`: `τ ⇒ Z ∨ Z'`;
//! * `bot_elim`: `Γ[β] ⇒ A`;
//! * `top_intro`: `Γ ⇒ τ`.
//!
//! With negation these are axioms (`¬1`, `¬2`, `⊥`, `⊤`). Without it, the
//! complement of a letter comes from a pair of assumptions `A ∧ Y ⇒ β`,
//! `τ ⇒ A ∨ Y`, and is extended to `∧`/`∨` by De Morgan. Without the
//! constants, `β = p_⊥` and `τ = p_⊤` are simulated by the absorption
//! assumptions `p_⊥ ⇒ A`, `A · p_⊥ ⇒ p_⊥`, `A ⇒ p_⊤`, `A · p_⊤ ⇒ p_⊤`
//! and their mirror images.

use rustc_hash::{FxHashMap as HashMap, FxHashSet as HashSet};

use super::build::{self, and_l, and_r, comm_and, comm_or, cut, dist, id, or_l, or_r, trans};
use super::cache::Memo;
use super::derivation::Proof;
use super::system::SystemSpec;
use crate::syntax::{LFormula, LKind, Sequent, Step, StructTree};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WorldKind {
    /// `¬` with its axioms.
    Classical,
    /// `⊤`, `⊥` axioms; complements from assumptions.
    Bounded,
    /// `p_⊥`, `p_⊤` simulated by absorption assumptions.
    Simulated,
}

/// A complement letter pair `(A, Y)` and whether the assumptions mention
/// `A` first (`A ∧ Y ⇒ β`, `τ ⇒ A ∨ Y`).
#[derive(Clone, Debug)]
struct Pair {
    other: LFormula,
    clash_first: bool,
    lem_first: bool,
}

type Cache = Memo<LFormula, Option<Proof>>;

pub struct World {
    pub kind: WorldKind,
    pub beta: LFormula,
    pub tau: LFormula,
    phi: HashSet<Sequent>,
    pairs: HashMap<LFormula, Pair>,
    comp_cache: Memo<LFormula, Option<LFormula>>,
    clash_cache: Cache,
    lem_cache: Cache,
    below_cache: Cache,
    above_cache: Cache,
}

impl World {
    /// The world matching a system and assumption set, if any.
    pub fn for_system(sys: &SystemSpec, phi: &[Sequent]) -> Option<World> {
        let (kind, beta, tau) = if sys.negation {
            (WorldKind::Classical, LFormula::bot(), LFormula::top())
        } else if sys.bounded {
            (WorldKind::Bounded, LFormula::bot(), LFormula::top())
        } else {
            let (pb, pt) = (LFormula::p_bot(), LFormula::p_top());
            let has = |s: Sequent| phi.contains(&s);
            // The absorption laws that collapse trees onto p_⊥ and p_⊤.
            if !has(Sequent::simple(&LFormula::prod(&pt, &pt), &pt))
                || !has(Sequent::simple(&LFormula::prod(&pt, &pb), &pb))
            {
                return None;
            }
            (WorldKind::Simulated, pb, pt)
        };
        let phi_set: HashSet<Sequent> = phi.iter().cloned().collect();
        let mut pairs = HashMap::default();
        if kind != WorldKind::Classical {
            for s in phi {
                let Some(lhs) = s.simple_lhs() else { continue };
                let (LKind::And(a, y), true) = (lhs.kind(), s.succedent == beta) else {
                    continue;
                };
                let lem_ay = Sequent::simple(&tau, &LFormula::or(a, y));
                let lem_ya = Sequent::simple(&tau, &LFormula::or(y, a));
                let lem_first = if phi_set.contains(&lem_ay) {
                    true
                } else if phi_set.contains(&lem_ya) {
                    false
                } else {
                    continue;
                };
                pairs.entry(a.clone()).or_insert(Pair {
                    other: y.clone(),
                    clash_first: true,
                    lem_first,
                });
                pairs.entry(y.clone()).or_insert(Pair {
                    other: a.clone(),
                    clash_first: false,
                    lem_first: !lem_first,
                });
            }
        }
        Some(World {
            kind,
            beta,
            tau,
            phi: phi_set,
            pairs,
            comp_cache: Memo::default(),
            clash_cache: Memo::default(),
            lem_cache: Memo::default(),
            below_cache: Memo::default(),
            above_cache: Memo::default(),
        })
    }

    pub fn is_beta(&self, a: &LFormula) -> bool {
        *a == self.beta
    }

    pub fn is_tau(&self, a: &LFormula) -> bool {
        *a == self.tau
    }

    /// The complement of `a`, if the world has one. Results are cached so
    /// repeated complements share structure.
    pub fn comp(&self, a: &LFormula) -> Option<LFormula> {
        if let Some(hit) = self.comp_cache.get(a) {
            return hit;
        }
        let out = self.comp_uncached(a);
        self.comp_cache.put(a.clone(), out.clone());
        out
    }

    fn comp_uncached(&self, a: &LFormula) -> Option<LFormula> {
        if self.kind == WorldKind::Classical {
            return Some(match a.kind() {
                LKind::Not(y) => y.clone(),
                _ => LFormula::not(a),
            });
        }
        if self.is_tau(a) {
            return Some(self.beta.clone());
        }
        if self.is_beta(a) {
            return Some(self.tau.clone());
        }
        if let Some(p) = self.pairs.get(a) {
            return Some(p.other.clone());
        }
        match a.kind() {
            LKind::And(x, y) => Some(LFormula::or(&self.comp(x)?, &self.comp(y)?)),
            LKind::Or(x, y) => Some(LFormula::and(&self.comp(x)?, &self.comp(y)?)),
            _ => None,
        }
    }

    fn assumed(&self, s: Sequent) -> Option<Proof> {
        self.phi.contains(&s).then(|| build::assumption(&s))
    }

    /// `Z ∧ comp(Z) ⇒ β`.
    pub fn clash(&self, z: &LFormula) -> Option<Proof> {
        if let Some(hit) = self.clash_cache.get(z) {
            return hit.clone();
        }
        let out = self.clash_uncached(z);
        self.clash_cache.put(z.clone(), out.clone());
        out
    }

    fn clash_uncached(&self, z: &LFormula) -> Option<Proof> {
        let zc = self.comp(z)?;
        if self.kind == WorldKind::Classical {
            return Some(match z.kind() {
                LKind::Not(y) => trans(&comm_and(z, y), &build::neg1(y)),
                _ => build::neg1(z),
            });
        }
        if self.is_tau(z) {
            return Some(and_l(&id(&self.beta), &[], 2, z));
        }
        if self.is_beta(z) {
            return Some(and_l(&id(z), &[], 1, &zc));
        }
        if let Some(p) = self.pairs.get(z) {
            return if p.clash_first {
                self.assumed(Sequent::simple(&LFormula::and(z, &zc), &self.beta))
            } else {
                let s = self.assumed(Sequent::simple(&LFormula::and(&zc, z), &self.beta))?;
                Some(trans(&comm_and(z, &zc), &s))
            };
        }
        match (z.kind(), zc.kind()) {
            // (X∧Y) ∧ (X'∨Y') ⇒ ((X∧Y)∧X') ∨ ((X∧Y)∧Y'), each disjunct
            // projecting onto a smaller clash.
            (LKind::And(x, y), LKind::Or(xc, yc)) => {
                let left = self.sub_clash(z, x, xc, xc)?;
                let right = self.sub_clash(z, y, yc, yc)?;
                Some(trans(&dist(z, xc, yc), &or_l(&[], &left, &right)))
            }
            // (X∨Y) ∧ (X'∧Y'): commute, then distribute over X∨Y.
            (LKind::Or(x, y), LKind::And(xc, yc)) => {
                let left = self.sub_clash(&zc, x, xc, x)?;
                let right = self.sub_clash(&zc, y, yc, y)?;
                let body = trans(&dist(&zc, x, y), &or_l(&[], &left, &right));
                Some(trans(&comm_and(z, &zc), &body))
            }
            _ => None,
        }
    }

    /// `C ∧ W ⇒ β` where `W` is one of `X`, `X'` and the other is a conjunct
    /// of `C`: `C ∧ W ⇒ X ∧ X'` followed by `clash(X)`.
    fn sub_clash(&self, c: &LFormula, x: &LFormula, xc: &LFormula, w: &LFormula) -> Option<Proof> {
        let in_c = if w == xc { x } else { xc };
        let from_c = and_l(&build::proj(c, in_c)?, &[], 1, w);
        let from_w = and_l(&id(w), &[], 2, c);
        let pair = if w == xc {
            and_r(&from_c, &from_w)
        } else {
            and_r(&from_w, &from_c)
        };
        Some(trans(&pair, &self.clash(x)?))
    }

    /// `τ ⇒ Z ∨ comp(Z)`.
    pub fn lem(&self, z: &LFormula) -> Option<Proof> {
        if let Some(hit) = self.lem_cache.get(z) {
            return hit.clone();
        }
        let out = self.lem_uncached(z);
        self.lem_cache.put(z.clone(), out.clone());
        out
    }

    fn lem_uncached(&self, z: &LFormula) -> Option<Proof> {
        let zc = self.comp(z)?;
        if self.kind == WorldKind::Classical {
            return Some(match z.kind() {
                LKind::Not(y) => trans(&build::neg2(y), &comm_or(y, z)),
                _ => build::neg2(z),
            });
        }
        if self.is_tau(z) {
            return Some(or_r(&id(z), 1, &zc));
        }
        if self.is_beta(z) {
            return Some(or_r(&id(&self.tau), 2, z));
        }
        if let Some(p) = self.pairs.get(z) {
            return if p.lem_first {
                self.assumed(Sequent::simple(&self.tau, &LFormula::or(z, &zc)))
            } else {
                let s = self.assumed(Sequent::simple(&self.tau, &LFormula::or(&zc, z)))?;
                Some(trans(&s, &comm_or(&zc, z)))
            };
        }
        let target = LFormula::or(z, &zc);
        let (x, y, is_and) = match z.kind() {
            LKind::And(x, y) => (x, y, true),
            LKind::Or(x, y) => (x, y, false),
            _ => return None,
        };
        let (xc, yc) = (self.comp(x)?, self.comp(y)?);
        let lx = self.lem(x)?;
        let ly = self.lem(y)?;
        let ex = LFormula::or(x, &xc);
        // τ ⇒ (X∨X') ∧ (Y∨Y') ⇒ ((X∨X')∧Y) ∨ ((X∨X')∧Y')
        let both = and_r(&lx, &ly);
        let split = dist(&ex, y, &yc);
        // The branch holding one side of Y splits once more on X∨X'.
        let inner = |ylit: &LFormula, on_x: &dyn Fn(&LFormula, bool) -> Proof| -> Proof {
            let flipped = comm_and(&ex, ylit);
            let d = dist(ylit, x, &xc);
            let a = on_x(ylit, true);
            let b = on_x(ylit, false);
            trans(&trans(&flipped, &d), &or_l(&[], &a, &b))
        };
        let inj = |p: &Proof, k: usize| build::inject(p, &[z.clone(), zc.clone()], k);
        let (left, right) = if is_and {
            // Y: X gives X∧Y, X' gives X'; Y' alone gives Y'.
            let on_x = |ylit: &LFormula, pos: bool| -> Proof {
                if pos {
                    inj(&comm_and(ylit, x), 0)
                } else {
                    let to_xc = and_l(&id(&xc), &[], 2, ylit);
                    inj(&inject(&to_xc, &zc, 0), 1)
                }
            };
            let l = inner(y, &on_x);
            let to_yc = and_l(&id(&yc), &[], 2, &ex);
            (l, inj(&inject(&to_yc, &zc, 1), 1))
        } else {
            // Y gives X∨Y; Y': X gives X∨Y, X' gives X'∧Y'.
            let to_y = and_l(&id(y), &[], 2, &ex);
            let l = inj(&inject(&to_y, z, 1), 0);
            let on_x = |ylit: &LFormula, pos: bool| -> Proof {
                if pos {
                    let to_x = and_l(&id(x), &[], 2, ylit);
                    inj(&inject(&to_x, z, 0), 0)
                } else {
                    let pair = and_r(
                        &and_l(&id(&xc), &[], 2, ylit),
                        &and_l(&id(ylit), &[], 1, &xc),
                    );
                    inj(&pair, 1)
                }
            };
            (l, inner(&yc, &on_x))
        };
        let body = or_l(&[], &left, &right);
        debug_assert_eq!(body.conclusion.succedent, target);
        Some(trans(&trans(&both, &split), &body))
    }

    /// `β ⇒ A`.
    pub fn below(&self, a: &LFormula) -> Option<Proof> {
        if let Some(hit) = self.below_cache.get(a) {
            return hit.clone();
        }
        let out = match self.kind {
            _ if self.is_beta(a) => Some(id(a)),
            WorldKind::Classical | WorldKind::Bounded => {
                Some(build::bot(StructTree::leaf(&self.beta), Vec::new(), a))
            }
            WorldKind::Simulated => {
                self.assumed(Sequent::simple(&self.beta, a))
                    .or_else(|| match a.kind() {
                        LKind::And(x, y) => Some(and_r(&self.below(x)?, &self.below(y)?)),
                        LKind::Or(x, y) => self
                            .below(x)
                            .map(|p| or_r(&p, 1, y))
                            .or_else(|| self.below(y).map(|p| or_r(&p, 2, x))),
                        _ => None,
                    })
            }
        };
        self.below_cache.put(a.clone(), out.clone());
        out
    }

    /// `A ⇒ τ`.
    pub fn above(&self, a: &LFormula) -> Option<Proof> {
        if let Some(hit) = self.above_cache.get(a) {
            return hit.clone();
        }
        let out = match self.kind {
            _ if self.is_tau(a) => Some(id(a)),
            WorldKind::Classical | WorldKind::Bounded => {
                Some(build::top(Some(StructTree::leaf(a))))
            }
            WorldKind::Simulated => self
                .assumed(Sequent::simple(a, &self.tau))
                .or_else(|| match a.kind() {
                    LKind::And(x, y) => self
                        .above(x)
                        .map(|p| and_l(&p, &[], 1, y))
                        .or_else(|| self.above(y).map(|p| and_l(&p, &[], 2, x))),
                    LKind::Or(x, y) => Some(or_l(&[], &self.above(x)?, &self.above(y)?)),
                    _ if self.is_beta(a) => self.below(&self.tau),
                    _ => None,
                }),
        };
        self.above_cache.put(a.clone(), out.clone());
        out
    }

    /// `X ∘ Y ⇒ C` for an absorption assumption `X · Y ⇒ C`.
    fn absorb(&self, x: &LFormula, y: &LFormula, c: &LFormula) -> Option<Proof> {
        let s = Sequent::simple(&LFormula::prod(x, y), c);
        if !self.phi.contains(&s) {
            return None;
        }
        build::two_leaf(&s)
    }

    /// `Γ ⇒ τ` for any antecedent (empty only with the real constant).
    pub fn top_intro(&self, g: Option<&StructTree>) -> Option<Proof> {
        let Some(g) = g else {
            return (self.kind != WorldKind::Simulated).then(|| build::top(None));
        };
        if self.kind != WorldKind::Simulated {
            return Some(build::top(Some(g.clone())));
        }
        match g {
            StructTree::Leaf(a) => self.above(a),
            StructTree::Node(l, r) => {
                let pl = self.top_intro(Some(l))?;
                let pr = self.top_intro(Some(r))?;
                let base = self.absorb(&self.tau, &self.tau, &self.tau)?;
                Some(cut(&[Step::Left], &pl, &cut(&[Step::Right], &pr, &base)))
            }
            StructTree::Bracket(_) => None,
        }
    }

    /// `Γ[β] ⇒ A` with the `β` leaf at `path`.
    pub fn bot_elim(&self, g: &StructTree, path: &[Step], a: &LFormula) -> Option<Proof> {
        if self.kind != WorldKind::Simulated {
            return Some(build::bot(g.clone(), path.to_vec(), a));
        }
        let Some((last, up)) = path.split_last() else {
            return self.below(a);
        };
        let sibling_step = match last {
            Step::Left => Step::Right,
            Step::Right => Step::Left,
            Step::Inside => return None,
        };
        let mut sib_path = up.to_vec();
        sib_path.push(sibling_step);
        let sibling = g.at(&sib_path)?;
        // Δ ∘ β ⇒ β (or β ∘ Δ ⇒ β) by collapsing Δ onto τ first.
        let collapse = match sibling {
            StructTree::Leaf(d)
                if *last == Step::Right && self.absorb(d, &self.beta, &self.beta).is_some() =>
            {
                self.absorb(d, &self.beta, &self.beta)?
            }
            StructTree::Leaf(d)
                if *last == Step::Left && self.absorb(&self.beta, d, &self.beta).is_some() =>
            {
                self.absorb(&self.beta, d, &self.beta)?
            }
            _ => {
                let to_top = self.top_intro(Some(sibling))?;
                let base = if *last == Step::Right {
                    self.absorb(&self.tau, &self.beta, &self.beta)?
                } else {
                    self.absorb(&self.beta, &self.tau, &self.beta)?
                };
                cut(&[sibling_step], &to_top, &base)
            }
        };
        let reduced = g.replace(up, StructTree::leaf(&self.beta))?;
        let rest = self.bot_elim(&reduced, up, a)?;
        Some(cut(up, &collapse, &rest))
    }
}

fn inject(p: &Proof, whole: &LFormula, k: usize) -> Proof {
    let items = match whole.kind() {
        LKind::Or(a, b) => [a.clone(), b.clone()],
        _ => return p.clone(),
    };
    build::inject(p, &items, k)
}
