//! Formulas of the Lambek-family language.
//!
//! `LFormula` is a cheap-to-clone handle onto an immutable node. Each node
//! caches its structural hash and its size (number of connectives), so
//! equality checks on unequal formulas are usually decided in O(1) and the
//! size-lexicographic order used by the closure enumerator never re-walks
//! subtrees to measure them.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

/// Tag carried by a fresh propositional letter.
///
/// Fresh letters are never produced by the parser from a plain identifier,
/// so they cannot collide with user atoms.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum FreshTag {
    /// The letter standing for the complement of the payload formula.
    NegOf(LFormula),
    /// Stand-in for the bottom constant.
    BotMark,
    /// Stand-in for the top constant.
    TopMark,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum LKind {
    Atom(Arc<str>),
    Fresh(FreshTag),
    Bottom,
    Top,
    Unit,
    And(LFormula, LFormula),
    Or(LFormula, LFormula),
    Not(LFormula),
    Prod(LFormula, LFormula),
    /// `A \ B`
    Under(LFormula, LFormula),
    /// `A / B`
    Over(LFormula, LFormula),
    Dia(LFormula),
    BoxDown(LFormula),
}

struct Node {
    kind: LKind,
    hash: u64,
    size: u32,
    features: u8,
}

/// Connective families occurring in a formula, cached per node.
pub mod features {
    pub const NEGATION: u8 = 1;
    pub const BOUNDS: u8 = 2;
    pub const UNIT: u8 = 4;
    pub const MODAL: u8 = 8;
}

#[derive(Clone)]
pub struct LFormula(Arc<Node>);

const MIX: u64 = 0x9e37_79b9_7f4a_7c15;

fn mix(h: u64, v: u64) -> u64 {
    (h.rotate_left(5) ^ v).wrapping_mul(MIX)
}

fn str_hash(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

impl LKind {
    fn rank(&self) -> u8 {
        match self {
            LKind::Bottom => 0,
            LKind::Top => 1,
            LKind::Unit => 2,
            LKind::Atom(_) => 3,
            LKind::Fresh(_) => 4,
            LKind::And(..) => 5,
            LKind::Or(..) => 6,
            LKind::Not(_) => 7,
            LKind::Prod(..) => 8,
            LKind::Under(..) => 9,
            LKind::Over(..) => 10,
            LKind::Dia(_) => 11,
            LKind::BoxDown(_) => 12,
        }
    }

    fn children(&self) -> (Option<&LFormula>, Option<&LFormula>) {
        match self {
            LKind::And(a, b)
            | LKind::Or(a, b)
            | LKind::Prod(a, b)
            | LKind::Under(a, b)
            | LKind::Over(a, b) => (Some(a), Some(b)),
            LKind::Not(a) | LKind::Dia(a) | LKind::BoxDown(a) => (Some(a), None),
            LKind::Fresh(FreshTag::NegOf(a)) => (Some(a), None),
            _ => (None, None),
        }
    }
}

impl LFormula {
    pub fn new(kind: LKind) -> Self {
        let rank = kind.rank() as u64;
        let (hash, size) = match &kind {
            LKind::Atom(name) => (mix(rank, str_hash(name)), 0),
            LKind::Fresh(FreshTag::NegOf(a)) => (mix(mix(rank, 1), a.0.hash), 0),
            LKind::Fresh(FreshTag::BotMark) => (mix(rank, 2), 0),
            LKind::Fresh(FreshTag::TopMark) => (mix(rank, 3), 0),
            LKind::Bottom | LKind::Top | LKind::Unit => (mix(rank, 0), 0),
            LKind::Not(a) | LKind::Dia(a) | LKind::BoxDown(a) => {
                (mix(rank, a.0.hash), a.0.size + 1)
            }
            LKind::And(a, b)
            | LKind::Or(a, b)
            | LKind::Prod(a, b)
            | LKind::Under(a, b)
            | LKind::Over(a, b) => (mix(mix(rank, a.0.hash), b.0.hash), a.0.size + b.0.size + 1),
        };
        let own = match &kind {
            LKind::Not(_) => features::NEGATION,
            LKind::Top | LKind::Bottom => features::BOUNDS,
            LKind::Unit => features::UNIT,
            LKind::Dia(_) | LKind::BoxDown(_) => features::MODAL,
            _ => 0,
        };
        let features = match &kind {
            LKind::Fresh(_) => 0,
            k => {
                let (a, b) = k.children();
                own | a.map_or(0, |a| a.0.features) | b.map_or(0, |b| b.0.features)
            }
        };
        LFormula(Arc::new(Node {
            kind,
            hash,
            size,
            features,
        }))
    }

    pub fn atom(name: &str) -> Self {
        Self::new(LKind::Atom(Arc::from(name)))
    }
    pub fn bot() -> Self {
        Self::new(LKind::Bottom)
    }
    pub fn top() -> Self {
        Self::new(LKind::Top)
    }
    pub fn unit() -> Self {
        Self::new(LKind::Unit)
    }
    /// The fresh letter `p_A`.
    pub fn neg_letter(a: &LFormula) -> Self {
        Self::new(LKind::Fresh(FreshTag::NegOf(a.clone())))
    }
    pub fn p_bot() -> Self {
        Self::new(LKind::Fresh(FreshTag::BotMark))
    }
    pub fn p_top() -> Self {
        Self::new(LKind::Fresh(FreshTag::TopMark))
    }
    pub fn and(a: &LFormula, b: &LFormula) -> Self {
        Self::new(LKind::And(a.clone(), b.clone()))
    }
    pub fn or(a: &LFormula, b: &LFormula) -> Self {
        Self::new(LKind::Or(a.clone(), b.clone()))
    }
    pub fn not(a: &LFormula) -> Self {
        Self::new(LKind::Not(a.clone()))
    }
    pub fn prod(a: &LFormula, b: &LFormula) -> Self {
        Self::new(LKind::Prod(a.clone(), b.clone()))
    }
    pub fn under(a: &LFormula, b: &LFormula) -> Self {
        Self::new(LKind::Under(a.clone(), b.clone()))
    }
    pub fn over(a: &LFormula, b: &LFormula) -> Self {
        Self::new(LKind::Over(a.clone(), b.clone()))
    }
    pub fn dia(a: &LFormula) -> Self {
        Self::new(LKind::Dia(a.clone()))
    }
    pub fn box_down(a: &LFormula) -> Self {
        Self::new(LKind::BoxDown(a.clone()))
    }

    pub fn kind(&self) -> &LKind {
        &self.0.kind
    }

    /// Number of connectives; atoms, fresh letters and constants have size 0.
    pub fn size(&self) -> usize {
        self.0.size as usize
    }

    /// Bitmask of [`features`] occurring outside fresh-letter payloads.
    pub fn features(&self) -> u8 {
        self.0.features
    }

    pub fn ptr_eq(&self, other: &LFormula) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self.kind(), LKind::Atom(_) | LKind::Fresh(_))
    }

    pub fn atom_name(&self) -> Option<&str> {
        match self.kind() {
            LKind::Atom(n) => Some(n),
            _ => None,
        }
    }

    /// Visit every subformula (including `self`) in pre-order. Payloads of
    /// fresh letters are not subformulas and are not visited.
    pub fn for_each_sub(&self, f: &mut impl FnMut(&LFormula)) {
        f(self);
        match self.kind() {
            LKind::Fresh(_) => {}
            k => {
                let (a, b) = k.children();
                if let Some(a) = a {
                    a.for_each_sub(f);
                }
                if let Some(b) = b {
                    b.for_each_sub(f);
                }
            }
        }
    }

    /// True if any subformula satisfies `pred`.
    pub fn any_sub(&self, pred: &impl Fn(&LFormula) -> bool) -> bool {
        if pred(self) {
            return true;
        }
        match self.kind() {
            LKind::Fresh(_) => false,
            k => {
                let (a, b) = k.children();
                a.is_some_and(|a| a.any_sub(pred)) || b.is_some_and(|b| b.any_sub(pred))
            }
        }
    }

    /// Rebuild the formula with each immediate child replaced by `f(child)`.
    /// Atoms, fresh letters and constants are returned unchanged.
    pub fn map_children<E>(
        &self,
        mut f: impl FnMut(&LFormula) -> Result<LFormula, E>,
    ) -> Result<LFormula, E> {
        Ok(match self.kind() {
            LKind::And(a, b) => Self::and(&f(a)?, &f(b)?),
            LKind::Or(a, b) => Self::or(&f(a)?, &f(b)?),
            LKind::Prod(a, b) => Self::prod(&f(a)?, &f(b)?),
            LKind::Under(a, b) => Self::under(&f(a)?, &f(b)?),
            LKind::Over(a, b) => Self::over(&f(a)?, &f(b)?),
            LKind::Not(a) => Self::not(&f(a)?),
            LKind::Dia(a) => Self::dia(&f(a)?),
            LKind::BoxDown(a) => Self::box_down(&f(a)?),
            _ => self.clone(),
        })
    }

    /// Atom names occurring in the formula, including inside fresh-letter
    /// payloads.
    pub fn collect_atoms(&self, out: &mut std::collections::BTreeSet<String>) {
        match self.kind() {
            LKind::Atom(n) => {
                out.insert(n.to_string());
            }
            LKind::Fresh(FreshTag::NegOf(a)) => a.collect_atoms(out),
            k => {
                let (a, b) = k.children();
                if let Some(a) = a {
                    a.collect_atoms(out);
                }
                if let Some(b) = b {
                    b.collect_atoms(out);
                }
            }
        }
    }
}

impl PartialEq for LFormula {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.hash == other.0.hash
                && self.0.size == other.0.size
                && self.0.kind == other.0.kind)
    }
}

impl Eq for LFormula {}

impl Hash for LFormula {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl Ord for LFormula {
    /// Size first, then connective, then children left to right; atoms by
    /// name. Generating formulas layer by layer from sorted layers yields
    /// sorted output under this order.
    fn cmp(&self, other: &Self) -> Ordering {
        if self.ptr_eq(other) {
            return Ordering::Equal;
        }
        self.size()
            .cmp(&other.size())
            .then_with(|| self.kind().rank().cmp(&other.kind().rank()))
            .then_with(|| match (self.kind(), other.kind()) {
                (LKind::Atom(a), LKind::Atom(b)) => a.cmp(b),
                (LKind::Fresh(a), LKind::Fresh(b)) => fresh_cmp(a, b),
                (ka, kb) => {
                    let (a1, a2) = ka.children();
                    let (b1, b2) = kb.children();
                    a1.cmp(&b1).then_with(|| a2.cmp(&b2))
                }
            })
    }
}

fn fresh_cmp(a: &FreshTag, b: &FreshTag) -> Ordering {
    let r = |t: &FreshTag| match t {
        FreshTag::BotMark => 0,
        FreshTag::TopMark => 1,
        FreshTag::NegOf(_) => 2,
    };
    match (a, b) {
        (FreshTag::NegOf(x), FreshTag::NegOf(y)) => x.cmp(y),
        _ => r(a).cmp(&r(b)),
    }
}

impl PartialOrd for LFormula {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for LFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}
