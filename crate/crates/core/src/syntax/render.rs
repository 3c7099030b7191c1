//! Printing in the concrete grammar, with the minimum of parentheses needed
//! for the parser to reconstruct the same tree.

use std::fmt::{self, Display, Write};

use super::formula::{FreshTag, LFormula, LKind};
use super::modal::ModalFormula;
use super::tree::{Sequent, StructTree};

const IMP: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const RES: u8 = 4;
const PROD: u8 = 5;
const UNARY: u8 = 6;
const ATOM: u8 = 7;

fn modal_level(f: &ModalFormula) -> u8 {
    match f {
        ModalFormula::Atom(_) | ModalFormula::Bottom => ATOM,
        ModalFormula::Implies(..) => IMP,
        ModalFormula::Or(..) => OR,
        ModalFormula::And(..) => AND,
        ModalFormula::Not(_) | ModalFormula::Diamond(_) => UNARY,
    }
}

fn write_modal(out: &mut impl Write, f: &ModalFormula, min: u8) -> fmt::Result {
    let level = modal_level(f);
    if level < min {
        out.write_char('(')?;
        write_modal(out, f, 0)?;
        return out.write_char(')');
    }
    match f {
        ModalFormula::Atom(n) => out.write_str(n),
        ModalFormula::Bottom => out.write_str("bot"),
        ModalFormula::Implies(a, b) => right_assoc_modal(out, a, "->", b, IMP),
        ModalFormula::Or(a, b) => right_assoc_modal(out, a, "\\/", b, OR),
        ModalFormula::And(a, b) => right_assoc_modal(out, a, "/\\", b, AND),
        ModalFormula::Not(a) => match &**a {
            ModalFormula::Diamond(inner) => match &**inner {
                ModalFormula::Not(body) => {
                    out.write_str("[]")?;
                    write_modal(out, body, UNARY)
                }
                _ => {
                    out.write_char('~')?;
                    write_modal(out, a, UNARY)
                }
            },
            _ => {
                out.write_char('~')?;
                write_modal(out, a, UNARY)
            }
        },
        ModalFormula::Diamond(a) => {
            out.write_str("<>")?;
            write_modal(out, a, UNARY)
        }
    }
}

fn right_assoc_modal(
    out: &mut impl Write,
    a: &ModalFormula,
    op: &str,
    b: &ModalFormula,
    level: u8,
) -> fmt::Result {
    write_modal(out, a, level + 1)?;
    write!(out, " {op} ")?;
    write_modal(out, b, level)
}

fn lambek_level(f: &LFormula) -> u8 {
    match f.kind() {
        LKind::Or(..) => OR,
        LKind::And(..) => AND,
        LKind::Under(..) | LKind::Over(..) => RES,
        LKind::Prod(..) => PROD,
        LKind::Not(_) | LKind::Dia(_) | LKind::BoxDown(_) => UNARY,
        _ => ATOM,
    }
}

fn write_lambek(out: &mut impl Write, f: &LFormula, min: u8) -> fmt::Result {
    let level = lambek_level(f);
    if level < min {
        out.write_char('(')?;
        write_lambek(out, f, 0)?;
        return out.write_char(')');
    }
    match f.kind() {
        LKind::Atom(n) => out.write_str(n),
        LKind::Fresh(FreshTag::NegOf(a)) => {
            out.write_str("p{")?;
            write_lambek(out, a, 0)?;
            out.write_char('}')
        }
        LKind::Fresh(FreshTag::BotMark) => out.write_str("p_bot"),
        LKind::Fresh(FreshTag::TopMark) => out.write_str("p_top"),
        LKind::Bottom => out.write_str("bot"),
        LKind::Top => out.write_str("top"),
        LKind::Unit => out.write_str("one"),
        LKind::Or(a, b) => binary(out, a, "\\/", b, OR + 1, OR),
        LKind::And(a, b) => binary(out, a, "/\\", b, AND + 1, AND),
        LKind::Under(a, b) => binary(out, a, "\\", b, RES + 1, RES + 1),
        LKind::Over(a, b) => binary(out, a, "/", b, RES + 1, RES + 1),
        LKind::Prod(a, b) => binary(out, a, "*", b, PROD + 1, PROD + 1),
        LKind::Not(a) => {
            out.write_char('~')?;
            write_lambek(out, a, UNARY)
        }
        LKind::Dia(a) => {
            out.write_str("<>")?;
            write_lambek(out, a, UNARY)
        }
        LKind::BoxDown(a) => {
            out.write_str("[v]")?;
            write_lambek(out, a, UNARY)
        }
    }
}

fn binary(
    out: &mut impl Write,
    a: &LFormula,
    op: &str,
    b: &LFormula,
    lmin: u8,
    rmin: u8,
) -> fmt::Result {
    write_lambek(out, a, lmin)?;
    write!(out, " {op} ")?;
    write_lambek(out, b, rmin)
}

fn write_tree(out: &mut impl Write, t: &StructTree, nested: bool) -> fmt::Result {
    match t {
        StructTree::Leaf(f) => {
            // A leaf that starts with `(` is fine: the parser tries the formula
            // reading first.
            write_lambek(out, f, 0)
        }
        StructTree::Node(l, r) => {
            if nested {
                out.write_char('(')?;
            }
            write_tree(out, l, true)?;
            out.write_str(" o ")?;
            write_tree(out, r, true)?;
            if nested {
                out.write_char(')')?;
            }
            Ok(())
        }
        StructTree::Bracket(c) => {
            out.write_str("< ")?;
            write_tree(out, c, false)?;
            out.write_str(" >")
        }
    }
}

impl Display for ModalFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_modal(f, self, 0)
    }
}

impl Display for LFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_lambek(f, self, 0)
    }
}

impl Display for StructTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tree(f, self, false)
    }
}

impl Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.antecedent {
            Some(t) => write!(f, "{t} => {}", self.succedent),
            None => write!(f, "=> {}", self.succedent),
        }
    }
}
