//! The basic BFNL* facts as a regression corpus: the equivalences (1)-(5)
//! in both directions, and the closure properties (6)-(8) as conditionals
//! whose premises are derived before their conclusions.

use crate::syntax::{parse_lambek, LFormula, Sequent};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactCase {
    /// Which fact the case instantiates, `1` to `8`.
    pub fact: u8,
    /// Obligations that must be derivable for the case to apply.
    pub premises: Vec<Sequent>,
    pub conclusion: Sequent,
}

fn l(s: &str) -> LFormula {
    parse_lambek(s).expect("corpus formulas parse")
}

fn both(fact: u8, a: &LFormula, b: &LFormula) -> [FactCase; 2] {
    let case = |x: &LFormula, y: &LFormula| FactCase {
        fact,
        premises: Vec::new(),
        conclusion: Sequent::simple(x, y),
    };
    [case(a, b), case(b, a)]
}

/// Replace every occurrence of `from` in `c` by `to`.
fn replace(c: &LFormula, from: &LFormula, to: &LFormula) -> LFormula {
    if c == from {
        return to.clone();
    }
    c.map_children(|x| Ok::<_, ()>(replace(x, from, to)))
        .expect("infallible")
}

pub fn facts_corpus() -> Vec<FactCase> {
    let mut out = Vec::new();
    let (not, and, or, prod) = (LFormula::not, LFormula::and, LFormula::or, LFormula::prod);
    let (top, bot, m) = (LFormula::top(), LFormula::bot(), l("m"));

    out.extend(both(1, &not(&bot), &top));
    out.extend(both(1, &not(&top), &bot));
    for a in ["p", "p * q", "p \\ q", "~p /\\ q"] {
        let a = l(a);
        out.extend(both(2, &a, &not(&not(&a))));
    }
    for (a, b) in [("p", "q"), ("p * q", "~r"), ("p \\/ q", "r / p")] {
        let (a, b) = (l(a), l(b));
        out.extend(both(3, &not(&and(&a, &b)), &or(&not(&a), &not(&b))));
        out.extend(both(3, &not(&or(&a, &b)), &and(&not(&a), &not(&b))));
    }
    for (a, b, c) in [("p", "q", "r"), ("p * q", "~p", "q \\/ r")] {
        let (a, b, c) = (l(a), l(b), l(c));
        out.extend(both(
            4,
            &and(&a, &or(&b, &c)),
            &or(&and(&a, &b), &and(&a, &c)),
        ));
        out.extend(both(
            4,
            &or(&a, &and(&b, &c)),
            &and(&or(&a, &b), &or(&a, &c)),
        ));
    }
    for (a, b) in [("p", "q"), ("p /\\ q", "~r"), ("m * p", "bot")] {
        let (a, b) = (l(a), l(b));
        out.extend(both(
            5,
            &prod(&m, &or(&a, &b)),
            &or(&prod(&m, &a), &prod(&m, &b)),
        ));
    }

    let entailments = [
        ("p /\\ q", "p"),
        ("p", "p \\/ q"),
        ("m * (p /\\ q)", "m * p"),
        ("p o (p \\ q)", "q"),
    ];
    for (a, b) in entailments {
        let premise =
            crate::syntax::parse_sequent(&format!("{a} => {b}")).expect("corpus sequents parse");
        let (a, b) = (premise_lhs(&premise), premise.succedent.clone());
        out.push(FactCase {
            fact: 6,
            premises: vec![premise.clone()],
            conclusion: Sequent::simple(&not(&b), &not(&a)),
        });
        out.push(FactCase {
            fact: 7,
            premises: vec![premise],
            conclusion: Sequent::empty(&or(&not(&a), &b)),
        });
    }

    for (a, b, c) in [
        ("p", "~~p", "m * (p /\\ q)"),
        ("p /\\ q", "q /\\ p", "~(p /\\ q) \\/ r"),
        (
            "m * (p \\/ q)",
            "(m * p) \\/ (m * q)",
            "~(m * (p \\/ q)) /\\ s",
        ),
    ] {
        let (a, b, c) = (l(a), l(b), l(c));
        let c2 = replace(&c, &a, &b);
        for (x, y) in [(&c, &c2), (&c2, &c)] {
            out.push(FactCase {
                fact: 8,
                premises: vec![Sequent::simple(&a, &b), Sequent::simple(&b, &a)],
                conclusion: Sequent::simple(x, y),
            });
        }
    }
    out
}

/// The antecedent of a premise as one formula (`φ` of its tree).
fn premise_lhs(s: &Sequent) -> LFormula {
    let t = s.antecedent.as_ref().expect("premises have antecedents");
    crate::syntax::phi_of_tree(t).expect("premises are bracket-free")
}
