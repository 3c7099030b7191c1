//! Recursive-descent parsers for the concrete grammar.
//!
//! Precedence from loosest to tightest: `->`, `\/`, `/\`, `\` and `/`,
//! `*`, unary. Implication, disjunction and conjunction associate to the
//! right; the Lambek connectives do not associate, so chains must be
//! parenthesised.

use super::formula::LFormula;
use super::lexer::{tokenize, Tok, Token};
use super::modal::ModalFormula;
use super::tree::{Sequent, StructTree};
use crate::error::{Error, Result};

const RESERVED: &[&str] = &["bot", "top", "one", "o", "p_bot", "p_top"];

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self> {
        Ok(Parser {
            toks: tokenize(text)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        let t = &self.toks[self.pos];
        Err(Error::Syntax {
            line: t.line,
            column: t.column,
            message: message.into(),
        })
    }

    fn unexpected<T>(&self, wanted: &str) -> Result<T> {
        self.err(format!(
            "expected {wanted}, found {}",
            self.peek().describe()
        ))
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.unexpected(&tok.describe())
        }
    }

    fn expect_eof(&self) -> Result<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.unexpected("end of input")
        }
    }

    // ----- modal -----

    fn modal_imp(&mut self) -> Result<ModalFormula> {
        let l = self.modal_or()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let r = self.modal_imp()?;
            return Ok(ModalFormula::implies(l, r));
        }
        Ok(l)
    }

    fn modal_or(&mut self) -> Result<ModalFormula> {
        let l = self.modal_and()?;
        if *self.peek() == Tok::Or {
            self.bump();
            let r = self.modal_or()?;
            return Ok(ModalFormula::or(l, r));
        }
        Ok(l)
    }

    fn modal_and(&mut self) -> Result<ModalFormula> {
        let l = self.modal_unary()?;
        if *self.peek() == Tok::And {
            self.bump();
            let r = self.modal_and()?;
            return Ok(ModalFormula::and(l, r));
        }
        Ok(l)
    }

    fn modal_unary(&mut self) -> Result<ModalFormula> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.bump();
                Ok(ModalFormula::not(self.modal_unary()?))
            }
            Tok::Dia => {
                self.bump();
                Ok(ModalFormula::diamond(self.modal_unary()?))
            }
            Tok::Box => {
                self.bump();
                Ok(ModalFormula::boxed(self.modal_unary()?))
            }
            Tok::LParen => {
                self.bump();
                let f = self.modal_imp()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(name) if name == "bot" => {
                self.bump();
                Ok(ModalFormula::Bottom)
            }
            Tok::Ident(name) if RESERVED.contains(&name.as_str()) => {
                self.err(format!("`{name}` is not part of the modal language"))
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(ModalFormula::Atom(name))
            }
            _ => self.unexpected("a modal formula"),
        }
    }

    // ----- Lambek -----

    fn lformula(&mut self) -> Result<LFormula> {
        self.l_or()
    }

    fn l_or(&mut self) -> Result<LFormula> {
        let l = self.l_and()?;
        if *self.peek() == Tok::Or {
            self.bump();
            let r = self.l_or()?;
            return Ok(LFormula::or(&l, &r));
        }
        Ok(l)
    }

    fn l_and(&mut self) -> Result<LFormula> {
        let l = self.l_res()?;
        if *self.peek() == Tok::And {
            self.bump();
            let r = self.l_and()?;
            return Ok(LFormula::and(&l, &r));
        }
        Ok(l)
    }

    fn l_res(&mut self) -> Result<LFormula> {
        let l = self.l_prod()?;
        let f = match self.peek() {
            Tok::Backslash => {
                self.bump();
                LFormula::under(&l, &self.l_prod()?)
            }
            Tok::Slash => {
                self.bump();
                LFormula::over(&l, &self.l_prod()?)
            }
            _ => return Ok(l),
        };
        if matches!(self.peek(), Tok::Backslash | Tok::Slash) {
            return self.err("`\\` and `/` do not associate; add parentheses");
        }
        Ok(f)
    }

    fn l_prod(&mut self) -> Result<LFormula> {
        let l = self.l_unary()?;
        if *self.peek() == Tok::Star {
            self.bump();
            let r = self.l_unary()?;
            if *self.peek() == Tok::Star {
                return self.err("`*` does not associate; add parentheses");
            }
            return Ok(LFormula::prod(&l, &r));
        }
        Ok(l)
    }

    fn l_unary(&mut self) -> Result<LFormula> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.bump();
                Ok(LFormula::not(&self.l_unary()?))
            }
            Tok::Dia => {
                self.bump();
                Ok(LFormula::dia(&self.l_unary()?))
            }
            Tok::BoxDown => {
                self.bump();
                Ok(LFormula::box_down(&self.l_unary()?))
            }
            Tok::LParen => {
                self.bump();
                let f = self.lformula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::FreshOpen => {
                self.bump();
                let f = self.lformula()?;
                self.expect(Tok::RBrace)?;
                Ok(LFormula::neg_letter(&f))
            }
            Tok::Ident(name) => {
                let f = match name.as_str() {
                    "bot" => LFormula::bot(),
                    "top" => LFormula::top(),
                    "one" => LFormula::unit(),
                    "p_bot" => LFormula::p_bot(),
                    "p_top" => LFormula::p_top(),
                    "o" => return self.err("`o` is the structure operator, not a formula"),
                    _ => LFormula::atom(&name),
                };
                self.bump();
                Ok(f)
            }
            Tok::Box => self.err("`[]` belongs to the modal language; use `[v]`"),
            _ => self.unexpected("a formula"),
        }
    }

    // ----- trees and sequents -----

    fn tree(&mut self) -> Result<StructTree> {
        let l = self.tree_item()?;
        if self.peek_is_o() {
            self.bump();
            let r = self.tree_item()?;
            if self.peek_is_o() {
                return self.err("`o` does not associate; add parentheses");
            }
            return Ok(StructTree::node(l, r));
        }
        Ok(l)
    }

    fn peek_is_o(&self) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == "o")
    }

    fn follows_item(&self) -> bool {
        self.peek_is_o()
            || matches!(
                self.peek(),
                Tok::Turnstile | Tok::RParen | Tok::Gt | Tok::Eof
            )
    }

    fn tree_item(&mut self) -> Result<StructTree> {
        match self.peek() {
            Tok::Lt => {
                self.bump();
                let t = self.tree()?;
                self.expect(Tok::Gt)?;
                Ok(StructTree::bracket(t))
            }
            Tok::LParen => {
                let save = self.pos;
                let as_formula = self.lformula();
                match as_formula {
                    Ok(f) if self.follows_item() => Ok(StructTree::Leaf(f)),
                    first => {
                        let first_err = match first {
                            Ok(_) => self
                                .unexpected::<()>("`o`, `=>` or a closing bracket")
                                .unwrap_err(),
                            Err(e) => e,
                        };
                        let first_pos = self.pos;
                        self.pos = save;
                        self.bump();
                        let inner = self.tree().and_then(|t| {
                            self.expect(Tok::RParen)?;
                            Ok(t)
                        });
                        match inner {
                            Ok(t) => Ok(t),
                            Err(e) if self.pos >= first_pos => Err(e),
                            Err(_) => Err(first_err),
                        }
                    }
                }
            }
            _ => Ok(StructTree::Leaf(self.lformula()?)),
        }
    }

    fn sequent(&mut self) -> Result<Sequent> {
        let antecedent = if *self.peek() == Tok::Turnstile {
            None
        } else {
            Some(self.tree()?)
        };
        self.expect(Tok::Turnstile)?;
        let succedent = self.lformula()?;
        self.expect_eof()?;
        Ok(Sequent::new(antecedent, succedent))
    }
}

pub fn parse_modal(text: &str) -> Result<ModalFormula> {
    let mut p = Parser::new(text)?;
    let f = p.modal_imp()?;
    p.expect_eof()?;
    Ok(f)
}

pub fn parse_lambek(text: &str) -> Result<LFormula> {
    let mut p = Parser::new(text)?;
    let f = p.lformula()?;
    p.expect_eof()?;
    Ok(f)
}

pub fn parse_tree(text: &str) -> Result<StructTree> {
    let mut p = Parser::new(text)?;
    let t = p.tree()?;
    p.expect_eof()?;
    Ok(t)
}

pub fn parse_sequent(text: &str) -> Result<Sequent> {
    Parser::new(text)?.sequent()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(n: &str) -> LFormula {
        LFormula::atom(n)
    }

    #[test]
    fn modal_examples() {
        let p = ModalFormula::atom("p");
        assert_eq!(
            parse_modal("<>p").unwrap(),
            ModalFormula::diamond(p.clone())
        );
        assert_eq!(
            parse_modal("~p \\/ q").unwrap(),
            ModalFormula::or(ModalFormula::not(p.clone()), ModalFormula::atom("q"))
        );
        assert_eq!(parse_modal("[]p").unwrap(), ModalFormula::boxed(p.clone()));
        assert_eq!(
            parse_modal("p -> q -> r").unwrap(),
            ModalFormula::implies(
                p,
                ModalFormula::implies(ModalFormula::atom("q"), ModalFormula::atom("r"))
            )
        );
        assert!(parse_modal("p * q").is_err());
        assert!(parse_modal("top").is_err());
    }

    #[test]
    fn lambek_examples() {
        assert_eq!(
            parse_lambek("m * p").unwrap(),
            LFormula::prod(&a("m"), &a("p"))
        );
        assert_eq!(
            parse_lambek("a * b \\ c").unwrap(),
            LFormula::under(&LFormula::prod(&a("a"), &a("b")), &a("c"))
        );
        assert!(parse_lambek("a \\ b / c").is_err());
        assert!(parse_lambek("a * b * c").is_err());
        assert_eq!(
            parse_lambek("p{p /\\ q}").unwrap(),
            LFormula::neg_letter(&LFormula::and(&a("p"), &a("q")))
        );
        assert_eq!(parse_lambek("p_bot").unwrap(), LFormula::p_bot());
    }

    #[test]
    fn sequent_examples() {
        let s = parse_sequent("(p o q) => p * q").unwrap();
        assert_eq!(
            s,
            Sequent::tree(
                StructTree::node(StructTree::leaf(&a("p")), StructTree::leaf(&a("q"))),
                &LFormula::prod(&a("p"), &a("q"))
            )
        );
        assert_eq!(
            parse_sequent("=> top").unwrap(),
            Sequent::empty(&LFormula::top())
        );
        let b = parse_sequent("< p > o (q \\/ r) => <>p").unwrap();
        assert!(b.has_bracket());
        assert_eq!(
            parse_sequent("((p)) => p").unwrap(),
            Sequent::simple(&a("p"), &a("p"))
        );
        assert!(parse_sequent("p o q o r => p").is_err());
    }

    #[test]
    fn errors_carry_positions() {
        match parse_lambek("p /\\ ") {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (1, 6)),
            other => panic!("{other:?}"),
        }
    }
}
