//! Tokenizer shared by the modal and Lambek grammars.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    /// `p{`, opening a fresh letter.
    FreshOpen,
    RBrace,
    LParen,
    RParen,
    Tilde,
    And,
    Or,
    Arrow,
    Dia,
    Box,
    BoxDown,
    Star,
    Backslash,
    Slash,
    Lt,
    Gt,
    Turnstile,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::FreshOpen => "`p{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::And => "`/\\`".into(),
            Tok::Or => "`\\/`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Dia => "`<>`".into(),
            Tok::Box => "`[]`".into(),
            Tok::BoxDown => "`[v]`".into(),
            Tok::Star => "`*`".into(),
            Tok::Backslash => "`\\`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Lt => "`<`".into(),
            Tok::Gt => "`>`".into(),
            Tok::Turnstile => "`=>`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

pub fn tokenize(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let next = chars.get(i + 1).copied();
        let (tok, len) = match (c, next) {
            ('/', Some('\\')) => (Tok::And, 2),
            ('\\', Some('/')) => (Tok::Or, 2),
            ('-', Some('>')) => (Tok::Arrow, 2),
            ('=', Some('>')) => (Tok::Turnstile, 2),
            ('<', Some('>')) => (Tok::Dia, 2),
            ('[', Some(']')) => (Tok::Box, 2),
            ('[', Some('v')) if chars.get(i + 2) == Some(&']') => (Tok::BoxDown, 3),
            ('/', _) => (Tok::Slash, 1),
            ('\\', _) => (Tok::Backslash, 1),
            ('*', _) => (Tok::Star, 1),
            ('~', _) => (Tok::Tilde, 1),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            ('}', _) => (Tok::RBrace, 1),
            ('<', _) => (Tok::Lt, 1),
            ('>', _) => (Tok::Gt, 1),
            (c, _) if c.is_ascii_lowercase() => {
                let start = i;
                let mut j = i + 1;
                while j < chars.len()
                    && (chars[j].is_ascii_lowercase()
                        || chars[j].is_ascii_digit()
                        || chars[j] == '_')
                {
                    j += 1;
                }
                let word: String = chars[start..j].iter().collect();
                if word == "p" && chars.get(j) == Some(&'{') {
                    (Tok::FreshOpen, 2)
                } else {
                    let n = j - start;
                    (Tok::Ident(word), n)
                }
            }
            (c, _) => {
                return Err(Error::Syntax {
                    line,
                    column: col,
                    message: format!("unknown character `{c}`"),
                })
            }
        };
        out.push(Token {
            tok,
            line,
            column: col,
        });
        i += len;
        col += len;
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(out)
}
