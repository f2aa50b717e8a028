//! Recursive-descent parser for the concrete formula and sequent syntax.
//!
//! ```text
//! imp   := or ("->" imp)?
//! or    := and ("|" and)*
//! and   := unary ("&" unary)*
//! unary := "~" unary | "[]" unary | "<>" unary | atom | "false" | "true" | "(" imp ")"
//! ```
//! Unicode spellings `⊥ ⊤ ¬ → ∧ ∨ □ ◇ ⇒` are accepted as well.

use thiserror::Error;

use super::{Formula, Multiset, Sequent};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at offset {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    False,
    True,
    Not,
    Box,
    Diamond,
    And,
    Or,
    Imp,
    LParen,
    RParen,
    Comma,
    Turnstile,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        let rest = &text[i..];
        let (tok, len) = if c.is_whitespace() {
            chars.next();
            continue;
        } else if c.is_ascii_lowercase() {
            let end = rest
                .find(|ch: char| !(ch.is_ascii_lowercase() || ch.is_ascii_digit() || ch == '_'))
                .unwrap_or(rest.len());
            let word = &rest[..end];
            let tok = match word {
                "false" => Tok::False,
                "true" => Tok::True,
                _ => Tok::Ident(word.to_owned()),
            };
            (tok, end)
        } else if rest.starts_with("->") {
            (Tok::Imp, 2)
        } else if rest.starts_with("=>") {
            (Tok::Turnstile, 2)
        } else if rest.starts_with("[]") {
            (Tok::Box, 2)
        } else if rest.starts_with("<>") {
            (Tok::Diamond, 2)
        } else {
            let tok = match c {
                '~' | '¬' => Tok::Not,
                '&' | '∧' => Tok::And,
                '|' | '∨' => Tok::Or,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                '→' => Tok::Imp,
                '⇒' => Tok::Turnstile,
                '□' => Tok::Box,
                '◇' => Tok::Diamond,
                '⊥' => Tok::False,
                '⊤' => Tok::True,
                _ => {
                    return Err(ParseError {
                        pos: i,
                        msg: format!("unexpected character {c:?}"),
                    })
                }
            };
            (tok, c.len_utf8())
        };
        out.push((i, tok));
        while chars.peek().is_some_and(|&(j, _)| j < i + len) {
            chars.next();
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn fail<T>(&self, msg: &str) -> Result<T, ParseError> {
        let found = match self.peek() {
            Some(t) => format!("{t:?}"),
            None => "end of input".into(),
        };
        Err(ParseError {
            pos: self.pos(),
            msg: format!("{msg}, found {found}"),
        })
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.eat(&Tok::Imp) {
            let rhs = self.imp()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.eat(&Tok::Or) {
            lhs = Formula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::And) {
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let Some(tok) = self.peek().cloned() else {
            return self.fail("expected formula");
        };
        self.at += 1;
        match tok {
            Tok::Not => Ok(Formula::not(self.unary()?)),
            Tok::Box => Ok(Formula::boxed(self.unary()?)),
            Tok::Diamond => Ok(Formula::diamond(self.unary()?)),
            Tok::False => Ok(Formula::bottom()),
            Tok::True => Ok(Formula::top()),
            Tok::Ident(name) => Ok(Formula::atom(&name)),
            Tok::LParen => {
                let f = self.imp()?;
                if !self.eat(&Tok::RParen) {
                    return self.fail("expected ')'");
                }
                Ok(f)
            }
            _ => {
                self.at -= 1;
                self.fail("expected formula")
            }
        }
    }

    fn list(&mut self) -> Result<Multiset, ParseError> {
        let mut m = Multiset::new();
        if matches!(self.peek(), None | Some(Tok::Turnstile)) {
            return Ok(m);
        }
        loop {
            m.insert(self.imp()?);
            if !self.eat(&Tok::Comma) {
                return Ok(m);
            }
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.at < self.toks.len() {
            return self.fail("trailing input");
        }
        Ok(())
    }
}

fn parser(text: &str) -> Result<Parser, ParseError> {
    Ok(Parser {
        toks: lex(text)?,
        at: 0,
        end: text.len(),
    })
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = parser(text)?;
    let f = p.imp()?;
    p.finish()?;
    Ok(f)
}

/// Parses `A, B => C, D`; either side may be empty. Input without `=>`
/// is read as `=> A`.
pub fn parse_sequent(text: &str) -> Result<Sequent, ParseError> {
    let mut p = parser(text)?;
    if !p.toks.iter().any(|(_, t)| *t == Tok::Turnstile) {
        let f = p.imp()?;
        p.finish()?;
        return Ok(Sequent::goal(f));
    }
    let ant = p.list()?;
    if !p.eat(&Tok::Turnstile) {
        return p.fail("expected '=>'");
    }
    let succ = p.list()?;
    p.finish()?;
    Ok(Sequent::new(ant, succ))
}
