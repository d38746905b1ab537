use num::{BigInt, One};
use thiserror::Error;

use super::formula::LtlFormula;
use crate::{Ident, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{col}: expected {expected}, found {found}")]
pub struct LtlParseError {
    /// 1-based character column.
    pub col: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Tilde,
    Wedge,
    Vee,
    Arrow,
    Diamond,
    Box,
    Minus,
    Slash,
    LParen,
    RParen,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Tilde => "`~`".into(),
            Tok::Wedge => "`/\\`".into(),
            Tok::Vee => "`\\/`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Diamond => "`<>`".into(),
            Tok::Box => "`[]`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Slash => "`/`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, LtlParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let pair = |s: &str| chars[i..].iter().take(2).copied().eq(s.chars());
        let (tok, len) = if pair("/\\") {
            (Tok::Wedge, 2)
        } else if pair("\\/") {
            (Tok::Vee, 2)
        } else if pair("->") {
            (Tok::Arrow, 2)
        } else if pair("<>") {
            (Tok::Diamond, 2)
        } else if pair("[]") {
            (Tok::Box, 2)
        } else if c.is_ascii_digit() {
            let len = chars[i..].iter().take_while(|c| c.is_ascii_digit()).count();
            let digits: String = chars[i..i + len].iter().collect();
            (Tok::Int(digits.parse().expect("ascii digits")), len)
        } else if c.is_alphabetic() || c == '_' {
            let len = chars[i..]
                .iter()
                .take_while(|c| c.is_alphanumeric() || **c == '_')
                .count();
            (Tok::Ident(chars[i..i + len].iter().collect()), len)
        } else {
            let tok = match c {
                '~' => Tok::Tilde,
                '-' => Tok::Minus,
                '/' => Tok::Slash,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                _ => {
                    return Err(LtlParseError {
                        col,
                        expected: "a formula".into(),
                        found: format!("`{c}`"),
                    })
                }
            };
            (tok, 1)
        };
        out.push((col, tok));
        i += len;
    }
    Ok(out)
}

struct Parser<'a, R> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end_col: usize,
    resolve: &'a R,
}

impl<R: Fn(&str) -> Option<Rational>> Parser<'_, R> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn error<T>(&self, expected: &str) -> Result<T, LtlParseError> {
        let (col, found) = match self.toks.get(self.pos) {
            Some((c, t)) => (*c, t.describe()),
            None => (self.end_col, "end of input".to_string()),
        };
        Err(LtlParseError {
            col,
            expected: expected.into(),
            found,
        })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), LtlParseError> {
        if self.eat(&t) {
            Ok(())
        } else {
            self.error(what)
        }
    }

    fn implication(&mut self) -> Result<LtlFormula, LtlParseError> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            Ok(LtlFormula::implies(lhs, self.implication()?))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction(&mut self) -> Result<LtlFormula, LtlParseError> {
        let mut lhs = self.conjunction()?;
        while self.eat(&Tok::Vee) {
            lhs = LtlFormula::or(lhs, self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<LtlFormula, LtlParseError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::Wedge) {
            lhs = LtlFormula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<LtlFormula, LtlParseError> {
        match self.peek() {
            Some(Tok::Tilde) => {
                self.pos += 1;
                Ok(LtlFormula::not(self.unary()?))
            }
            Some(Tok::Diamond) => {
                self.pos += 1;
                Ok(LtlFormula::eventually(self.unary()?))
            }
            Some(Tok::Box) => {
                self.pos += 1;
                Ok(LtlFormula::globally(self.unary()?))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.implication()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Some(Tok::Ident(name)) => {
                let name = name.clone();
                self.pos += 1;
                match name.as_str() {
                    "tt" => return Ok(LtlFormula::Top),
                    "ff" => return Ok(LtlFormula::Bot),
                    _ => {}
                }
                self.expect(Tok::LParen, "`(` after proposition variable")?;
                let value = self.value()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(LtlFormula::Prop(Ident::new(&name), value))
            }
            _ => self.error("a formula"),
        }
    }

    fn value(&mut self) -> Result<Rational, LtlParseError> {
        let negative = self.eat(&Tok::Minus);
        let v = match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                let den = if self.eat(&Tok::Slash) {
                    match self.peek().cloned() {
                        Some(Tok::Int(d)) if d != BigInt::from(0) => {
                            self.pos += 1;
                            d
                        }
                        _ => return self.error("a nonzero denominator"),
                    }
                } else {
                    BigInt::one()
                };
                Rational::new(n, den)
            }
            Some(Tok::Ident(name)) if !negative => match (self.resolve)(&name) {
                Some(v) => {
                    self.pos += 1;
                    v
                }
                None => return self.error("a rational literal or constant name"),
            },
            _ => return self.error("a rational literal"),
        };
        Ok(if negative { -v } else { v })
    }
}

/// Parses a formula whose proposition values are numeric literals.
pub fn parse_ltl(text: &str) -> Result<LtlFormula, LtlParseError> {
    parse_ltl_with(text, &|_| None)
}

/// Parses a formula, resolving names in proposition values with `resolve`.
pub fn parse_ltl_with<R>(text: &str, resolve: &R) -> Result<LtlFormula, LtlParseError>
where
    R: Fn(&str) -> Option<Rational>,
{
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        end_col: text.chars().count() + 1,
        resolve,
    };
    let f = p.implication()?;
    if p.pos < p.toks.len() {
        return p.error("end of input");
    }
    Ok(f)
}
