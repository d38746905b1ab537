//! Recursive descent parser for machines, substitutions and expressions.

use thiserror::Error;

use super::ast::{BinOp, ExprAst, MachineAst, Operation, SubstAst};
use super::lexer::{tokenize, LexError, Pos, Token, TokenKind};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error(transparent)]
    Lex(#[from] LexError),
    #[error("parse error at {pos}: expected {expected}, found {found}")]
    Unexpected {
        pos: Pos,
        expected: String,
        found: String,
    },
    #[error("parse error: expected {expected}, found end of input")]
    UnexpectedEof { expected: String },
    #[error("parse error at {pos}: duplicate {clause} clause")]
    DuplicateClause { pos: Pos, clause: &'static str },
    #[error("parse error at {pos}: unsupported clause {clause}")]
    UnsupportedClause { pos: Pos, clause: String },
}

/// B machine clauses outside the supported subset. They are reported by name
/// instead of as a generic syntax error.
const UNSUPPORTED_CLAUSES: &[&str] = &[
    "INVARIANT",
    "INITIALISATION",
    "INITIALIZATION",
    "SEES",
    "INCLUDES",
    "IMPORTS",
    "EXTENDS",
    "PROMOTES",
    "USES",
    "SETS",
    "PROPERTIES",
    "ASSERTIONS",
    "DEFINITIONS",
    "REFINES",
    "CONCRETE_VARIABLES",
    "ABSTRACT_VARIABLES",
    "CONCRETE_CONSTANTS",
    "ABSTRACT_CONSTANTS",
    "CONSTRAINTS",
    "LOCAL_OPERATIONS",
];

pub fn parse_machine_source(source: &str) -> Result<MachineAst, ParseError> {
    parse_machine(&tokenize(source)?)
}

pub fn parse_substitution_source(source: &str) -> Result<SubstAst, ParseError> {
    parse_substitution(&tokenize(source)?)
}

/// Parses a complete `MACHINE ... END` declaration.
pub fn parse_machine(tokens: &[Token]) -> Result<MachineAst, ParseError> {
    let mut p = Parser::new(tokens);
    let m = p.parse_machine()?;
    p.finish()?;
    Ok(m)
}

/// Parses a token stream consisting of exactly one substitution.
pub fn parse_substitution(tokens: &[Token]) -> Result<SubstAst, ParseError> {
    let mut p = Parser::new(tokens);
    let s = p.parse_subst()?;
    p.finish()?;
    Ok(s)
}

/// Parses a token stream consisting of exactly one expression.
pub fn parse_expression(tokens: &[Token]) -> Result<ExprAst, ParseError> {
    let mut p = Parser::new(tokens);
    let e = p.parse_expr()?;
    p.finish()?;
    Ok(e)
}

pub struct Parser<'t> {
    tokens: &'t [Token],
    pos: usize,
}

impl<'t> Parser<'t> {
    pub fn new(tokens: &'t [Token]) -> Self {
        Parser { tokens, pos: 0 }
    }

    pub fn peek(&self) -> Option<&'t Token> {
        self.tokens.get(self.pos)
    }

    fn peek_kind(&self) -> Option<&'t TokenKind> {
        self.peek().map(|t| &t.kind)
    }

    fn peek_kind_at(&self, offset: usize) -> Option<&'t TokenKind> {
        self.tokens.get(self.pos + offset).map(|t| &t.kind)
    }

    fn bump(&mut self) -> Option<&'t Token> {
        let t = self.tokens.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek_kind() == Some(kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn error(&self, expected: impl Into<String>) -> ParseError {
        match self.peek() {
            Some(t) => ParseError::Unexpected {
                pos: t.pos,
                expected: expected.into(),
                found: t.kind.to_string(),
            },
            None => ParseError::UnexpectedEof {
                expected: expected.into(),
            },
        }
    }

    fn expect(&mut self, kind: TokenKind) -> Result<&'t Token, ParseError> {
        if self.peek_kind() == Some(&kind) {
            Ok(self.bump().expect("peeked"))
        } else {
            Err(self.error(kind.to_string()))
        }
    }

    fn expect_ident(&mut self) -> Result<String, ParseError> {
        match self.peek_kind() {
            Some(TokenKind::Ident(name)) => {
                self.pos += 1;
                Ok(name.clone())
            }
            _ => Err(self.error("identifier")),
        }
    }

    /// Fails unless every token has been consumed.
    pub fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.error("end of input")),
        }
    }

    pub fn parse_machine(&mut self) -> Result<MachineAst, ParseError> {
        self.expect(TokenKind::Machine)?;
        let name = self.expect_ident()?;
        let mut machine = MachineAst {
            name,
            ..MachineAst::default()
        };
        let mut seen = [false; 4];

        loop {
            let Some(tok) = self.peek() else {
                return Err(self.error("END"));
            };
            let (slot, clause) = match &tok.kind {
                TokenKind::End => {
                    self.pos += 1;
                    return Ok(machine);
                }
                TokenKind::Variables => (0, "VARIABLES"),
                TokenKind::Constants => (1, "CONSTANTS"),
                TokenKind::Values => (2, "VALUES"),
                TokenKind::Operations => (3, "OPERATIONS"),
                TokenKind::Ident(word) if UNSUPPORTED_CLAUSES.contains(&word.as_str()) => {
                    return Err(ParseError::UnsupportedClause {
                        pos: tok.pos,
                        clause: word.clone(),
                    });
                }
                _ => return Err(self.error("clause or END")),
            };
            if std::mem::replace(&mut seen[slot], true) {
                return Err(ParseError::DuplicateClause {
                    pos: tok.pos,
                    clause,
                });
            }
            self.pos += 1;
            match slot {
                0 => machine.variables = self.parse_id_list()?,
                1 => machine.constants = self.parse_id_list()?,
                2 => machine.values = self.parse_values()?,
                _ => machine.operations = self.parse_operations()?,
            }
        }
    }

    fn parse_id_list(&mut self) -> Result<Vec<String>, ParseError> {
        let mut ids = vec![self.expect_ident()?];
        while self.eat(&TokenKind::Comma) {
            ids.push(self.expect_ident()?);
        }
        Ok(ids)
    }

    fn parse_values(&mut self) -> Result<Vec<(String, ExprAst)>, ParseError> {
        let mut values = Vec::new();
        loop {
            let id = self.expect_ident()?;
            self.expect(TokenKind::Eq)?;
            values.push((id, self.parse_expr()?));
            if !self.eat(&TokenKind::Semi) {
                return Ok(values);
            }
        }
    }

    fn parse_operations(&mut self) -> Result<Vec<Operation>, ParseError> {
        let mut ops = Vec::new();
        loop {
            let name = self.expect_ident()?;
            let formals = if self.eat(&TokenKind::LParen) {
                let ids = self.parse_id_list()?;
                self.expect(TokenKind::RParen)?;
                ids
            } else {
                Vec::new()
            };
            self.expect(TokenKind::Eq)?;
            let body = self.parse_subst()?;
            ops.push(Operation {
                name,
                formals,
                body,
            });
            if !self.eat(&TokenKind::Semi) {
                return Ok(ops);
            }
        }
    }

    /// `subst := primary ('OR' primary)*`, left associative.
    pub fn parse_subst(&mut self) -> Result<SubstAst, ParseError> {
        let mut lhs = self.parse_subst_primary()?;
        while self.eat(&TokenKind::Or) {
            let rhs = self.parse_subst_primary()?;
            lhs = SubstAst::choice(lhs, rhs);
        }
        Ok(lhs)
    }

    fn parse_subst_primary(&mut self) -> Result<SubstAst, ParseError> {
        match self.peek_kind() {
            Some(TokenKind::Ident(name)) => {
                let name = name.clone();
                match self.peek_kind_at(1) {
                    Some(TokenKind::Assign) => {
                        self.pos += 2;
                        Ok(SubstAst::Assign(name, self.parse_expr()?))
                    }
                    Some(TokenKind::LParen) => {
                        self.pos += 2;
                        let mut actuals = Vec::new();
                        if !self.eat(&TokenKind::RParen) {
                            actuals.push(self.parse_expr()?);
                            while self.eat(&TokenKind::Comma) {
                                actuals.push(self.parse_expr()?);
                            }
                            self.expect(TokenKind::RParen)?;
                        }
                        Ok(SubstAst::Call(name, actuals))
                    }
                    _ => {
                        // bare operation name: call without arguments
                        self.pos += 1;
                        Ok(SubstAst::Call(name, Vec::new()))
                    }
                }
            }
            Some(TokenKind::If) => {
                self.pos += 1;
                let cond = self.parse_expr()?;
                self.expect(TokenKind::Then)?;
                let then = self.parse_subst()?;
                let s = if self.eat(&TokenKind::Else) {
                    let els = self.parse_subst()?;
                    SubstAst::IfThenElse(cond, Box::new(then), Box::new(els))
                } else {
                    SubstAst::IfThen(cond, Box::new(then))
                };
                self.expect(TokenKind::End)?;
                Ok(s)
            }
            Some(TokenKind::While) => {
                self.pos += 1;
                let cond = self.parse_expr()?;
                self.expect(TokenKind::Do)?;
                let body = self.parse_subst_primary()?;
                Ok(SubstAst::While(cond, Box::new(body)))
            }
            Some(TokenKind::Begin) => {
                self.pos += 1;
                let body = self.parse_subst()?;
                self.expect(TokenKind::End)?;
                Ok(SubstAst::Block(Box::new(body)))
            }
            Some(TokenKind::LParen) => {
                self.pos += 1;
                let s = self.parse_subst()?;
                self.expect(TokenKind::RParen)?;
                Ok(s)
            }
            _ => Err(self.error("substitution")),
        }
    }

    pub fn parse_expr(&mut self) -> Result<ExprAst, ParseError> {
        self.parse_binary(1)
    }

    fn peek_binop(&self) -> Option<BinOp> {
        Some(match self.peek_kind()? {
            TokenKind::Vee => BinOp::Or,
            TokenKind::Wedge => BinOp::And,
            TokenKind::EqEq => BinOp::Eq,
            TokenKind::Lt => BinOp::Lt,
            TokenKind::Leq => BinOp::Leq,
            TokenKind::Plus => BinOp::Add,
            TokenKind::Minus => BinOp::Sub,
            TokenKind::Star => BinOp::Mul,
            TokenKind::Slash => BinOp::Div,
            _ => return None,
        })
    }

    /// Precedence climbing; every binary level is left associative.
    fn parse_binary(&mut self, min_prec: u8) -> Result<ExprAst, ParseError> {
        let mut lhs = self.parse_unary()?;
        while let Some(op) = self.peek_binop() {
            let prec = op.precedence();
            if prec < min_prec {
                break;
            }
            self.pos += 1;
            let rhs = self.parse_binary(prec + 1)?;
            lhs = ExprAst::bin(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn parse_unary(&mut self) -> Result<ExprAst, ParseError> {
        if self.eat(&TokenKind::Tilde) {
            return Ok(ExprAst::Not(Box::new(self.parse_unary()?)));
        }
        if self.eat(&TokenKind::Minus) {
            let arg = self.parse_unary()?;
            return Ok(match arg {
                ExprAst::RatLit(r) => ExprAst::RatLit(-r),
                other => ExprAst::bin(BinOp::Sub, ExprAst::int(0), other),
            });
        }
        self.parse_atom()
    }

    fn parse_atom(&mut self) -> Result<ExprAst, ParseError> {
        let Some(tok) = self.peek() else {
            return Err(self.error("expression"));
        };
        let e = match &tok.kind {
            TokenKind::Ident(name) => ExprAst::Ident(name.clone()),
            TokenKind::Int(n) => ExprAst::RatLit(Rational::from_integer(n.clone())),
            TokenKind::True => ExprAst::BoolLit(true),
            TokenKind::False => ExprAst::BoolLit(false),
            TokenKind::LParen => {
                self.pos += 1;
                let e = self.parse_expr()?;
                self.expect(TokenKind::RParen)?;
                return Ok(e);
            }
            _ => return Err(self.error("expression")),
        };
        self.pos += 1;
        Ok(e)
    }
}
