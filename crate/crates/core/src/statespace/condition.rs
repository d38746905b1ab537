use std::fmt;

use thiserror::Error;

use crate::compiler::{CompileUnit, Literal, SymbolKind};
use crate::frontend::{parse_expression, tokenize, BinOp, ExprAst, ParseError, TokenKind};
use crate::machine::{read_variable, Configuration, Value};

/// `variable = literal`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conjunct {
    pub variable: String,
    pub value: Literal,
}

/// A nonempty conjunction of equalities between variables or constants and
/// literals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateCondition {
    pub conjuncts: Vec<Conjunct>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConditionError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("unsupported condition `{0}`: expected `name = literal` conjuncts")]
    Unsupported(String),
}

impl StateCondition {
    /// True when every conjunct's name is bound to the literal's value.
    pub fn holds(&self, c: &Configuration) -> bool {
        self.conjuncts.iter().all(|cj| {
            match (read_variable(c, &cj.variable), &cj.value) {
                (Ok(Value::Rat(a)), Literal::Rat(b)) => a == *b,
                (Ok(Value::Boo(a)), Literal::Bool(b)) => a == *b,
                _ => false,
            }
        })
    }
}

impl fmt::Display for StateCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, cj) in self.conjuncts.iter().enumerate() {
            if i > 0 {
                f.write_str(" /\\ ")?;
            }
            write!(f, "{} = {}", cj.variable, cj.value)?;
        }
        Ok(())
    }
}

fn conjuncts<'e>(e: &'e ExprAst, out: &mut Vec<&'e ExprAst>) {
    match e {
        ExprAst::BinOp(BinOp::And, a, b) => {
            conjuncts(a, out);
            conjuncts(b, out);
        }
        _ => out.push(e),
    }
}

fn literal(unit: &CompileUnit, e: &ExprAst) -> Result<Literal, ConditionError> {
    match e {
        ExprAst::RatLit(r) => Ok(Literal::Rat(r.clone())),
        ExprAst::BoolLit(b) => Ok(Literal::Bool(*b)),
        ExprAst::Ident(name) => unit
            .constant_value(name)
            .cloned()
            .ok_or_else(|| match unit.kind_of(name) {
                None => ConditionError::UnknownName(name.clone()),
                Some(_) => ConditionError::Unsupported(crate::frontend::pretty_expr(e)),
            }),
        _ => Err(ConditionError::Unsupported(crate::frontend::pretty_expr(e))),
    }
}

/// Parses `v1 = l1 /\ v2 = l2 ...`; constant names on the right stand for
/// their values.
pub fn parse_condition(unit: &CompileUnit, text: &str) -> Result<StateCondition, ConditionError> {
    let mut tokens = tokenize(text).map_err(ParseError::from)?;
    for t in &mut tokens {
        if t.kind == TokenKind::Eq {
            t.kind = TokenKind::EqEq;
        }
    }
    let expr = parse_expression(&tokens)?;
    let mut parts = Vec::new();
    conjuncts(&expr, &mut parts);
    let conjuncts = parts
        .into_iter()
        .map(|p| match p {
            ExprAst::BinOp(BinOp::Eq, lhs, rhs) => {
                let ExprAst::Ident(variable) = &**lhs else {
                    return Err(ConditionError::Unsupported(crate::frontend::pretty_expr(p)));
                };
                match unit.kind_of(variable) {
                    Some(SymbolKind::Variable | SymbolKind::Constant) => {}
                    Some(SymbolKind::Operation { .. }) => {
                        return Err(ConditionError::Unsupported(crate::frontend::pretty_expr(p)))
                    }
                    None => return Err(ConditionError::UnknownName(variable.clone())),
                }
                Ok(Conjunct {
                    variable: variable.clone(),
                    value: literal(unit, rhs)?,
                })
            }
            _ => Err(ConditionError::Unsupported(crate::frontend::pretty_expr(p))),
        })
        .collect::<Result<_, _>>()?;
    Ok(StateCondition { conjuncts })
}
