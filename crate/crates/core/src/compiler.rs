//! The pi denotation of AMN: expressions, substitutions and machines are
//! mapped compositionally onto pi Lib terms. [`compile_machine`] additionally
//! performs the static checks (scoping, arity, predicate shape).

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::Arc;

use num::Zero;
use thiserror::Error;

use crate::frontend::{BinOp, ExprAst, MachineAst, SubstAst};
use crate::pi::{PiActuals, PiBlk, PiCmd, PiDec, PiExp, PiFormals, PiOp};
use crate::{Ident, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("no VALUES entry for `{0}`")]
    MissingValue(String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("operation `{op}` expects {expected} argument(s), got {got}")]
    ArityMismatch {
        op: String,
        expected: usize,
        got: usize,
    },
    #[error("{context} condition `{cond}` is not a predicate")]
    TypeShapeError { context: &'static str, cond: String },
    #[error("`{0}` is declared more than once")]
    DuplicateName(String),
    #[error("`{0}` is not assignable")]
    NotAssignable(String),
    #[error("`{0}` is not an operation")]
    NotAnOperation(String),
    #[error("operation `{0}` used as a value")]
    NotAValue(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymbolKind {
    Variable,
    Constant,
    Operation { arity: usize },
}

impl fmt::Display for SymbolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolKind::Variable => f.write_str("variable"),
            SymbolKind::Constant => f.write_str("constant"),
            SymbolKind::Operation { arity } => write!(f, "operation/{arity}"),
        }
    }
}

/// A literal value: what a constant may statically evaluate to.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Literal {
    Rat(Rational),
    Bool(bool),
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Rat(r) => f.write_str(&crate::fmt_rational(r)),
            Literal::Bool(b) => write!(f, "{b}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompileUnit {
    pub machine: MachineAst,
    /// The machine's declaration chain; `None` for a machine declaring nothing.
    pub pi_decl: Option<PiDec>,
    pub symbol_table: BTreeMap<String, SymbolKind>,
    /// Constants whose VALUES expression evaluates statically.
    pub constant_values: BTreeMap<String, Literal>,
}

impl CompileUnit {
    pub fn kind_of(&self, name: &str) -> Option<SymbolKind> {
        self.symbol_table.get(name).copied()
    }

    pub fn is_variable(&self, name: &str) -> bool {
        self.kind_of(name) == Some(SymbolKind::Variable)
    }

    pub fn variables(&self) -> &[String] {
        &self.machine.variables
    }

    pub fn constant_value(&self, name: &str) -> Option<&Literal> {
        self.constant_values.get(name)
    }

    /// Checks and compiles an entry substitution (e.g. `mutex()`) against
    /// the machine's symbols.
    pub fn compile_entry(&self, s: &SubstAst) -> Result<PiCmd, CompileError> {
        let scope = Scope::from_table(&self.symbol_table);
        check_subst(&scope, s)?;
        Ok(compile_substitution(s))
    }
}

pub fn compile_expression(e: &ExprAst) -> PiExp {
    match e {
        ExprAst::Ident(x) => PiExp::idn(x),
        ExprAst::RatLit(r) => PiExp::Rat(r.clone()),
        ExprAst::BoolLit(b) => PiExp::Boo(*b),
        ExprAst::Not(a) => PiExp::not(compile_expression(a)),
        ExprAst::BinOp(op, a, b) => {
            let op = match op {
                BinOp::Add => PiOp::Add,
                BinOp::Sub => PiOp::Sub,
                BinOp::Mul => PiOp::Mul,
                BinOp::Div => PiOp::Div,
                BinOp::Eq => PiOp::Eq,
                BinOp::And => PiOp::And,
                BinOp::Or => PiOp::Or,
                BinOp::Lt => PiOp::Lt,
                BinOp::Leq => PiOp::Leq,
            };
            PiExp::bin(op, compile_expression(a), compile_expression(b))
        }
    }
}

pub fn compile_actuals(actuals: &[ExprAst]) -> PiActuals {
    PiActuals::from_exps(actuals.iter().map(compile_expression))
}

pub fn compile_substitution(s: &SubstAst) -> PiCmd {
    match s {
        SubstAst::Assign(x, e) => PiCmd::assign(x, compile_expression(e)),
        SubstAst::Choice(a, b) => PiCmd::choice(compile_substitution(a), compile_substitution(b)),
        SubstAst::While(c, body) => {
            PiCmd::looping(compile_expression(c), compile_substitution(body))
        }
        SubstAst::IfThenElse(c, t, e) => PiCmd::cond(
            compile_expression(c),
            compile_substitution(t),
            compile_substitution(e),
        ),
        SubstAst::IfThen(c, t) => {
            PiCmd::cond(compile_expression(c), compile_substitution(t), PiCmd::Nop)
        }
        SubstAst::Block(body) => PiCmd::block(compile_substitution(body)),
        SubstAst::Call(f, actuals) => PiCmd::Cal(Ident::new(f), compile_actuals(actuals)),
    }
}

/// Names visible at some program point.
struct Scope {
    names: BTreeMap<String, SymbolKind>,
}

impl Scope {
    fn from_table(table: &BTreeMap<String, SymbolKind>) -> Self {
        Scope {
            names: table.clone(),
        }
    }
}

fn check_expr(scope: &Scope, e: &ExprAst) -> Result<(), CompileError> {
    match e {
        ExprAst::Ident(x) => match scope.names.get(x) {
            None => Err(CompileError::UnknownName(x.clone())),
            Some(SymbolKind::Operation { .. }) => Err(CompileError::NotAValue(x.clone())),
            Some(_) => Ok(()),
        },
        ExprAst::RatLit(_) | ExprAst::BoolLit(_) => Ok(()),
        ExprAst::Not(a) => check_expr(scope, a),
        ExprAst::BinOp(_, a, b) => {
            check_expr(scope, a)?;
            check_expr(scope, b)
        }
    }
}

fn check_predicate(scope: &Scope, context: &'static str, c: &ExprAst) -> Result<(), CompileError> {
    check_expr(scope, c)?;
    if compile_expression(c).is_predicate_shaped() {
        Ok(())
    } else {
        Err(CompileError::TypeShapeError {
            context,
            cond: crate::frontend::pretty_expr(c),
        })
    }
}

fn check_subst(scope: &Scope, s: &SubstAst) -> Result<(), CompileError> {
    match s {
        SubstAst::Assign(x, e) => {
            match scope.names.get(x) {
                None => return Err(CompileError::UnknownName(x.clone())),
                Some(SymbolKind::Variable) => {}
                Some(_) => return Err(CompileError::NotAssignable(x.clone())),
            }
            check_expr(scope, e)
        }
        SubstAst::IfThenElse(c, t, e) => {
            check_predicate(scope, "IF", c)?;
            check_subst(scope, t)?;
            check_subst(scope, e)
        }
        SubstAst::IfThen(c, t) => {
            check_predicate(scope, "IF", c)?;
            check_subst(scope, t)
        }
        SubstAst::While(c, body) => {
            check_predicate(scope, "WHILE", c)?;
            check_subst(scope, body)
        }
        SubstAst::Choice(a, b) => {
            check_subst(scope, a)?;
            check_subst(scope, b)
        }
        SubstAst::Block(body) => check_subst(scope, body),
        SubstAst::Call(f, actuals) => {
            match scope.names.get(f) {
                None => return Err(CompileError::UnknownName(f.clone())),
                Some(SymbolKind::Operation { arity }) if *arity != actuals.len() => {
                    return Err(CompileError::ArityMismatch {
                        op: f.clone(),
                        expected: *arity,
                        got: actuals.len(),
                    })
                }
                Some(SymbolKind::Operation { .. }) => {}
                Some(_) => return Err(CompileError::NotAnOperation(f.clone())),
            }
            actuals.iter().try_for_each(|a| check_expr(scope, a))
        }
    }
}

/// Pairs each declared identifier with its VALUES entry by name.
fn paired_values<'m>(
    ids: &[String],
    values: &'m [(String, ExprAst)],
) -> Result<Vec<(&'m str, &'m ExprAst)>, CompileError> {
    ids.iter()
        .map(|id| {
            values
                .iter()
                .find(|(name, _)| name == id)
                .map(|(name, e)| (name.as_str(), e))
                .ok_or_else(|| CompileError::MissingValue(id.clone()))
        })
        .collect()
}

/// Statically evaluates a constant's defining expression.
fn eval_const(e: &ExprAst, env: &BTreeMap<String, Literal>) -> Option<Literal> {
    use Literal::*;
    Some(match e {
        ExprAst::Ident(x) => env.get(x)?.clone(),
        ExprAst::RatLit(r) => Rat(r.clone()),
        ExprAst::BoolLit(b) => Bool(*b),
        ExprAst::Not(a) => match eval_const(a, env)? {
            Bool(b) => Bool(!b),
            Rat(_) => return None,
        },
        ExprAst::BinOp(op, a, b) => match (op, eval_const(a, env)?, eval_const(b, env)?) {
            (BinOp::Add, Rat(x), Rat(y)) => Rat(x + y),
            (BinOp::Sub, Rat(x), Rat(y)) => Rat(x - y),
            (BinOp::Mul, Rat(x), Rat(y)) => Rat(x * y),
            (BinOp::Div, Rat(x), Rat(y)) if !y.is_zero() => Rat(x / y),
            (BinOp::Lt, Rat(x), Rat(y)) => Bool(x < y),
            (BinOp::Leq, Rat(x), Rat(y)) => Bool(x <= y),
            (BinOp::And, Bool(x), Bool(y)) => Bool(x && y),
            (BinOp::Or, Bool(x), Bool(y)) => Bool(x || y),
            (BinOp::Eq, x, y) if std::mem::discriminant(&x) == std::mem::discriminant(&y) => {
                Bool(x == y)
            }
            _ => return None,
        },
    })
}

/// Compiles a machine to its declaration chain
/// `dec(variable refs, dec(constant cnss, operation prcs))`, omitting absent
/// groups.
pub fn compile_machine(m: &MachineAst) -> Result<CompileUnit, CompileError> {
    let mut seen = HashSet::new();
    let declared = m
        .variables
        .iter()
        .chain(&m.constants)
        .chain(m.operations.iter().map(|o| &o.name));
    for name in declared {
        if !seen.insert(name.as_str()) {
            return Err(CompileError::DuplicateName(name.clone()));
        }
    }
    let mut valued = HashSet::new();
    for (name, _) in &m.values {
        if !valued.insert(name.as_str()) {
            return Err(CompileError::DuplicateName(name.clone()));
        }
        if !m.variables.contains(name) && !m.constants.contains(name) {
            return Err(CompileError::UnknownName(name.clone()));
        }
    }

    let var_values = paired_values(&m.variables, &m.values)?;
    let const_values = paired_values(&m.constants, &m.values)?;

    // Declarations are elaborated in order, so each initialiser sees only
    // what precedes it: variables, then constants, then operations.
    let mut scope = Scope {
        names: BTreeMap::new(),
    };
    let mut refs = Vec::new();
    for (id, e) in &var_values {
        check_expr(&scope, e)?;
        refs.push(PiDec::Ref(Ident::new(id), Arc::new(compile_expression(e))));
        scope.names.insert(id.to_string(), SymbolKind::Variable);
    }
    let mut cnss = Vec::new();
    let mut constant_values = BTreeMap::new();
    for (id, e) in &const_values {
        check_expr(&scope, e)?;
        cnss.push(PiDec::Cns(Ident::new(id), Arc::new(compile_expression(e))));
        if let Some(v) = eval_const(e, &constant_values) {
            constant_values.insert(id.to_string(), v);
        }
        scope.names.insert(id.to_string(), SymbolKind::Constant);
    }
    let mut prcs = Vec::new();
    for op in &m.operations {
        let mut body_scope = Scope {
            names: scope.names.clone(),
        };
        let mut formal_seen = HashSet::new();
        for f in &op.formals {
            if !formal_seen.insert(f.as_str()) {
                return Err(CompileError::DuplicateName(f.clone()));
            }
            body_scope.names.insert(f.clone(), SymbolKind::Variable);
        }
        check_subst(&body_scope, &op.body)?;
        let formals = PiFormals::from_idents(op.formals.iter().map(|f| Ident::new(f)));
        let body = Arc::new(PiBlk::new(compile_substitution(&op.body)));
        prcs.push(PiDec::Prc(Ident::new(&op.name), formals, body));
        scope.names.insert(
            op.name.clone(),
            SymbolKind::Operation {
                arity: op.formals.len(),
            },
        );
    }

    let groups: Vec<PiDec> = [refs, cnss, prcs]
        .into_iter()
        .filter_map(PiDec::chain)
        .collect();

    Ok(CompileUnit {
        machine: m.clone(),
        pi_decl: PiDec::chain(groups),
        symbol_table: scope.names,
        constant_values,
    })
}
