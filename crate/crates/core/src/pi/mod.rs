//! pi Lib: the core language of expressions, commands and declarations that
//! AMN compiles into and the interpreting automaton executes.
//!
//! Terms are immutable and share subtrees through [`Arc`], so pushing a
//! subterm onto a control stack never copies it.

mod render;

use std::sync::Arc;

pub use render::Render;

use crate::{Ident, Rational};

/// Binary expression operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PiOp {
    Add,
    Sub,
    Mul,
    Div,
    Eq,
    Lt,
    Leq,
    And,
    Or,
}

impl PiOp {
    pub fn name(self) -> &'static str {
        match self {
            PiOp::Add => "add",
            PiOp::Sub => "sub",
            PiOp::Mul => "mul",
            PiOp::Div => "div",
            PiOp::Eq => "eq",
            PiOp::Lt => "lt",
            PiOp::Leq => "leq",
            PiOp::And => "and",
            PiOp::Or => "or",
        }
    }

    /// True for operators whose result is boolean.
    pub fn is_predicate(self) -> bool {
        matches!(self, PiOp::Eq | PiOp::Lt | PiOp::Leq | PiOp::And | PiOp::Or)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PiExp {
    Idn(Ident),
    Rat(Rational),
    Boo(bool),
    Bin(PiOp, Arc<PiExp>, Arc<PiExp>),
    Not(Arc<PiExp>),
}

impl PiExp {
    pub fn idn(name: &str) -> Self {
        PiExp::Idn(Ident::new(name))
    }

    pub fn int(n: i64) -> Self {
        PiExp::Rat(crate::rat(n))
    }

    pub fn bin(op: PiOp, lhs: PiExp, rhs: PiExp) -> Self {
        PiExp::Bin(op, Arc::new(lhs), Arc::new(rhs))
    }

    pub fn not(arg: PiExp) -> Self {
        PiExp::Not(Arc::new(arg))
    }

    /// Whether the root of this expression is a predicate former.
    pub fn is_predicate_shaped(&self) -> bool {
        match self {
            PiExp::Boo(_) | PiExp::Not(_) => true,
            PiExp::Bin(op, _, _) => op.is_predicate(),
            PiExp::Idn(_) | PiExp::Rat(_) => false,
        }
    }
}

/// Actual parameters of a call: nothing, a single expression, or a right
/// nested `act` chain.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PiActuals {
    Empty,
    Exp(Arc<PiExp>),
    Act(Arc<PiExp>, Box<PiActuals>),
}

impl PiActuals {
    pub fn from_exps(exps: impl IntoIterator<Item = PiExp>) -> Self {
        let exps: Vec<_> = exps.into_iter().collect();
        let mut iter = exps.into_iter().rev();
        let Some(last) = iter.next() else {
            return PiActuals::Empty;
        };
        iter.fold(PiActuals::Exp(Arc::new(last)), |acc, e| {
            PiActuals::Act(Arc::new(e), Box::new(acc))
        })
    }

    /// The actual expressions in left-to-right order.
    pub fn exps(&self) -> Vec<&Arc<PiExp>> {
        let mut out = Vec::new();
        let mut cur = self;
        loop {
            match cur {
                PiActuals::Empty => return out,
                PiActuals::Exp(e) => {
                    out.push(e);
                    return out;
                }
                PiActuals::Act(e, rest) => {
                    out.push(e);
                    cur = rest;
                }
            }
        }
    }

    pub fn len(&self) -> usize {
        self.exps().len()
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, PiActuals::Empty)
    }
}

/// Formal parameters: `par(x)` or a right nested `for` chain.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PiFormals {
    Par(Ident),
    For(Box<PiFormals>, Box<PiFormals>),
}

impl PiFormals {
    /// `None` for an empty list.
    pub fn from_idents(ids: impl IntoIterator<Item = Ident>) -> Option<Self> {
        let ids: Vec<_> = ids.into_iter().collect();
        let mut iter = ids.into_iter().rev();
        let last = PiFormals::Par(iter.next()?);
        Some(iter.fold(last, |acc, id| {
            PiFormals::For(Box::new(PiFormals::Par(id)), Box::new(acc))
        }))
    }

    pub fn idents(&self) -> Vec<Ident> {
        match self {
            PiFormals::Par(id) => vec![id.clone()],
            PiFormals::For(a, b) => {
                let mut v = a.idents();
                v.extend(b.idents());
                v
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PiCmd {
    Nop,
    Assign(Ident, Arc<PiExp>),
    Choice(Arc<PiCmd>, Arc<PiCmd>),
    Loop(Arc<PiExp>, Arc<PiCmd>),
    If(Arc<PiExp>, Arc<PiCmd>, Arc<PiCmd>),
    /// Sequential composition. Never emitted by the AMN compiler.
    Seq(Arc<PiCmd>, Arc<PiCmd>),
    Cal(Ident, PiActuals),
    /// A command executed in its own scope.
    Blk(Arc<PiBlk>),
    Prn(Arc<PiExp>),
    Exit,
}

impl PiCmd {
    pub fn assign(target: &str, value: PiExp) -> Self {
        PiCmd::Assign(Ident::new(target), Arc::new(value))
    }

    pub fn choice(left: PiCmd, right: PiCmd) -> Self {
        PiCmd::Choice(Arc::new(left), Arc::new(right))
    }

    pub fn looping(cond: PiExp, body: PiCmd) -> Self {
        PiCmd::Loop(Arc::new(cond), Arc::new(body))
    }

    pub fn cond(cond: PiExp, then: PiCmd, els: PiCmd) -> Self {
        PiCmd::If(Arc::new(cond), Arc::new(then), Arc::new(els))
    }

    pub fn seq(first: PiCmd, second: PiCmd) -> Self {
        PiCmd::Seq(Arc::new(first), Arc::new(second))
    }

    pub fn block(body: PiCmd) -> Self {
        PiCmd::Blk(Arc::new(PiBlk::new(body)))
    }
}

/// `blk(C)` or `blk(D, C)`: optional local declarations followed by a body.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PiBlk {
    pub decls: Option<Arc<PiDec>>,
    pub body: Arc<PiCmd>,
}

impl PiBlk {
    pub fn new(body: PiCmd) -> Self {
        PiBlk {
            decls: None,
            body: Arc::new(body),
        }
    }

    pub fn with_decls(decls: PiDec, body: PiCmd) -> Self {
        PiBlk {
            decls: Some(Arc::new(decls)),
            body: Arc::new(body),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum DecScope {
    Dec(Arc<PiDec>),
    Blk(Arc<PiBlk>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PiDec {
    /// A fresh store location initialised with the expression's value.
    Ref(Ident, Arc<PiExp>),
    /// A constant binding.
    Cns(Ident, Arc<PiExp>),
    /// A procedure abstraction.
    Prc(Ident, Option<PiFormals>, Arc<PiBlk>),
    /// The first declaration is visible in the scope.
    Dec(Arc<PiDec>, DecScope),
}

impl PiDec {
    pub fn dec(first: PiDec, scope: PiDec) -> Self {
        PiDec::Dec(Arc::new(first), DecScope::Dec(Arc::new(scope)))
    }

    /// Right-nests a nonempty list of declarations with `dec`.
    pub fn chain(decs: Vec<PiDec>) -> Option<Self> {
        let mut iter = decs.into_iter().rev();
        let last = iter.next()?;
        Some(iter.fold(last, |acc, d| PiDec::dec(d, acc)))
    }
}

/// Control-stack keywords. Each one applies an operator to values left on
/// the value stack by an earlier unfolding step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Keyword {
    Op(PiOp),
    Not,
    Assign,
    If,
    Loop,
    Dec,
    Ref,
    Cns,
    BlkCmd,
    Cal,
    Print,
}

impl Keyword {
    pub fn name(self) -> &'static str {
        match self {
            Keyword::Op(PiOp::Add) => "ADD",
            Keyword::Op(PiOp::Sub) => "SUB",
            Keyword::Op(PiOp::Mul) => "MUL",
            Keyword::Op(PiOp::Div) => "DIV",
            Keyword::Op(PiOp::Eq) => "EQ",
            Keyword::Op(PiOp::Lt) => "LT",
            Keyword::Op(PiOp::Leq) => "LEQ",
            Keyword::Op(PiOp::And) => "AND",
            Keyword::Op(PiOp::Or) => "OR",
            Keyword::Not => "NOT",
            Keyword::Assign => "ASSIGN",
            Keyword::If => "IF",
            Keyword::Loop => "LOOP",
            Keyword::Dec => "DEC",
            Keyword::Ref => "REF",
            Keyword::Cns => "CNS",
            Keyword::BlkCmd => "BLKCMD",
            Keyword::Cal => "CAL",
            Keyword::Print => "PRINT",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ControlEntry {
    Exp(Arc<PiExp>),
    Cmd(Arc<PiCmd>),
    Dec(Arc<PiDec>),
    Blk(Arc<PiBlk>),
    Keyword(Keyword),
}

/// Node count of a pi term.
pub trait TermSize {
    fn term_size(&self) -> usize;
}

impl TermSize for PiExp {
    fn term_size(&self) -> usize {
        match self {
            PiExp::Idn(_) | PiExp::Rat(_) | PiExp::Boo(_) => 1,
            PiExp::Bin(_, a, b) => 1 + a.term_size() + b.term_size(),
            PiExp::Not(a) => 1 + a.term_size(),
        }
    }
}

impl TermSize for PiActuals {
    fn term_size(&self) -> usize {
        match self {
            PiActuals::Empty => 0,
            PiActuals::Exp(e) => e.term_size(),
            PiActuals::Act(e, rest) => 1 + e.term_size() + rest.term_size(),
        }
    }
}

impl TermSize for PiFormals {
    fn term_size(&self) -> usize {
        match self {
            PiFormals::Par(_) => 2,
            PiFormals::For(a, b) => 1 + a.term_size() + b.term_size(),
        }
    }
}

impl TermSize for PiCmd {
    fn term_size(&self) -> usize {
        match self {
            PiCmd::Nop | PiCmd::Exit => 1,
            PiCmd::Assign(_, e) => 2 + e.term_size(),
            PiCmd::Choice(a, b) | PiCmd::Seq(a, b) => 1 + a.term_size() + b.term_size(),
            PiCmd::Loop(c, k) => 1 + c.term_size() + k.term_size(),
            PiCmd::If(c, a, b) => 1 + c.term_size() + a.term_size() + b.term_size(),
            PiCmd::Cal(_, acts) => 2 + acts.term_size(),
            PiCmd::Blk(b) => b.term_size(),
            PiCmd::Prn(e) => 1 + e.term_size(),
        }
    }
}

impl TermSize for PiBlk {
    fn term_size(&self) -> usize {
        1 + self.decls.as_ref().map_or(0, |d| d.term_size()) + self.body.term_size()
    }
}

impl TermSize for PiDec {
    fn term_size(&self) -> usize {
        match self {
            PiDec::Ref(_, e) | PiDec::Cns(_, e) => 2 + e.term_size(),
            PiDec::Prc(_, fs, b) => {
                2 + fs.as_ref().map_or(0, |f| f.term_size()) + b.term_size()
            }
            PiDec::Dec(d, scope) => {
                1 + d.term_size()
                    + match scope {
                        DecScope::Dec(s) => s.term_size(),
                        DecScope::Blk(b) => b.term_size(),
                    }
            }
        }
    }
}

/// Convenience free function over anything with a [`TermSize`].
pub fn term_size<T: TermSize + ?Sized>(t: &T) -> usize {
    t.term_size()
}
