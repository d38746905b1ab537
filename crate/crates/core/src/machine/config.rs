use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use super::step::RuntimeFault;
use crate::fmt_rational;
use crate::pi::{ControlEntry, PiBlk, PiCmd, Render};
use crate::{Ident, Rational};

/// Value-stack contents. Only `Rat` and `Boo` are storable; the rest is
/// interpreter bookkeeping.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Value {
    Rat(Rational),
    Boo(bool),
    /// A saved `loop` command awaiting its condition.
    Loop(Arc<PiCmd>),
    Idn(Ident),
    /// A saved branch of an `if`.
    Cmd(Arc<PiCmd>),
    /// A binding produced by a declaration.
    Bind(Ident, Box<Denotable>),
}

impl Value {
    pub fn is_storable(&self) -> bool {
        matches!(self, Value::Rat(_) | Value::Boo(_))
    }

    pub fn as_rat(&self) -> Option<&Rational> {
        match self {
            Value::Rat(r) => Some(r),
            _ => None,
        }
    }
}

impl From<crate::compiler::Literal> for Value {
    fn from(l: crate::compiler::Literal) -> Self {
        match l {
            crate::compiler::Literal::Rat(r) => Value::Rat(r),
            crate::compiler::Literal::Bool(b) => Value::Boo(b),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Rat(r) => f.write_str(&fmt_rational(r)),
            Value::Boo(b) => write!(f, "{b}"),
            Value::Loop(c) | Value::Cmd(c) => f.write_str(&c.render()),
            Value::Idn(x) => write!(f, "idn({:?})", x.as_str()),
            Value::Bind(x, d) => write!(f, "{x} ↦ {d}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Closure {
    pub name: Ident,
    pub formals: Vec<Ident>,
    pub body: Arc<PiBlk>,
    /// Declaration-time environment.
    pub env: Arc<Env>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Denotable {
    Loc(usize),
    Const(Value),
    Closure(Arc<Closure>),
}

impl fmt::Display for Denotable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Denotable::Loc(l) => write!(f, "loc({l})"),
            Denotable::Const(v) => write!(f, "cns({v})"),
            Denotable::Closure(c) => {
                let fs: Vec<_> = c.formals.iter().map(Ident::as_str).collect();
                write!(f, "abs({})({})", c.name, fs.join(", "))
            }
        }
    }
}

pub type Env = BTreeMap<Ident, Denotable>;
pub type Store = BTreeMap<usize, Value>;

/// Saved environment and allocated locations of an enclosing block or call.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Frame {
    pub env: Arc<Env>,
    pub locs: BTreeSet<usize>,
}

/// `CNT` is normal execution, `EXT` abnormal termination.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Exc {
    Cnt,
    Ext,
}

/// A pi automaton state. Value semantics: equal configurations are the same
/// state for search and model checking.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    /// Value stack, top at the end.
    pub val: Vec<Value>,
    pub env: Arc<Env>,
    pub sto: Arc<Store>,
    /// Locations allocated by the current block frame.
    pub locs: BTreeSet<usize>,
    pub out: Vec<Value>,
    /// Control stack, top at the end.
    pub cnt: Vec<ControlEntry>,
    pub exc: Exc,
    pub frames: Vec<Frame>,
    /// Set on the terminal configuration produced by a runtime fault.
    pub fault: Option<RuntimeFault>,
}

impl Configuration {
    /// A configuration with the given control stack (top last) and every
    /// other component empty.
    pub fn with_control(cnt: Vec<ControlEntry>) -> Self {
        Configuration {
            val: Vec::new(),
            env: Arc::default(),
            sto: Arc::default(),
            locs: BTreeSet::new(),
            out: Vec::new(),
            cnt,
            exc: Exc::Cnt,
            frames: Vec::new(),
            fault: None,
        }
    }

    pub fn is_terminal(&self) -> bool {
        self.exc == Exc::Ext || self.cnt.is_empty()
    }
}

fn join<T: fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items
        .into_iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

impl fmt::Display for Configuration {
    /// One component per line; stacks are listed top first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "val: [{}]", join(self.val.iter().rev()))?;
        writeln!(
            f,
            "env: {{{}}}",
            join(self.env.iter().map(|(k, v)| format!("{k} ↦ {v}")))
        )?;
        writeln!(
            f,
            "sto: {{{}}}",
            join(self.sto.iter().map(|(k, v)| format!("{k} ↦ {v}")))
        )?;
        writeln!(f, "locs: {{{}}}", join(&self.locs))?;
        writeln!(f, "out: [{}]", join(&self.out))?;
        writeln!(f, "cnt: [{}]", join(self.cnt.iter().rev()))?;
        writeln!(f, "frames: {}", self.frames.len())?;
        match &self.fault {
            Some(fault) => write!(f, "exc: EXT ({fault})"),
            None => write!(f, "exc: {}", if self.exc == Exc::Cnt { "CNT" } else { "EXT" }),
        }
    }
}
