use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Eq,
    And,
    Or,
    Lt,
    Leq,
}

impl BinOp {
    /// Binding strength; higher binds tighter.
    pub(crate) fn precedence(self) -> u8 {
        match self {
            BinOp::Or => 1,
            BinOp::And => 2,
            BinOp::Eq | BinOp::Lt | BinOp::Leq => 3,
            BinOp::Add | BinOp::Sub => 4,
            BinOp::Mul | BinOp::Div => 5,
        }
    }

    pub(crate) fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Eq => "==",
            BinOp::And => "/\\",
            BinOp::Or => "\\/",
            BinOp::Lt => "<",
            BinOp::Leq => "<=",
        }
    }
}

/// GSL expressions and predicates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExprAst {
    Ident(String),
    RatLit(Rational),
    BoolLit(bool),
    BinOp(BinOp, Box<ExprAst>, Box<ExprAst>),
    Not(Box<ExprAst>),
}

impl ExprAst {
    pub fn ident(name: &str) -> Self {
        ExprAst::Ident(name.to_string())
    }

    pub fn int(n: i64) -> Self {
        ExprAst::RatLit(crate::rat(n))
    }

    pub fn bin(op: BinOp, lhs: ExprAst, rhs: ExprAst) -> Self {
        ExprAst::BinOp(op, Box::new(lhs), Box::new(rhs))
    }
}

/// GSL substitutions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SubstAst {
    Assign(String, ExprAst),
    IfThenElse(ExprAst, Box<SubstAst>, Box<SubstAst>),
    IfThen(ExprAst, Box<SubstAst>),
    While(ExprAst, Box<SubstAst>),
    /// Bounded choice, `S1 OR S2`.
    Choice(Box<SubstAst>, Box<SubstAst>),
    Block(Box<SubstAst>),
    Call(String, Vec<ExprAst>),
}

impl SubstAst {
    pub fn assign(target: &str, value: ExprAst) -> Self {
        SubstAst::Assign(target.to_string(), value)
    }

    pub fn choice(left: SubstAst, right: SubstAst) -> Self {
        SubstAst::Choice(Box::new(left), Box::new(right))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Operation {
    pub name: String,
    pub formals: Vec<String>,
    pub body: SubstAst,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct MachineAst {
    pub name: String,
    pub variables: Vec<String>,
    pub constants: Vec<String>,
    pub values: Vec<(String, ExprAst)>,
    pub operations: Vec<Operation>,
}
