use std::fmt;

use crate::{fmt_rational, Ident, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LtlFormula {
    Top,
    Bot,
    /// `v(r)`: variable `v` currently holds `r`.
    Prop(Ident, Rational),
    Not(Box<LtlFormula>),
    And(Box<LtlFormula>, Box<LtlFormula>),
    Or(Box<LtlFormula>, Box<LtlFormula>),
    Implies(Box<LtlFormula>, Box<LtlFormula>),
    Eventually(Box<LtlFormula>),
    Globally(Box<LtlFormula>),
}

impl LtlFormula {
    pub fn prop(var: &str, value: Rational) -> Self {
        LtlFormula::Prop(Ident::new(var), value)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: LtlFormula) -> Self {
        LtlFormula::Not(Box::new(f))
    }

    pub fn and(a: LtlFormula, b: LtlFormula) -> Self {
        LtlFormula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: LtlFormula, b: LtlFormula) -> Self {
        LtlFormula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: LtlFormula, b: LtlFormula) -> Self {
        LtlFormula::Implies(Box::new(a), Box::new(b))
    }

    pub fn eventually(f: LtlFormula) -> Self {
        LtlFormula::Eventually(Box::new(f))
    }

    pub fn globally(f: LtlFormula) -> Self {
        LtlFormula::Globally(Box::new(f))
    }

    /// Nesting depth of operators; atoms have depth 0.
    pub fn depth(&self) -> usize {
        use LtlFormula::*;
        match self {
            Top | Bot | Prop(..) => 0,
            Not(a) | Eventually(a) | Globally(a) => 1 + a.depth(),
            And(a, b) | Or(a, b) | Implies(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Variables mentioned by propositions, in order of first occurrence.
    pub fn variables(&self) -> Vec<Ident> {
        fn go(f: &LtlFormula, out: &mut Vec<Ident>) {
            use LtlFormula::*;
            match f {
                Top | Bot => {}
                Prop(v, _) => {
                    if !out.contains(v) {
                        out.push(v.clone());
                    }
                }
                Not(a) | Eventually(a) | Globally(a) => go(a, out),
                And(a, b) | Or(a, b) | Implies(a, b) => {
                    go(a, out);
                    go(b, out);
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }

    pub fn is_nnf(&self) -> bool {
        use LtlFormula::*;
        match self {
            Top | Bot | Prop(..) => true,
            Not(a) => matches!(**a, Prop(..)),
            Implies(..) => false,
            And(a, b) | Or(a, b) => a.is_nnf() && b.is_nnf(),
            Eventually(a) | Globally(a) => a.is_nnf(),
        }
    }

    fn precedence(&self) -> u8 {
        use LtlFormula::*;
        match self {
            Implies(..) => 1,
            Or(..) => 2,
            And(..) => 3,
            _ => 4,
        }
    }
}

/// Pushes negations to propositions and eliminates implications.
pub fn to_nnf(f: &LtlFormula) -> LtlFormula {
    nnf(f, false)
}

fn nnf(f: &LtlFormula, neg: bool) -> LtlFormula {
    use LtlFormula::*;
    match (f, neg) {
        (Top, false) | (Bot, true) => Top,
        (Top, true) | (Bot, false) => Bot,
        (Prop(..), false) => f.clone(),
        (Prop(..), true) => LtlFormula::not(f.clone()),
        (Not(a), _) => nnf(a, !neg),
        (And(a, b), false) | (Or(a, b), true) => LtlFormula::and(nnf(a, neg), nnf(b, neg)),
        (Or(a, b), false) | (And(a, b), true) => LtlFormula::or(nnf(a, neg), nnf(b, neg)),
        (Implies(a, b), false) => LtlFormula::or(nnf(a, true), nnf(b, false)),
        (Implies(a, b), true) => LtlFormula::and(nnf(a, false), nnf(b, true)),
        (Eventually(a), false) | (Globally(a), true) => LtlFormula::eventually(nnf(a, neg)),
        (Globally(a), false) | (Eventually(a), true) => LtlFormula::globally(nnf(a, neg)),
    }
}

impl fmt::Display for LtlFormula {
    /// Prints in the concrete syntax accepted by `parse_ltl`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use LtlFormula::*;
        let sub = |f: &mut fmt::Formatter<'_>, g: &LtlFormula, min: u8| {
            if g.precedence() < min {
                write!(f, "({g})")
            } else {
                write!(f, "{g}")
            }
        };
        match self {
            Top => f.write_str("tt"),
            Bot => f.write_str("ff"),
            Prop(v, r) => write!(f, "{v}({})", fmt_rational(r)),
            Not(a) => {
                f.write_str("~ ")?;
                sub(f, a, 4)
            }
            Eventually(a) => {
                f.write_str("<> ")?;
                sub(f, a, 4)
            }
            Globally(a) => {
                f.write_str("[] ")?;
                sub(f, a, 4)
            }
            And(a, b) => {
                sub(f, a, 3)?;
                f.write_str(" /\\ ")?;
                sub(f, b, 4)
            }
            Or(a, b) => {
                sub(f, a, 2)?;
                f.write_str(" \\/ ")?;
                sub(f, b, 3)
            }
            Implies(a, b) => {
                sub(f, a, 2)?;
                f.write_str(" -> ")?;
                sub(f, b, 1)
            }
        }
    }
}
