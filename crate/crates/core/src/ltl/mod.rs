//! Linear temporal logic over `p_v(r)` propositions: parsing, negation
//! normal form, Büchi automata, and explicit-state model checking.

mod buchi;
mod check;
mod eval;
mod formula;
mod parse;

pub use buchi::{accepts_lasso, to_buchi, BuchiAutomaton, Guard};
pub use check::{
    check_formulas, check_kripke, model_check, model_check_with, Lasso, ModelCheckError, Verdict,
};
pub use eval::{eval_lasso, Valuation};
pub use formula::{to_nnf, LtlFormula};
pub use parse::{parse_ltl, parse_ltl_with, LtlParseError};
