//! An executable environment for the B method's Abstract Machine Notation.
//!
//! Machines are parsed by [`frontend`], translated into pi Lib terms by
//! [`compiler`], executed on the interpreting automaton in [`machine`], and
//! analysed by breadth-first [`statespace`] search or by the explicit-state
//! LTL model checker in [`ltl`].

pub mod compiler;
pub mod frontend;
pub mod ltl;
pub mod machine;
mod par;
pub use par::Parallelism;
pub mod pi;
pub mod statespace;

mod ident;

pub use ident::Ident;

/// Exact arbitrary-precision rational numbers used for every numeric value.
pub type Rational = num::BigRational;

/// Builds an integral [`Rational`].
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Renders a rational as `n` or `n/d`.
pub(crate) fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
