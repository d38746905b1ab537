//! Lexing, parsing and pretty-printing of the supported AMN/GSL subset.

mod ast;
mod lexer;
mod parser;
mod pretty;

pub use ast::{BinOp, ExprAst, MachineAst, Operation, SubstAst};
pub use lexer::{tokenize, LexError, Pos, Token, TokenKind};
pub use parser::{
    parse_expression, parse_machine, parse_machine_source, parse_substitution,
    parse_substitution_source, ParseError, Parser,
};
pub use pretty::{pretty_expr, pretty_machine, pretty_subst};
