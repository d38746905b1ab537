//! Concrete-syntax rendering. Output re-parses to an identical AST, with one
//! exception: non-integral rational literals have no surface syntax and print
//! as a parenthesised division.

use std::fmt::Write;

use super::ast::{ExprAst, MachineAst, SubstAst};
use crate::fmt_rational;

const UNARY_PREC: u8 = 6;

pub fn pretty_expr(e: &ExprAst) -> String {
    let mut out = String::new();
    write_expr(&mut out, e, 0);
    out
}

fn write_expr(out: &mut String, e: &ExprAst, min_prec: u8) {
    match e {
        ExprAst::Ident(name) => out.push_str(name),
        ExprAst::BoolLit(b) => out.push_str(if *b { "true" } else { "false" }),
        ExprAst::RatLit(r) if r.is_integer() => out.push_str(&fmt_rational(r)),
        ExprAst::RatLit(r) => {
            let _ = write!(out, "({} / {})", r.numer(), r.denom());
        }
        ExprAst::Not(arg) => {
            let paren = min_prec > UNARY_PREC;
            if paren {
                out.push('(');
            }
            out.push('~');
            write_expr(out, arg, UNARY_PREC);
            if paren {
                out.push(')');
            }
        }
        ExprAst::BinOp(op, lhs, rhs) => {
            let prec = op.precedence();
            let paren = prec < min_prec;
            if paren {
                out.push('(');
            }
            write_expr(out, lhs, prec);
            let _ = write!(out, " {} ", op.symbol());
            write_expr(out, rhs, prec + 1);
            if paren {
                out.push(')');
            }
        }
    }
}

/// Single-line rendering of a substitution.
pub fn pretty_subst(s: &SubstAst) -> String {
    let mut p = Printer {
        out: String::new(),
        multiline: false,
        indent: 0,
    };
    p.subst(s, false);
    p.out
}

pub fn pretty_machine(m: &MachineAst) -> String {
    let mut out = format!("MACHINE {}\n", m.name);
    if !m.variables.is_empty() {
        let _ = writeln!(out, "  VARIABLES {}", m.variables.join(", "));
    }
    if !m.constants.is_empty() {
        let _ = writeln!(out, "  CONSTANTS {}", m.constants.join(", "));
    }
    if !m.values.is_empty() {
        out.push_str("  VALUES\n");
        for (i, (id, e)) in m.values.iter().enumerate() {
            let sep = if i + 1 < m.values.len() { " ;" } else { "" };
            let _ = writeln!(out, "    {id} = {}{sep}", pretty_expr(e));
        }
    }
    if !m.operations.is_empty() {
        out.push_str("  OPERATIONS\n");
        for (i, op) in m.operations.iter().enumerate() {
            let formals = if op.formals.is_empty() {
                String::new()
            } else {
                format!("({})", op.formals.join(", "))
            };
            let mut p = Printer {
                out: String::new(),
                multiline: true,
                indent: 3,
            };
            p.newline();
            p.subst(&op.body, false);
            let sep = if i + 1 < m.operations.len() { " ;" } else { "" };
            let _ = writeln!(out, "    {}{formals} ={}{sep}", op.name, p.out);
        }
    }
    out.push_str("END\n");
    out
}

struct Printer {
    out: String,
    multiline: bool,
    indent: usize,
}

impl Printer {
    fn newline(&mut self) {
        if self.multiline {
            self.out.push('\n');
            for _ in 0..self.indent {
                self.out.push_str("  ");
            }
        } else {
            self.out.push(' ');
        }
    }

    fn nested(&mut self, s: &SubstAst) {
        self.indent += 1;
        self.newline();
        self.subst(s, false);
        self.indent -= 1;
        self.newline();
    }

    /// `primary` is set where a bare `OR` would bind to the wrong parent.
    fn subst(&mut self, s: &SubstAst, primary: bool) {
        match s {
            SubstAst::Assign(id, e) => {
                let _ = write!(self.out, "{id} := {}", pretty_expr(e));
            }
            SubstAst::Call(name, actuals) => {
                let args: Vec<_> = actuals.iter().map(pretty_expr).collect();
                let _ = write!(self.out, "{name}({})", args.join(", "));
            }
            SubstAst::IfThen(c, t) => {
                let _ = write!(self.out, "IF {} THEN", pretty_expr(c));
                self.nested(t);
                self.out.push_str("END");
            }
            SubstAst::IfThenElse(c, t, e) => {
                let _ = write!(self.out, "IF {} THEN", pretty_expr(c));
                self.nested(t);
                self.out.push_str("ELSE");
                self.nested(e);
                self.out.push_str("END");
            }
            SubstAst::While(c, body) => {
                let _ = write!(self.out, "WHILE {} DO", pretty_expr(c));
                self.indent += 1;
                self.newline();
                self.subst(body, true);
                self.indent -= 1;
            }
            SubstAst::Block(body) => {
                self.out.push_str("BEGIN");
                self.nested(body);
                self.out.push_str("END");
            }
            SubstAst::Choice(l, r) => {
                if primary {
                    self.out.push('(');
                }
                self.subst(l, false);
                self.out.push_str(" OR ");
                self.subst(r, true);
                if primary {
                    self.out.push(')');
                }
            }
        }
    }
}
