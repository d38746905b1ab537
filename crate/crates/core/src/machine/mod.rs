//! The pi automaton: configurations of semantic components and the
//! small-step successor relation.
//!
//! Execution follows the reverse-Polish discipline: a construct on top of the
//! control stack is unfolded into its subterms plus a [`Keyword`], and the
//! keyword later applies to the values its subterms left on the value stack.
//! Literals, `add` and `loop` follow the published rules exactly; the other
//! constructs (identifiers, assignment, conditionals, choice, blocks,
//! declarations, calls, output, exit) are completed in the same style.
//!
//! [`Keyword`]: crate::pi::Keyword

mod config;
mod run;
mod step;

pub use config::{Closure, Configuration, Denotable, Env, Exc, Frame, Store, Value};
pub use run::{run_to_completion, ChoicePolicy, RunError, RunResult};
pub use step::{successors, RuntimeFault};

use std::sync::Arc;

use crate::compiler::{CompileError, CompileUnit, SymbolKind};
use crate::pi::{ControlEntry, PiBlk, PiCmd};

fn check_calls(unit: &CompileUnit, cmd: &PiCmd) -> Result<(), CompileError> {
    match cmd {
        PiCmd::Cal(f, acts) => match unit.kind_of(f.as_str()) {
            Some(SymbolKind::Operation { arity }) if arity != acts.len() => {
                Err(CompileError::ArityMismatch {
                    op: f.to_string(),
                    expected: arity,
                    got: acts.len(),
                })
            }
            Some(SymbolKind::Operation { .. }) => Ok(()),
            Some(_) => Err(CompileError::NotAnOperation(f.to_string())),
            None => Err(CompileError::UnknownName(f.to_string())),
        },
        PiCmd::Choice(a, b) | PiCmd::Seq(a, b) | PiCmd::If(_, a, b) => {
            check_calls(unit, a)?;
            check_calls(unit, b)
        }
        PiCmd::Loop(_, k) => check_calls(unit, k),
        PiCmd::Blk(b) => check_calls(unit, &b.body),
        PiCmd::Nop | PiCmd::Assign(..) | PiCmd::Prn(_) | PiCmd::Exit => Ok(()),
    }
}

/// The configuration whose control stack holds the machine's declarations
/// and the entry command in one block; every other component is empty.
pub fn initial_configuration(
    unit: &CompileUnit,
    entry: &PiCmd,
) -> Result<Configuration, CompileError> {
    check_calls(unit, entry)?;
    let blk = PiBlk {
        decls: unit.pi_decl.clone().map(Arc::new),
        body: Arc::new(entry.clone()),
    };
    Ok(Configuration::with_control(vec![ControlEntry::Blk(Arc::new(blk))]))
}

/// Reads a variable or constant: the innermost binding in the current
/// environment, falling back to enclosing frames.
pub fn read_variable(c: &Configuration, name: &str) -> Result<Value, RuntimeFault> {
    let den = std::iter::once(&*c.env)
        .chain(c.frames.iter().rev().map(|f| &*f.env))
        .find_map(|env| env.get(name))
        .ok_or_else(|| RuntimeFault::UnboundIdentifier(name.into()))?;
    match den {
        Denotable::Loc(l) => c
            .sto
            .get(l)
            .cloned()
            .ok_or_else(|| RuntimeFault::TypeFault(format!("dangling location {l}"))),
        Denotable::Const(v) => Ok(v.clone()),
        Denotable::Closure(_) => Err(RuntimeFault::TypeFault(format!(
            "`{name}` is an operation, not a value"
        ))),
    }
}

#[cfg(test)]
mod tests;
