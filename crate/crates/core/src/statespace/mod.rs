//! Breadth-first exploration of reachable configurations, `search`, and the
//! Kripke view used by the model checker.

mod condition;
mod explore;
mod kripke;
mod trace;

pub use condition::{parse_condition, ConditionError, Conjunct, StateCondition};
pub use explore::{explore, explore_with, search, search_with, ExploreError, SearchOutcome, StateGraph};
pub use kripke::{kripke, KripkeError, KripkeStructure, Label};
pub use trace::Trace;

use crate::compiler::CompileUnit;
use crate::machine::{read_variable, Configuration, Value};

/// Values of the machine variables in `c`, `None` where not (or no longer)
/// bound.
pub fn valuation(unit: &CompileUnit, c: &Configuration) -> Vec<Option<Value>> {
    unit.variables()
        .iter()
        .map(|v| read_variable(c, v).ok())
        .collect()
}

/// `p1 ↦ 0, p2 ↦ 1`, skipping unbound variables.
pub fn format_valuation(unit: &CompileUnit, vals: &[Option<Value>]) -> String {
    let parts: Vec<String> = unit
        .variables()
        .iter()
        .zip(vals)
        .filter_map(|(name, v)| v.as_ref().map(|v| format!("{name} ↦ {v}")))
        .collect();
    if parts.is_empty() {
        "(no variables bound)".to_string()
    } else {
        parts.join(", ")
    }
}
