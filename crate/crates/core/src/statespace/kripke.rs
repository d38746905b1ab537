use thiserror::Error;

use super::explore::StateGraph;
use crate::compiler::CompileUnit;
use crate::machine::{read_variable, Value};
use crate::{Ident, Rational};

/// The `p_v(r)` propositions true in a state, in declaration order.
pub type Label = Vec<(Ident, Rational)>;

/// A total transition system labeled with variable valuations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeStructure {
    pub initial: usize,
    pub succ: Vec<Vec<usize>>,
    pub labels: Vec<Label>,
}

impl KripkeStructure {
    pub fn len(&self) -> usize {
        self.succ.len()
    }

    pub fn is_empty(&self) -> bool {
        self.succ.is_empty()
    }

    /// Whether `p_var(value)` holds in state `s`.
    pub fn holds(&self, s: usize, var: &str, value: &Rational) -> bool {
        self.labels[s]
            .iter()
            .any(|(v, r)| v.as_str() == var && r == value)
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.succ[from].contains(&to)
    }

    /// Every state has a successor.
    pub fn is_total(&self) -> bool {
        self.succ.iter().all(|s| !s.is_empty())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KripkeError {
    #[error("the state graph is partial; raise the state limit")]
    PartialGraph,
}

/// Labels each state with the rational-valued machine variables bound in it
/// and gives terminal states a self-loop.
pub fn kripke(graph: &StateGraph, unit: &CompileUnit) -> Result<KripkeStructure, KripkeError> {
    if !graph.complete {
        return Err(KripkeError::PartialGraph);
    }
    let vars: Vec<Ident> = unit.variables().iter().map(|v| Ident::new(v)).collect();
    let labels = graph
        .states
        .iter()
        .map(|c| {
            vars.iter()
                .filter_map(|v| match read_variable(c, v.as_str()) {
                    Ok(Value::Rat(r)) => Some((v.clone(), r)),
                    _ => None,
                })
                .collect()
        })
        .collect();
    let succ = graph
        .edges
        .iter()
        .enumerate()
        .map(|(i, e)| if e.is_empty() { vec![i] } else { e.clone() })
        .collect();
    Ok(KripkeStructure {
        initial: 0,
        succ,
        labels,
    })
}
