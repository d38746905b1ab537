use std::fmt::Write;

use crate::compiler::CompileUnit;
use crate::machine::{successors, Configuration};

use super::{format_valuation, valuation};

/// A path from the initial state to a search target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    /// State indices in the explored graph.
    pub steps: Vec<usize>,
    pub states: Vec<Configuration>,
}

impl Trace {
    pub fn target(&self) -> &Configuration {
        self.states.last().expect("trace is nonempty")
    }

    /// True when each state is a successor of the one before it.
    pub fn replays(&self, start: &Configuration) -> bool {
        self.states.first() == Some(start)
            && self
                .states
                .windows(2)
                .all(|w| successors(&w[0]).contains(&w[1]))
    }

    /// The distinct valuations along the trace: leading states with no
    /// variable bound are skipped and repeats of the same valuation are
    /// collapsed.
    pub fn valuation_path(&self, unit: &CompileUnit) -> Vec<Vec<Option<crate::machine::Value>>> {
        let mut out: Vec<Vec<_>> = Vec::new();
        for c in &self.states {
            let v = valuation(unit, c);
            if out.is_empty() && v.iter().all(Option::is_none) {
                continue;
            }
            if out.last() != Some(&v) {
                out.push(v);
            }
        }
        out
    }

    /// Numbered valuations followed by the full target configuration.
    pub fn render(&self, unit: &CompileUnit) -> String {
        let mut s = String::new();
        for (i, v) in self.valuation_path(unit).iter().enumerate() {
            let _ = writeln!(s, "state {i}: {}", format_valuation(unit, v));
        }
        let _ = writeln!(
            s,
            "final configuration (state #{}, {} steps):",
            self.steps.last().expect("trace is nonempty"),
            self.steps.len() - 1
        );
        s.push_str(&self.target().to_string());
        s
    }
}
