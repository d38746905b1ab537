use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::config::Configuration;
use super::step::successors;
use crate::pi::{ControlEntry, Keyword};

/// How `run_to_completion` resolves a choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChoicePolicy {
    First,
    /// Seeded pseudo-random choice; the same seed gives the same run.
    Random(u64),
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub final_config: Configuration,
    pub steps: usize,
    /// The last configuration before the outermost block released its
    /// locations, where machine variables can still be read.
    pub settled: Option<Configuration>,
}

#[derive(Debug, Clone, Error)]
pub enum RunError {
    #[error("step limit of {steps} exceeded")]
    StepLimitExceeded {
        last: Box<Configuration>,
        steps: usize,
    },
}

fn is_outermost_exit(c: &Configuration) -> bool {
    c.frames.len() == 1 && matches!(c.cnt.last(), Some(ControlEntry::Keyword(Keyword::BlkCmd)))
}

/// Steps until a terminal configuration is reached or `step_limit` steps
/// have been taken.
pub fn run_to_completion(
    start: Configuration,
    policy: ChoicePolicy,
    step_limit: usize,
) -> Result<RunResult, RunError> {
    let mut rng = match policy {
        ChoicePolicy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        ChoicePolicy::First => None,
    };
    let mut cur = start;
    let mut settled = None;
    let mut steps = 0;
    loop {
        if cur.is_terminal() {
            return Ok(RunResult {
                final_config: cur,
                steps,
                settled,
            });
        }
        if steps == step_limit {
            return Err(RunError::StepLimitExceeded {
                last: Box::new(cur),
                steps,
            });
        }
        if is_outermost_exit(&cur) {
            settled = Some(cur.clone());
        }
        let mut next = successors(&cur);
        let pick = match (&mut rng, next.len()) {
            (Some(rng), 2) => usize::from(rng.gen_bool(0.5)),
            _ => 0,
        };
        cur = next.swap_remove(pick);
        steps += 1;
    }
}
