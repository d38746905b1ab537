use std::ops::Range;

use indexmap::IndexSet;
use thiserror::Error;

use super::condition::StateCondition;
use super::trace::Trace;
use crate::compiler::{CompileError, CompileUnit};
use crate::machine::{initial_configuration, successors, Configuration};
use crate::par::map_slice;
use crate::pi::PiCmd;
use crate::Parallelism;

/// Reachable configurations in discovery order with their successor edges.
#[derive(Debug, Clone)]
pub struct StateGraph {
    pub states: IndexSet<Configuration>,
    /// `edges[i]` lists successor indices in successor order, without
    /// duplicates. States whose successors were never computed have none.
    pub edges: Vec<Vec<usize>>,
    pub terminal: Vec<bool>,
    /// Index of the state that first reached each state, `None` for state 0.
    pub parent: Vec<Option<usize>>,
    /// False for graphs cut off by the state limit.
    pub complete: bool,
}

impl StateGraph {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state(&self, i: usize) -> &Configuration {
        &self.states[i]
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    /// Path of state indices from the initial state to `target` along
    /// discovery edges.
    pub fn path_to(&self, target: usize) -> Vec<usize> {
        let mut path = vec![target];
        let mut cur = target;
        while let Some(p) = self.parent[cur] {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }
}

#[derive(Debug, Clone, Error)]
pub enum ExploreError {
    #[error("state limit of {limit} exceeded")]
    StateLimitExceeded { limit: usize, partial: Box<StateGraph> },
    #[error(transparent)]
    Compile(#[from] CompileError),
}

/// Smallest BFS level worth splitting across threads.
const PARALLEL_FRONTIER: usize = 16;

struct Explorer {
    graph: StateGraph,
    /// States `[expanded..]` still need their successors.
    expanded: usize,
    limit: usize,
    mode: Parallelism,
}

enum Level {
    /// Newly discovered states.
    Grew(Range<usize>),
    Fixpoint,
    /// Limit hit; the range holds the states added before stopping.
    Limit(Range<usize>),
}

impl Explorer {
    fn new(start: Configuration, limit: usize, mode: Parallelism) -> Self {
        let mut states = IndexSet::new();
        let terminal = vec![start.is_terminal()];
        states.insert(start);
        Explorer {
            graph: StateGraph {
                states,
                edges: vec![Vec::new()],
                terminal,
                parent: vec![None],
                complete: false,
            },
            expanded: 0,
            limit,
            mode,
        }
    }

    fn step_level(&mut self) -> Level {
        let lo = self.expanded;
        let hi = self.graph.states.len();
        if lo == hi {
            self.graph.complete = true;
            return Level::Fixpoint;
        }
        let frontier: Vec<&Configuration> = (lo..hi).map(|i| &self.graph.states[i]).collect();
        let succs = map_slice(self.mode, &frontier, PARALLEL_FRONTIER, |c| successors(c));
        drop(frontier);
        for (i, next) in (lo..hi).zip(succs) {
            let mut out = Vec::with_capacity(next.len());
            for c in next {
                let j = match self.graph.states.get_index_of(&c) {
                    Some(j) => j,
                    None => {
                        if self.graph.states.len() == self.limit {
                            self.expanded = i;
                            return Level::Limit(hi..self.graph.states.len());
                        }
                        self.graph.terminal.push(c.is_terminal());
                        self.graph.edges.push(Vec::new());
                        self.graph.parent.push(Some(i));
                        self.graph.states.insert_full(c).0
                    }
                };
                if !out.contains(&j) {
                    out.push(j);
                }
            }
            self.graph.edges[i] = out;
        }
        self.expanded = hi;
        Level::Grew(hi..self.graph.states.len())
    }

    fn limit_error(self) -> ExploreError {
        ExploreError::StateLimitExceeded {
            limit: self.limit,
            partial: Box::new(self.graph),
        }
    }
}

/// Explores with the default parallelism.
pub fn explore(unit: &CompileUnit, entry: &PiCmd, state_limit: usize) -> Result<StateGraph, ExploreError> {
    explore_with(unit, entry, state_limit, Parallelism::default())
}

/// Explores to fixpoint. Indices follow BFS discovery order regardless of
/// `mode`.
pub fn explore_with(
    unit: &CompileUnit,
    entry: &PiCmd,
    state_limit: usize,
    mode: Parallelism,
) -> Result<StateGraph, ExploreError> {
    assert!(state_limit > 0, "state limit must be positive");
    let mut ex = Explorer::new(initial_configuration(unit, entry)?, state_limit, mode);
    loop {
        match ex.step_level() {
            Level::Grew(_) => {}
            Level::Fixpoint => return Ok(ex.graph),
            Level::Limit(_) => return Err(ex.limit_error()),
        }
    }
}

#[derive(Debug, Clone)]
pub enum SearchOutcome {
    Found(Trace),
    NoSolution,
}

/// Searches with the default parallelism.
pub fn search(
    unit: &CompileUnit,
    entry: &PiCmd,
    cond: &StateCondition,
    n: usize,
    state_limit: usize,
) -> Result<SearchOutcome, ExploreError> {
    search_with(unit, entry, cond, n, state_limit, Parallelism::default())
}

/// Finds the `n`-th distinct state, in discovery order, satisfying `cond`.
pub fn search_with(
    unit: &CompileUnit,
    entry: &PiCmd,
    cond: &StateCondition,
    n: usize,
    state_limit: usize,
    mode: Parallelism,
) -> Result<SearchOutcome, ExploreError> {
    assert!(n >= 1, "solution number starts at 1");
    assert!(state_limit > 0, "state limit must be positive");
    let mut ex = Explorer::new(initial_configuration(unit, entry)?, state_limit, mode);
    let mut found = 0;
    let mut check = |ex: &Explorer, range: Range<usize>| {
        range.into_iter().find(|&i| {
            if cond.holds(&ex.graph.states[i]) {
                found += 1;
            }
            found == n
        })
    };
    let found_at = |ex: &Explorer, i: usize| {
        let steps = ex.graph.path_to(i);
        let states = steps.iter().map(|&s| ex.graph.states[s].clone()).collect();
        SearchOutcome::Found(Trace { steps, states })
    };
    if let Some(i) = check(&ex, 0..1) {
        return Ok(found_at(&ex, i));
    }
    loop {
        match ex.step_level() {
            Level::Grew(r) => {
                if let Some(i) = check(&ex, r) {
                    return Ok(found_at(&ex, i));
                }
            }
            Level::Fixpoint => return Ok(SearchOutcome::NoSolution),
            Level::Limit(r) => {
                return match check(&ex, r) {
                    Some(i) => Ok(found_at(&ex, i)),
                    None => Err(ex.limit_error()),
                }
            }
        }
    }
}
