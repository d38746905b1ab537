use std::fmt::Write;

use indexmap::IndexSet;
use thiserror::Error;

use super::buchi::{to_buchi, BuchiAutomaton};
use super::eval::Valuation;
use super::formula::{to_nnf, LtlFormula};
use crate::compiler::CompileUnit;
use crate::par::map_slice;
use crate::pi::PiCmd;
use crate::statespace::{explore_with, kripke, ExploreError, KripkeError, KripkeStructure, Label};
use crate::Parallelism;

/// An ultimately periodic path: `prefix` then `cycle` repeated forever.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lasso {
    pub prefix: Vec<usize>,
    pub cycle: Vec<usize>,
    pub prefix_labels: Vec<Label>,
    pub cycle_labels: Vec<Label>,
}

impl Lasso {
    fn from_path(k: &KripkeStructure, prefix: Vec<usize>, cycle: Vec<usize>) -> Self {
        let labels = |v: &[usize]| v.iter().map(|&s| k.labels[s].clone()).collect();
        Lasso {
            prefix_labels: labels(&prefix),
            cycle_labels: labels(&cycle),
            prefix,
            cycle,
        }
    }

    /// True when the lasso starts at the initial state, follows edges, and
    /// its cycle closes.
    pub fn replays(&self, k: &KripkeStructure) -> bool {
        let path: Vec<usize> = self.prefix.iter().chain(&self.cycle).copied().collect();
        !self.cycle.is_empty()
            && path[0] == k.initial
            && path.windows(2).all(|w| k.has_edge(w[0], w[1]))
            && k.has_edge(*self.cycle.last().unwrap(), self.cycle[0])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Violated(Lasso),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    /// `HOLDS`, or `VIOLATED` with the lasso's states and their valuations.
    pub fn render(&self) -> String {
        let Verdict::Violated(l) = self else {
            return "HOLDS".to_string();
        };
        let ids = |v: &[usize]| {
            if v.is_empty() {
                return "(empty)".to_string();
            }
            v.iter().map(|s| format!("s{s}")).collect::<Vec<_>>().join(" ")
        };
        let mut s = format!(
            "VIOLATED\nprefix: {} ; cycle: {}\n",
            ids(&l.prefix),
            ids(&l.cycle)
        );
        for (name, states, labels) in [
            ("prefix", &l.prefix, &l.prefix_labels),
            ("cycle", &l.cycle, &l.cycle_labels),
        ] {
            if states.is_empty() {
                continue;
            }
            let _ = writeln!(s, "{name} valuations:");
            let mut i = 0;
            while i < states.len() {
                let j = (i..states.len())
                    .take_while(|&j| labels[j] == labels[i])
                    .last()
                    .unwrap();
                let span = if i == j {
                    format!("s{}", states[i])
                } else {
                    format!("s{} .. s{}", states[i], states[j])
                };
                let _ = writeln!(s, "  {span}: {}", format_label(&labels[i]));
                i = j + 1;
            }
        }
        s.pop();
        s
    }
}

fn format_label(l: &Label) -> String {
    if l.is_empty() {
        return "(no variables bound)".to_string();
    }
    l.iter()
        .map(|(v, r)| format!("{v} ↦ {}", crate::fmt_rational(r)))
        .collect::<Vec<_>>()
        .join(", ")
}

#[derive(Debug, Clone, Error)]
pub enum ModelCheckError {
    #[error("unknown machine variable `{0}` in formula")]
    UnknownName(String),
    #[error(transparent)]
    Explore(#[from] ExploreError),
    #[error(transparent)]
    Kripke(#[from] KripkeError),
}

#[derive(Default)]
struct Marks {
    ids: IndexSet<(usize, usize)>,
    blue: Vec<bool>,
    on_stack: Vec<bool>,
    red: Vec<bool>,
}

impl Marks {
    fn intern(&mut self, p: (usize, usize)) -> usize {
        let (i, fresh) = self.ids.insert_full(p);
        if fresh {
            self.blue.push(false);
            self.on_stack.push(false);
            self.red.push(false);
        }
        i
    }
}

/// A product state with its successors and the next one to visit.
struct Frame {
    id: usize,
    moves: Vec<(usize, usize)>,
    next: usize,
}

/// Nested depth-first search over the product of a system and `aut`.
/// Returns system states `(prefix, cycle)` of an accepting run.
pub(crate) fn find_accepting_cycle<'l, V, S, L>(
    aut: &BuchiAutomaton,
    succ: S,
    initial: usize,
    label: L,
) -> Option<(Vec<usize>, Vec<usize>)>
where
    V: Valuation + ?Sized + 'l,
    S: Fn(usize) -> Vec<usize>,
    L: Fn(usize) -> &'l V,
{
    let moves = |b: usize, targets: Vec<usize>| -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for t in targets {
            let l = label(t);
            for (g, b2) in &aut.transitions[b] {
                if g.satisfied_by(l) {
                    out.push((t, *b2));
                }
            }
        }
        out
    };
    let frame = |id: usize, (s, b): (usize, usize)| Frame {
        id,
        moves: moves(b, succ(s)),
        next: 0,
    };
    let mut m = Marks::default();
    for root in moves(aut.initial, vec![initial]) {
        let r = m.intern(root);
        if m.blue[r] {
            continue;
        }
        m.blue[r] = true;
        m.on_stack[r] = true;
        let mut outer = vec![frame(r, root)];
        while let Some(top) = outer.last_mut() {
            if top.next < top.moves.len() {
                let p = top.moves[top.next];
                top.next += 1;
                let q = m.intern(p);
                if !m.blue[q] {
                    m.blue[q] = true;
                    m.on_stack[q] = true;
                    outer.push(frame(q, p));
                }
                continue;
            }
            let seed = top.id;
            let seed_state = m.ids[seed];
            if aut.accepting[seed_state.1] {
                // Inner search for a state on the outer stack.
                let mut inner = vec![frame(seed, seed_state)];
                let mut hit = None;
                while let Some(top) = inner.last_mut() {
                    if top.next == top.moves.len() {
                        inner.pop();
                        continue;
                    }
                    let p = top.moves[top.next];
                    top.next += 1;
                    let q = m.intern(p);
                    if m.on_stack[q] {
                        hit = Some(q);
                        break;
                    }
                    if !m.red[q] {
                        m.red[q] = true;
                        inner.push(frame(q, p));
                    }
                }
                if let Some(q) = hit {
                    let j = outer
                        .iter()
                        .position(|f| f.id == q)
                        .expect("target is on the stack");
                    let system = |f: &Frame| m.ids[f.id].0;
                    let prefix = outer[..j].iter().map(system).collect();
                    let cycle = outer[j..].iter().chain(&inner[1..]).map(system).collect();
                    return Some((prefix, cycle));
                }
            }
            m.on_stack[seed] = false;
            outer.pop();
        }
    }
    None
}

/// Checks `f` on a total Kripke structure.
pub fn check_kripke(k: &KripkeStructure, f: &LtlFormula) -> Verdict {
    let aut = to_buchi(&to_nnf(&LtlFormula::not(f.clone())));
    match find_accepting_cycle(&aut, |s| k.succ[s].clone(), k.initial, |s| &k.labels[s]) {
        None => Verdict::Holds,
        Some((prefix, cycle)) => Verdict::Violated(Lasso::from_path(k, prefix, cycle)),
    }
}

/// Checks several formulas against one structure, concurrently when
/// `mode` allows.
pub fn check_formulas(k: &KripkeStructure, fs: &[LtlFormula], mode: Parallelism) -> Vec<Verdict> {
    map_slice(mode, fs, 2, |f| check_kripke(k, f))
}

/// Model checks with the default parallelism.
pub fn model_check(
    unit: &CompileUnit,
    entry: &PiCmd,
    f: &LtlFormula,
    state_limit: usize,
) -> Result<Verdict, ModelCheckError> {
    model_check_with(unit, entry, f, state_limit, Parallelism::default()).map(|(v, _)| v)
}

/// Explores the state graph, builds its Kripke view and checks `f`,
/// returning the verdict with the structure it refers to.
pub fn model_check_with(
    unit: &CompileUnit,
    entry: &PiCmd,
    f: &LtlFormula,
    state_limit: usize,
    mode: Parallelism,
) -> Result<(Verdict, KripkeStructure), ModelCheckError> {
    if let Some(v) = f.variables().into_iter().find(|v| !unit.is_variable(v.as_str())) {
        return Err(ModelCheckError::UnknownName(v.to_string()));
    }
    let graph = explore_with(unit, entry, state_limit, mode)?;
    let k = kripke(&graph, unit)?;
    Ok((check_kripke(&k, f), k))
}
