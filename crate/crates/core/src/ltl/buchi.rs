use std::collections::BTreeSet;

use indexmap::IndexSet;

use super::eval::Valuation;
use super::formula::LtlFormula;
use crate::{Ident, Rational};

/// Propositions that must hold (`pos`) and must not hold (`neg`).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Guard {
    pub pos: Vec<(Ident, Rational)>,
    pub neg: Vec<(Ident, Rational)>,
}

impl Guard {
    pub fn satisfied_by<V: Valuation + ?Sized>(&self, l: &V) -> bool {
        self.pos.iter().all(|(v, r)| l.holds(v.as_str(), r))
            && !self.neg.iter().any(|(v, r)| l.holds(v.as_str(), r))
    }
}

/// A Büchi automaton whose transitions read the label of the position they
/// enter. The run starts in `initial` before the first position.
#[derive(Debug, Clone)]
pub struct BuchiAutomaton {
    pub initial: usize,
    pub transitions: Vec<Vec<(Guard, usize)>>,
    pub accepting: Vec<bool>,
}

impl BuchiAutomaton {
    pub fn len(&self) -> usize {
        self.transitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transitions.is_empty()
    }
}

const INIT: usize = usize::MAX;

#[derive(Debug, Clone)]
struct Node {
    incoming: BTreeSet<usize>,
    new: BTreeSet<usize>,
    old: BTreeSet<usize>,
    next: BTreeSet<usize>,
}

struct Closure {
    forms: IndexSet<LtlFormula>,
}

impl Closure {
    fn id(&mut self, f: &LtlFormula) -> usize {
        self.forms.insert_full(f.clone()).0
    }

    fn get(&self, i: usize) -> &LtlFormula {
        &self.forms[i]
    }

    fn negation(&self, i: usize) -> Option<usize> {
        match self.get(i) {
            LtlFormula::Not(p) => self.forms.get_index_of(&**p),
            p @ LtlFormula::Prop(..) => self.forms.get_index_of(&LtlFormula::not(p.clone())),
            _ => None,
        }
    }
}

/// Tableau construction. `old`/`next` pairs identify nodes; each
/// `Eventually` subformula yields one acceptance set.
fn tableau(f: &LtlFormula) -> (Vec<Node>, Closure) {
    let mut cl = Closure {
        forms: IndexSet::new(),
    };
    let root = cl.id(f);
    let mut nodes: Vec<Node> = Vec::new();
    let mut pending = vec![Node {
        incoming: [INIT].into(),
        new: [root].into(),
        old: BTreeSet::new(),
        next: BTreeSet::new(),
    }];
    while let Some(mut n) = pending.pop() {
        let Some(eta) = n.new.pop_first() else {
            if let Some(m) = nodes.iter_mut().find(|m| m.old == n.old && m.next == n.next) {
                m.incoming.extend(n.incoming);
            } else {
                let id = nodes.len();
                pending.push(Node {
                    incoming: [id].into(),
                    new: n.next.clone(),
                    old: BTreeSet::new(),
                    next: BTreeSet::new(),
                });
                nodes.push(n);
            }
            continue;
        };
        if n.old.contains(&eta) {
            pending.push(n);
            continue;
        }
        match cl.get(eta).clone() {
            LtlFormula::Bot => {}
            LtlFormula::Top | LtlFormula::Prop(..) | LtlFormula::Not(_) => {
                let contradicted = cl.negation(eta).is_some_and(|neg| n.old.contains(&neg));
                if !contradicted {
                    n.old.insert(eta);
                    pending.push(n);
                }
            }
            LtlFormula::And(a, b) => {
                let (a, b) = (cl.id(&a), cl.id(&b));
                n.old.insert(eta);
                for x in [a, b] {
                    if !n.old.contains(&x) {
                        n.new.insert(x);
                    }
                }
                pending.push(n);
            }
            LtlFormula::Or(a, b) => {
                let (a, b) = (cl.id(&a), cl.id(&b));
                n.old.insert(eta);
                let mut right = n.clone();
                if !n.old.contains(&a) {
                    n.new.insert(a);
                }
                if !right.old.contains(&b) {
                    right.new.insert(b);
                }
                pending.push(right);
                pending.push(n);
            }
            LtlFormula::Eventually(a) => {
                let a = cl.id(&a);
                n.old.insert(eta);
                let mut now = n.clone();
                n.next.insert(eta);
                if !now.old.contains(&a) {
                    now.new.insert(a);
                }
                pending.push(n);
                pending.push(now);
            }
            LtlFormula::Globally(a) => {
                let a = cl.id(&a);
                n.old.insert(eta);
                n.next.insert(eta);
                if !n.old.contains(&a) {
                    n.new.insert(a);
                }
                pending.push(n);
            }
            LtlFormula::Implies(..) => unreachable!("formula is in negation normal form"),
        }
    }
    (nodes, cl)
}

fn guard(node: &Node, cl: &Closure) -> Guard {
    let mut g = Guard::default();
    for &i in &node.old {
        match cl.get(i) {
            LtlFormula::Prop(v, r) => g.pos.push((v.clone(), r.clone())),
            LtlFormula::Not(p) => {
                if let LtlFormula::Prop(v, r) = &**p {
                    g.neg.push((v.clone(), r.clone()));
                }
            }
            _ => {}
        }
    }
    g
}

/// Builds a Büchi automaton accepting exactly the words satisfying `f`,
/// which must be in negation normal form.
pub fn to_buchi(f: &LtlFormula) -> BuchiAutomaton {
    assert!(f.is_nnf(), "to_buchi expects a formula in negation normal form");
    let (nodes, cl) = tableau(f);
    let eventualities: Vec<(usize, usize)> = cl
        .forms
        .iter()
        .enumerate()
        .filter_map(|(i, g)| match g {
            LtlFormula::Eventually(a) => Some((i, cl.forms.get_index_of(&**a)?)),
            _ => None,
        })
        .collect();
    let in_set = |q: usize, k: usize| {
        let (ev, a) = eventualities[k];
        !nodes[q].old.contains(&ev) || nodes[q].old.contains(&a)
    };
    let k = eventualities.len().max(1);
    let guards: Vec<Guard> = nodes.iter().map(|n| guard(n, &cl)).collect();
    let state = |q: usize, i: usize| 1 + q * k + i;
    let mut transitions = vec![Vec::new(); 1 + nodes.len() * k];
    let mut accepting = vec![false; transitions.len()];
    for (q2, n2) in nodes.iter().enumerate() {
        for &src in &n2.incoming {
            if src == INIT {
                transitions[0].push((guards[q2].clone(), state(q2, 0)));
                continue;
            }
            for i in 0..k {
                let j = if eventualities.is_empty() || !in_set(src, i) {
                    i
                } else {
                    (i + 1) % k
                };
                transitions[state(src, i)].push((guards[q2].clone(), state(q2, j)));
            }
        }
    }
    for q in 0..nodes.len() {
        accepting[state(q, 0)] = eventualities.is_empty() || in_set(q, 0);
    }
    BuchiAutomaton {
        initial: 0,
        transitions,
        accepting,
    }
}

/// Whether the automaton accepts the word `prefix · cycle^ω`.
pub fn accepts_lasso<V: Valuation>(aut: &BuchiAutomaton, prefix: &[V], cycle: &[V]) -> bool {
    assert!(!cycle.is_empty(), "lasso cycle must be nonempty");
    let labels: Vec<&V> = prefix.iter().chain(cycle).collect();
    let n = labels.len();
    let next_pos = |p: usize| if p + 1 < n { p + 1 } else { prefix.len() };
    super::check::find_accepting_cycle(
        aut,
        |pos: usize| vec![next_pos(pos)],
        0,
        |pos: usize| labels[pos],
    )
    .is_some()
}
