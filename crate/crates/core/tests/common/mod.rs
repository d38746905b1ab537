//! Independent oracles shared by the integration and acceptance tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::sync::Arc;

use amn_core::compiler::{compile_machine, CompileUnit};
use amn_core::frontend::{parse_machine_source, parse_substitution_source};
use amn_core::ltl::{eval_lasso, LtlFormula};
use amn_core::machine::{run_to_completion, ChoicePolicy, Configuration, Value};
use amn_core::pi::{ControlEntry, PiCmd, PiExp, PiOp};
use amn_core::statespace::{KripkeStructure, Label};
use amn_core::{rat, Ident, Rational};
use num::Zero;
use rand::{Rng, SeedableRng};

pub const MUTEX: &str = include_str!("../../examples/mutex.mch");
pub const MUTEX_PI: &str = include_str!("../golden/mutex.pi.txt");

pub fn mutex() -> CompileUnit {
    compile_machine(&parse_machine_source(MUTEX).unwrap()).unwrap()
}

pub fn entry(unit: &CompileUnit, text: &str) -> PiCmd {
    unit.compile_entry(&parse_substitution_source(text).unwrap())
        .unwrap()
}

// ---------------------------------------------------------------------------
// Expressions

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Direct {
    Rat(Rational),
    Bool(bool),
    DivByZero,
}

/// Recursive evaluation of a closed expression.
pub fn eval_direct(e: &PiExp) -> Direct {
    fn go(e: &PiExp) -> Result<Direct, ()> {
        Ok(match e {
            PiExp::Rat(r) => Direct::Rat(r.clone()),
            PiExp::Boo(b) => Direct::Bool(*b),
            PiExp::Idn(_) => panic!("open expression"),
            PiExp::Not(a) => match go(a)? {
                Direct::Bool(b) => Direct::Bool(!b),
                _ => panic!("ill-typed"),
            },
            PiExp::Bin(op, a, b) => {
                let (x, y) = (go(a)?, go(b)?);
                match (op, x, y) {
                    (PiOp::Add, Direct::Rat(x), Direct::Rat(y)) => Direct::Rat(x + y),
                    (PiOp::Sub, Direct::Rat(x), Direct::Rat(y)) => Direct::Rat(x - y),
                    (PiOp::Mul, Direct::Rat(x), Direct::Rat(y)) => Direct::Rat(x * y),
                    (PiOp::Div, Direct::Rat(x), Direct::Rat(y)) => {
                        if y.is_zero() {
                            return Err(());
                        }
                        Direct::Rat(x / y)
                    }
                    (PiOp::Lt, Direct::Rat(x), Direct::Rat(y)) => Direct::Bool(x < y),
                    (PiOp::Leq, Direct::Rat(x), Direct::Rat(y)) => Direct::Bool(x <= y),
                    (PiOp::Eq, x, y) => Direct::Bool(x == y),
                    (PiOp::And, Direct::Bool(x), Direct::Bool(y)) => Direct::Bool(x && y),
                    (PiOp::Or, Direct::Bool(x), Direct::Bool(y)) => Direct::Bool(x || y),
                    _ => panic!("ill-typed"),
                }
            }
        })
    }
    go(e).unwrap_or(Direct::DivByZero)
}

/// Evaluates on the pi automaton.
pub fn eval_machine(e: &PiExp) -> Direct {
    let c = Configuration::with_control(vec![ControlEntry::Exp(Arc::new(e.clone()))]);
    let r = run_to_completion(c, ChoicePolicy::First, 1_000_000).expect("expressions terminate");
    let f = r.final_config;
    if f.fault.is_some() {
        assert_eq!(f.fault, Some(amn_core::machine::RuntimeFault::DivisionByZero));
        return Direct::DivByZero;
    }
    assert!(f.cnt.is_empty());
    match f.val.as_slice() {
        [Value::Rat(r)] => Direct::Rat(r.clone()),
        [Value::Boo(b)] => Direct::Bool(*b),
        other => panic!("unexpected value stack {other:?}"),
    }
}

fn random_rat<R: Rng>(rng: &mut R) -> Rational {
    let n: i64 = rng.gen_range(-9..=9);
    if rng.gen_bool(0.25) {
        Rational::new(n.into(), rng.gen_range(1..=5i64).into())
    } else {
        rat(n)
    }
}

/// A random well-typed closed rational expression of depth at most `depth`.
pub fn random_rat_exp<R: Rng>(rng: &mut R, depth: u32) -> PiExp {
    if depth == 0 || rng.gen_bool(0.2) {
        return PiExp::Rat(random_rat(rng));
    }
    let op = [PiOp::Add, PiOp::Sub, PiOp::Mul, PiOp::Div][rng.gen_range(0..4)];
    PiExp::bin(op, random_rat_exp(rng, depth - 1), random_rat_exp(rng, depth - 1))
}

/// A random well-typed closed boolean expression of depth at most `depth`.
pub fn random_bool_exp<R: Rng>(rng: &mut R, depth: u32) -> PiExp {
    if depth == 0 || rng.gen_bool(0.15) {
        return PiExp::Boo(rng.gen());
    }
    let d = depth - 1;
    match rng.gen_range(0..6) {
        0 => PiExp::not(random_bool_exp(rng, d)),
        1 => PiExp::bin(PiOp::And, random_bool_exp(rng, d), random_bool_exp(rng, d)),
        2 => PiExp::bin(PiOp::Or, random_bool_exp(rng, d), random_bool_exp(rng, d)),
        3 => PiExp::bin(PiOp::Eq, random_bool_exp(rng, d), random_bool_exp(rng, d)),
        4 => PiExp::bin(PiOp::Eq, random_rat_exp(rng, d), random_rat_exp(rng, d)),
        _ => {
            let op = if rng.gen() { PiOp::Lt } else { PiOp::Leq };
            PiExp::bin(op, random_rat_exp(rng, d), random_rat_exp(rng, d))
        }
    }
}

pub fn random_exp<R: Rng>(rng: &mut R, depth: u32) -> PiExp {
    if rng.gen() {
        random_rat_exp(rng, depth)
    } else {
        random_bool_exp(rng, depth)
    }
}

// ---------------------------------------------------------------------------
// MUTEX transition table

/// The eight guarded transitions of the MUTEX loop body over (p1, p2),
/// written out by hand: idle = 0, wait = 1, crit = 2.
pub fn mutex_table(p1: u8, p2: u8) -> Vec<(u8, u8)> {
    match (p1, p2) {
        (0, 0) => vec![(1, 0), (0, 1)],
        (0, 1) => vec![(1, 1), (0, 2)],
        (0, 2) => vec![(1, 2), (0, 0)],
        (1, 0) => vec![(2, 0), (1, 1)],
        (1, 1) => vec![(2, 1), (1, 2)],
        (1, 2) => vec![(1, 0)],
        (2, 0) => vec![(0, 0), (2, 1)],
        (2, 1) => vec![(0, 1)],
        _ => vec![],
    }
}

/// Pairs reachable from (0, 0) under `mutex_table`.
pub fn mutex_table_reachable() -> BTreeSet<(u8, u8)> {
    let mut seen = BTreeSet::from([(0, 0)]);
    let mut queue = VecDeque::from([(0, 0)]);
    while let Some((a, b)) = queue.pop_front() {
        for n in mutex_table(a, b) {
            if seen.insert(n) {
                queue.push_back(n);
            }
        }
    }
    seen
}

// ---------------------------------------------------------------------------
// LTL

pub fn p() -> LtlFormula {
    LtlFormula::prop("p", rat(1))
}

pub fn q() -> LtlFormula {
    LtlFormula::prop("q", rat(1))
}

/// Label with bit 0 for `p(1)` and bit 1 for `q(1)`.
pub fn label(bits: u8) -> Label {
    let mut l = Label::new();
    if bits & 1 != 0 {
        l.push((Ident::new("p"), rat(1)));
    }
    if bits & 2 != 0 {
        l.push((Ident::new("q"), rat(1)));
    }
    l
}

pub fn graph(succ: Vec<Vec<usize>>, bits: &[u8]) -> KripkeStructure {
    assert_eq!(succ.len(), bits.len());
    assert!(succ.iter().all(|s| !s.is_empty()), "graph must be total");
    KripkeStructure {
        initial: 0,
        succ,
        labels: bits.iter().map(|&b| label(b)).collect(),
    }
}

/// 25 total Kripke structures with at most four states: hand-picked shapes
/// followed by seeded random ones.
pub fn kripke_family() -> Vec<KripkeStructure> {
    let mut out = vec![
        graph(vec![vec![0]], &[0]),
        graph(vec![vec![0]], &[1]),
        graph(vec![vec![0]], &[3]),
        // hub with two loops, p on one and q on the other
        graph(vec![vec![1, 2], vec![0], vec![0]], &[0, 1, 2]),
        graph(vec![vec![1], vec![0]], &[1, 2]),
        graph(vec![vec![1], vec![2], vec![2]], &[1, 0, 2]),
        graph(vec![vec![0, 1], vec![1]], &[0, 1]),
        graph(vec![vec![1, 2], vec![1], vec![2]], &[0, 1, 2]),
        graph(vec![vec![1], vec![2], vec![3], vec![1]], &[3, 1, 0, 2]),
        graph(vec![vec![1, 3], vec![2], vec![0], vec![3]], &[1, 1, 2, 0]),
    ];
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
    while out.len() < 25 {
        let n = rng.gen_range(2..=4);
        let succ = (0..n)
            .map(|_| {
                let mut s: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
                if s.is_empty() {
                    s.push(rng.gen_range(0..n));
                }
                s
            })
            .collect();
        let bits: Vec<u8> = (0..n).map(|_| rng.gen_range(0..4)).collect();
        out.push(graph(succ, &bits));
    }
    out
}


/// Every formula of depth at most `depth` over `p(1)`, `q(1)`.
pub fn all_formulas(depth: usize) -> Vec<LtlFormula> {
    let mut levels: Vec<Vec<LtlFormula>> = vec![vec![LtlFormula::Top, LtlFormula::Bot, p(), q()]];
    for d in 1..=depth {
        let below: Vec<LtlFormula> = levels.iter().flatten().cloned().collect();
        let prev = &levels[d - 1];
        let mut next = Vec::new();
        for f in prev {
            next.push(LtlFormula::not(f.clone()));
            next.push(LtlFormula::eventually(f.clone()));
            next.push(LtlFormula::globally(f.clone()));
        }
        for a in &below {
            for b in &below {
                if a.depth() == d - 1 || b.depth() == d - 1 {
                    next.push(LtlFormula::and(a.clone(), b.clone()));
                    next.push(LtlFormula::or(a.clone(), b.clone()));
                    next.push(LtlFormula::implies(a.clone(), b.clone()));
                }
            }
        }
        levels.push(next);
    }
    levels.into_iter().flatten().collect()
}

/// A random formula of depth at most `depth` over `p(1)`, `q(1)`.
pub fn random_formula<R: Rng>(rng: &mut R, depth: usize) -> LtlFormula {
    if depth == 0 || rng.gen_bool(0.2) {
        return [LtlFormula::Top, LtlFormula::Bot, p(), q()][rng.gen_range(0..4)].clone();
    }
    let d = depth - 1;
    match rng.gen_range(0..6) {
        0 => LtlFormula::not(random_formula(rng, d)),
        1 => LtlFormula::eventually(random_formula(rng, d)),
        2 => LtlFormula::globally(random_formula(rng, d)),
        3 => LtlFormula::and(random_formula(rng, d), random_formula(rng, d)),
        4 => LtlFormula::or(random_formula(rng, d), random_formula(rng, d)),
        _ => LtlFormula::implies(random_formula(rng, d), random_formula(rng, d)),
    }
}

/// Subformulas in post-order, children before parents.
fn subformulas(f: &LtlFormula, out: &mut Vec<LtlFormula>) {
    use LtlFormula::*;
    match f {
        Top | Bot | Prop(..) => {}
        Not(a) | Eventually(a) | Globally(a) => subformulas(a, out),
        And(a, b) | Or(a, b) | Implies(a, b) => {
            subformulas(a, out);
            subformulas(b, out);
        }
    }
    if !out.contains(f) {
        out.push(f.clone());
    }
}

/// Nonempty state sets whose induced subgraph is strongly connected and
/// contains a cycle: exactly the sets of states an infinite path can visit
/// infinitely often.
fn recurrent_sets(k: &KripkeStructure) -> Vec<Vec<usize>> {
    let n = k.len();
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let set: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let inside = |s: usize| mask & (1 << s) != 0;
        let reach = |from: usize| {
            let mut seen = HashSet::new();
            let mut stack: Vec<usize> = k.succ[from].iter().copied().filter(|&t| inside(t)).collect();
            while let Some(s) = stack.pop() {
                if seen.insert(s) {
                    stack.extend(k.succ[s].iter().copied().filter(|&t| inside(t)));
                }
            }
            seen
        };
        if set.iter().all(|&s| {
            let r = reach(s);
            set.iter().all(|t| r.contains(t))
        }) {
            out.push(set);
        }
    }
    out
}

/// A closed walk from `start` through every state of `set`, staying inside.
fn covering_walk(k: &KripkeStructure, set: &[usize], start: usize) -> Vec<usize> {
    // States after `from` up to and including `to` on a shortest
    // nonempty path inside `set`.
    let path = |from: usize, to: usize| -> Vec<usize> {
        let mut prev: HashMap<usize, usize> = HashMap::new();
        let mut queue = VecDeque::from([from]);
        while let Some(s) = queue.pop_front() {
            for &t in &k.succ[s] {
                if set.contains(&t) && !prev.contains_key(&t) {
                    prev.insert(t, s);
                    queue.push_back(t);
                }
            }
            if prev.contains_key(&to) {
                break;
            }
        }
        let mut p = vec![to];
        let mut cur = to;
        while prev[&cur] != from {
            cur = prev[&cur];
            p.push(cur);
        }
        p.reverse();
        p
    };
    let mut walk = vec![start];
    let mut cur = start;
    for &t in set.iter().filter(|&&t| t != start) {
        walk.extend(path(cur, t));
        cur = t;
    }
    let back = path(cur, start);
    walk.extend(&back[..back.len() - 1]);
    walk
}

/// Decides whether some infinite path from the initial state satisfies `f`.
///
/// On a path whose states from some point on stay in a recurrent set `C`
/// and visit each of its states infinitely often, every subformula's truth
/// there depends only on the current state and `C`. Earlier positions are
/// handled by a backward fixpoint over (state, truth vector) pairs. Returns
/// a witness lasso (prefix, cycle) when one exists.
pub fn exists_path(k: &KripkeStructure, f: &LtlFormula) -> Option<(Vec<usize>, Vec<usize>)> {
    use LtlFormula::*;
    let mut subs = Vec::new();
    subformulas(f, &mut subs);
    let idx = |g: &LtlFormula| subs.iter().position(|h| h == g).unwrap();
    let local = |s: usize, v: &mut Vec<bool>, next: &dyn Fn(usize) -> bool| {
        for (i, g) in subs.iter().enumerate() {
            v[i] = match g {
                Top => true,
                Bot => false,
                Prop(x, r) => k.holds(s, x.as_str(), r),
                Not(a) => !v[idx(a)],
                And(a, b) => v[idx(a)] && v[idx(b)],
                Or(a, b) => v[idx(a)] || v[idx(b)],
                Implies(a, b) => !v[idx(a)] || v[idx(b)],
                Eventually(a) => v[idx(a)] || next(i),
                Globally(a) => v[idx(a)] && next(i),
            };
        }
    };
    let top = idx(f);
    for set in recurrent_sets(k) {
        // Tail vectors: temporal operators range over the whole set.
        let mut tail: HashMap<usize, Vec<bool>> = set.iter().map(|&s| (s, vec![false; subs.len()])).collect();
        for (i, g) in subs.iter().enumerate() {
            let vals: Vec<bool> = set
                .iter()
                .map(|&s| {
                    let v = &tail[&s];
                    match g {
                        Top => true,
                        Bot => false,
                        Prop(x, r) => k.holds(s, x.as_str(), r),
                        Not(a) => !v[idx(a)],
                        And(a, b) => v[idx(a)] && v[idx(b)],
                        Or(a, b) => v[idx(a)] || v[idx(b)],
                        Implies(a, b) => !v[idx(a)] || v[idx(b)],
                        Eventually(a) => set.iter().any(|t| tail[t][idx(a)]),
                        Globally(a) => set.iter().all(|t| tail[t][idx(a)]),
                    }
                })
                .collect();
            for (&s, b) in set.iter().zip(vals) {
                tail.get_mut(&s).unwrap()[i] = b;
            }
        }
        // Backward closure: (state, vector) -> how it continues.
        #[derive(Clone)]
        enum Via {
            Tail,
            Step(usize, Vec<bool>),
        }
        let mut known: HashMap<(usize, Vec<bool>), Via> = HashMap::new();
        let mut work: Vec<(usize, Vec<bool>)> = Vec::new();
        for &s in &set {
            let key = (s, tail[&s].clone());
            if known.insert(key.clone(), Via::Tail).is_none() {
                work.push(key);
            }
        }
        while let Some((t, vt)) = work.pop() {
            for s in 0..k.len() {
                if !k.succ[s].contains(&t) {
                    continue;
                }
                let mut v = vec![false; subs.len()];
                local(s, &mut v, &|i| vt[i]);
                let key = (s, v);
                if !known.contains_key(&key) {
                    known.insert(key.clone(), Via::Step(t, vt.clone()));
                    work.push(key);
                }
            }
        }
        let start = known
            .keys()
            .find(|(s, v)| *s == k.initial && v[top])
            .cloned();
        if let Some(mut cur) = start {
            let mut prefix = Vec::new();
            loop {
                match known[&cur].clone() {
                    Via::Tail => {
                        let cycle = covering_walk(k, &set, cur.0);
                        return Some((prefix, cycle));
                    }
                    Via::Step(t, vt) => {
                        prefix.push(cur.0);
                        cur = (t, vt);
                    }
                }
            }
        }
    }
    None
}

/// Every lasso without repeated states: a simple path from the initial
/// state whose last state has an edge back into the path.
pub fn simple_lassos(k: &KripkeStructure) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    let mut stack = vec![vec![k.initial]];
    while let Some(path) = stack.pop() {
        let last = *path.last().unwrap();
        for &t in &k.succ[last] {
            if let Some(j) = path.iter().position(|&s| s == t) {
                out.push((path[..j].to_vec(), path[j..].to_vec()));
            } else {
                let mut longer = path.clone();
                longer.push(t);
                stack.push(longer);
            }
        }
    }
    out
}

pub fn lasso_labels(k: &KripkeStructure, states: &[usize]) -> Vec<Label> {
    states.iter().map(|&s| k.labels[s].clone()).collect()
}

/// Whether a lasso is a path of `k` from its initial state.
pub fn is_lasso_of(k: &KripkeStructure, prefix: &[usize], cycle: &[usize]) -> bool {
    let path: Vec<usize> = prefix.iter().chain(cycle).copied().collect();
    !cycle.is_empty()
        && path[0] == k.initial
        && path.windows(2).all(|w| k.has_edge(w[0], w[1]))
        && k.has_edge(*cycle.last().unwrap(), cycle[0])
}

/// Brute-force verdict for `f` on `k`: violated iff some path satisfies
/// `¬f`. Witnesses are confirmed with `eval_lasso`.
pub fn oracle_violated(k: &KripkeStructure, f: &LtlFormula) -> bool {
    let neg = LtlFormula::not(f.clone());
    match exists_path(k, &neg) {
        Some((prefix, cycle)) => {
            assert!(is_lasso_of(k, &prefix, &cycle), "oracle witness is not a path");
            assert!(
                eval_lasso(&neg, &lasso_labels(k, &prefix), &lasso_labels(k, &cycle)),
                "oracle witness does not satisfy the negation of {f}"
            );
            true
        }
        None => false,
    }
}

/// Relabels states by `perm` (old index -> new index).
pub fn permute(k: &KripkeStructure, perm: &[usize]) -> KripkeStructure {
    let n = k.len();
    let mut succ = vec![Vec::new(); n];
    let mut labels = vec![Label::new(); n];
    for s in 0..n {
        succ[perm[s]] = k.succ[s].iter().map(|&t| perm[t]).collect();
        labels[perm[s]] = k.labels[s].clone();
    }
    KripkeStructure {
        initial: perm[k.initial],
        succ,
        labels,
    }
}
