use super::formula::LtlFormula;
use crate::statespace::Label;
use crate::Rational;

/// A set of true propositions.
pub trait Valuation {
    fn holds(&self, var: &str, value: &Rational) -> bool;
}

impl Valuation for Label {
    fn holds(&self, var: &str, value: &Rational) -> bool {
        self.iter().any(|(v, r)| v.as_str() == var && r == value)
    }
}

impl<V: Valuation + ?Sized> Valuation for &V {
    fn holds(&self, var: &str, value: &Rational) -> bool {
        (**self).holds(var, value)
    }
}

/// Truth of `f` at the first position of the infinite word
/// `prefix · cycle^ω`. `cycle` must be nonempty.
pub fn eval_lasso<V: Valuation>(f: &LtlFormula, prefix: &[V], cycle: &[V]) -> bool {
    assert!(!cycle.is_empty(), "lasso cycle must be nonempty");
    let positions: Vec<&V> = prefix.iter().chain(cycle).collect();
    table(f, &positions, prefix.len())[0]
}

/// Truth of `f` at every position; the successor of the last position is
/// `loop_start`.
fn table<V: Valuation>(f: &LtlFormula, pos: &[&V], loop_start: usize) -> Vec<bool> {
    use LtlFormula::*;
    let n = pos.len();
    match f {
        Top => vec![true; n],
        Bot => vec![false; n],
        Prop(v, r) => pos.iter().map(|l| l.holds(v.as_str(), r)).collect(),
        Not(a) => table(a, pos, loop_start).into_iter().map(|b| !b).collect(),
        And(a, b) | Or(a, b) | Implies(a, b) => {
            let ta = table(a, pos, loop_start);
            let tb = table(b, pos, loop_start);
            ta.into_iter()
                .zip(tb)
                .map(|(x, y)| match f {
                    And(..) => x && y,
                    Or(..) => x || y,
                    _ => !x || y,
                })
                .collect()
        }
        Eventually(a) | Globally(a) => {
            // Positions reachable from i are i.. plus the whole cycle.
            let ta = table(a, pos, loop_start);
            let any = matches!(f, Eventually(_));
            let on_cycle = if any {
                ta[loop_start..].iter().any(|&b| b)
            } else {
                ta[loop_start..].iter().all(|&b| b)
            };
            let mut out = vec![on_cycle; n];
            let mut acc = on_cycle;
            for i in (0..loop_start).rev() {
                acc = if any { acc || ta[i] } else { acc && ta[i] };
                out[i] = acc;
            }
            out
        }
    }
}
