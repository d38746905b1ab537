mod common;

use amn_core::ltl::{accepts_lasso, check_kripke, eval_lasso, to_buchi, to_nnf, LtlFormula, Verdict};
use amn_core::statespace::{KripkeStructure, Label};
use common::{
    all_formulas, exists_path, is_lasso_of, kripke_family, label, lasso_labels, oracle_violated,
    permute, random_formula, simple_lassos,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Checks one case against the oracle and, when violated, the returned
/// counterexample.
fn agree(k: &KripkeStructure, f: &LtlFormula) {
    let expected = oracle_violated(k, f);
    let neg = LtlFormula::not(f.clone());
    match check_kripke(k, f) {
        Verdict::Holds => assert!(!expected, "{f} should be violated"),
        Verdict::Violated(l) => {
            assert!(expected, "{f} should hold");
            assert!(l.replays(k));
            assert!(is_lasso_of(k, &l.prefix, &l.cycle));
            assert!(eval_lasso(&neg, &l.prefix_labels, &l.cycle_labels), "{f}: bad counterexample");
        }
    }
    // any violating simple lasso implies a violation
    if !expected {
        for (pre, cyc) in simple_lassos(k) {
            assert!(!eval_lasso(&neg, &lasso_labels(k, &pre), &lasso_labels(k, &cyc)));
        }
    }
}

#[test]
fn oracle_covers_every_simple_lasso() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for k in kripke_family() {
        for _ in 0..40 {
            let f = random_formula(&mut rng, 3);
            let some_simple = simple_lassos(&k).into_iter().any(|(pre, cyc)| {
                eval_lasso(&f, &lasso_labels(&k, &pre), &lasso_labels(&k, &cyc))
            });
            if some_simple {
                assert!(exists_path(&k, &f).is_some(), "{f}");
            }
        }
    }
}

#[test]
fn oracle_needs_non_simple_cycles() {
    // hub with a p-loop and a q-loop: visiting both forever needs a cycle
    // through the hub twice
    let k = &kripke_family()[3];
    let f = LtlFormula::and(
        LtlFormula::globally(LtlFormula::eventually(common::p())),
        LtlFormula::globally(LtlFormula::eventually(common::q())),
    );
    assert!(simple_lassos(k).into_iter().all(|(pre, cyc)| {
        !eval_lasso(&f, &lasso_labels(k, &pre), &lasso_labels(k, &cyc))
    }));
    assert!(exists_path(k, &f).is_some());
    assert!(!check_kripke(k, &LtlFormula::not(f)).holds());
}

#[test]
fn model_check_agrees_on_all_depth_two_formulas() {
    let family = kripke_family();
    let formulas = all_formulas(2);
    assert!(formulas.len() > 10_000);
    for (i, f) in formulas.iter().enumerate() {
        agree(&family[i % family.len()], f);
    }
    for k in &family {
        for f in all_formulas(1) {
            agree(k, &f);
        }
    }
}

#[test]
fn model_check_agrees_on_random_depth_three_formulas() {
    let family = kripke_family();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..400 {
        let f = random_formula(&mut rng, 3);
        for k in &family {
            agree(k, &f);
        }
    }
}

#[test]
fn verdicts_invariant_under_renaming() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let perms4 = [[3, 1, 0, 2], [1, 2, 3, 0], [2, 0, 3, 1]];
    for k in kripke_family() {
        let n = k.len();
        for p in perms4 {
            let perm: Vec<usize> = p.iter().copied().filter(|&i| i < n).collect();
            if perm.len() != n {
                continue;
            }
            let k2 = permute(&k, &perm);
            for _ in 0..20 {
                let f = random_formula(&mut rng, 3);
                assert_eq!(check_kripke(&k, &f).holds(), check_kripke(&k2, &f).holds(), "{f}");
            }
        }
    }
}

fn arb_lasso() -> impl Strategy<Value = (Vec<Label>, Vec<Label>)> {
    (
        prop::collection::vec(0u8..4, 0..4),
        prop::collection::vec(0u8..4, 1..4),
    )
        .prop_map(|(a, b)| {
            (
                a.into_iter().map(label).collect(),
                b.into_iter().map(label).collect(),
            )
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn nnf_preserves_truth(seed in any::<u64>(), (pre, cyc) in arb_lasso()) {
        let f = random_formula(&mut ChaCha8Rng::seed_from_u64(seed), 4);
        let g = to_nnf(&f);
        prop_assert!(g.is_nnf());
        prop_assert_eq!(eval_lasso(&f, &pre, &cyc), eval_lasso(&g, &pre, &cyc));
        let not_f = LtlFormula::not(f.clone());
        prop_assert_eq!(eval_lasso(&not_f, &pre, &cyc), !eval_lasso(&f, &pre, &cyc));
    }

    #[test]
    fn automata_accept_exactly_the_models(seed in any::<u64>(), (pre, cyc) in arb_lasso()) {
        let f = random_formula(&mut ChaCha8Rng::seed_from_u64(seed), 3);
        let aut = to_buchi(&to_nnf(&f));
        prop_assert_eq!(accepts_lasso(&aut, &pre, &cyc), eval_lasso(&f, &pre, &cyc));
    }
}
