use std::sync::Arc;

use super::*;
use crate::compiler::compile_machine;
use crate::frontend::{parse_machine_source, parse_substitution_source};
use crate::pi::{ControlEntry, Keyword, PiExp, PiOp};
use crate::rat;

const MUTEX: &str = include_str!("../../examples/mutex.mch");

fn unit(src: &str) -> CompileUnit {
    compile_machine(&parse_machine_source(src).unwrap()).unwrap()
}

fn start(u: &CompileUnit, subst: &str) -> Configuration {
    let entry = u
        .compile_entry(&parse_substitution_source(subst).unwrap())
        .unwrap();
    initial_configuration(u, &entry).unwrap()
}

fn step1(c: &Configuration) -> Configuration {
    let mut s = successors(c);
    assert_eq!(s.len(), 1);
    s.pop().unwrap()
}

#[test]
fn add_unfolds_then_applies() {
    let e = PiExp::bin(PiOp::Add, PiExp::int(1), PiExp::int(2));
    let c0 = Configuration::with_control(vec![ControlEntry::Exp(Arc::new(e))]);
    let c1 = step1(&c0);
    assert_eq!(c1.cnt.len(), 3);
    assert_eq!(c1.cnt[0], ControlEntry::Keyword(Keyword::Op(PiOp::Add)));
    let c2 = step1(&c1);
    let c3 = step1(&c2);
    assert_eq!(c3.val, vec![Value::Rat(rat(1)), Value::Rat(rat(2))]);
    let c4 = step1(&c3);
    assert_eq!(c4.val, vec![Value::Rat(rat(3))]);
    assert!(c4.is_terminal());
    assert!(successors(&c4).is_empty());
}

#[test]
fn choice_has_two_successors_left_first() {
    let k = PiCmd::choice(PiCmd::assign("x", PiExp::int(1)), PiCmd::Nop);
    let c0 = Configuration::with_control(vec![ControlEntry::Cmd(Arc::new(k))]);
    let s = successors(&c0);
    assert_eq!(s.len(), 2);
    assert!(matches!(&s[0].cnt[0], ControlEntry::Cmd(c) if matches!(**c, PiCmd::Assign(..))));
    assert!(matches!(&s[1].cnt[0], ControlEntry::Cmd(c) if **c == PiCmd::Nop));
}

#[test]
fn false_loop_terminates() {
    let k = PiCmd::looping(PiExp::Boo(false), PiCmd::Nop);
    let c0 = Configuration::with_control(vec![ControlEntry::Cmd(Arc::new(k))]);
    let r = run_to_completion(c0, ChoicePolicy::First, 10).unwrap();
    assert_eq!(r.steps, 3);
    assert!(r.final_config.val.is_empty());
    assert!(r.final_config.cnt.is_empty());
}

#[test]
fn division_by_zero_faults() {
    let e = PiExp::bin(PiOp::Div, PiExp::int(1), PiExp::int(0));
    let c0 = Configuration::with_control(vec![ControlEntry::Exp(Arc::new(e))]);
    let r = run_to_completion(c0, ChoicePolicy::First, 10).unwrap();
    assert_eq!(r.final_config.exc, Exc::Ext);
    assert_eq!(r.final_config.fault, Some(RuntimeFault::DivisionByZero));
}

#[test]
fn unbound_identifier_faults() {
    let c0 = Configuration::with_control(vec![ControlEntry::Exp(Arc::new(PiExp::idn("z")))]);
    let s = successors(&c0);
    assert_eq!(
        s[0].fault,
        Some(RuntimeFault::UnboundIdentifier("z".into()))
    );
    assert!(successors(&s[0]).is_empty());
}

#[test]
fn assign_to_constant_faults() {
    let u = unit("MACHINE M CONSTANTS k VALUES k = 1 END");
    let c = initial_configuration(&u, &PiCmd::assign("k", PiExp::int(2))).unwrap();
    let r = run_to_completion(c, ChoicePolicy::First, 1000).unwrap();
    assert_eq!(r.final_config.fault, Some(RuntimeFault::AssignToConstant("k".into())));
}

#[test]
fn assignment_settles_and_store_is_released() {
    let u = unit(MUTEX);
    let r = run_to_completion(start(&u, "p1 := wait"), ChoicePolicy::First, 1000).unwrap();
    let settled = r.settled.unwrap();
    assert_eq!(read_variable(&settled, "p1").unwrap(), Value::Rat(rat(1)));
    assert_eq!(read_variable(&settled, "p2").unwrap(), Value::Rat(rat(0)));
    assert_eq!(read_variable(&settled, "crit").unwrap(), Value::Rat(rat(2)));
    let fin = r.final_config;
    assert!(fin.sto.is_empty());
    assert!(fin.env.is_empty());
    assert!(fin.frames.is_empty());
    assert_eq!(fin.exc, Exc::Cnt);
    assert!(matches!(
        read_variable(&fin, "p1"),
        Err(RuntimeFault::UnboundIdentifier(_))
    ));
}

#[test]
fn mutex_does_not_terminate() {
    let u = unit(MUTEX);
    let err = run_to_completion(start(&u, "mutex"), ChoicePolicy::First, 5000).unwrap_err();
    let RunError::StepLimitExceeded { last, steps } = err;
    assert_eq!(steps, 5000);
    assert!(!last.is_terminal());
}

#[test]
fn random_runs_are_reproducible() {
    let u = unit(MUTEX);
    let run = |seed| match run_to_completion(start(&u, "mutex"), ChoicePolicy::Random(seed), 3000) {
        Err(RunError::StepLimitExceeded { last, .. }) => *last,
        Ok(_) => panic!("mutex terminated"),
    };
    assert_eq!(run(7), run(7));
}

#[test]
fn successors_are_deterministic() {
    let u = unit(MUTEX);
    let mut c = start(&u, "mutex");
    for _ in 0..200 {
        let a = successors(&c);
        assert_eq!(a, successors(&c));
        c = a.into_iter().last().unwrap();
    }
}

#[test]
fn procedures_take_value_parameters() {
    let u = unit(
        "MACHINE M VARIABLES x VALUES x = 0 OPERATIONS \
         inc(n) = x := x + n + 1 END",
    );
    let r = run_to_completion(start(&u, "inc(4)"), ChoicePolicy::First, 1000).unwrap();
    let s = r.settled.unwrap();
    assert_eq!(read_variable(&s, "x").unwrap(), Value::Rat(rat(5)));
    assert!(matches!(
        read_variable(&s, "n"),
        Err(RuntimeFault::UnboundIdentifier(_))
    ));
}

#[test]
fn locations_are_reused_smallest_first() {
    // x at 0; the call's parameter takes 1 and is released afterwards.
    let u = unit(
        "MACHINE M VARIABLES x VALUES x = 0 OPERATIONS \
         set(n) = x := n END",
    );
    let mut c = start(&u, "set(3) OR set(4)");
    let mut max_loc = 0;
    while !c.is_terminal() {
        if let Some(&l) = c.sto.keys().last() {
            max_loc = max_loc.max(l);
        }
        c = successors(&c).remove(0);
    }
    assert_eq!(max_loc, 1);
}

#[test]
fn wrong_arity_rejected_at_start() {
    let u = unit("MACHINE M OPERATIONS f(a) = BEGIN a := a END END");
    let entry = PiCmd::Cal("f".into(), crate::pi::PiActuals::Empty);
    assert!(matches!(
        initial_configuration(&u, &entry),
        Err(CompileError::ArityMismatch { expected: 1, got: 0, .. })
    ));
}

#[test]
fn empty_unit_initial_configuration() {
    let u = unit("MACHINE M END");
    let c = initial_configuration(&u, &PiCmd::Nop).unwrap();
    assert_eq!(
        c.cnt,
        vec![ControlEntry::Blk(Arc::new(crate::pi::PiBlk::new(PiCmd::Nop)))]
    );
    assert!(c.val.is_empty() && c.env.is_empty() && c.sto.is_empty());
    let text = c.to_string();
    assert!(text.contains("cnt: [blk(nop)]"));
    assert!(text.ends_with("exc: CNT"));
}

#[test]
fn print_and_exit() {
    let k = PiCmd::seq(
        PiCmd::Prn(Arc::new(PiExp::int(9))),
        PiCmd::seq(PiCmd::Exit, PiCmd::Prn(Arc::new(PiExp::int(1)))),
    );
    let c0 = Configuration::with_control(vec![ControlEntry::Cmd(Arc::new(k))]);
    let r = run_to_completion(c0, ChoicePolicy::First, 100).unwrap();
    assert_eq!(r.final_config.out, vec![Value::Rat(rat(9))]);
    assert_eq!(r.final_config.exc, Exc::Ext);
    assert_eq!(r.final_config.fault, None);
}
