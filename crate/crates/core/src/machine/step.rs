use std::sync::Arc;

use num::Zero;
use thiserror::Error;

use super::config::{Closure, Configuration, Denotable, Exc, Frame, Value};
use crate::pi::{ControlEntry, DecScope, Keyword, PiCmd, PiDec, PiExp, PiOp};
use crate::Ident;

/// Faults end execution in an `EXT` configuration that records them.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Error)]
pub enum RuntimeFault {
    #[error("unbound identifier `{0}`")]
    UnboundIdentifier(Ident),
    #[error("division by zero")]
    DivisionByZero,
    #[error("type fault: {0}")]
    TypeFault(String),
    #[error("assignment to constant `{0}`")]
    AssignToConstant(Ident),
    #[error("`{0}` is not an operation")]
    CallOfNonOperation(Ident),
}

type Fault<T> = Result<T, RuntimeFault>;

fn type_fault<T>(msg: impl Into<String>) -> Fault<T> {
    Err(RuntimeFault::TypeFault(msg.into()))
}

/// All configurations reachable in one transition, in a fixed order
/// (left branch of a choice first). Empty for terminal configurations.
pub fn successors(c: &Configuration) -> Vec<Configuration> {
    if c.is_terminal() {
        return Vec::new();
    }
    let mut next = c.clone();
    let top = next.cnt.pop().expect("non-terminal has control");
    if let ControlEntry::Cmd(cmd) = &top {
        if let PiCmd::Choice(a, b) = &**cmd {
            let mut right = next.clone();
            next.cnt.push(ControlEntry::Cmd(a.clone()));
            right.cnt.push(ControlEntry::Cmd(b.clone()));
            return vec![next, right];
        }
    }
    match apply(&mut next, top) {
        Ok(()) => vec![next],
        Err(fault) => {
            let mut err = c.clone();
            err.exc = Exc::Ext;
            err.fault = Some(fault);
            vec![err]
        }
    }
}

fn apply(c: &mut Configuration, top: ControlEntry) -> Fault<()> {
    match top {
        ControlEntry::Exp(e) => exp(c, &e),
        ControlEntry::Cmd(k) => cmd(c, &k),
        ControlEntry::Dec(d) => dec(c, &d),
        ControlEntry::Blk(b) => {
            enter_frame(c, c.env.clone());
            push_block(c, b.decls.clone(), b.body.clone());
            Ok(())
        }
        ControlEntry::Keyword(kw) => keyword(c, kw),
    }
}

fn exp(c: &mut Configuration, e: &Arc<PiExp>) -> Fault<()> {
    match &**e {
        PiExp::Rat(r) => c.val.push(Value::Rat(r.clone())),
        PiExp::Boo(b) => c.val.push(Value::Boo(*b)),
        PiExp::Idn(x) => {
            let v = match lookup(c, x)? {
                Denotable::Loc(l) => c
                    .sto
                    .get(l)
                    .cloned()
                    .ok_or_else(|| RuntimeFault::TypeFault(format!("dangling location {l}")))?,
                Denotable::Const(v) => v.clone(),
                Denotable::Closure(_) => {
                    return type_fault(format!("operation `{x}` used as a value"))
                }
            };
            c.val.push(v);
        }
        PiExp::Bin(op, a, b) => {
            c.cnt.push(ControlEntry::Keyword(Keyword::Op(*op)));
            c.cnt.push(ControlEntry::Exp(b.clone()));
            c.cnt.push(ControlEntry::Exp(a.clone()));
        }
        PiExp::Not(a) => {
            c.cnt.push(ControlEntry::Keyword(Keyword::Not));
            c.cnt.push(ControlEntry::Exp(a.clone()));
        }
    }
    Ok(())
}

fn cmd(c: &mut Configuration, k: &Arc<PiCmd>) -> Fault<()> {
    match &**k {
        PiCmd::Nop => {}
        PiCmd::Assign(x, e) => {
            c.val.push(Value::Idn(x.clone()));
            c.cnt.push(ControlEntry::Keyword(Keyword::Assign));
            c.cnt.push(ControlEntry::Exp(e.clone()));
        }
        PiCmd::If(b, k1, k2) => {
            c.val.push(Value::Cmd(k1.clone()));
            c.val.push(Value::Cmd(k2.clone()));
            c.cnt.push(ControlEntry::Keyword(Keyword::If));
            c.cnt.push(ControlEntry::Exp(b.clone()));
        }
        PiCmd::Loop(b, _) => {
            c.val.push(Value::Loop(k.clone()));
            c.cnt.push(ControlEntry::Keyword(Keyword::Loop));
            c.cnt.push(ControlEntry::Exp(b.clone()));
        }
        PiCmd::Choice(..) => unreachable!("handled in successors"),
        PiCmd::Seq(a, b) => {
            c.cnt.push(ControlEntry::Cmd(b.clone()));
            c.cnt.push(ControlEntry::Cmd(a.clone()));
        }
        PiCmd::Cal(f, acts) => {
            c.val.push(Value::Idn(f.clone()));
            c.cnt.push(ControlEntry::Keyword(Keyword::Cal));
            for e in acts.exps().into_iter().rev() {
                c.cnt.push(ControlEntry::Exp(e.clone()));
            }
        }
        PiCmd::Blk(b) => c.cnt.push(ControlEntry::Blk(b.clone())),
        PiCmd::Prn(e) => {
            c.cnt.push(ControlEntry::Keyword(Keyword::Print));
            c.cnt.push(ControlEntry::Exp(e.clone()));
        }
        PiCmd::Exit => {
            c.exc = Exc::Ext;
            c.cnt.clear();
        }
    }
    Ok(())
}

fn dec(c: &mut Configuration, d: &Arc<PiDec>) -> Fault<()> {
    match &**d {
        PiDec::Ref(x, e) => {
            c.val.push(Value::Idn(x.clone()));
            c.cnt.push(ControlEntry::Keyword(Keyword::Ref));
            c.cnt.push(ControlEntry::Exp(e.clone()));
        }
        PiDec::Cns(x, e) => {
            c.val.push(Value::Idn(x.clone()));
            c.cnt.push(ControlEntry::Keyword(Keyword::Cns));
            c.cnt.push(ControlEntry::Exp(e.clone()));
        }
        PiDec::Prc(x, formals, body) => {
            let closure = Closure {
                name: x.clone(),
                formals: formals.as_ref().map(|f| f.idents()).unwrap_or_default(),
                body: body.clone(),
                env: c.env.clone(),
            };
            c.val
                .push(Value::Bind(x.clone(), Box::new(Denotable::Closure(Arc::new(closure)))));
        }
        PiDec::Dec(first, scope) => {
            c.cnt.push(match scope {
                DecScope::Dec(d) => ControlEntry::Dec(d.clone()),
                DecScope::Blk(b) => ControlEntry::Blk(b.clone()),
            });
            c.cnt.push(ControlEntry::Keyword(Keyword::Dec));
            c.cnt.push(ControlEntry::Dec(first.clone()));
        }
    }
    Ok(())
}

fn keyword(c: &mut Configuration, kw: Keyword) -> Fault<()> {
    match kw {
        Keyword::Op(op) => {
            let rhs = pop(c)?;
            let lhs = pop(c)?;
            c.val.push(binary(op, lhs, rhs)?);
        }
        Keyword::Not => {
            let b = pop_bool(c)?;
            c.val.push(Value::Boo(!b));
        }
        Keyword::Assign => {
            let v = pop(c)?;
            let x = pop_idn(c)?;
            if !v.is_storable() {
                return type_fault(format!("cannot store `{v}`"));
            }
            match lookup(c, &x)? {
                Denotable::Loc(l) => {
                    let l = *l;
                    Arc::make_mut(&mut c.sto).insert(l, v);
                }
                Denotable::Const(_) => return Err(RuntimeFault::AssignToConstant(x)),
                Denotable::Closure(_) => {
                    return type_fault(format!("assignment to operation `{x}`"))
                }
            }
        }
        Keyword::If => {
            let b = pop_bool(c)?;
            let k2 = pop_cmd(c)?;
            let k1 = pop_cmd(c)?;
            c.cnt.push(ControlEntry::Cmd(if b { k1 } else { k2 }));
        }
        Keyword::Loop => {
            let b = pop_bool(c)?;
            let lp = match pop(c)? {
                Value::Loop(lp) => lp,
                v => return type_fault(format!("expected a loop, found `{v}`")),
            };
            if b {
                let PiCmd::Loop(_, body) = &*lp else {
                    return type_fault("malformed loop value");
                };
                let body = body.clone();
                c.cnt.push(ControlEntry::Cmd(lp));
                c.cnt.push(ControlEntry::Cmd(body));
            }
        }
        Keyword::Dec => match pop(c)? {
            Value::Bind(x, d) => {
                Arc::make_mut(&mut c.env).insert(x, *d);
            }
            v => return type_fault(format!("expected a binding, found `{v}`")),
        },
        Keyword::Ref => {
            let v = pop(c)?;
            let x = pop_idn(c)?;
            if !v.is_storable() {
                return type_fault(format!("cannot store `{v}`"));
            }
            let l = allocate(c, v);
            c.val.push(Value::Bind(x, Box::new(Denotable::Loc(l))));
        }
        Keyword::Cns => {
            let v = pop(c)?;
            let x = pop_idn(c)?;
            c.val.push(Value::Bind(x, Box::new(Denotable::Const(v))));
        }
        Keyword::BlkCmd => {
            let frame = c
                .frames
                .pop()
                .ok_or_else(|| RuntimeFault::TypeFault("block exit without frame".into()))?;
            if !c.locs.is_empty() {
                let sto = Arc::make_mut(&mut c.sto);
                for l in &c.locs {
                    sto.remove(l);
                }
            }
            c.env = frame.env;
            c.locs = frame.locs;
        }
        Keyword::Cal => call(c)?,
        Keyword::Print => {
            let v = pop(c)?;
            c.out.push(v);
        }
    }
    Ok(())
}

fn call(c: &mut Configuration) -> Fault<()> {
    let mut actuals = Vec::new();
    let f = loop {
        match pop(c)? {
            Value::Idn(f) => break f,
            v => actuals.push(v),
        }
    };
    actuals.reverse();
    let closure = match lookup(c, &f) {
        Ok(Denotable::Closure(cl)) => cl.clone(),
        Ok(_) => return Err(RuntimeFault::CallOfNonOperation(f)),
        Err(e) => return Err(e),
    };
    if closure.formals.len() != actuals.len() {
        return type_fault(format!(
            "`{f}` expects {} argument(s), got {}",
            closure.formals.len(),
            actuals.len()
        ));
    }
    if let Some(v) = actuals.iter().find(|v| !v.is_storable()) {
        return type_fault(format!("cannot pass `{v}`"));
    }
    enter_frame(c, closure.env.clone());
    for (x, v) in closure.formals.iter().zip(actuals) {
        let l = allocate(c, v);
        Arc::make_mut(&mut c.env).insert(x.clone(), Denotable::Loc(l));
    }
    push_block(c, closure.body.decls.clone(), closure.body.body.clone());
    Ok(())
}

/// Saves the current environment and locations and installs `env` with no
/// locations of its own.
fn enter_frame(c: &mut Configuration, env: Arc<super::config::Env>) {
    let saved = Frame {
        env: std::mem::replace(&mut c.env, env),
        locs: std::mem::take(&mut c.locs),
    };
    c.frames.push(saved);
}

fn push_block(c: &mut Configuration, decls: Option<Arc<PiDec>>, body: Arc<PiCmd>) {
    c.cnt.push(ControlEntry::Keyword(Keyword::BlkCmd));
    c.cnt.push(ControlEntry::Cmd(body));
    if let Some(d) = decls {
        c.cnt.push(ControlEntry::Keyword(Keyword::Dec));
        c.cnt.push(ControlEntry::Dec(d));
    }
}

/// Smallest location not in use.
fn allocate(c: &mut Configuration, v: Value) -> usize {
    let l = c
        .sto
        .keys()
        .enumerate()
        .find(|(i, k)| i != *k)
        .map_or(c.sto.len(), |(i, _)| i);
    Arc::make_mut(&mut c.sto).insert(l, v);
    c.locs.insert(l);
    l
}

fn lookup<'c>(c: &'c Configuration, x: &Ident) -> Fault<&'c Denotable> {
    c.env
        .get(x)
        .ok_or_else(|| RuntimeFault::UnboundIdentifier(x.clone()))
}

fn pop(c: &mut Configuration) -> Fault<Value> {
    c.val
        .pop()
        .ok_or_else(|| RuntimeFault::TypeFault("value stack underflow".into()))
}

fn pop_bool(c: &mut Configuration) -> Fault<bool> {
    match pop(c)? {
        Value::Boo(b) => Ok(b),
        v => type_fault(format!("expected a boolean, found `{v}`")),
    }
}

fn pop_idn(c: &mut Configuration) -> Fault<Ident> {
    match pop(c)? {
        Value::Idn(x) => Ok(x),
        v => type_fault(format!("expected an identifier, found `{v}`")),
    }
}

fn pop_cmd(c: &mut Configuration) -> Fault<Arc<PiCmd>> {
    match pop(c)? {
        Value::Cmd(k) => Ok(k),
        v => type_fault(format!("expected a command, found `{v}`")),
    }
}

pub(crate) fn binary(op: PiOp, lhs: Value, rhs: Value) -> Fault<Value> {
    use PiOp::*;
    Ok(match (op, lhs, rhs) {
        (Add, Value::Rat(a), Value::Rat(b)) => Value::Rat(a + b),
        (Sub, Value::Rat(a), Value::Rat(b)) => Value::Rat(a - b),
        (Mul, Value::Rat(a), Value::Rat(b)) => Value::Rat(a * b),
        (Div, Value::Rat(_), Value::Rat(b)) if b.is_zero() => {
            return Err(RuntimeFault::DivisionByZero)
        }
        (Div, Value::Rat(a), Value::Rat(b)) => Value::Rat(a / b),
        (Lt, Value::Rat(a), Value::Rat(b)) => Value::Boo(a < b),
        (Leq, Value::Rat(a), Value::Rat(b)) => Value::Boo(a <= b),
        (Eq, Value::Rat(a), Value::Rat(b)) => Value::Boo(a == b),
        (Eq, Value::Boo(a), Value::Boo(b)) => Value::Boo(a == b),
        (And, Value::Boo(a), Value::Boo(b)) => Value::Boo(a && b),
        (Or, Value::Boo(a), Value::Boo(b)) => Value::Boo(a || b),
        (op, a, b) => {
            return type_fault(format!("`{}` cannot combine `{a}` and `{b}`", op.name()))
        }
    })
}
