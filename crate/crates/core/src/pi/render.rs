//! Prefix rendering of pi terms, e.g. `assign(idn("p1"), rat(1))`.
//!
//! The format is stable: equal renderings identify structurally equal terms.

use std::fmt::{self, Write};

use super::{ControlEntry, DecScope, PiActuals, PiBlk, PiCmd, PiDec, PiExp, PiFormals};
use crate::fmt_rational;

/// Types with a canonical prefix rendering.
pub trait Render {
    fn render_into(&self, out: &mut String);

    fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out);
        out
    }
}

fn idn(out: &mut String, name: &crate::Ident) {
    let _ = write!(out, "idn({:?})", name.as_str());
}

fn call<const N: usize>(out: &mut String, name: &str, args: [&dyn Render; N]) {
    out.push_str(name);
    out.push('(');
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        a.render_into(out);
    }
    out.push(')');
}

impl Render for crate::Ident {
    fn render_into(&self, out: &mut String) {
        idn(out, self);
    }
}

impl Render for PiExp {
    fn render_into(&self, out: &mut String) {
        match self {
            PiExp::Idn(x) => idn(out, x),
            PiExp::Rat(r) => {
                let _ = write!(out, "rat({})", fmt_rational(r));
            }
            PiExp::Boo(b) => {
                let _ = write!(out, "boo({b})");
            }
            PiExp::Bin(op, a, b) => call(out, op.name(), [&**a, &**b]),
            PiExp::Not(a) => call(out, "not", [&**a]),
        }
    }
}

impl Render for PiActuals {
    fn render_into(&self, out: &mut String) {
        match self {
            PiActuals::Empty => {}
            PiActuals::Exp(e) => e.render_into(out),
            PiActuals::Act(e, rest) => call(out, "act", [&**e, &**rest]),
        }
    }
}

impl Render for PiFormals {
    fn render_into(&self, out: &mut String) {
        match self {
            PiFormals::Par(x) => call(out, "par", [x]),
            PiFormals::For(a, b) => call(out, "for", [&**a, &**b]),
        }
    }
}

impl Render for PiCmd {
    fn render_into(&self, out: &mut String) {
        match self {
            PiCmd::Nop => out.push_str("nop"),
            PiCmd::Exit => out.push_str("exit"),
            PiCmd::Assign(x, e) => call(out, "assign", [x, &**e]),
            PiCmd::Choice(a, b) => call(out, "choice", [&**a, &**b]),
            PiCmd::Seq(a, b) => call(out, "seq", [&**a, &**b]),
            PiCmd::Loop(c, k) => call(out, "loop", [&**c, &**k]),
            PiCmd::If(c, a, b) => call(out, "if", [&**c, &**a, &**b]),
            PiCmd::Cal(f, acts) if acts.is_empty() => call(out, "cal", [f]),
            PiCmd::Cal(f, acts) => call(out, "cal", [f, acts]),
            PiCmd::Blk(b) => b.render_into(out),
            PiCmd::Prn(e) => call(out, "prn", [&**e]),
        }
    }
}

impl Render for PiBlk {
    fn render_into(&self, out: &mut String) {
        match &self.decls {
            Some(d) => call(out, "blk", [&**d, &*self.body]),
            None => call(out, "blk", [&*self.body]),
        }
    }
}

impl Render for PiDec {
    fn render_into(&self, out: &mut String) {
        match self {
            PiDec::Ref(x, e) => call(out, "ref", [x, &**e]),
            PiDec::Cns(x, e) => call(out, "cns", [x, &**e]),
            PiDec::Prc(x, Some(fs), b) => call(out, "prc", [x, fs, &**b]),
            PiDec::Prc(x, None, b) => call(out, "prc", [x, &**b]),
            PiDec::Dec(d, DecScope::Dec(s)) => call(out, "dec", [&**d, &**s]),
            PiDec::Dec(d, DecScope::Blk(s)) => call(out, "dec", [&**d, &**s]),
        }
    }
}

impl Render for ControlEntry {
    fn render_into(&self, out: &mut String) {
        match self {
            ControlEntry::Exp(e) => e.render_into(out),
            ControlEntry::Cmd(c) => c.render_into(out),
            ControlEntry::Dec(d) => d.render_into(out),
            ControlEntry::Blk(b) => b.render_into(out),
            ControlEntry::Keyword(k) => out.push_str(k.name()),
        }
    }
}

macro_rules! display_via_render {
    ($($t:ty),*) => {$(
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.render())
            }
        }
    )*};
}

display_via_render!(PiExp, PiCmd, PiDec, PiBlk, ControlEntry);
