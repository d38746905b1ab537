//! Command loop shared by the interactive REPL and batch mode.

use std::fmt::Display;
use std::io::{BufRead, Write};

use amn_core::compiler::{compile_machine, CompileUnit, Literal};
use amn_core::frontend::{parse_machine_source, parse_substitution_source, pretty_machine};
use amn_core::ltl::{model_check_with, parse_ltl_with, Verdict};
use amn_core::machine::{
    initial_configuration, run_to_completion, ChoicePolicy, Configuration, RunError,
};
use amn_core::pi::{PiCmd, Render};
use amn_core::statespace::{format_valuation, parse_condition, search_with, valuation, SearchOutcome};
use amn_core::Parallelism;

pub const USAGE: &str = "\
commands:
  load <path>                          load and compile a machine
  show                                 print the loaded machine
  show pi                              print the compiled pi term
  run [random <seed>] <subst> [steps <n>]
                                       execute a substitution
  search [<n>] <subst> st <cond>       find the n-th state satisfying cond
  mc <subst> |= <ltl>                  model check an LTL formula
  set state-limit <n> | step-limit <n> | trace vars|full
  help                                 show this message
  quit                                 leave";

/// How much of each trace state `search` prints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verbosity {
    Vars,
    Full,
}

#[derive(Debug, Clone)]
pub struct Session {
    pub loaded: Option<CompileUnit>,
    pub state_limit: usize,
    pub step_limit: usize,
    pub verbosity: Verbosity,
}

impl Default for Session {
    fn default() -> Self {
        Session {
            loaded: None,
            state_limit: 1_000_000,
            step_limit: 100_000,
            verbosity: Verbosity::Vars,
        }
    }
}

/// Ordered by severity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Ok,
    /// A search found no solution or a formula was violated.
    Negative,
    Error,
    Quit,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok | Status::Quit => 0,
            Status::Negative => 2,
            Status::Error => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutput {
    pub text: String,
    pub status: Status,
}

impl CommandOutput {
    fn ok(text: impl Into<String>) -> Self {
        CommandOutput {
            text: text.into(),
            status: Status::Ok,
        }
    }
}

type CmdResult = Result<CommandOutput, String>;

fn err(e: impl Display) -> String {
    e.to_string()
}

fn plural(n: usize, word: &str) -> String {
    format!("{n} {word}{}", if n == 1 { "" } else { "s" })
}

/// Executes one command line. The session changes only on a successful
/// `load` or `set`.
pub fn repl_command(session: &mut Session, line: &str) -> CommandOutput {
    let line = line.trim();
    let (cmd, rest) = match line.split_once(char::is_whitespace) {
        Some((c, r)) => (c, r.trim()),
        None => (line, ""),
    };
    let result = match cmd {
        "" => Ok(CommandOutput::ok("")),
        _ if cmd.starts_with('#') => Ok(CommandOutput::ok("")),
        "load" => load(session, rest),
        "show" => show(session, rest),
        "run" => run(session, rest),
        "search" => search(session, rest),
        "mc" => mc(session, rest),
        "set" => set(session, rest),
        "help" => Ok(CommandOutput::ok(USAGE)),
        "quit" | "exit" => Ok(CommandOutput {
            text: String::new(),
            status: Status::Quit,
        }),
        other => {
            return CommandOutput {
                text: format!("error: unknown command `{other}`\n{USAGE}"),
                status: Status::Error,
            }
        }
    };
    result.unwrap_or_else(|e| CommandOutput {
        text: format!("error: {}", e.replace('\n', " ")),
        status: Status::Error,
    })
}

fn loaded(session: &Session) -> Result<&CompileUnit, String> {
    session
        .loaded
        .as_ref()
        .ok_or_else(|| "no machine loaded; use `load <path>`".to_string())
}

fn load(session: &mut Session, path: &str) -> CmdResult {
    if path.is_empty() {
        return Err("usage: load <path>".into());
    }
    let src = std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?;
    let unit = compile_machine(&parse_machine_source(&src).map_err(err)?).map_err(err)?;
    let m = &unit.machine;
    let text = format!(
        "Loaded machine {} ({}, {}, {}).",
        m.name,
        plural(m.variables.len(), "variable"),
        plural(m.constants.len(), "constant"),
        plural(m.operations.len(), "operation")
    );
    session.loaded = Some(unit);
    Ok(CommandOutput::ok(text))
}

fn show(session: &Session, rest: &str) -> CmdResult {
    let unit = loaded(session)?;
    match rest {
        "" => Ok(CommandOutput::ok(pretty_machine(&unit.machine).trim_end())),
        "pi" => Ok(CommandOutput::ok(match &unit.pi_decl {
            Some(d) => d.render(),
            None => "(no declarations)".to_string(),
        })),
        _ => Err("usage: show [pi]".into()),
    }
}

fn entry(unit: &CompileUnit, text: &str) -> Result<PiCmd, String> {
    let ast = parse_substitution_source(text).map_err(err)?;
    let cmd = unit.compile_entry(&ast).map_err(err)?;
    Ok(cmd)
}

fn valuation_line(unit: &CompileUnit, c: &Configuration) -> String {
    format_valuation(unit, &valuation(unit, c))
}

fn run(session: &Session, rest: &str) -> CmdResult {
    let unit = loaded(session)?;
    let mut words: Vec<&str> = rest.split_whitespace().collect();
    let mut policy = ChoicePolicy::First;
    if words.first() == Some(&"random") {
        let seed = words
            .get(1)
            .and_then(|s| s.parse().ok())
            .ok_or("usage: run random <seed> <subst>")?;
        policy = ChoicePolicy::Random(seed);
        words.drain(..2);
    }
    let mut limit = session.step_limit;
    if words.len() >= 2 && words[words.len() - 2] == "steps" {
        limit = words[words.len() - 1]
            .parse()
            .map_err(|_| "steps expects a natural number".to_string())?;
        words.truncate(words.len() - 2);
    }
    if words.is_empty() {
        return Err("usage: run [random <seed>] <subst> [steps <n>]".into());
    }
    let cmd = entry(unit, &words.join(" "))?;
    let start = initial_configuration(unit, &cmd).map_err(err)?;
    let (mut text, shown) = match run_to_completion(start, policy, limit) {
        Ok(r) => {
            let head = match &r.final_config.fault {
                Some(f) => format!("Aborted after {} steps: {f}.", r.steps),
                None => format!("Terminated after {} steps.", r.steps),
            };
            let shown = match (&r.final_config.fault, r.settled) {
                (None, Some(s)) => s,
                _ => r.final_config,
            };
            (head, shown)
        }
        Err(RunError::StepLimitExceeded { last, steps }) => {
            (format!("Step limit of {steps} exceeded."), *last)
        }
    };
    text.push('\n');
    text.push_str(&valuation_line(unit, &shown));
    if session.verbosity == Verbosity::Full {
        text.push('\n');
        text.push_str(&shown.to_string());
    }
    Ok(CommandOutput::ok(text))
}

/// Splits at the last standalone occurrence of `word`.
fn split_at_word<'a>(text: &'a str, word: &str) -> Option<(&'a str, &'a str)> {
    let bytes = text.as_bytes();
    text.rmatch_indices(word).find_map(|(i, _)| {
        let before = i == 0 || bytes[i - 1].is_ascii_whitespace();
        let j = i + word.len();
        let after = j == text.len() || bytes[j].is_ascii_whitespace();
        (before && after).then(|| (text[..i].trim(), text[j..].trim()))
    })
}

fn search(session: &Session, rest: &str) -> CmdResult {
    let unit = loaded(session)?;
    let usage = "usage: search [<n>] <subst> st <cond>";
    let (n, rest) = match rest.split_once(char::is_whitespace) {
        Some((first, tail)) if first.chars().all(|c| c.is_ascii_digit()) => {
            let n: usize = first.parse().map_err(|_| usage.to_string())?;
            if n == 0 {
                return Err("solution numbers start at 1".into());
            }
            (n, tail.trim())
        }
        _ => (1, rest),
    };
    let (subst, cond) = split_at_word(rest, "st").ok_or(usage)?;
    if subst.is_empty() || cond.is_empty() {
        return Err(usage.into());
    }
    let cmd = entry(unit, subst)?;
    let cond = parse_condition(unit, cond).map_err(err)?;
    match search_with(unit, &cmd, &cond, n, session.state_limit, Parallelism::default())
        .map_err(err)?
    {
        SearchOutcome::NoSolution => Ok(CommandOutput {
            text: "No solution.".into(),
            status: Status::Negative,
        }),
        SearchOutcome::Found(trace) => {
            let mut text = format!("Solution {n} ({cond}):\n");
            match session.verbosity {
                Verbosity::Vars => text.push_str(&trace.render(unit)),
                Verbosity::Full => {
                    for (i, (idx, c)) in trace.steps.iter().zip(&trace.states).enumerate() {
                        text.push_str(&format!("state {i} (#{idx}):\n{c}\n"));
                    }
                    text.pop();
                }
            }
            Ok(CommandOutput::ok(text))
        }
    }
}

fn mc(session: &Session, rest: &str) -> CmdResult {
    let unit = loaded(session)?;
    let (subst, formula) = rest.split_once("|=").ok_or("usage: mc <subst> |= <ltl>")?;
    let cmd = entry(unit, subst.trim())?;
    let resolve = |name: &str| match unit.constant_value(name) {
        Some(Literal::Rat(r)) => Some(r.clone()),
        _ => None,
    };
    let f = parse_ltl_with(formula.trim(), &resolve).map_err(|e| format!("formula: {e}"))?;
    let (verdict, _) =
        model_check_with(unit, &cmd, &f, session.state_limit, Parallelism::default()).map_err(err)?;
    Ok(CommandOutput {
        text: verdict.render(),
        status: match verdict {
            Verdict::Holds => Status::Ok,
            Verdict::Violated(_) => Status::Negative,
        },
    })
}

fn set(session: &mut Session, rest: &str) -> CmdResult {
    let usage = "usage: set state-limit <n> | step-limit <n> | trace vars|full";
    let (key, value) = rest.split_once(char::is_whitespace).ok_or(usage)?;
    let value = value.trim();
    let positive = || -> Result<usize, String> {
        match value.parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(format!("{key} expects a positive number")),
        }
    };
    match key {
        "state-limit" => session.state_limit = positive()?,
        "step-limit" => session.step_limit = positive()?,
        "trace" => {
            session.verbosity = match value {
                "vars" => Verbosity::Vars,
                "full" => Verbosity::Full,
                _ => return Err(usage.into()),
            }
        }
        _ => return Err(usage.into()),
    }
    Ok(CommandOutput::ok(format!("{key} = {value}")))
}

/// Runs commands until input ends or `quit`, writing each non-empty output
/// on its own lines. Returns the most severe status seen.
pub fn run_lines<I, W>(session: &mut Session, lines: I, out: &mut W, prompt: Option<&str>) -> std::io::Result<Status>
where
    I: IntoIterator<Item = String>,
    W: Write,
{
    let mut worst = Status::Ok;
    let mut lines = lines.into_iter();
    loop {
        if let Some(p) = prompt {
            write!(out, "{p}")?;
            out.flush()?;
        }
        let Some(line) = lines.next() else { break };
        let o = repl_command(session, &line);
        if !o.text.is_empty() {
            writeln!(out, "{}", o.text)?;
        }
        if o.status == Status::Quit {
            break;
        }
        worst = worst.max(o.status);
    }
    Ok(worst)
}

/// Reads commands from `input` line by line.
pub fn run_reader<R: BufRead, W: Write>(
    session: &mut Session,
    input: R,
    out: &mut W,
    prompt: Option<&str>,
) -> std::io::Result<Status> {
    let lines = input.lines().map_while(Result::ok);
    run_lines(session, lines, out, prompt)
}
