use std::io::{IsTerminal, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use amn_cli::{run_lines, run_reader, Session};
use clap::Parser;

/// Load, run, search and model check Abstract Machine Notation machines.
#[derive(Debug, Parser)]
#[command(name = "amn", version)]
struct Args {
    /// Machine to load before running commands.
    file: Option<PathBuf>,
    /// Command to run (repeatable); disables the interactive loop.
    #[arg(long = "cmd", value_name = "COMMAND")]
    cmds: Vec<String>,
    /// File with one command per line; disables the interactive loop.
    #[arg(long, value_name = "FILE")]
    script: Option<PathBuf>,
    #[arg(long, value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
    state_limit: Option<u64>,
    #[arg(long, value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
    step_limit: Option<u64>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let mut session = Session::default();
    if let Some(n) = args.state_limit {
        session.state_limit = n as usize;
    }
    if let Some(n) = args.step_limit {
        session.step_limit = n as usize;
    }
    let stdout = std::io::stdout();
    let mut out = stdout.lock();

    let mut lines: Vec<String> = Vec::new();
    if let Some(f) = &args.file {
        lines.push(format!("load {}", f.display()));
    }
    lines.extend(args.cmds.iter().cloned());
    if let Some(script) = &args.script {
        match std::fs::read_to_string(script) {
            Ok(text) => lines.extend(text.lines().map(str::to_string)),
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", script.display());
                return ExitCode::from(1);
            }
        }
    }
    let batch = !args.cmds.is_empty() || args.script.is_some();

    let result = run_lines(&mut session, lines, &mut out, None).and_then(|status| {
        if batch {
            return Ok(status);
        }
        let stdin = std::io::stdin();
        let prompt = stdin.is_terminal().then_some("amn> ");
        let repl = run_reader(&mut session, stdin.lock(), &mut out, prompt)?;
        if prompt.is_some() {
            writeln!(out)?;
        }
        Ok(status.max(repl))
    });
    match result {
        Ok(status) => ExitCode::from(status.exit_code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
