use std::io::{self, IsTerminal};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use multisql::load_snapshot;
use multisql_cli::{repl, run_script, Mode, Session, EXIT_IO, EXIT_STATEMENT};

/// Multi-model query engine. Without --script, reads statements from stdin.
#[derive(Parser, Debug)]
#[command(name = "multisql", version)]
struct Args {
    /// Snapshot to load before anything else.
    #[arg(long, value_name = "PATH")]
    load: Option<PathBuf>,
    /// Script to run instead of the interactive loop.
    #[arg(long, value_name = "PATH")]
    script: Option<PathBuf>,
    /// Output mode: table or json.
    #[arg(long, default_value = "table")]
    mode: Mode,
    /// Keep running a script after a failing statement.
    #[arg(long)]
    keep_going: bool,
}

fn run(args: Args) -> i32 {
    let mut session = Session::new(args.mode);
    if let Some(path) = &args.load {
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("{}: {e}", path.display());
                return EXIT_IO;
            }
        };
        if let Err(e) = load_snapshot(&mut session.db, &text, false) {
            eprintln!("{}: {e}", path.display());
            return EXIT_STATEMENT;
        }
    }
    let (mut out, mut err) = (io::stdout().lock(), io::stderr().lock());
    match &args.script {
        Some(path) => run_script(&mut session, path, args.keep_going, &mut out, &mut err),
        None => {
            let stdin = io::stdin();
            let prompt = stdin.is_terminal();
            repl(&mut session, stdin.lock(), &mut out, prompt).unwrap_or(EXIT_IO)
        }
    }
}

fn main() -> ExitCode {
    ExitCode::from(run(Args::parse()) as u8)
}
