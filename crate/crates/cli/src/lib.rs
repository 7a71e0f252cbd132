//! Session plumbing behind the `multisql` command: statement splitting,
//! result rendering, script runs and the interactive loop.

mod format;
mod repl;
mod script;

use multisql::parser::{parse_statement, ParseError};
use multisql::{Database, Outcome};

pub use format::{format_outcome, format_result, Mode};
pub use repl::repl;
pub use script::{run_script, run_script_text, split_statements, Chunk, Split};

pub const EXIT_OK: i32 = 0;
pub const EXIT_STATEMENT: i32 = 1;
pub const EXIT_IO: i32 = 2;

/// A failed statement, located in the text it came from.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {message}")]
pub struct StatementError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// One engine instance plus the output mode.
#[derive(Debug, Default)]
pub struct Session {
    pub db: Database,
    pub mode: Mode,
    /// Text of every statement run so far.
    pub history: Vec<String>,
}

/// The message of a parse error without its position prefix.
fn parse_message(e: &ParseError) -> String {
    let full = e.to_string();
    match full.split_once(": ") {
        Some((_, m)) => m.to_string(),
        None => full,
    }
}

/// First line of a statement, shortened for error messages.
fn summary(text: &str) -> String {
    let first = text.lines().next().unwrap_or("").trim();
    if first.chars().count() > 60 {
        let cut: String = first.chars().take(57).collect();
        format!("{cut}...")
    } else {
        first.to_string()
    }
}

impl Session {
    pub fn new(mode: Mode) -> Self {
        Session {
            mode,
            ..Session::default()
        }
    }

    /// Parses and executes one chunk. Positions in the error are absolute
    /// within the text the chunk was cut from.
    pub fn run_chunk(&mut self, chunk: &Chunk) -> Result<Outcome, StatementError> {
        let stmt = parse_statement(&chunk.text).map_err(|e| StatementError {
            line: chunk.line + e.line - 1,
            column: if e.line == 1 {
                chunk.column + e.column - 1
            } else {
                e.column
            },
            message: parse_message(&e),
        })?;
        self.history.push(chunk.text.clone());
        self.db.execute(&stmt).map_err(|e| StatementError {
            line: chunk.line,
            column: chunk.column,
            message: format!("{e} (in `{}`)", summary(&chunk.text)),
        })
    }
}
