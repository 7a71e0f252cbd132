use std::io::{self, Write};
use std::path::Path;

use crate::{format_outcome, Session, EXIT_IO, EXIT_OK, EXIT_STATEMENT};

/// The text of one statement and where it starts (1-based, in characters).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chunk {
    pub text: String,
    pub line: usize,
    pub column: usize,
}

/// Complete `;`-terminated statements plus the unterminated tail, if any
/// non-blank text follows the last `;`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Split {
    pub complete: Vec<Chunk>,
    pub rest: Option<Chunk>,
    /// Byte offset where `rest` begins (the input length when there is none).
    pub rest_offset: usize,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum State {
    Code,
    Str(char),
    LineComment,
    BlockComment,
}

/// Cuts a script at top-level `;` characters, skipping strings and comments
/// the way the tokenizer does. Blank statements are dropped.
pub fn split_statements(text: &str) -> Split {
    let mut split = Split::default();
    let mut state = State::Code;
    let (mut line, mut column) = (1, 1);
    // byte offset, line and column of the first code character
    let mut start: Option<(usize, usize, usize)> = None;
    let mut chars = text.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        let next = chars.peek().map(|&(_, n)| n);
        let (here_line, here_col) = (line, column);
        if c == '\n' {
            line += 1;
            column = 1;
        } else {
            column += 1;
        }
        let mut skip_next = false;
        match state {
            State::Code => match c {
                '-' if next == Some('-') => state = State::LineComment,
                '/' if next == Some('*') => {
                    state = State::BlockComment;
                    skip_next = true;
                }
                ';' => {
                    if let Some((s, l, col)) = start.take() {
                        split.complete.push(Chunk {
                            text: text[s..=i].to_string(),
                            line: l,
                            column: col,
                        });
                    }
                }
                c if c.is_whitespace() => {}
                c => {
                    if start.is_none() {
                        start = Some((i, here_line, here_col));
                    }
                    match c {
                        '"' => state = State::Str('"'),
                        '“' => state = State::Str('”'),
                        '<' | '-' if matches!(next, Some('-') | Some('>')) => skip_next = true,
                        _ => {}
                    }
                }
            },
            State::Str(close) => {
                if c == '\\' {
                    skip_next = true;
                } else if c == close {
                    state = State::Code;
                }
            }
            State::LineComment => {
                if c == '\n' {
                    state = State::Code;
                }
            }
            State::BlockComment => {
                if c == '*' && next == Some('/') {
                    state = State::Code;
                    skip_next = true;
                }
            }
        }
        if skip_next {
            if let Some((_, n)) = chars.next() {
                if n == '\n' {
                    line += 1;
                    column = 1;
                } else {
                    column += 1;
                }
            }
        }
    }
    match start {
        Some((s, l, col)) => {
            split.rest = Some(Chunk {
                text: text[s..].to_string(),
                line: l,
                column: col,
            });
            split.rest_offset = s;
        }
        None => split.rest_offset = text.len(),
    }
    split
}

/// Runs every statement of `text`, printing outcomes to `out` and errors as
/// `name:line:column: message` to `err`. Returns the exit code.
pub fn run_script_text(
    session: &mut Session,
    text: &str,
    name: &str,
    keep_going: bool,
    out: &mut impl Write,
    err: &mut impl Write,
) -> io::Result<i32> {
    let split = split_statements(text);
    let mut code = EXIT_OK;
    for chunk in split.complete.iter().chain(split.rest.as_ref()) {
        match session.run_chunk(chunk) {
            Ok(outcome) => writeln!(out, "{}", format_outcome(&outcome, session.mode))?,
            Err(e) => {
                writeln!(err, "{name}:{e}")?;
                code = EXIT_STATEMENT;
                if !keep_going {
                    break;
                }
            }
        }
    }
    Ok(code)
}

/// Reads and runs a script file. Unreadable files exit with `EXIT_IO`.
pub fn run_script(
    session: &mut Session,
    path: &Path,
    keep_going: bool,
    out: &mut impl Write,
    err: &mut impl Write,
) -> i32 {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "{}: {e}", path.display());
            return EXIT_IO;
        }
    };
    run_script_text(session, &text, &path.display().to_string(), keep_going, out, err).unwrap_or(EXIT_IO)
}
