use std::io::{self, BufRead, Write};

use multisql::catalog::CatalogItem;
use multisql::parser::{print_query, print_scheme, ViewType};
use multisql::{load_snapshot, save_snapshot};

use crate::script::split_statements;
use crate::{format_outcome, Mode, Session, StatementError, EXIT_OK};

const HELP: &str = "\
Statements end with ';' and may span several lines.
.help            this text
.objects         list objects and views
.scheme NAME     show the scheme of an object or the query of a view
.save PATH       write a snapshot of the session
.load PATH       load a snapshot into an empty session
.load PATH replace
                 load a snapshot, dropping the current objects first
.mode [MODE]     show or set the output mode (table or json)
.quit            leave";

enum Flow {
    Continue,
    Quit,
}

fn objects(session: &Session) -> String {
    let lines: Vec<String> = session
        .db
        .catalog
        .items()
        .map(|item| match item {
            CatalogItem::Object(o) if o.scheme.is_some() => format!("{}  {}", o.name, o.model),
            CatalogItem::Object(o) => format!("{}  {} (not initialized)", o.name, o.model),
            CatalogItem::View(v) => {
                let t = match v.vtype {
                    ViewType::Single => "SINGLE",
                    ViewType::Multi => "MULTI",
                };
                format!("{}  VIEW {t}", v.name)
            }
        })
        .collect();
    if lines.is_empty() {
        "(no objects)".into()
    } else {
        lines.join("\n")
    }
}

fn scheme(session: &Session, name: &str) -> String {
    let catalog = &session.db.catalog;
    if let Some(v) = catalog.view(name) {
        return print_query(&v.query);
    }
    match catalog.object(name) {
        Some(o) => match &o.scheme {
            Some(s) => format!("{} {}", o.model, print_scheme(s)),
            None => format!("{name} is not initialized"),
        },
        None => format!("unknown object {name}"),
    }
}

fn meta(session: &mut Session, line: &str, out: &mut impl Write) -> io::Result<Flow> {
    let mut words = line.split_whitespace();
    let cmd = words.next().unwrap_or("");
    let args: Vec<&str> = words.collect();
    let reply = match (cmd, args.as_slice()) {
        (".quit" | ".exit", _) => return Ok(Flow::Quit),
        (".help", _) => HELP.to_string(),
        (".objects", _) => objects(session),
        (".scheme", [name]) => scheme(session, name),
        (".save", [path]) => match std::fs::write(path, save_snapshot(&session.db)) {
            Ok(()) => format!("saved {path}"),
            Err(e) => format!("error: {path}: {e}"),
        },
        (".load", [path, rest @ ..]) if rest.is_empty() || rest == ["replace"] => {
            match std::fs::read_to_string(path) {
                Ok(text) => match load_snapshot(&mut session.db, &text, !rest.is_empty()) {
                    Ok(n) => format!("loaded {n} statements from {path}"),
                    Err(e) => format!("error: {path}: {e}"),
                },
                Err(e) => format!("error: {path}: {e}"),
            }
        }
        (".mode", []) => session.mode.to_string(),
        (".mode", [m]) => match m.parse::<Mode>() {
            Ok(mode) => {
                session.mode = mode;
                format!("mode {mode}")
            }
            Err(e) => format!("error: {e}"),
        },
        _ => format!("error: cannot run {line}; try .help"),
    };
    writeln!(out, "{reply}")?;
    Ok(Flow::Continue)
}

/// Prints the error with the offending source line and a caret under the
/// reported column.
fn report(buffer: &str, e: &StatementError, out: &mut impl Write) -> io::Result<()> {
    writeln!(out, "error at {}:{}: {}", e.line, e.column, e.message)?;
    if let Some(src) = buffer.lines().nth(e.line - 1) {
        let indent: String = src
            .chars()
            .take(e.column - 1)
            .map(|c| if c == '\t' { '\t' } else { ' ' })
            .collect();
        writeln!(out, "  {src}\n  {indent}^")?;
    }
    Ok(())
}

/// Reads statements and dot-commands from `input` until `.quit` or end of
/// input. Statement errors are printed and the loop goes on. Prompts are
/// written only when `prompt` is set.
pub fn repl(
    session: &mut Session,
    input: impl BufRead,
    out: &mut impl Write,
    prompt: bool,
) -> io::Result<i32> {
    let mut buffer = String::new();
    let mut lines = input.lines();
    loop {
        if prompt {
            write!(
                out,
                "{}",
                if buffer.is_empty() {
                    "multisql> "
                } else {
                    "     ...> "
                }
            )?;
            out.flush()?;
        }
        let Some(line) = lines.next().transpose()? else {
            break;
        };
        if buffer.is_empty() && line.trim_start().starts_with('.') {
            if let Flow::Quit = meta(session, line.trim(), out)? {
                return Ok(EXIT_OK);
            }
            continue;
        }
        buffer.push_str(&line);
        buffer.push('\n');
        let split = split_statements(&buffer);
        for chunk in &split.complete {
            run(session, &buffer, chunk, out)?;
        }
        buffer = match split.rest {
            Some(_) => buffer[split.rest_offset..].to_string(),
            None => String::new(),
        };
    }
    // a last statement without ';'
    if let Some(chunk) = split_statements(&buffer).rest {
        run(session, &buffer, &chunk, out)?;
    }
    Ok(EXIT_OK)
}

fn run(session: &mut Session, buffer: &str, chunk: &crate::Chunk, out: &mut impl Write) -> io::Result<()> {
    match session.run_chunk(chunk) {
        Ok(o) => writeln!(out, "{}", format_outcome(&o, session.mode)),
        Err(e) => report(buffer, &e, out),
    }
}
