use std::fmt;
use std::str::FromStr;

use multisql::value::is_bare_identifier;
use multisql::{Outcome, ResultSet, Value};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mode {
    /// Aligned columns for map items, one value per line otherwise.
    #[default]
    Table,
    /// One `label: [v, ...]` line per output object in canonical value text.
    Json,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "table" => Ok(Mode::Table),
            "json" | "json-text" => Ok(Mode::Json),
            other => Err(format!("unknown mode {other} (expected table or json)")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Table => "table",
            Mode::Json => "json",
        })
    }
}

fn label_text(label: &str) -> String {
    if is_bare_identifier(label) {
        label.to_string()
    } else {
        Value::Str(label.to_string()).to_string()
    }
}

fn pad(s: &str, width: usize) -> String {
    let n = s.chars().count();
    format!("{s}{}", " ".repeat(width.saturating_sub(n)))
}

fn table(items: &[Value]) -> String {
    if items.is_empty() {
        return "(0 items)".into();
    }
    let maps: Option<Vec<_>> = items.iter().map(Value::as_map).collect();
    let Some(maps) = maps else {
        return items.iter().map(Value::to_string).collect::<Vec<_>>().join("\n");
    };
    let mut columns: Vec<&str> = Vec::new();
    for m in &maps {
        for k in m.keys() {
            if !columns.contains(&k.as_str()) {
                columns.push(k);
            }
        }
    }
    let rows: Vec<Vec<String>> = maps
        .iter()
        .map(|m| {
            columns
                .iter()
                .map(|c| m.get(*c).map(Value::to_string).unwrap_or_default())
                .collect()
        })
        .collect();
    let widths: Vec<usize> = columns
        .iter()
        .enumerate()
        .map(|(i, c)| {
            rows.iter()
                .map(|r| r[i].chars().count())
                .chain([c.chars().count()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |cells: Vec<String>| -> String {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| pad(c, *w))
            .collect::<Vec<_>>()
            .join(" | ")
            .trim_end()
            .to_string()
    };
    let mut out = vec![line(columns.iter().map(|c| c.to_string()).collect())];
    out.push(
        widths
            .iter()
            .map(|w| "-".repeat(*w))
            .collect::<Vec<_>>()
            .join("-+-"),
    );
    out.extend(rows.into_iter().map(line));
    out.join("\n")
}

/// Renders a query result. Several `&` output objects become labeled
/// blocks in table mode; JSON mode always labels.
pub fn format_result(rs: &ResultSet, mode: Mode) -> String {
    match mode {
        Mode::Table => match rs.outputs.as_slice() {
            [] => "(0 items)".into(),
            [only] => table(&only.items),
            many => many
                .iter()
                .map(|o| format!("{}:\n{}", label_text(&o.label), table(&o.items)))
                .collect::<Vec<_>>()
                .join("\n\n"),
        },
        Mode::Json => rs
            .outputs
            .iter()
            .map(|o| format!("{}: {}", label_text(&o.label), Value::List(o.items.clone())))
            .collect::<Vec<_>>()
            .join("\n"),
    }
}

/// Query results through `format_result`, everything else as a status line.
pub fn format_outcome(o: &Outcome, mode: Mode) -> String {
    match o {
        Outcome::Rows(rs) => format_result(rs, mode),
        other => other.to_string(),
    }
}
