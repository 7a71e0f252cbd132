//! Snapshots: a session written out as a canonical script that recreates
//! the catalog and every stored item.

use crate::catalog::CatalogItem;
use crate::engine::Database;
use crate::error::Error;
use crate::parser::{parse_script_spanned, print_statement, InsertItem, InsertRow, InsertSource, Statement};

pub const SNAPSHOT_HEADER: &str = "-- MULTISQL-SNAPSHOT v1";

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SnapshotError {
    #[error("missing snapshot header line `{SNAPSHOT_HEADER}`")]
    MissingHeader,
    #[error("snapshots load into an empty session only")]
    SessionNotEmpty,
    #[error("line {line}: {source}")]
    Statement {
        line: usize,
        #[source]
        source: Box<Error>,
    },
}

/// The statements recreating the database: CREATEs in creation order, then
/// INITs and views in the order they happened, then one INSERT per
/// non-empty object.
pub fn snapshot_statements(db: &Database) -> Vec<Statement> {
    let mut out = Vec::new();
    let mut events: Vec<(u64, Statement)> = Vec::new();
    for item in db.catalog.items() {
        match item {
            CatalogItem::Object(e) => {
                out.push(Statement::CreateObject {
                    model: e.model,
                    name: e.name.clone(),
                });
                if let (Some(seq), Some(scheme)) = (e.initialized, &e.scheme) {
                    events.push((
                        seq,
                        Statement::InitObject {
                            model: e.model,
                            name: e.name.clone(),
                            scheme: scheme.clone(),
                        },
                    ));
                }
            }
            CatalogItem::View(v) => events.push((
                v.seq,
                Statement::CreateView {
                    vtype: v.vtype,
                    name: v.name.clone(),
                    query: v.query.clone(),
                },
            )),
        }
    }
    events.sort_by_key(|(seq, _)| *seq);
    out.extend(events.into_iter().map(|(_, s)| s));
    for e in db.catalog.objects() {
        let Ok(store) = db.storage.store(&e.name) else {
            continue;
        };
        let items: Vec<InsertItem> = store
            .export()
            .into_iter()
            .map(|(element, v)| InsertItem {
                element,
                row: InsertRow::Value(v),
            })
            .collect();
        if !items.is_empty() {
            out.push(Statement::Insert {
                object: e.name.clone(),
                source: InsertSource::Values(items),
            });
        }
    }
    out
}

/// Canonical snapshot text; equal databases give byte-identical text.
pub fn save_snapshot(db: &Database) -> String {
    let mut text = String::from(SNAPSHOT_HEADER);
    text.push('\n');
    for s in snapshot_statements(db) {
        text.push_str(&print_statement(&s));
        text.push_str(";\n");
    }
    text
}

/// Replays a snapshot. The session must be empty unless `replace` is set,
/// in which case its objects and views are dropped first (registered
/// filters and planner options are kept). Nothing changes on failure.
pub fn load_snapshot(db: &mut Database, text: &str, replace: bool) -> Result<usize, SnapshotError> {
    if text.lines().next().map(str::trim_end) != Some(SNAPSHOT_HEADER) {
        return Err(SnapshotError::MissingHeader);
    }
    if !replace && !db.catalog.is_empty() {
        return Err(SnapshotError::SessionNotEmpty);
    }
    let stmts = parse_script_spanned(text).map_err(|e| SnapshotError::Statement {
        line: e.line,
        source: Box::new(e.into()),
    })?;
    let mut fresh = Database {
        filters: db.filters.clone(),
        options: db.options,
        ..Database::default()
    };
    for s in &stmts {
        fresh
            .execute(&s.statement)
            .map_err(|e| SnapshotError::Statement {
                line: s.line,
                source: Box::new(e),
            })?;
    }
    *db = fresh;
    Ok(stmts.len())
}
