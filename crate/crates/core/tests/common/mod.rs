//! Seeded generators and brute-force reference implementations shared by the
//! acceptance and property suites.

#![allow(dead_code)]

pub mod ast;
pub mod joins;
pub mod matching;
pub mod paths;
pub mod plans;
pub mod sessions;

use multisql::parser::{parse_statement, InsertItem, InsertRow, InsertSource, Query, Statement};
use multisql::{Database, Value};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn run(db: &mut Database, text: &str) {
    let s = parse_statement(text).unwrap_or_else(|e| panic!("{text}\n{e}"));
    db.execute(&s).unwrap_or_else(|e| panic!("{text}\n{e}"));
}

pub fn query_of(text: &str) -> Query {
    match parse_statement(text).unwrap_or_else(|e| panic!("{text}\n{e}")) {
        Statement::Query(q) => q,
        other => panic!("not a query: {other:?}"),
    }
}

/// Inserts whole values, tagged with a node or edge scheme for graphs.
pub fn insert(db: &mut Database, object: &str, items: Vec<(Option<&str>, Value)>) {
    if items.is_empty() {
        return;
    }
    let items = items
        .into_iter()
        .map(|(e, v)| InsertItem {
            element: e.map(str::to_string),
            row: InsertRow::Value(v),
        })
        .collect();
    db.execute(&Statement::Insert {
        object: object.to_string(),
        source: InsertSource::Values(items),
    })
    .unwrap_or_else(|e| panic!("insert into {object}: {e}"));
}

/// Stored values of an object in scan order.
pub fn scan(db: &Database, object: &str, element: Option<&str>) -> Vec<Value> {
    db.storage
        .scan(object, element)
        .unwrap()
        .into_iter()
        .map(|(_, v)| v)
        .collect()
}

pub fn map(entries: &[(&str, Value)]) -> Value {
    Value::map(entries.iter().cloned())
}

pub fn int_or_null(n: Option<i64>) -> Value {
    n.map(Value::Int).unwrap_or(Value::Null)
}

/// An attribution list from its concrete text.
pub fn parse_attrs(text: &str) -> Vec<multisql::parser::Attribution> {
    match query_of(&format!("SELECT {text}")) {
        Query::Select(mut s) => s.outputs.remove(0),
        Query::Join(_) => unreachable!(),
    }
}

/// A random filter of comparisons and connectives over object `X` with
/// attributes f0..f2, whose values `basic_item` draws from {NULL, 0, 1, 2}.
pub fn basic_filter(r: &mut impl rand::Rng, depth: u32) -> multisql::parser::FilterExpr {
    use multisql::parser::{AttrPath, CmpOp, FilterExpr, LogicOp, Operand};
    if depth == 0 || r.gen_bool(0.4) {
        let ops = [CmpOp::Eq, CmpOp::Lt, CmpOp::Gt, CmpOp::Le, CmpOp::Ge];
        let left = AttrPath::new(["X".to_string(), format!("f{}", r.gen_range(0..3))]);
        let right = if r.gen_bool(0.3) {
            Operand::Path(AttrPath::new([
                "X".to_string(),
                format!("f{}", r.gen_range(0..3)),
            ]))
        } else if r.gen_bool(0.15) {
            Operand::Value(Value::Null)
        } else {
            Operand::Value(Value::Int(r.gen_range(0..3)))
        };
        return FilterExpr::Cmp {
            left,
            op: ops[r.gen_range(0..ops.len())],
            right,
        };
    }
    let op = [LogicOp::And, LogicOp::Or, LogicOp::Xor, LogicOp::Not][r.gen_range(0..4)];
    let n = if op == LogicOp::Not { 1 } else { 2 };
    FilterExpr::Logical {
        op,
        children: (0..n).map(|_| basic_filter(r, depth - 1)).collect(),
    }
}

pub fn basic_item(r: &mut impl rand::Rng) -> multisql::filters::Binding {
    let v = Value::map((0..3).map(|i| {
        let x = if r.gen_bool(0.25) {
            Value::Null
        } else {
            Value::Int(r.gen_range(0..3))
        };
        (format!("f{i}"), x)
    }));
    multisql::filters::Binding::derived("X", v)
}

pub fn not(f: multisql::parser::FilterExpr) -> multisql::parser::FilterExpr {
    logical(multisql::parser::LogicOp::Not, vec![f])
}

pub fn logical(
    op: multisql::parser::LogicOp,
    children: Vec<multisql::parser::FilterExpr>,
) -> multisql::parser::FilterExpr {
    multisql::parser::FilterExpr::Logical { op, children }
}
