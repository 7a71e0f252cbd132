//! Random documents and patterns up to depth 4, and a recursive reference
//! matcher written against the documented semantics.

use std::cmp::Ordering;

use multisql::parser::{CmpOp, MatchPattern, PatternEntry};
use multisql::{Value, ValueMap};
use rand::seq::SliceRandom;
use rand::Rng;

pub const KEYS: [&str; 4] = ["a", "b", "c", "d"];

pub fn scalar(r: &mut impl Rng) -> Value {
    match r.gen_range(0..8) {
        0 => Value::Null,
        1 => Value::Bool(r.gen()),
        2 | 3 => Value::Str(["x", "y", "z"].choose(r).unwrap().to_string()),
        _ => Value::Int(r.gen_range(0..4)),
    }
}

/// A map nested `depth` levels deep at most. With `full` every key is present.
pub fn document(r: &mut impl Rng, depth: u32, full: bool) -> Value {
    let mut m = ValueMap::new();
    for k in KEYS {
        if !full && r.gen_bool(0.3) {
            continue;
        }
        let v = if depth <= 1 {
            scalar(r)
        } else {
            match r.gen_range(0..5) {
                0 => document(r, depth - 1, false),
                1 => Value::List(
                    (0..r.gen_range(0..4))
                        .map(|_| {
                            if r.gen_bool(0.8) {
                                document(r, depth - 1, false)
                            } else {
                                scalar(r)
                            }
                        })
                        .collect(),
                ),
                _ => scalar(r),
            }
        };
        m.insert(k.to_string(), v);
    }
    Value::Map(m)
}

pub fn pattern(r: &mut impl Rng, depth: u32) -> MatchPattern {
    let mut keys = KEYS.to_vec();
    keys.shuffle(r);
    let n = r.gen_range(0..3);
    let entries = keys
        .into_iter()
        .take(n)
        .map(|k| {
            let entry = match if depth <= 1 { 0 } else { r.gen_range(0..4) } {
                0 | 1 => {
                    let op = [
                        CmpOp::Eq,
                        CmpOp::Eq,
                        CmpOp::Lt,
                        CmpOp::Gt,
                        CmpOp::Le,
                        CmpOp::Ge,
                        CmpOp::In,
                    ]
                    .choose(r)
                    .copied()
                    .unwrap();
                    let v = if op == CmpOp::In {
                        Value::List((0..r.gen_range(0..3)).map(|_| scalar(r)).collect())
                    } else {
                        scalar(r)
                    };
                    PatternEntry::Pred(op, v)
                }
                2 => PatternEntry::Sub(pattern(r, depth - 1)),
                _ => PatternEntry::List(pattern(r, depth - 1)),
            };
            (k.to_string(), entry)
        })
        .collect();
    MatchPattern(entries)
}

fn rank(v: &Value) -> u8 {
    match v {
        Value::Null => 0,
        Value::Bool(_) => 1,
        Value::Int(_) => 2,
        Value::Str(_) => 3,
        Value::List(_) => 4,
        Value::Map(_) => 5,
    }
}

/// Orders a stored value against a scalar operand.
fn order(x: &Value, v: &Value) -> Ordering {
    match (x, v) {
        (Value::Bool(a), Value::Bool(b)) => a.cmp(b),
        (Value::Int(a), Value::Int(b)) => a.cmp(b),
        (Value::Str(a), Value::Str(b)) => a.cmp(b),
        _ => rank(x).cmp(&rank(v)),
    }
}

fn pred(x: &Value, op: CmpOp, v: &Value) -> bool {
    if op == CmpOp::Eq {
        return match (x, v) {
            (Value::Null, Value::Null) => true,
            (Value::Null, _) | (_, Value::Null) => false,
            _ => x == v,
        };
    }
    if matches!(x, Value::Null) || matches!(v, Value::Null) {
        return false;
    }
    match op {
        CmpOp::In => v.as_list().unwrap().iter().any(|e| e == x),
        CmpOp::Lt => order(x, v) == Ordering::Less,
        CmpOp::Gt => order(x, v) == Ordering::Greater,
        CmpOp::Le => order(x, v) != Ordering::Greater,
        CmpOp::Ge => order(x, v) != Ordering::Less,
        CmpOp::Eq => unreachable!(),
    }
}

/// Every entry must hold: a missing key reads as null, a sub-pattern needs a
/// map, a list pattern needs a list with some matching element.
pub fn reference_match(p: &MatchPattern, doc: &Value) -> bool {
    let Value::Map(m) = doc else {
        return false;
    };
    for (k, e) in &p.0 {
        let x = m.get(k);
        let ok = match e {
            PatternEntry::Pred(op, v) => pred(x.unwrap_or(&Value::Null), *op, v),
            PatternEntry::Sub(sp) => match x {
                Some(v @ Value::Map(_)) => reference_match(sp, v),
                _ => false,
            },
            PatternEntry::List(sp) => match x {
                Some(Value::List(items)) => items.iter().any(|i| reference_match(sp, i)),
                _ => false,
            },
        };
        if !ok {
            return false;
        }
    }
    true
}
