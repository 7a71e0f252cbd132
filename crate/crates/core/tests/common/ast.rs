//! Random syntax trees in the shape the parser produces.

use multisql::parser::*;
use multisql::{Constraint, EdgeScheme, ModelType, NestedTriple, NodeScheme, ObjectScheme, Triple, TypeTag};
use multisql::{Value, ValueMap};
use rand::seq::SliceRandom;
use rand::Rng;

// contextual words (to, Relation, kv, int, Multi) are legal identifiers
const ROOTS: &[&str] = &[
    "Person", "Blog", "R1", "x", "Social", "to", "Relation", "kv", "int", "Multi", "_t", "a9",
];
// keywords after a dot come back lowercased, so only lowercase ones appear
const SEGS: &[&str] = &[
    "id", "name", "from", "to", "select", "a_b", "Person", "n0", "list", "x1", "order",
];
const KEYS: &[&str] = &[
    "id", "a", "from", "FROM", "odd key", "", "é", "k\"q", "Select", "x_1",
];
const CHARS: &[char] = &['a', 'Z', ' ', '"', '\\', 'é', '1', '-', '{', '→', '\''];

pub fn name(r: &mut impl Rng) -> String {
    ROOTS.choose(r).unwrap().to_string()
}

pub fn path(r: &mut impl Rng) -> AttrPath {
    let mut segs = vec![name(r)];
    for _ in 0..r.gen_range(0..3) {
        segs.push(SEGS.choose(r).unwrap().to_string());
    }
    AttrPath(segs)
}

pub fn string(r: &mut impl Rng) -> String {
    (0..r.gen_range(0..6))
        .map(|_| *CHARS.choose(r).unwrap())
        .collect()
}

pub fn int(r: &mut impl Rng) -> i64 {
    match r.gen_range(0..6) {
        0 => i64::MIN,
        1 => i64::MAX,
        2 => r.gen_range(-1000..0),
        _ => r.gen_range(0..100),
    }
}

pub fn value(r: &mut impl Rng, depth: u32) -> Value {
    let top = if depth == 0 { 4 } else { 6 };
    match r.gen_range(0..top) {
        0 => Value::Null,
        1 => Value::Bool(r.gen()),
        2 => Value::Int(int(r)),
        3 => Value::Str(string(r)),
        4 => Value::List((0..r.gen_range(0..4)).map(|_| value(r, depth - 1)).collect()),
        _ => {
            let mut m = ValueMap::new();
            for _ in 0..r.gen_range(0..4) {
                m.insert(KEYS.choose(r).unwrap().to_string(), value(r, depth - 1));
            }
            Value::Map(m)
        }
    }
}

fn cmp_op(r: &mut impl Rng, allow_in: bool) -> CmpOp {
    let ops = [CmpOp::Eq, CmpOp::Lt, CmpOp::Gt, CmpOp::Le, CmpOp::Ge, CmpOp::In];
    let n = if allow_in { 6 } else { 5 };
    ops[r.gen_range(0..n)]
}

fn pred_value(r: &mut impl Rng, op: CmpOp) -> Value {
    if op == CmpOp::In {
        Value::List((0..r.gen_range(0..3)).map(|_| value(r, 1)).collect())
    } else {
        value(r, 2)
    }
}

pub fn pattern(r: &mut impl Rng, depth: u32) -> MatchPattern {
    let mut entries: Vec<(String, PatternEntry)> = Vec::new();
    for _ in 0..r.gen_range(0..4) {
        let k = KEYS.choose(r).unwrap().to_string();
        if entries.iter().any(|(x, _)| *x == k) {
            continue;
        }
        let e = match if depth == 0 { 0 } else { r.gen_range(0..3) } {
            0 => {
                let op = cmp_op(r, true);
                PatternEntry::Pred(op, pred_value(r, op))
            }
            1 => PatternEntry::Sub(pattern(r, depth - 1)),
            _ => PatternEntry::List(pattern(r, depth - 1)),
        };
        entries.push((k, e));
    }
    MatchPattern(entries)
}

fn path_steps(r: &mut impl Rng) -> Vec<PathStep> {
    let mut steps = vec![PathStep::Node {
        scheme: name(r),
        pattern: pattern(r, 1),
    }];
    for _ in 0..r.gen_range(0..4) {
        let direction = if r.gen() {
            Direction::Forward
        } else {
            Direction::Backward
        };
        steps.push(PathStep::Edge {
            scheme: name(r),
            pattern: pattern(r, 1),
            direction,
        });
        steps.push(PathStep::Node {
            scheme: name(r),
            pattern: pattern(r, 1),
        });
    }
    steps
}

pub fn filter(r: &mut impl Rng, depth: u32) -> FilterExpr {
    let leaf = depth == 0 || r.gen_bool(0.4);
    if leaf {
        return match r.gen_range(0..10) {
            0 => FilterExpr::Match {
                object: name(r),
                element: r.gen_bool(0.5).then(|| name(r)),
                pattern: pattern(r, 2),
            },
            1 => FilterExpr::Path {
                object: name(r),
                steps: path_steps(r),
            },
            2 => FilterExpr::Call {
                name: ["HASKEY", "near", "to"].choose(r).unwrap().to_string(),
                object: name(r),
                args: (0..r.gen_range(0..3)).map(|_| value(r, 1)).collect(),
            },
            3 if r.gen_bool(0.3) => FilterExpr::Null,
            _ => {
                let op = cmp_op(r, true);
                let right = if op != CmpOp::In && r.gen_bool(0.3) {
                    Operand::Path(path(r))
                } else {
                    Operand::Value(pred_value(r, op))
                };
                FilterExpr::Cmp {
                    left: path(r),
                    op,
                    right,
                }
            }
        };
    }
    let op = [LogicOp::And, LogicOp::Or, LogicOp::Xor, LogicOp::Not][r.gen_range(0..4)];
    let n = if op == LogicOp::Not { 1 } else { r.gen_range(2..4) };
    FilterExpr::Logical {
        op,
        children: (0..n).map(|_| filter(r, depth - 1)).collect(),
    }
}

pub fn attribution(r: &mut impl Rng, depth: u32) -> Attribution {
    match if depth == 0 { 0 } else { r.gen_range(0..5) } {
        0 | 1 => Attribution::Attr(path(r)),
        2 => Attribution::Labeled {
            label: path(r),
            value: Box::new(attribution(r, depth - 1)),
        },
        3 => Attribution::Map(attr_list(r, depth - 1, 0)),
        _ => Attribution::List(attr_list(r, depth - 1, 0)),
    }
}

fn attr_list(r: &mut impl Rng, depth: u32, min: usize) -> Vec<Attribution> {
    (0..r.gen_range(min..4)).map(|_| attribution(r, depth)).collect()
}

fn order(r: &mut impl Rng) -> Vec<OrderKey> {
    (0..r.gen_range(0..3))
        .map(|_| OrderKey {
            path: path(r),
            descending: r.gen(),
        })
        .collect()
}

pub fn select(r: &mut impl Rng, depth: u32) -> Select {
    let from = (0..r.gen_range(0..3))
        .map(|_| {
            if depth > 0 && r.gen_bool(0.3) {
                Source::Join(join(r, depth - 1))
            } else {
                Source::Object(name(r))
            }
        })
        .collect();
    Select {
        distinct: r.gen(),
        outputs: (0..r.gen_range(1..3)).map(|_| attr_list(r, 2, 1)).collect(),
        from,
        filter: if r.gen_bool(0.7) {
            filter(r, 3)
        } else {
            FilterExpr::Null
        },
        order: order(r),
    }
}

fn operand(r: &mut impl Rng, depth: u32) -> JoinOperand {
    match if depth == 0 { 0 } else { r.gen_range(0..4) } {
        0 | 1 => JoinOperand::Object(name(r)),
        2 => JoinOperand::Join(Box::new(join(r, depth - 1))),
        _ => JoinOperand::Select(Box::new(select(r, depth - 1))),
    }
}

pub fn join(r: &mut impl Rng, depth: u32) -> JoinExpr {
    let kind = [
        JoinKind::OneToOne,
        JoinKind::OneToMany,
        JoinKind::Left,
        JoinKind::Right,
    ][r.gen_range(0..4)];
    JoinExpr {
        kind,
        left: operand(r, depth),
        right: operand(r, depth),
        rule: attr_list(r, 2, 1),
        conds: (0..r.gen_range(1..3))
            .map(|_| JoinCond {
                left: path(r),
                op: cmp_op(r, false),
                right: path(r),
            })
            .collect(),
    }
}

pub fn query(r: &mut impl Rng, depth: u32) -> Query {
    if r.gen_bool(0.6) {
        Query::Select(select(r, depth))
    } else {
        Query::Join(join(r, depth))
    }
}

pub fn type_tag(r: &mut impl Rng, depth: u32) -> TypeTag {
    match r.gen_range(0..if depth == 0 { 5 } else { 6 }) {
        0 => TypeTag::Int,
        1 => TypeTag::Str,
        2 => TypeTag::Bool,
        3 => TypeTag::Map,
        4 => TypeTag::Any,
        _ => TypeTag::List(Box::new(type_tag(r, depth - 1))),
    }
}

fn triple(r: &mut impl Rng) -> Triple {
    let constraint = match r.gen_range(0..6) {
        0 => Constraint::Primary,
        1 => Constraint::NotNull,
        2 => Constraint::Foreign(None),
        3 => Constraint::Foreign(Some(path(r).0)),
        _ => Constraint::None,
    };
    Triple::new(name(r), type_tag(r, 2), constraint)
}

pub fn nested(r: &mut impl Rng, depth: u32) -> NestedTriple {
    match if depth == 0 { 0 } else { r.gen_range(0..4) } {
        0 | 1 => NestedTriple::Leaf(triple(r)),
        2 => NestedTriple::MapNode {
            name: name(r),
            children: nested_block(r, depth - 1),
        },
        _ => NestedTriple::ListNode {
            name: name(r),
            element: nested_block(r, depth - 1),
        },
    }
}

fn nested_block(r: &mut impl Rng, depth: u32) -> Vec<NestedTriple> {
    (0..r.gen_range(0..4)).map(|_| nested(r, depth)).collect()
}

pub fn scheme(r: &mut impl Rng, model: ModelType) -> ObjectScheme {
    match model {
        ModelType::Relation => ObjectScheme::Relational {
            columns: (0..r.gen_range(1..4)).map(|_| triple(r)).collect(),
        },
        ModelType::KeyValue => ObjectScheme::KeyValue {
            key: triple(r),
            value: triple(r),
        },
        ModelType::Document => ObjectScheme::Document {
            root: nested_block(r, 3),
        },
        ModelType::Graph => ObjectScheme::Graph {
            nodes: (0..r.gen_range(0..3))
                .map(|_| NodeScheme {
                    name: name(r),
                    properties: nested_block(r, 2),
                })
                .collect(),
            edges: (0..r.gen_range(0..3))
                .map(|_| EdgeScheme {
                    name: name(r),
                    from: name(r),
                    to: name(r),
                    properties: nested_block(r, 2),
                })
                .collect(),
        },
    }
}

fn model(r: &mut impl Rng) -> ModelType {
    [
        ModelType::Relation,
        ModelType::KeyValue,
        ModelType::Document,
        ModelType::Graph,
    ][r.gen_range(0..4)]
}

fn insert_item(r: &mut impl Rng) -> InsertItem {
    InsertItem {
        element: r.gen_bool(0.3).then(|| name(r)),
        row: if r.gen() {
            InsertRow::Tuple((0..r.gen_range(0..4)).map(|_| value(r, 2)).collect())
        } else {
            InsertRow::Value(value(r, 3))
        },
    }
}

fn objects(r: &mut impl Rng) -> Vec<String> {
    (0..r.gen_range(1..3)).map(|_| name(r)).collect()
}

fn where_filter(r: &mut impl Rng) -> FilterExpr {
    if r.gen_bool(0.7) {
        filter(r, 3)
    } else {
        FilterExpr::Null
    }
}

pub fn statement(r: &mut impl Rng) -> Statement {
    match r.gen_range(0..10) {
        0 => Statement::CreateObject {
            model: model(r),
            name: name(r),
        },
        1 => {
            let m = model(r);
            Statement::InitObject {
                model: m,
                name: name(r),
                scheme: scheme(r, m),
            }
        }
        2 => Statement::CreateView {
            vtype: if r.gen() {
                ViewType::Multi
            } else {
                ViewType::Single
            },
            name: name(r),
            query: query(r, 2),
        },
        3 | 4 => Statement::Query(query(r, 2)),
        5 => Statement::Insert {
            object: name(r),
            source: if r.gen_bool(0.7) {
                InsertSource::Values((0..r.gen_range(1..4)).map(|_| insert_item(r)).collect())
            } else {
                InsertSource::Query(Box::new(query(r, 1)))
            },
        },
        6 => Statement::Update {
            objects: objects(r),
            assignments: (0..r.gen_range(1..3))
                .map(|_| Assignment {
                    path: path(r),
                    value: value(r, 2),
                })
                .collect(),
            filter: where_filter(r),
        },
        7 => Statement::Delete {
            objects: objects(r),
            filter: where_filter(r),
        },
        _ => Statement::Transfer {
            source: if r.gen() {
                TransferSource::Object(name(r))
            } else {
                TransferSource::Query(Box::new(query(r, 1)))
            },
            target: name(r),
            pairs: (0..r.gen_range(1..4)).map(|_| (path(r), path(r))).collect(),
        },
    }
}
