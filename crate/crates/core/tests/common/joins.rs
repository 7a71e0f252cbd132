//! Random two-object join instances and a nested-loop reference.

use multisql::parser::{AttrPath, CmpOp, JoinCond, JoinExpr, JoinKind, JoinOperand, Query};
use multisql::{Database, Value};
use rand::seq::SliceRandom;
use rand::Rng;

use super::{insert, int_or_null, map, parse_attrs, run, scan};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    Relation,
    Document,
    Kv,
    Graph,
}

pub const MODELS: [Model; 4] = [Model::Relation, Model::Document, Model::Kv, Model::Graph];

impl Model {
    /// Attributes every item of this object carries.
    pub fn fields(self) -> &'static [&'static str] {
        match self {
            Model::Kv => &["id", "a"],
            _ => &["id", "a", "b"],
        }
    }
}

/// Creates `name` with integer attributes id (unique), a and b (KV has no b).
pub fn create_object(db: &mut Database, name: &str, model: Model, rows: &[(i64, Option<i64>, Option<i64>)]) {
    let (kw, scheme) = match model {
        Model::Relation => ("RELATION", "(id, int, PRIMARY), (a, int), (b, int)".to_string()),
        Model::Document => ("DOCUMENT", "{(id, int, PRIMARY), (a, int), (b, int)}".to_string()),
        Model::Kv => ("KV", "{(id, int, PRIMARY), (a, int)}".to_string()),
        Model::Graph => (
            "GRAPH",
            "[N {(id, int, PRIMARY), (a, int), (b, int)}]".to_string(),
        ),
    };
    run(db, &format!("CREATE {kw} {name}"));
    run(db, &format!("INIT {kw} {name} WITH {scheme}"));
    let element = (model == Model::Graph).then_some("N");
    let items = rows
        .iter()
        .map(|(id, a, b)| {
            let mut fields = vec![("id", Value::Int(*id)), ("a", int_or_null(*a))];
            if model != Model::Kv {
                fields.push(("b", int_or_null(*b)));
            }
            (element, map(&fields))
        })
        .collect();
    insert(db, name, items);
}

pub fn random_rows(r: &mut impl Rng, max: usize) -> Vec<(i64, Option<i64>, Option<i64>)> {
    let n = r.gen_range(0..=max);
    let mut ids: Vec<i64> = (0..40).collect();
    ids.shuffle(r);
    let small = |r: &mut dyn rand::RngCore| (r.gen_bool(0.85)).then(|| r.gen_range(0..5));
    ids.into_iter()
        .take(n)
        .map(|id| (id, small(r), small(r)))
        .collect()
}

/// Result shapes the reference can project; `D` is the driving side.
const RULES: &[&str] = &[
    "L.id, R.id",
    "l : L.a, r : R.a, rb : R.id",
    "{L.id, rid : R.id}",
    "{D.id, os : [O.id]}",
    "D.id, os : [{O.id, O.a}]",
    "did : D.id, os : [{oid : O.id, s : {O.a}}]",
];

#[derive(Clone, Debug)]
pub struct JoinCase {
    pub kind: JoinKind,
    pub rule: usize,
    pub conds: Vec<JoinCond>,
}

impl JoinCase {
    pub fn random(r: &mut impl Rng, left: Model, right: Model) -> Self {
        let kind = [
            JoinKind::OneToOne,
            JoinKind::OneToMany,
            JoinKind::Left,
            JoinKind::Right,
        ][r.gen_range(0..4)];
        let ops = [
            CmpOp::Eq,
            CmpOp::Eq,
            CmpOp::Eq,
            CmpOp::Lt,
            CmpOp::Le,
            CmpOp::Gt,
            CmpOp::Ge,
        ];
        let conds = (0..r.gen_range(1..3))
            .map(|_| {
                let l = AttrPath::new(["L", left.fields().choose(r).unwrap()]);
                let rp = AttrPath::new(["R", right.fields().choose(r).unwrap()]);
                let op = *ops.choose(r).unwrap();
                if r.gen_bool(0.2) {
                    JoinCond {
                        left: rp,
                        op,
                        right: l,
                    }
                } else {
                    JoinCond {
                        left: l,
                        op,
                        right: rp,
                    }
                }
            })
            .collect();
        JoinCase {
            kind,
            rule: r.gen_range(0..RULES.len()),
            conds,
        }
    }

    fn driving_is_left(&self) -> bool {
        self.kind != JoinKind::Right
    }

    pub fn rule_text(&self) -> String {
        let (d, o) = if self.driving_is_left() {
            ("L", "R")
        } else {
            ("R", "L")
        };
        RULES[self.rule].replace('D', d).replace('O', o)
    }

    pub fn query(&self) -> Query {
        Query::Join(JoinExpr {
            kind: self.kind,
            left: JoinOperand::Object("L".into()),
            right: JoinOperand::Object("R".into()),
            rule: parse_attrs(&self.rule_text()),
            conds: self.conds.clone(),
        })
    }

    /// Nested-loop reference over the stored items in scan order.
    pub fn oracle(&self, db: &Database) -> Vec<Value> {
        let ls = scan(db, "L", None);
        let rs = scan(db, "R", None);
        let holds = |l: &Value, r: &Value| {
            self.conds.iter().all(|c| {
                let side = |p: &AttrPath| if p.root() == "L" { l } else { r };
                cmp(
                    &get(Some(side(&c.left)), &c.left.0[1]),
                    c.op,
                    &get(Some(side(&c.right)), &c.right.0[1]),
                )
            })
        };
        let left_drives = self.driving_is_left();
        let (drive, other) = if left_drives { (&ls, &rs) } else { (&rs, &ls) };
        let mut out = Vec::new();
        for d in drive {
            let ms: Vec<&Value> = other
                .iter()
                .filter(|o| if left_drives { holds(d, o) } else { holds(o, d) })
                .collect();
            if self.rule >= 3 {
                if ms.is_empty() && matches!(self.kind, JoinKind::OneToOne | JoinKind::OneToMany) {
                    continue;
                }
                out.push(self.aggregate(d, &ms));
                continue;
            }
            let pair = |m: Option<&Value>| {
                if left_drives {
                    self.flat(Some(d), m)
                } else {
                    self.flat(m, Some(d))
                }
            };
            match self.kind {
                JoinKind::OneToOne => out.extend(ms.first().map(|m| pair(Some(m)))),
                JoinKind::OneToMany => out.extend(ms.iter().map(|m| pair(Some(m)))),
                _ if ms.is_empty() => out.push(pair(None)),
                _ => out.extend(ms.iter().map(|m| pair(Some(m)))),
            }
        }
        out
    }

    fn flat(&self, l: Option<&Value>, r: Option<&Value>) -> Value {
        match self.rule {
            0 => map(&[("L.id", get(l, "id")), ("R.id", get(r, "id"))]),
            1 => map(&[("l", get(l, "a")), ("r", get(r, "a")), ("rb", get(r, "id"))]),
            _ => map(&[("id", get(l, "id")), ("rid", get(r, "id"))]),
        }
    }

    fn aggregate(&self, d: &Value, ms: &[&Value]) -> Value {
        let d = Some(d);
        match self.rule {
            3 => map(&[
                ("id", get(d, "id")),
                ("os", Value::List(ms.iter().map(|m| get(Some(m), "id")).collect())),
            ]),
            4 => map(&[
                ("id", get(d, "id")),
                (
                    "os",
                    Value::List(
                        ms.iter()
                            .map(|m| map(&[("id", get(Some(m), "id")), ("a", get(Some(m), "a"))]))
                            .collect(),
                    ),
                ),
            ]),
            _ => map(&[
                ("did", get(d, "id")),
                (
                    "os",
                    Value::List(
                        ms.iter()
                            .map(|m| {
                                map(&[
                                    ("oid", get(Some(m), "id")),
                                    ("s", map(&[("a", get(Some(m), "a"))])),
                                ])
                            })
                            .collect(),
                    ),
                ),
            ]),
        }
    }
}

fn get(v: Option<&Value>, attr: &str) -> Value {
    v.and_then(|v| v.as_map())
        .and_then(|m| m.get(attr))
        .cloned()
        .unwrap_or(Value::Null)
}

/// Comparison over integers and nulls: null equals null, any other
/// comparison with null fails.
fn cmp(a: &Value, op: CmpOp, b: &Value) -> bool {
    match (a, b) {
        (Value::Null, Value::Null) => op == CmpOp::Eq,
        (Value::Int(x), Value::Int(y)) => match op {
            CmpOp::Eq => x == y,
            CmpOp::Lt => x < y,
            CmpOp::Le => x <= y,
            CmpOp::Gt => x > y,
            CmpOp::Ge => x >= y,
            CmpOp::In => unreachable!(),
        },
        _ => false,
    }
}
