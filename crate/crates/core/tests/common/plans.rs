//! Random stores over all four models and random queries against them, for
//! comparing optimized and naive plans.

use multisql::{Database, Value};
use rand::seq::SliceRandom;
use rand::Rng;

use super::{insert, int_or_null, map, run};

struct Obj {
    name: &'static str,
    /// Comparable integer attributes.
    nums: &'static [&'static str],
    /// Attributes that may appear in output schemes.
    outs: &'static [&'static str],
}

const OBJS: [Obj; 4] = [
    Obj {
        name: "P",
        nums: &["id", "g"],
        outs: &["id", "g", "s"],
    },
    Obj {
        name: "D",
        nums: &["id", "p", "m.x"],
        outs: &["id", "p", "m.x", "tags", "m"],
    },
    Obj {
        name: "K",
        nums: &["k", "v"],
        outs: &["k", "v"],
    },
    Obj {
        name: "G",
        nums: &["id", "w"],
        outs: &["id", "w"],
    },
];

fn small(r: &mut impl Rng) -> Value {
    int_or_null(r.gen_bool(0.85).then(|| r.gen_range(0..6)))
}

fn ids(r: &mut impl Rng, max: usize) -> Vec<i64> {
    let mut v: Vec<i64> = (0..12).collect();
    v.shuffle(r);
    v.truncate(r.gen_range(0..=max));
    v
}

pub fn random_store(r: &mut impl Rng) -> Database {
    let mut db = Database::new();
    for s in [
        "CREATE RELATION P",
        "INIT RELATION P WITH (id, int, PRIMARY), (g, int), (s, string)",
        "CREATE DOCUMENT D",
        "INIT DOCUMENT D WITH {(id, int, PRIMARY), (p, int), (tags, list<int>), m: {(x, int)}}",
        "CREATE KV K",
        "INIT KV K WITH {(k, int, PRIMARY), (v, int)}",
        "CREATE GRAPH G",
        "INIT GRAPH G WITH [N {(id, int, PRIMARY), (w, int)}, E {FROM: N, TO: N, (w, int)}]",
    ] {
        run(&mut db, s);
    }
    let p = ids(r, 10)
        .into_iter()
        .map(|id| {
            let s = Value::Str(["u", "v", "w"].choose(r).unwrap().to_string());
            (None, map(&[("id", Value::Int(id)), ("g", small(r)), ("s", s)]))
        })
        .collect();
    insert(&mut db, "P", p);
    let d = ids(r, 10)
        .into_iter()
        .map(|id| {
            let tags = Value::List(
                (0..r.gen_range(0..3))
                    .map(|_| Value::Int(r.gen_range(0..4)))
                    .collect(),
            );
            let m = map(&[("x", small(r))]);
            (
                None,
                map(&[("id", Value::Int(id)), ("p", small(r)), ("tags", tags), ("m", m)]),
            )
        })
        .collect();
    insert(&mut db, "D", d);
    let k = ids(r, 10)
        .into_iter()
        .map(|k| (None, map(&[("k", Value::Int(k)), ("v", small(r))])))
        .collect();
    insert(&mut db, "K", k);
    let nodes = ids(r, 8);
    let mut items: Vec<(Option<&str>, Value)> = nodes
        .iter()
        .map(|&id| (Some("N"), map(&[("id", Value::Int(id)), ("w", small(r))])))
        .collect();
    if !nodes.is_empty() {
        for _ in 0..r.gen_range(0..12) {
            let (f, t) = (*nodes.choose(r).unwrap(), *nodes.choose(r).unwrap());
            items.push((
                Some("E"),
                map(&[("from", Value::Int(f)), ("to", Value::Int(t)), ("w", small(r))]),
            ));
        }
    }
    insert(&mut db, "G", items);
    db
}

fn num(r: &mut impl Rng, o: &Obj) -> String {
    format!("{}.{}", o.name, o.nums.choose(r).unwrap())
}

fn literal(r: &mut impl Rng) -> String {
    match r.gen_range(0..10) {
        0 => "NULL".into(),
        1 => format!("[{}, {}]", r.gen_range(0..6), r.gen_range(0..6)),
        _ => r.gen_range(0..6).to_string(),
    }
}

fn term(r: &mut impl Rng, o: &Obj) -> String {
    if o.name == "D" && r.gen_bool(0.15) {
        return format!("MATCH(D, {{m: {{x: {{>=, {}}}}}}})", r.gen_range(0..6));
    }
    if o.name == "D" && r.gen_bool(0.1) {
        return format!("D.tags = [{}]", r.gen_range(0..4));
    }
    let lit = literal(r);
    let op = if lit.starts_with('[') {
        "IN"
    } else {
        ["=", "<", ">", "<=", ">="].choose(r).unwrap()
    };
    format!("{} {op} {lit}", num(r, o))
}

/// A filter over one object, nested at most `depth` connectives deep.
fn filter(r: &mut impl Rng, o: &Obj, depth: u32) -> String {
    if depth == 0 || r.gen_bool(0.5) {
        return term(r, o);
    }
    match r.gen_range(0..4) {
        0 => format!("NOT ({})", filter(r, o, depth - 1)),
        1 => format!("({} OR {})", filter(r, o, depth - 1), filter(r, o, depth - 1)),
        2 => format!("({} XOR {})", filter(r, o, depth - 1), filter(r, o, depth - 1)),
        _ => format!("({} AND {})", filter(r, o, depth - 1), filter(r, o, depth - 1)),
    }
}

fn outputs(r: &mut impl Rng, objs: &[&Obj]) -> String {
    let mut parts = Vec::new();
    for (i, o) in objs.iter().enumerate() {
        let n = r.gen_range(1..3);
        for a in o.outs.choose_multiple(r, n) {
            parts.push(format!(
                "{}{}: {}.{a}",
                o.name.to_lowercase(),
                parts.len() + i,
                o.name
            ));
        }
    }
    parts.join(", ")
}

fn order(r: &mut impl Rng, objs: &[&Obj]) -> String {
    if r.gen_bool(0.5) {
        return String::new();
    }
    let keys: Vec<String> = (0..r.gen_range(1..3))
        .map(|_| {
            let o = objs.choose(r).unwrap();
            let dir = if r.gen() { " DESC" } else { "" };
            format!("{}{dir}", num(r, o))
        })
        .collect();
    format!(" ORDER BY {}", keys.join(", "))
}

fn kind(r: &mut impl Rng) -> &'static str {
    ["JOIN", "OM JOIN", "LEFT JOIN", "RIGHT JOIN"].choose(r).unwrap()
}

/// One random query text against `random_store`.
pub fn random_query(r: &mut impl Rng) -> String {
    let distinct = if r.gen_bool(0.3) { "DISTINCT " } else { "" };
    match r.gen_range(0..7) {
        // single object selection
        0 | 1 => {
            let o = OBJS.choose(r).unwrap();
            let wh = if r.gen_bool(0.8) {
                format!(" WHERE {}", filter(r, o, 2))
            } else {
                String::new()
            };
            format!(
                "SELECT {distinct}{} FROM {}{wh}{}",
                outputs(r, &[o]),
                o.name,
                order(r, &[o])
            )
        }
        // key-value lookups
        2 => {
            let extra = if r.gen() {
                format!(" AND {}", filter(r, &OBJS[2], 1))
            } else {
                String::new()
            };
            format!(
                "SELECT {distinct}K.v, K.k FROM K WHERE K.k = {}{extra}",
                r.gen_range(0..12)
            )
        }
        // multiple selection
        3 => {
            let mut os: Vec<&Obj> = OBJS.choose_multiple(r, 2).collect();
            os.sort_by_key(|o| o.name);
            let outs: Vec<String> = os.iter().map(|o| outputs(r, &[o])).collect();
            let terms: Vec<String> = os.iter().map(|o| filter(r, o, 1)).collect();
            format!(
                "SELECT {distinct}{} FROM {}, {} WHERE {}",
                outs.join(" & "),
                os[0].name,
                os[1].name,
                terms.join(" AND ")
            )
        }
        // selection over a join
        4 | 5 => {
            let os: Vec<&Obj> = OBJS.choose_multiple(r, 2).collect();
            let (a, b) = (os[0], os[1]);
            let conds = (0..r.gen_range(1..3))
                .map(|_| {
                    let op = ["=", "=", "<", ">="].choose(r).unwrap();
                    format!("{} {op} {}", num(r, a), num(r, b))
                })
                .collect::<Vec<_>>()
                .join(" AND ");
            let rule = format!("{}.{}, {}.{}", a.name, a.nums[0], b.name, b.nums[0]);
            let mut terms = Vec::new();
            for _ in 0..r.gen_range(0..4) {
                terms.push(match r.gen_range(0..3) {
                    0 => filter(r, a, 1),
                    1 => filter(r, b, 1),
                    _ => format!("{} <= {}", num(r, a), num(r, b)),
                });
            }
            let wh = if terms.is_empty() {
                String::new()
            } else {
                format!(" WHERE {}", terms.join(" AND "))
            };
            format!(
                "SELECT {distinct}{} FROM {} {}, {} RULE {rule} WITH {conds}{wh}{}",
                outputs(r, &[a, b]),
                kind(r),
                a.name,
                b.name,
                order(r, &[a, b])
            )
        }
        // path selection
        _ => {
            let w = r.gen_range(0..6);
            let wh = if r.gen() {
                format!(" AND G.n1.w >= {}", r.gen_range(0..6))
            } else {
                String::new()
            };
            format!(
                "SELECT {distinct}G.n0.id, G.n1.id, G.e0.w FROM G WHERE PATH(G, N:{{w: {{<, {w}}}}} -> E:{{}} -> N:{{}}){wh}"
            )
        }
    }
}

/// A standalone aggregating or flat join.
pub fn random_join_query(r: &mut impl Rng) -> String {
    let os: Vec<&Obj> = OBJS.choose_multiple(r, 2).collect();
    let (a, b) = (os[0], os[1]);
    let k = kind(r);
    let (d, o) = if k == "RIGHT JOIN" { (b, a) } else { (a, b) };
    let rule = if r.gen() {
        format!("{{{}.{}, xs: [{}.{}]}}", d.name, d.nums[0], o.name, o.nums[0])
    } else {
        format!(
            "{}.{}, {}.{}",
            a.name,
            a.outs[0],
            b.name,
            b.outs[1 % b.outs.len()]
        )
    };
    format!(
        "{k} {}, {} RULE {rule} WITH {} = {}",
        a.name,
        b.name,
        num(r, a),
        num(r, b)
    )
}
