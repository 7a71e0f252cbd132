//! Random sessions: objects of every model, views, inserts, updates and
//! deletes, for snapshot round trips.

use multisql::{Database, Value, ValueMap};
use rand::seq::SliceRandom;
use rand::Rng;

use super::ast::{string, value};
use super::{insert, map, run};

fn text(r: &mut impl Rng) -> Value {
    Value::Str(string(r))
}

fn opt<T>(r: &mut impl Rng, v: T) -> Option<T> {
    r.gen_bool(0.85).then_some(v)
}

fn relation(db: &mut Database, r: &mut impl Rng, name: &str) {
    run(db, &format!("CREATE RELATION {name}"));
    run(
        db,
        &format!("INIT RELATION {name} WITH (id, int, PRIMARY), (name, string, NOT NULL), (flag, bool), (tags, list<string>)"),
    );
    let mut ids: Vec<i64> = (-5..30).collect();
    ids.shuffle(r);
    let rows = ids
        .into_iter()
        .take(r.gen_range(0..8))
        .map(|id| {
            let b = Value::Bool(r.gen());
            let flag = opt(r, b).unwrap_or(Value::Null);
            let tags = Value::List((0..r.gen_range(0..3)).map(|_| text(r)).collect());
            (
                None,
                map(&[
                    ("id", Value::Int(id)),
                    ("name", text(r)),
                    ("flag", flag),
                    ("tags", tags),
                ]),
            )
        })
        .collect();
    insert(db, name, rows);
    if r.gen_bool(0.5) {
        run(
            db,
            &format!(
                "UPDATE {name} SET {name}.flag = TRUE WHERE {name}.id < {}",
                r.gen_range(0..30)
            ),
        );
    }
    if r.gen_bool(0.5) {
        run(
            db,
            &format!("DELETE {name} WHERE {name}.id >= {}", r.gen_range(0..30)),
        );
    }
}

fn kv(db: &mut Database, r: &mut impl Rng, name: &str) {
    run(db, &format!("CREATE KV {name}"));
    run(
        db,
        &format!("INIT KV {name} WITH {{(k, string, PRIMARY), (v, any)}}"),
    );
    let mut seen = Vec::new();
    let mut items = Vec::new();
    for _ in 0..r.gen_range(0..8) {
        let k = string(r);
        if seen.contains(&k) {
            continue;
        }
        seen.push(k.clone());
        items.push((None, map(&[("k", Value::Str(k)), ("v", value(r, 3))])));
    }
    insert(db, name, items);
}

fn document(db: &mut Database, r: &mut impl Rng, name: &str) {
    run(db, &format!("CREATE DOCUMENT {name}"));
    run(
        db,
        &format!(
            "INIT DOCUMENT {name} WITH {{(id, int, PRIMARY), meta: {{(title, string), (n, int)}}, items: LIST OF {{(x, int), (y, string)}}, (extra, any)}}"
        ),
    );
    let docs = (0..r.gen_range(0..6))
        .map(|i| {
            let meta = map(&[("title", text(r)), ("n", Value::Int(r.gen_range(-3..3)))]);
            let items = Value::List(
                (0..r.gen_range(0..3))
                    .map(|_| map(&[("x", Value::Int(r.gen_range(0..9))), ("y", text(r))]))
                    .collect(),
            );
            let extra = value(r, 3);
            (
                None,
                map(&[
                    ("id", Value::Int(i)),
                    ("meta", meta),
                    ("items", items),
                    ("extra", extra),
                ]),
            )
        })
        .collect();
    insert(db, name, docs);
    if r.gen_bool(0.4) {
        run(
            db,
            &format!("UPDATE {name} SET {name}.meta.n = 7 WHERE {name}.id = 0"),
        );
    }
}

fn graph(db: &mut Database, r: &mut impl Rng, name: &str) {
    run(db, &format!("CREATE GRAPH {name}"));
    run(
        db,
        &format!("INIT GRAPH {name} WITH [P {{(id, string, PRIMARY), (name, string)}}, L {{FROM: P, TO: P, (w, int)}}]"),
    );
    let mut keys: Vec<String> = Vec::new();
    for _ in 0..r.gen_range(0..6) {
        let k = string(r);
        if !keys.contains(&k) {
            keys.push(k);
        }
    }
    let mut items: Vec<(Option<&str>, Value)> = keys
        .iter()
        .map(|k| {
            (
                Some("P"),
                map(&[("id", Value::Str(k.clone())), ("name", text(r))]),
            )
        })
        .collect();
    if !keys.is_empty() {
        for _ in 0..r.gen_range(0..8) {
            let mut m = ValueMap::new();
            m.insert("from".into(), Value::Str(keys.choose(r).unwrap().clone()));
            m.insert("to".into(), Value::Str(keys.choose(r).unwrap().clone()));
            m.insert("w".into(), Value::Int(r.gen_range(0..5)));
            items.push((Some("L"), Value::Map(m)));
        }
    }
    insert(db, name, items);
    if r.gen_bool(0.3) && !keys.is_empty() {
        let k = Value::Str(keys[0].clone());
        run(
            db,
            &format!("DELETE {name} WHERE MATCH({name}, P: {{id: {{=, {k}}}}})"),
        );
    }
}

/// A session built from random statements; every statement succeeds.
pub fn random_session(r: &mut impl Rng) -> Database {
    let mut db = Database::new();
    let n = r.gen_range(1..6);
    let mut stored: Vec<String> = Vec::new();
    for i in 0..n {
        let name = format!("O{i}");
        match r.gen_range(0..5) {
            0 => relation(&mut db, r, &name),
            1 => kv(&mut db, r, &name),
            2 => document(&mut db, r, &name),
            3 => graph(&mut db, r, &name),
            _ => {
                // created but never initialized
                run(&mut db, &format!("CREATE DOCUMENT {name}"));
                continue;
            }
        }
        stored.push(name);
        if r.gen_bool(0.3) {
            let o = stored.choose(r).unwrap().clone();
            let vt = if r.gen() { "SINGLE" } else { "MULTI" };
            run(&mut db, &format!("CREATE VIEW {vt} V{i} AS SELECT {o} FROM {o}"));
        }
    }
    db
}
