//! Random small graphs and path patterns, exhaustive path enumeration and the
//! arrow/edge double reversal.

use multisql::parser::{CmpOp, Direction, MatchPattern, PathStep, PatternEntry};
use multisql::storage::ItemRef;
use multisql::{Database, Value};
use rand::seq::SliceRandom;
use rand::Rng;

use super::matching::reference_match;
use super::{insert, map, run};

/// Edge schemes as (name, from, to).
const EDGES: [(&str, &str, &str); 2] = [("E", "A", "A"), ("F", "A", "B")];

#[derive(Clone, Debug)]
pub struct Graph {
    /// (scheme, id, w)
    pub nodes: Vec<(&'static str, i64, i64)>,
    /// (scheme, from id, to id, w)
    pub edges: Vec<(&'static str, i64, i64, i64)>,
}

impl Graph {
    pub fn random(r: &mut impl Rng) -> Self {
        let mut nodes = Vec::new();
        for i in 0..r.gen_range(1..=8) {
            let scheme = if r.gen_bool(0.7) { "A" } else { "B" };
            nodes.push((scheme, i, r.gen_range(0..3)));
        }
        let of = |s: &str| -> Vec<i64> { nodes.iter().filter(|n| n.0 == s).map(|n| n.1).collect() };
        let (a, b) = (of("A"), of("B"));
        let mut edges = Vec::new();
        for _ in 0..r.gen_range(0..=16) {
            let (name, _, to) = *EDGES.choose(r).unwrap();
            let targets = if to == "A" { &a } else { &b };
            if let (Some(f), Some(t)) = (a.choose(r), targets.choose(r)) {
                edges.push((name, *f, *t, r.gen_range(0..3)));
            }
        }
        Graph { nodes, edges }
    }

    /// Every edge turned around, scheme endpoints included.
    pub fn transposed(&self) -> Graph {
        Graph {
            nodes: self.nodes.clone(),
            edges: self.edges.iter().map(|&(s, f, t, w)| (s, t, f, w)).collect(),
        }
    }

    pub fn load(&self, transposed_schemes: bool) -> Database {
        let mut db = Database::new();
        run(&mut db, "CREATE GRAPH G");
        let edges: Vec<String> = EDGES
            .iter()
            .map(|(n, f, t)| {
                let (f, t) = if transposed_schemes { (t, f) } else { (f, t) };
                format!("{n} {{FROM: {f}, TO: {t}, (w, int)}}")
            })
            .collect();
        run(
            &mut db,
            &format!(
                "INIT GRAPH G WITH [A {{(id, int, PRIMARY), (w, int)}}, B {{(id, int, PRIMARY), (w, int)}}, {}]",
                edges.join(", ")
            ),
        );
        let nodes = self
            .nodes
            .iter()
            .map(|&(s, id, w)| (Some(s), map(&[("id", Value::Int(id)), ("w", Value::Int(w))])))
            .collect();
        insert(&mut db, "G", nodes);
        let edges = self
            .edges
            .iter()
            .map(|&(s, f, t, w)| {
                (
                    Some(s),
                    map(&[
                        ("from", Value::Int(f)),
                        ("to", Value::Int(t)),
                        ("w", Value::Int(w)),
                    ]),
                )
            })
            .collect();
        insert(&mut db, "G", edges);
        db
    }
}

fn step_pattern(r: &mut impl Rng) -> MatchPattern {
    if r.gen_bool(0.5) {
        return MatchPattern::wildcard();
    }
    let op = [CmpOp::Eq, CmpOp::Lt, CmpOp::Ge, CmpOp::In]
        .choose(r)
        .copied()
        .unwrap();
    let v = if op == CmpOp::In {
        Value::List(vec![Value::Int(r.gen_range(0..3)), Value::Int(r.gen_range(0..3))])
    } else {
        Value::Int(r.gen_range(0..3))
    };
    MatchPattern(vec![("w".into(), PatternEntry::Pred(op, v))])
}

/// Up to three edges; most steps fit the declared edge endpoints.
pub fn random_steps(r: &mut impl Rng) -> Vec<PathStep> {
    let mut node = if r.gen_bool(0.8) { "A" } else { "B" };
    let mut steps = vec![PathStep::Node {
        scheme: node.into(),
        pattern: step_pattern(r),
    }];
    for _ in 0..r.gen_range(0..=3) {
        let (name, f, t) = *EDGES.choose(r).unwrap();
        let mut direction = if r.gen() {
            Direction::Forward
        } else {
            Direction::Backward
        };
        if r.gen_bool(0.85) {
            // pick the direction that continues from the current node when possible
            if node == f {
                direction = Direction::Forward;
            } else if node == t {
                direction = Direction::Backward;
            }
        }
        let next = match direction {
            Direction::Forward if node == f => t,
            Direction::Backward if node == t => f,
            _ => ["A", "B"].choose(r).unwrap(),
        };
        steps.push(PathStep::Edge {
            scheme: name.into(),
            pattern: step_pattern(r),
            direction,
        });
        node = next;
        steps.push(PathStep::Node {
            scheme: node.into(),
            pattern: step_pattern(r),
        });
    }
    steps
}

/// Every arrow flipped, step order kept.
pub fn flipped(steps: &[PathStep]) -> Vec<PathStep> {
    steps
        .iter()
        .map(|s| match s {
            PathStep::Edge {
                scheme,
                pattern,
                direction,
            } => PathStep::Edge {
                scheme: scheme.clone(),
                pattern: pattern.clone(),
                direction: match direction {
                    Direction::Forward => Direction::Backward,
                    Direction::Backward => Direction::Forward,
                },
            },
            node => node.clone(),
        })
        .collect()
}

/// Steps in reverse order with every arrow flipped: the same walks read
/// backwards.
pub fn reversed(steps: &[PathStep]) -> Vec<PathStep> {
    let mut s = flipped(steps);
    s.reverse();
    s
}

fn id(v: &Value, k: &str) -> Value {
    v.as_map().unwrap()[k].clone()
}

/// All bindings by brute force: every combination of items of the step
/// schemes, kept when patterns match and consecutive items are incident in
/// the stated direction. Sorted.
pub fn enumerate(db: &Database, steps: &[PathStep]) -> Vec<Vec<ItemRef>> {
    let scheme = db.catalog.scheme("G").unwrap().clone();
    let items = |s: &PathStep| db.storage.scan("G", Some(s.scheme())).unwrap();
    let mut partial: Vec<Vec<(ItemRef, Value)>> = items(&steps[0])
        .into_iter()
        .filter(|(_, v)| reference_match(steps[0].pattern(), v))
        .map(|x| vec![x])
        .collect();
    let mut i = 1;
    while i < steps.len() {
        let (edge, node) = (&steps[i], &steps[i + 1]);
        let PathStep::Edge { direction, .. } = edge else {
            unreachable!()
        };
        let es = scheme.edge(edge.scheme()).unwrap();
        let prev_scheme = steps[i - 1].scheme();
        let (near, far) = match direction {
            Direction::Forward => (&es.from, &es.to),
            Direction::Backward => (&es.to, &es.from),
        };
        let (near_key, far_key) = match direction {
            Direction::Forward => ("from", "to"),
            Direction::Backward => ("to", "from"),
        };
        let mut next = Vec::new();
        if near == prev_scheme && far == node.scheme() {
            let edges = items(edge);
            let nodes = items(node);
            for p in &partial {
                let last = &p.last().unwrap().1;
                for e in edges.iter().filter(|(_, v)| reference_match(edge.pattern(), v)) {
                    if id(&e.1, near_key) != id(last, "id") {
                        continue;
                    }
                    for n in nodes.iter().filter(|(_, v)| reference_match(node.pattern(), v)) {
                        if id(&e.1, far_key) == id(&n.1, "id") {
                            let mut q = p.clone();
                            q.push(e.clone());
                            q.push(n.clone());
                            next.push(q);
                        }
                    }
                }
            }
        }
        partial = next;
        i += 2;
    }
    let mut out: Vec<Vec<ItemRef>> = partial
        .into_iter()
        .map(|p| p.into_iter().map(|(r, _)| r).collect())
        .collect();
    out.sort();
    out
}
