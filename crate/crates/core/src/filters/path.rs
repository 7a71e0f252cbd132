use std::collections::HashMap;

use super::{eval_match, FilterError};
use crate::parser::{Direction, PathStep};
use crate::scheme::{EDGE_FROM, EDGE_TO};
use crate::storage::{EdgeDirection, ItemId, ItemRef, ObjectStore};
use crate::value::Value;

/// Items matched by a path pattern: node, edge, node, ...
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PathBinding {
    pub items: Vec<(ItemRef, Value)>,
}

impl PathBinding {
    pub fn refs(&self) -> Vec<&ItemRef> {
        self.items.iter().map(|(r, _)| r).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathMode {
    /// Walk adjacency lists from each matching start node.
    Adjacency,
    /// Scan each step's node or edge scheme and join step by step.
    Scan,
}

fn node_key(r: &ItemRef) -> &Value {
    match &r.id {
        ItemId::Key(k) => k,
        ItemId::Seq(_) => unreachable!("nodes are keyed"),
    }
}

fn check_steps(steps: &[PathStep], store: &ObjectStore) -> Result<(), FilterError> {
    let scheme = store.scheme();
    for s in steps {
        let ok = match s {
            PathStep::Node { scheme: n, .. } => scheme.node(n).is_some(),
            PathStep::Edge { scheme: e, .. } => scheme.edge(e).is_some(),
        };
        if !ok {
            return Err(FilterError::UnknownScheme(s.scheme().to_string()));
        }
    }
    Ok(())
}

/// Whether the edge scheme links the surrounding node steps when walked in
/// the given direction.
fn edge_fits(store: &ObjectStore, from_node: &str, edge: &str, dir: Direction, to_node: &str) -> bool {
    let es = store.scheme().edge(edge).unwrap();
    match dir {
        Direction::Forward => es.from == from_node && es.to == to_node,
        Direction::Backward => es.to == from_node && es.from == to_node,
    }
}

/// All bindings of `steps` in the graph store, sorted by item references.
pub fn eval_path(
    steps: &[PathStep],
    store: &ObjectStore,
    mode: PathMode,
) -> Result<Vec<PathBinding>, FilterError> {
    if store.graph().is_none() {
        return Err(FilterError::UnknownScheme(steps[0].scheme().to_string()));
    }
    check_steps(steps, store)?;
    let mut out = match mode {
        PathMode::Adjacency => adjacency(steps, store),
        PathMode::Scan => scan(steps, store),
    };
    out.sort();
    Ok(out)
}

fn adjacency(steps: &[PathStep], store: &ObjectStore) -> Vec<PathBinding> {
    let mut out = Vec::new();
    for (r, v) in store.scan(Some(steps[0].scheme())).unwrap() {
        if eval_match(steps[0].pattern(), &v) {
            let mut acc = vec![(r, v)];
            walk(steps, 1, store, &mut acc, &mut out);
        }
    }
    out
}

fn walk(
    steps: &[PathStep],
    i: usize,
    store: &ObjectStore,
    acc: &mut Vec<(ItemRef, Value)>,
    out: &mut Vec<PathBinding>,
) {
    if i >= steps.len() {
        out.push(PathBinding { items: acc.clone() });
        return;
    }
    let PathStep::Edge {
        scheme: edge,
        pattern: edge_pattern,
        direction,
    } = &steps[i]
    else {
        unreachable!("steps alternate")
    };
    let next = &steps[i + 1];
    let cur = &acc.last().unwrap().0;
    let cur_scheme = cur.kind.scheme().unwrap();
    if !edge_fits(store, cur_scheme, edge, *direction, next.scheme()) {
        return;
    }
    let dir = match direction {
        Direction::Forward => EdgeDirection::Out,
        Direction::Backward => EdgeDirection::In,
    };
    let hops = store.neighbors(node_key(cur), edge, dir).unwrap();
    for (eref, nref) in hops {
        let ev = store.get(&eref).unwrap();
        if !eval_match(edge_pattern, &ev) {
            continue;
        }
        let Some(nv) = store.get(&nref) else { continue };
        if !eval_match(next.pattern(), &nv) {
            continue;
        }
        acc.push((eref, ev));
        acc.push((nref, nv));
        walk(steps, i + 2, store, acc, out);
        acc.pop();
        acc.pop();
    }
}

fn scan(steps: &[PathStep], store: &ObjectStore) -> Vec<PathBinding> {
    let matching: Vec<Vec<(ItemRef, Value)>> = steps
        .iter()
        .map(|s| {
            store
                .scan(Some(s.scheme()))
                .unwrap()
                .into_iter()
                .filter(|(_, v)| eval_match(s.pattern(), v))
                .collect()
        })
        .collect();
    let mut partial: Vec<Vec<(ItemRef, Value)>> = matching[0].iter().map(|x| vec![x.clone()]).collect();
    let mut i = 1;
    while i < steps.len() {
        let PathStep::Edge { direction, .. } = &steps[i] else {
            unreachable!("steps alternate")
        };
        let (near, far) = match direction {
            Direction::Forward => (EDGE_FROM, EDGE_TO),
            Direction::Backward => (EDGE_TO, EDGE_FROM),
        };
        let next_nodes: HashMap<&Value, &(ItemRef, Value)> =
            matching[i + 1].iter().map(|n| (node_key(&n.0), n)).collect();
        let mut extended = Vec::new();
        for p in partial {
            let cur = &p.last().unwrap().0;
            if let Some(cur_scheme) = cur.kind.scheme() {
                if !edge_fits(
                    store,
                    cur_scheme,
                    steps[i].scheme(),
                    *direction,
                    steps[i + 1].scheme(),
                ) {
                    continue;
                }
            }
            for e in &matching[i] {
                let ends = |k: &str| e.1.get_path(&[k]).cloned().unwrap_or(Value::Null);
                if ends(near) != *node_key(cur) {
                    continue;
                }
                if let Some(n) = next_nodes.get(&ends(far)) {
                    let mut q = p.clone();
                    q.push(e.clone());
                    q.push((*n).clone());
                    extended.push(q);
                }
            }
        }
        partial = extended;
        i += 2;
    }
    partial.into_iter().map(|items| PathBinding { items }).collect()
}
