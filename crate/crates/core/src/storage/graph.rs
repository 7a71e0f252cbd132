use std::collections::{BTreeMap, HashMap, HashSet};

use indexmap::IndexMap;

use super::{EdgeDirection, ElementKind, ItemId, ItemRef, StorageError};
use crate::scheme::{EdgeScheme, NodeScheme, ObjectScheme, EDGE_FROM, EDGE_TO};
use crate::value::Value;

#[derive(Clone, Debug)]
struct EdgeSet {
    from: String,
    to: String,
    edges: BTreeMap<u64, Value>,
    /// node key -> edge ids, in insertion order
    out: HashMap<Value, Vec<u64>>,
    inc: HashMap<Value, Vec<u64>>,
}

/// Nodes keyed by their PRIMARY attribute, edges by sequence number, with
/// out- and in-adjacency lists per edge scheme.
#[derive(Clone, Debug)]
pub struct GraphStore {
    node_keys: IndexMap<String, String>,
    nodes: IndexMap<String, BTreeMap<Value, Value>>,
    edges: IndexMap<String, EdgeSet>,
    next: u64,
}

fn endpoint(v: &Value, key: &str) -> Value {
    v.as_map()
        .and_then(|m| m.get(key))
        .cloned()
        .unwrap_or(Value::Null)
}

impl GraphStore {
    pub(super) fn new(nodes: &[NodeScheme], edges: &[EdgeScheme]) -> Self {
        GraphStore {
            node_keys: nodes
                .iter()
                .map(|n| {
                    (
                        n.name.clone(),
                        n.key().map(|t| t.name.clone()).unwrap_or_default(),
                    )
                })
                .collect(),
            nodes: nodes.iter().map(|n| (n.name.clone(), BTreeMap::new())).collect(),
            edges: edges
                .iter()
                .map(|e| {
                    (
                        e.name.clone(),
                        EdgeSet {
                            from: e.from.clone(),
                            to: e.to.clone(),
                            edges: BTreeMap::new(),
                            out: HashMap::new(),
                            inc: HashMap::new(),
                        },
                    )
                })
                .collect(),
            next: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.values().map(|n| n.len()).sum::<usize>()
            + self.edges.values().map(|e| e.edges.len()).sum::<usize>()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn node_key_name(&self, scheme: &str) -> Option<&str> {
        self.node_keys.get(scheme).map(String::as_str)
    }

    fn key_of(&self, scheme: &str, v: &Value) -> Value {
        endpoint(v, &self.node_keys[scheme])
    }

    pub fn node(&self, scheme: &str, key: &Value) -> Option<&Value> {
        self.nodes.get(scheme)?.get(key)
    }

    pub fn edge(&self, scheme: &str, id: u64) -> Option<&Value> {
        self.edges.get(scheme)?.edges.get(&id)
    }

    /// Nodes of one scheme in key order.
    pub fn nodes_of(&self, scheme: &str) -> impl Iterator<Item = (&Value, &Value)> {
        self.nodes.get(scheme).into_iter().flat_map(|m| m.iter())
    }

    /// Edges of one scheme in insertion order.
    pub fn edges_of(&self, scheme: &str) -> impl Iterator<Item = (u64, &Value)> {
        self.edges
            .get(scheme)
            .into_iter()
            .flat_map(|s| s.edges.iter().map(|(k, v)| (*k, v)))
    }

    pub(super) fn adjacent(&self, scheme: &str, key: &Value, dir: EdgeDirection) -> Vec<(u64, Value)> {
        let Some(set) = self.edges.get(scheme) else {
            return Vec::new();
        };
        let (lists, other) = match dir {
            EdgeDirection::Out => (&set.out, EDGE_TO),
            EdgeDirection::In => (&set.inc, EDGE_FROM),
        };
        lists
            .get(key)
            .map(|ids| {
                ids.iter()
                    .map(|id| (*id, endpoint(&set.edges[id], other)))
                    .collect()
            })
            .unwrap_or_default()
    }

    pub(super) fn scan(&self, object: &str, element: Option<&str>) -> Vec<(ItemRef, Value)> {
        let mut out = Vec::new();
        for (scheme, nodes) in &self.nodes {
            if element.is_some_and(|e| e != scheme) {
                continue;
            }
            for (k, v) in nodes {
                out.push((
                    ItemRef {
                        object: object.to_string(),
                        kind: ElementKind::Node(scheme.clone()),
                        id: ItemId::Key(k.clone()),
                    },
                    v.clone(),
                ));
            }
        }
        for (scheme, set) in &self.edges {
            if element.is_some_and(|e| e != scheme) {
                continue;
            }
            for (id, v) in &set.edges {
                out.push((
                    ItemRef {
                        object: object.to_string(),
                        kind: ElementKind::Edge(scheme.clone()),
                        id: ItemId::Seq(*id),
                    },
                    v.clone(),
                ));
            }
        }
        out
    }

    pub(super) fn export(&self) -> Vec<(Option<String>, Value)> {
        let mut out = Vec::new();
        for (scheme, nodes) in &self.nodes {
            out.extend(nodes.values().map(|v| (Some(scheme.clone()), v.clone())));
        }
        for (scheme, set) in &self.edges {
            out.extend(set.edges.values().map(|v| (Some(scheme.clone()), v.clone())));
        }
        out
    }

    fn has_node(&self, scheme: &str, key: &Value, batch: &HashSet<(String, Value)>) -> bool {
        self.node(scheme, key).is_some() || batch.contains(&(scheme.to_string(), key.clone()))
    }

    pub(super) fn insert_batch(
        &mut self,
        object: &str,
        scheme: &ObjectScheme,
        items: Vec<(Option<String>, Value)>,
    ) -> Result<(), StorageError> {
        let mut batch_nodes = HashSet::new();
        for (element, v) in &items {
            let element = element.as_deref().unwrap();
            if scheme.node(element).is_some() {
                let k = self.key_of(element, v);
                if self.node(element, &k).is_some() || !batch_nodes.insert((element.to_string(), k.clone())) {
                    return Err(StorageError::DuplicatePrimaryKey {
                        object: object.to_string(),
                        key: k,
                    });
                }
            }
        }
        for (element, v) in &items {
            let element = element.as_deref().unwrap();
            if let Some(set) = self.edges.get(element) {
                for (node_scheme, key) in [(&set.from, EDGE_FROM), (&set.to, EDGE_TO)] {
                    let k = endpoint(v, key);
                    if !self.has_node(node_scheme, &k, &batch_nodes) {
                        return Err(StorageError::DanglingEdge {
                            object: object.to_string(),
                            edge: element.to_string(),
                            endpoint: k,
                        });
                    }
                }
            }
        }
        for (element, v) in items {
            let element = element.unwrap();
            if self.nodes.contains_key(&element) {
                let k = self.key_of(&element, &v);
                self.nodes[&element].insert(k, v);
            } else {
                let id = self.next;
                self.next += 1;
                self.attach_edge(&element, id, v);
            }
        }
        Ok(())
    }

    fn attach_edge(&mut self, scheme: &str, id: u64, v: Value) {
        let set = &mut self.edges[scheme];
        for (lists, key) in [(&mut set.out, EDGE_FROM), (&mut set.inc, EDGE_TO)] {
            let ids = lists.entry(endpoint(&v, key)).or_default();
            let pos = ids.partition_point(|x| *x < id);
            ids.insert(pos, id);
        }
        set.edges.insert(id, v);
    }

    fn detach_edge(&mut self, scheme: &str, id: u64) -> Option<Value> {
        let set = &mut self.edges[scheme];
        let v = set.edges.remove(&id)?;
        for (lists, key) in [(&mut set.out, EDGE_FROM), (&mut set.inc, EDGE_TO)] {
            let k = endpoint(&v, key);
            if let Some(ids) = lists.get_mut(&k) {
                ids.retain(|x| *x != id);
                if ids.is_empty() {
                    lists.remove(&k);
                }
            }
        }
        Some(v)
    }

    pub(super) fn remove(&mut self, kind: &ElementKind, id: &ItemId) {
        match (kind, id) {
            (ElementKind::Node(s), ItemId::Key(k)) => {
                if self.nodes[s.as_str()].remove(k).is_none() {
                    return;
                }
                let mut incident = Vec::new();
                for (es, set) in &self.edges {
                    let mut ids: Vec<u64> = Vec::new();
                    if set.from == *s {
                        ids.extend(set.out.get(k).into_iter().flatten());
                    }
                    if set.to == *s {
                        ids.extend(set.inc.get(k).into_iter().flatten());
                    }
                    incident.extend(ids.into_iter().map(|i| (es.clone(), i)));
                }
                for (es, i) in incident {
                    self.detach_edge(&es, i);
                }
            }
            (ElementKind::Edge(s), ItemId::Seq(i)) => {
                self.detach_edge(s, *i);
            }
            _ => {}
        }
    }

    pub(super) fn update_batch(
        &mut self,
        object: &str,
        scheme: &ObjectScheme,
        updates: Vec<(ItemRef, Value)>,
    ) -> Result<usize, StorageError> {
        let none = HashSet::new();
        for (r, v) in &updates {
            match (&r.kind, &r.id) {
                (ElementKind::Node(s), ItemId::Key(k)) => {
                    if self.key_of(s, v) != *k {
                        return Err(StorageError::KeyUpdate(r.to_string()));
                    }
                }
                (ElementKind::Edge(s), _) => {
                    let es = scheme.edge(s).unwrap();
                    for (node_scheme, key) in [(&es.from, EDGE_FROM), (&es.to, EDGE_TO)] {
                        let k = endpoint(v, key);
                        if !self.has_node(node_scheme, &k, &none) {
                            return Err(StorageError::DanglingEdge {
                                object: object.to_string(),
                                edge: s.clone(),
                                endpoint: k,
                            });
                        }
                    }
                }
                _ => {}
            }
        }
        let n = updates.len();
        for (r, v) in updates {
            match (r.kind, r.id) {
                (ElementKind::Node(s), ItemId::Key(k)) => {
                    self.nodes[&s].insert(k, v);
                }
                (ElementKind::Edge(s), ItemId::Seq(id)) => {
                    self.detach_edge(&s, id);
                    self.attach_edge(&s, id, v);
                }
                _ => {}
            }
        }
        Ok(n)
    }
}
