//! In-memory stores for the four data models.

mod graph;
mod records;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use indexmap::IndexMap;

use crate::scheme::{ModelType, ObjectScheme, Violation};
use crate::value::Value;

pub use graph::GraphStore;
use records::{KvStore, RecordStore};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ElementKind {
    Row,
    Pair,
    Doc,
    Node(String),
    Edge(String),
}

impl ElementKind {
    /// Node or edge scheme name, for graph elements.
    pub fn scheme(&self) -> Option<&str> {
        match self {
            ElementKind::Node(s) | ElementKind::Edge(s) => Some(s),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ItemId {
    Seq(u64),
    Key(Value),
}

/// Stable handle to one stored item.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ItemRef {
    pub object: String,
    pub kind: ElementKind,
    pub id: ItemId,
}

impl fmt::Display for ItemRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.object)?;
        if let Some(s) = self.kind.scheme() {
            write!(f, ".{s}")?;
        }
        match &self.id {
            ItemId::Seq(n) => write!(f, "#{n}"),
            ItemId::Key(k) => write!(f, "[{k}]"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeDirection {
    Out,
    In,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Mutation {
    Delete,
    /// Assignments with paths relative to the item value.
    Set(Vec<(Vec<String>, Value)>),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum StorageError {
    #[error("unknown object {0}")]
    UnknownObject(String),
    #[error("object {0} is not initialized")]
    NotInitialized(String),
    #[error("object {object} is not a {expected} object")]
    ModelMismatch { object: String, expected: ModelType },
    #[error("object {object} has no node or edge scheme {scheme}")]
    UnknownScheme { object: String, scheme: String },
    #[error("item does not conform to {object}: {}", .violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Conformance {
        object: String,
        violations: Vec<Violation>,
    },
    #[error("duplicate primary key {key} in {object}")]
    DuplicatePrimaryKey { object: String, key: Value },
    #[error("edge {edge} in {object} references missing node {endpoint}")]
    DanglingEdge {
        object: String,
        edge: String,
        endpoint: Value,
    },
    #[error("stale item reference {0}")]
    StaleRef(String),
    #[error("node keys cannot be updated ({0})")]
    KeyUpdate(String),
}

/// Item-visit counter used to compare access paths.
#[derive(Debug, Default)]
pub struct Visits(AtomicU64);

impl Visits {
    pub fn add(&self, n: usize) {
        self.0.fetch_add(n as u64, Ordering::Relaxed);
    }

    pub fn get(&self) -> u64 {
        self.0.load(Ordering::Relaxed)
    }

    pub fn reset(&self) {
        self.0.store(0, Ordering::Relaxed);
    }
}

impl Clone for Visits {
    fn clone(&self) -> Self {
        Visits(AtomicU64::new(self.get()))
    }
}

#[derive(Clone, Debug)]
enum StoreData {
    Relation(RecordStore),
    Document(RecordStore),
    Kv(KvStore),
    Graph(GraphStore),
}

/// The contents of one initialized object.
#[derive(Clone, Debug)]
pub struct ObjectStore {
    name: String,
    scheme: ObjectScheme,
    data: StoreData,
    visits: Visits,
}

impl ObjectStore {
    pub fn new(name: &str, scheme: ObjectScheme) -> Self {
        let data = match &scheme {
            ObjectScheme::Relational { .. } => StoreData::Relation(RecordStore::new(scheme.primary_name())),
            ObjectScheme::Document { .. } => StoreData::Document(RecordStore::new(scheme.primary_name())),
            ObjectScheme::KeyValue { key, value } => StoreData::Kv(KvStore::new(&key.name, &value.name)),
            ObjectScheme::Graph { nodes, edges } => StoreData::Graph(GraphStore::new(nodes, edges)),
        };
        ObjectStore {
            name: name.to_string(),
            scheme,
            data,
            visits: Visits::default(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn scheme(&self) -> &ObjectScheme {
        &self.scheme
    }

    pub fn model(&self) -> ModelType {
        self.scheme.model()
    }

    pub fn visits(&self) -> &Visits {
        &self.visits
    }

    pub fn len(&self) -> usize {
        match &self.data {
            StoreData::Relation(r) | StoreData::Document(r) => r.len(),
            StoreData::Kv(k) => k.len(),
            StoreData::Graph(g) => g.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn graph(&self) -> Option<&GraphStore> {
        match &self.data {
            StoreData::Graph(g) => Some(g),
            _ => None,
        }
    }

    fn conformance(&self, violations: Vec<Violation>) -> StorageError {
        StorageError::Conformance {
            object: self.name.clone(),
            violations,
        }
    }

    fn unknown_scheme(&self, scheme: &str) -> StorageError {
        StorageError::UnknownScheme {
            object: self.name.clone(),
            scheme: scheme.to_string(),
        }
    }

    /// Inserts a batch atomically: either every item is stored or none is.
    /// Graph items carry their node or edge scheme name.
    pub fn insert_items(&mut self, items: Vec<(Option<String>, Value)>) -> Result<usize, StorageError> {
        for (element, item) in &items {
            match (&self.data, element) {
                (StoreData::Graph(_), None) => {
                    return Err(self.conformance(vec![Violation::new(
                        "",
                        "graph items need a node or edge scheme name",
                    )]))
                }
                (StoreData::Graph(_), Some(e)) => {
                    if self.scheme.node(e).is_none() && self.scheme.edge(e).is_none() {
                        return Err(self.unknown_scheme(e));
                    }
                }
                (_, Some(e)) => return Err(self.unknown_scheme(e)),
                _ => {}
            }
            let v = crate::scheme::check_record_against(&self.scheme, element.as_deref(), item);
            if !v.is_empty() {
                return Err(self.conformance(v));
            }
        }
        let name = self.name.clone();
        let n = items.len();
        match &mut self.data {
            StoreData::Relation(r) | StoreData::Document(r) => {
                r.insert_batch(&name, items.into_iter().map(|(_, v)| v).collect())?
            }
            StoreData::Kv(k) => k.insert_batch(&name, items.into_iter().map(|(_, v)| v).collect())?,
            StoreData::Graph(g) => g.insert_batch(&name, &self.scheme, items)?,
        }
        Ok(n)
    }

    fn element_kind(&self) -> ElementKind {
        match &self.data {
            StoreData::Relation(_) => ElementKind::Row,
            StoreData::Document(_) => ElementKind::Doc,
            StoreData::Kv(_) => ElementKind::Pair,
            StoreData::Graph(_) => unreachable!("graph elements are per scheme"),
        }
    }

    /// All items in scan order; for graphs optionally restricted to one
    /// node or edge scheme.
    pub fn scan(&self, element: Option<&str>) -> Result<Vec<(ItemRef, Value)>, StorageError> {
        let out: Vec<(ItemRef, Value)> = match &self.data {
            StoreData::Graph(g) => {
                if let Some(e) = element {
                    if self.scheme.node(e).is_none() && self.scheme.edge(e).is_none() {
                        return Err(self.unknown_scheme(e));
                    }
                }
                g.scan(&self.name, element)
            }
            _ if element.is_some() => return Err(self.unknown_scheme(element.unwrap())),
            StoreData::Relation(r) | StoreData::Document(r) => {
                let kind = self.element_kind();
                r.iter()
                    .map(|(id, v)| (self.item_ref(kind.clone(), ItemId::Seq(id)), v.clone()))
                    .collect()
            }
            StoreData::Kv(k) => k
                .iter()
                .map(|(key, v)| (self.item_ref(ElementKind::Pair, ItemId::Key(key.clone())), v))
                .collect(),
        };
        self.visits.add(out.len());
        Ok(out)
    }

    fn item_ref(&self, kind: ElementKind, id: ItemId) -> ItemRef {
        ItemRef {
            object: self.name.clone(),
            kind,
            id,
        }
    }

    /// The stored value behind a reference.
    pub fn get(&self, r: &ItemRef) -> Option<Value> {
        let v = match (&self.data, &r.kind, &r.id) {
            (StoreData::Relation(s), ElementKind::Row, ItemId::Seq(id))
            | (StoreData::Document(s), ElementKind::Doc, ItemId::Seq(id)) => s.get(*id).cloned(),
            (StoreData::Kv(k), ElementKind::Pair, ItemId::Key(key)) => k.get_item(key),
            (StoreData::Graph(g), ElementKind::Node(s), ItemId::Key(key)) => g.node(s, key).cloned(),
            (StoreData::Graph(g), ElementKind::Edge(s), ItemId::Seq(id)) => g.edge(s, *id).cloned(),
            _ => None,
        };
        if v.is_some() {
            self.visits.add(1);
        }
        v
    }

    /// Key-value lookup; returns the pair as a `{key: .., value: ..}` item.
    pub fn kv_lookup(&self, key: &Value) -> Result<Option<(ItemRef, Value)>, StorageError> {
        let StoreData::Kv(k) = &self.data else {
            return Err(StorageError::ModelMismatch {
                object: self.name.clone(),
                expected: ModelType::KeyValue,
            });
        };
        let found = k
            .get_item(key)
            .map(|v| (self.item_ref(ElementKind::Pair, ItemId::Key(key.clone())), v));
        if found.is_some() {
            self.visits.add(1);
        }
        Ok(found)
    }

    /// Edges of `edge_scheme` leaving (`Out`) or entering (`In`) the node with
    /// key `node_key`, paired with the node at the other end.
    pub fn neighbors(
        &self,
        node_key: &Value,
        edge_scheme: &str,
        dir: EdgeDirection,
    ) -> Result<Vec<(ItemRef, ItemRef)>, StorageError> {
        let StoreData::Graph(g) = &self.data else {
            return Err(StorageError::ModelMismatch {
                object: self.name.clone(),
                expected: ModelType::Graph,
            });
        };
        let Some(es) = self.scheme.edge(edge_scheme) else {
            return Err(self.unknown_scheme(edge_scheme));
        };
        let other_scheme = match dir {
            EdgeDirection::Out => &es.to,
            EdgeDirection::In => &es.from,
        };
        let out: Vec<(ItemRef, ItemRef)> = g
            .adjacent(edge_scheme, node_key, dir)
            .into_iter()
            .map(|(id, other)| {
                (
                    self.item_ref(ElementKind::Edge(edge_scheme.to_string()), ItemId::Seq(id)),
                    self.item_ref(ElementKind::Node(other_scheme.clone()), ItemId::Key(other)),
                )
            })
            .collect();
        self.visits.add(out.len());
        Ok(out)
    }

    /// Deletes or updates the referenced items as one atomic batch. Deleting
    /// a node also deletes its incident edges.
    pub fn apply_mutation(&mut self, refs: &[ItemRef], action: &Mutation) -> Result<usize, StorageError> {
        let mut refs: Vec<ItemRef> = refs.to_vec();
        refs.sort();
        refs.dedup();
        for r in &refs {
            if r.object != self.name || self.get(r).is_none() {
                return Err(StorageError::StaleRef(r.to_string()));
            }
        }
        let name = self.name.clone();
        match action {
            Mutation::Delete => {
                for r in &refs {
                    match (&mut self.data, &r.id) {
                        (StoreData::Relation(s) | StoreData::Document(s), ItemId::Seq(id)) => {
                            s.remove(*id);
                        }
                        (StoreData::Kv(k), ItemId::Key(key)) => k.remove(key),
                        (StoreData::Graph(g), id) => g.remove(&r.kind, id),
                        _ => unreachable!(),
                    }
                }
                Ok(refs.len())
            }
            Mutation::Set(assignments) => {
                let mut updates = Vec::with_capacity(refs.len());
                for r in &refs {
                    let mut v = self.get(r).unwrap();
                    for (path, value) in assignments {
                        if !v.set_path(path, value.clone()) {
                            return Err(self.conformance(vec![Violation::new(
                                path.join("."),
                                "cannot assign below a non-map value",
                            )]));
                        }
                    }
                    let violations = crate::scheme::check_record_against(&self.scheme, r.kind.scheme(), &v);
                    if !violations.is_empty() {
                        return Err(self.conformance(violations));
                    }
                    updates.push((r.clone(), v));
                }
                match &mut self.data {
                    StoreData::Relation(s) | StoreData::Document(s) => s.update_batch(
                        &name,
                        updates
                            .into_iter()
                            .map(|(r, v)| match r.id {
                                ItemId::Seq(id) => (id, v),
                                ItemId::Key(_) => unreachable!(),
                            })
                            .collect(),
                    ),
                    StoreData::Kv(k) => k.update_batch(
                        &name,
                        updates
                            .into_iter()
                            .map(|(r, v)| match r.id {
                                ItemId::Key(key) => (key, v),
                                ItemId::Seq(_) => unreachable!(),
                            })
                            .collect(),
                    ),
                    StoreData::Graph(g) => g.update_batch(&name, &self.scheme, updates),
                }
            }
        }
    }

    /// Full contents in scan order, tagged with graph element scheme names;
    /// `insert_items` on a fresh store reproduces the object.
    pub fn export(&self) -> Vec<(Option<String>, Value)> {
        match &self.data {
            StoreData::Relation(s) | StoreData::Document(s) => {
                s.iter().map(|(_, v)| (None, v.clone())).collect()
            }
            StoreData::Kv(k) => k.iter().map(|(_, v)| (None, v)).collect(),
            StoreData::Graph(g) => g.export(),
        }
    }
}

/// All object stores, keyed by object name.
#[derive(Clone, Debug, Default)]
pub struct Storage {
    stores: IndexMap<String, ObjectStore>,
}

impl Storage {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn create(&mut self, name: &str, scheme: ObjectScheme) {
        self.stores
            .insert(name.to_string(), ObjectStore::new(name, scheme));
    }

    pub fn store(&self, name: &str) -> Result<&ObjectStore, StorageError> {
        self.stores
            .get(name)
            .ok_or_else(|| StorageError::UnknownObject(name.to_string()))
    }

    pub fn store_mut(&mut self, name: &str) -> Result<&mut ObjectStore, StorageError> {
        self.stores
            .get_mut(name)
            .ok_or_else(|| StorageError::UnknownObject(name.to_string()))
    }

    pub fn stores(&self) -> impl Iterator<Item = &ObjectStore> {
        self.stores.values()
    }

    pub fn insert_items(
        &mut self,
        name: &str,
        items: Vec<(Option<String>, Value)>,
    ) -> Result<usize, StorageError> {
        self.store_mut(name)?.insert_items(items)
    }

    pub fn scan(&self, name: &str, element: Option<&str>) -> Result<Vec<(ItemRef, Value)>, StorageError> {
        self.store(name)?.scan(element)
    }

    pub fn kv_lookup(&self, name: &str, key: &Value) -> Result<Option<Value>, StorageError> {
        Ok(self.store(name)?.kv_lookup(key)?.map(|(_, v)| v))
    }

    pub fn neighbors(
        &self,
        name: &str,
        node_key: &Value,
        edge_scheme: &str,
        dir: EdgeDirection,
    ) -> Result<Vec<(ItemRef, ItemRef)>, StorageError> {
        self.store(name)?.neighbors(node_key, edge_scheme, dir)
    }

    pub fn apply_mutation(
        &mut self,
        name: &str,
        refs: &[ItemRef],
        action: &Mutation,
    ) -> Result<usize, StorageError> {
        self.store_mut(name)?.apply_mutation(refs, action)
    }

    pub fn total_visits(&self) -> u64 {
        self.stores.values().map(|s| s.visits.get()).sum()
    }

    pub fn reset_visits(&self) {
        self.stores.values().for_each(|s| s.visits.reset());
    }

    /// Snapshot of every object's exported contents, for equality checks.
    pub fn export_all(&self) -> BTreeMap<String, Vec<(Option<String>, Value)>> {
        self.stores.iter().map(|(k, s)| (k.clone(), s.export())).collect()
    }
}
