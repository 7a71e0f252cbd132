//! Named objects and views, in one namespace.

use indexmap::IndexMap;

use crate::parser::{JoinExpr, JoinOperand, Query, Select, Source, ViewType};
use crate::scheme::{validate_scheme, ModelType, ObjectScheme, SchemeLookup, Violation};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("name {0} is already defined")]
    DuplicateName(String),
    #[error("unknown object {0}")]
    UnknownObject(String),
    #[error("{name} is a {found} object, not {expected}")]
    ModelMismatch {
        name: String,
        expected: ModelType,
        found: ModelType,
    },
    #[error("object {0} is already initialized")]
    AlreadyInitialized(String),
    #[error("object {0} is not initialized")]
    NotInitialized(String),
    #[error("invalid scheme: {}", join_violations(.0))]
    SchemeInvalid(Vec<Violation>),
    #[error("invalid view {name}: {reason}")]
    ViewInvalid { name: String, reason: String },
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

#[derive(Clone, Debug, PartialEq)]
pub struct CatalogEntry {
    pub name: String,
    pub model: ModelType,
    pub scheme: Option<ObjectScheme>,
    /// Sequence numbers of the CREATE and INIT events.
    pub created: u64,
    pub initialized: Option<u64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ViewDef {
    pub name: String,
    pub vtype: ViewType,
    pub query: Query,
    pub seq: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum CatalogItem {
    Object(CatalogEntry),
    View(ViewDef),
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Catalog {
    items: IndexMap<String, CatalogItem>,
    seq: u64,
}

impl SchemeLookup for Catalog {
    fn scheme_of(&self, object: &str) -> Option<&ObjectScheme> {
        self.object(object)?.scheme.as_ref()
    }
}

impl Catalog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    fn next_seq(&mut self) -> u64 {
        self.seq += 1;
        self.seq
    }

    pub fn object(&self, name: &str) -> Option<&CatalogEntry> {
        match self.items.get(name)? {
            CatalogItem::Object(e) => Some(e),
            CatalogItem::View(_) => None,
        }
    }

    pub fn view(&self, name: &str) -> Option<&ViewDef> {
        match self.items.get(name)? {
            CatalogItem::View(v) => Some(v),
            CatalogItem::Object(_) => None,
        }
    }

    pub fn contains(&self, name: &str) -> bool {
        self.items.contains_key(name)
    }

    /// Objects and views in creation order.
    pub fn items(&self) -> impl Iterator<Item = &CatalogItem> {
        self.items.values()
    }

    pub fn objects(&self) -> impl Iterator<Item = &CatalogEntry> {
        self.items.values().filter_map(|i| match i {
            CatalogItem::Object(e) => Some(e),
            CatalogItem::View(_) => None,
        })
    }

    /// The scheme of an initialized object.
    pub fn scheme(&self, name: &str) -> Result<&ObjectScheme, CatalogError> {
        let e = self
            .object(name)
            .ok_or_else(|| CatalogError::UnknownObject(name.to_string()))?;
        e.scheme
            .as_ref()
            .ok_or_else(|| CatalogError::NotInitialized(name.to_string()))
    }

    pub fn create(&mut self, model: ModelType, name: &str) -> Result<&CatalogEntry, CatalogError> {
        if self.items.contains_key(name) {
            return Err(CatalogError::DuplicateName(name.to_string()));
        }
        let created = self.next_seq();
        self.items.insert(
            name.to_string(),
            CatalogItem::Object(CatalogEntry {
                name: name.to_string(),
                model,
                scheme: None,
                created,
                initialized: None,
            }),
        );
        Ok(self.object(name).unwrap())
    }

    pub fn init(
        &mut self,
        model: ModelType,
        name: &str,
        scheme: ObjectScheme,
    ) -> Result<&CatalogEntry, CatalogError> {
        let entry = self
            .object(name)
            .ok_or_else(|| CatalogError::UnknownObject(name.to_string()))?;
        if entry.model != model || scheme.model() != model {
            return Err(CatalogError::ModelMismatch {
                name: name.to_string(),
                expected: model,
                found: entry.model,
            });
        }
        if entry.scheme.is_some() {
            return Err(CatalogError::AlreadyInitialized(name.to_string()));
        }
        let violations = validate_scheme(&scheme, name, self);
        if !violations.is_empty() {
            return Err(CatalogError::SchemeInvalid(violations));
        }
        let seq = self.next_seq();
        if let Some(CatalogItem::Object(e)) = self.items.get_mut(name) {
            e.scheme = Some(scheme);
            e.initialized = Some(seq);
        }
        Ok(self.object(name).unwrap())
    }

    pub fn define_view(
        &mut self,
        vtype: ViewType,
        name: &str,
        query: Query,
    ) -> Result<&ViewDef, CatalogError> {
        if self.items.contains_key(name) {
            return Err(CatalogError::DuplicateName(name.to_string()));
        }
        let mut stored = Vec::new();
        for r in referenced_names(&query) {
            match self.items.get(&r) {
                None => return Err(CatalogError::UnknownObject(r)),
                Some(CatalogItem::Object(_)) => push_unique(&mut stored, r),
                Some(CatalogItem::View(_)) => {
                    for s in self.stored_objects_of(&r) {
                        push_unique(&mut stored, s);
                    }
                }
            }
        }
        if vtype == ViewType::Single && stored.len() != 1 {
            return Err(CatalogError::ViewInvalid {
                name: name.to_string(),
                reason: format!(
                    "a SINGLE view must reference exactly one object, found {}",
                    stored.len()
                ),
            });
        }
        let seq = self.next_seq();
        self.items.insert(
            name.to_string(),
            CatalogItem::View(ViewDef {
                name: name.to_string(),
                vtype,
                query,
                seq,
            }),
        );
        Ok(self.view(name).unwrap())
    }

    /// Stored objects a view ultimately reads from.
    pub fn stored_objects_of(&self, view: &str) -> Vec<String> {
        let mut out = Vec::new();
        if let Some(v) = self.view(view) {
            for r in referenced_names(&v.query) {
                if self.view(&r).is_some() {
                    for s in self.stored_objects_of(&r) {
                        push_unique(&mut out, s);
                    }
                } else {
                    push_unique(&mut out, r);
                }
            }
        }
        out
    }
}

fn push_unique(v: &mut Vec<String>, s: String) {
    if !v.contains(&s) {
        v.push(s);
    }
}

/// Object and view names a query reads, in first-seen order.
pub fn referenced_names(q: &Query) -> Vec<String> {
    let mut out = Vec::new();
    match q {
        Query::Select(s) => select_names(s, &mut out),
        Query::Join(j) => join_names(j, &mut out),
    }
    out
}

fn select_names(s: &Select, out: &mut Vec<String>) {
    if s.from.is_empty() {
        for o in &s.outputs {
            for p in crate::parser::attribution_paths(o) {
                push_unique(out, p.root().to_string());
            }
        }
    }
    for src in &s.from {
        match src {
            Source::Object(o) => push_unique(out, o.clone()),
            Source::Join(j) => join_names(j, out),
        }
    }
}

fn join_names(j: &JoinExpr, out: &mut Vec<String>) {
    for op in [&j.left, &j.right] {
        match op {
            JoinOperand::Object(o) => push_unique(out, o.clone()),
            JoinOperand::Join(inner) => join_names(inner, out),
            JoinOperand::Select(s) => select_names(s, out),
        }
    }
}
