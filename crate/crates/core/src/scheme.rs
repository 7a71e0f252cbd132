//! Scheme algebra: every data model is assembled from `(name, type, constraint)`
//! triples, optionally nested into maps and lists.

use std::collections::HashSet;
use std::fmt;

use crate::value::Value;

/// The four data models an object can be declared with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelType {
    Relation,
    KeyValue,
    Document,
    Graph,
}

impl fmt::Display for ModelType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelType::Relation => "RELATION",
            ModelType::KeyValue => "KV",
            ModelType::Document => "DOCUMENT",
            ModelType::Graph => "GRAPH",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TypeTag {
    Int,
    Str,
    Bool,
    List(Box<TypeTag>),
    Map,
    Any,
}

impl TypeTag {
    /// Whether a non-null value inhabits this type. List elements may be null.
    pub fn admits(&self, v: &Value) -> bool {
        match (self, v) {
            (TypeTag::Any, _) => true,
            (TypeTag::Int, Value::Int(_))
            | (TypeTag::Str, Value::Str(_))
            | (TypeTag::Bool, Value::Bool(_))
            | (TypeTag::Map, Value::Map(_)) => true,
            (TypeTag::List(elem), Value::List(items)) => items.iter().all(|x| x.is_null() || elem.admits(x)),
            _ => false,
        }
    }
}

impl fmt::Display for TypeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeTag::Int => f.write_str("INT"),
            TypeTag::Str => f.write_str("STRING"),
            TypeTag::Bool => f.write_str("BOOL"),
            TypeTag::List(t) => write!(f, "LIST<{t}>"),
            TypeTag::Map => f.write_str("MAP"),
            TypeTag::Any => f.write_str("ANY"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Constraint {
    None,
    Primary,
    /// Optional `object.attribute...` target. A bare `FOREIGN` is accepted
    /// without a target and is not resolved.
    Foreign(Option<Vec<String>>),
    NotNull,
}

impl Constraint {
    pub fn rejects_null(&self) -> bool {
        matches!(self, Constraint::Primary | Constraint::NotNull)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Triple {
    pub name: String,
    pub ty: TypeTag,
    pub constraint: Constraint,
}

impl Triple {
    pub fn new(name: impl Into<String>, ty: TypeTag, constraint: Constraint) -> Self {
        Triple {
            name: name.into(),
            ty,
            constraint,
        }
    }
}

/// A field of a nested scheme. `ListNode` describes a list whose elements are
/// maps with the given fields; lists of scalars use a `LIST<T>` leaf instead.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum NestedTriple {
    Leaf(Triple),
    MapNode {
        name: String,
        children: Vec<NestedTriple>,
    },
    ListNode {
        name: String,
        element: Vec<NestedTriple>,
    },
}

impl NestedTriple {
    pub fn name(&self) -> &str {
        match self {
            NestedTriple::Leaf(t) => &t.name,
            NestedTriple::MapNode { name, .. } | NestedTriple::ListNode { name, .. } => name,
        }
    }

    /// The type a value stored in this field has, folding structure into
    /// `MAP` / `LIST<MAP>`.
    pub fn shape_tag(&self) -> TypeTag {
        match self {
            NestedTriple::Leaf(t) => t.ty.clone(),
            NestedTriple::MapNode { .. } => TypeTag::Map,
            NestedTriple::ListNode { .. } => TypeTag::List(Box::new(TypeTag::Map)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NodeScheme {
    pub name: String,
    pub properties: Vec<NestedTriple>,
}

impl NodeScheme {
    /// The PRIMARY leaf identifying a node.
    pub fn key(&self) -> Option<&Triple> {
        self.properties.iter().find_map(|p| match p {
            NestedTriple::Leaf(t) if t.constraint == Constraint::Primary => Some(t),
            _ => None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EdgeScheme {
    pub name: String,
    pub from: String,
    pub to: String,
    pub properties: Vec<NestedTriple>,
}

/// Reserved keys carrying an edge's endpoint node keys inside edge values.
pub const EDGE_FROM: &str = "from";
pub const EDGE_TO: &str = "to";

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ObjectScheme {
    Relational {
        columns: Vec<Triple>,
    },
    KeyValue {
        key: Triple,
        value: Triple,
    },
    Document {
        root: Vec<NestedTriple>,
    },
    Graph {
        nodes: Vec<NodeScheme>,
        edges: Vec<EdgeScheme>,
    },
}

/// A scheme or instance check failure, located by a dotted/indexed path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

impl Violation {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Violation {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            f.write_str(&self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

fn join_path(prefix: &str, name: &str) -> String {
    if prefix.is_empty() {
        name.to_string()
    } else {
        format!("{prefix}.{name}")
    }
}

/// Checks one field value against its scheme fragment.
pub fn conforms(item: &Value, fragment: &NestedTriple) -> Vec<Violation> {
    let mut out = Vec::new();
    check_field(item, fragment, fragment.name(), &mut out);
    out
}

/// Checks a record (a map) against a list of field fragments. The record must
/// carry exactly the declared names.
pub fn conforms_fields(item: &Value, fields: &[NestedTriple]) -> Vec<Violation> {
    let mut out = Vec::new();
    check_record(item, fields, "", &mut out);
    out
}

pub fn conforms_triple(item: &Value, triple: &Triple) -> Vec<Violation> {
    let mut out = Vec::new();
    check_leaf(item, triple, &triple.name, &mut out);
    out
}

fn check_leaf(item: &Value, t: &Triple, path: &str, out: &mut Vec<Violation>) {
    if item.is_null() {
        if t.constraint.rejects_null() {
            out.push(Violation::new(path, "null value violates constraint"));
        }
    } else if !t.ty.admits(item) {
        out.push(Violation::new(
            path,
            format!("expected {}, found {}", t.ty, item.type_name()),
        ));
    }
}

fn check_field(item: &Value, frag: &NestedTriple, path: &str, out: &mut Vec<Violation>) {
    match frag {
        NestedTriple::Leaf(t) => check_leaf(item, t, path, out),
        NestedTriple::MapNode { children, .. } => check_record(item, children, path, out),
        NestedTriple::ListNode { element, .. } => match item {
            Value::List(items) => {
                for (i, el) in items.iter().enumerate() {
                    check_record(el, element, &format!("{path}[{i}]"), out);
                }
            }
            other => out.push(Violation::new(
                path,
                format!("expected LIST, found {}", other.type_name()),
            )),
        },
    }
}

fn check_record(item: &Value, fields: &[NestedTriple], path: &str, out: &mut Vec<Violation>) {
    let Value::Map(m) = item else {
        out.push(Violation::new(
            path,
            format!("expected MAP, found {}", item.type_name()),
        ));
        return;
    };
    for f in fields {
        let p = join_path(path, f.name());
        match m.get(f.name()) {
            Some(v) => check_field(v, f, &p, out),
            None => out.push(Violation::new(p, "missing attribute")),
        }
    }
    for k in m.keys() {
        if !fields.iter().any(|f| f.name() == k) {
            out.push(Violation::new(join_path(path, k), "unexpected key"));
        }
    }
}

impl ObjectScheme {
    pub fn model(&self) -> ModelType {
        match self {
            ObjectScheme::Relational { .. } => ModelType::Relation,
            ObjectScheme::KeyValue { .. } => ModelType::KeyValue,
            ObjectScheme::Document { .. } => ModelType::Document,
            ObjectScheme::Graph { .. } => ModelType::Graph,
        }
    }

    pub fn node(&self, name: &str) -> Option<&NodeScheme> {
        match self {
            ObjectScheme::Graph { nodes, .. } => nodes.iter().find(|n| n.name == name),
            _ => None,
        }
    }

    pub fn edge(&self, name: &str) -> Option<&EdgeScheme> {
        match self {
            ObjectScheme::Graph { edges, .. } => edges.iter().find(|e| e.name == name),
            _ => None,
        }
    }

    /// The top-level fields of a record stored in this object (for graphs,
    /// of the named node or edge scheme).
    pub fn record_fields(&self, element: Option<&str>) -> Option<Vec<NestedTriple>> {
        match self {
            ObjectScheme::Relational { columns } => {
                Some(columns.iter().cloned().map(NestedTriple::Leaf).collect())
            }
            ObjectScheme::KeyValue { key, value } => Some(vec![
                NestedTriple::Leaf(key.clone()),
                NestedTriple::Leaf(value.clone()),
            ]),
            ObjectScheme::Document { root } => Some(root.clone()),
            ObjectScheme::Graph { .. } => {
                let name = element?;
                if let Some(n) = self.node(name) {
                    return Some(n.properties.clone());
                }
                let e = self.edge(name)?;
                let mut fields = vec![
                    NestedTriple::Leaf(Triple::new(
                        EDGE_FROM,
                        self.node_key_type(&e.from).unwrap_or(TypeTag::Any),
                        Constraint::NotNull,
                    )),
                    NestedTriple::Leaf(Triple::new(
                        EDGE_TO,
                        self.node_key_type(&e.to).unwrap_or(TypeTag::Any),
                        Constraint::NotNull,
                    )),
                ];
                fields.extend(e.properties.iter().cloned());
                Some(fields)
            }
        }
    }

    pub fn node_key_type(&self, node: &str) -> Option<TypeTag> {
        self.node(node)?.key().map(|t| t.ty.clone())
    }

    /// Resolves an attribute path to its field fragment. For graphs the first
    /// segment names the node or edge scheme.
    pub fn field_at<S: AsRef<str>>(&self, path: &[S]) -> Option<NestedTriple> {
        let (element, rest) = match self {
            ObjectScheme::Graph { .. } => {
                let (first, rest) = path.split_first()?;
                (Some(first.as_ref()), rest)
            }
            _ => (None, path),
        };
        let fields = self.record_fields(element)?;
        let (head, tail) = rest.split_first()?;
        let mut cur = fields.into_iter().find(|f| f.name() == head.as_ref())?;
        for seg in tail {
            let next = match &cur {
                NestedTriple::MapNode { children, .. } => {
                    children.iter().find(|f| f.name() == seg.as_ref()).cloned()
                }
                _ => None,
            };
            cur = next?;
        }
        Some(cur)
    }

    /// All top-level attribute names across the object's records.
    pub fn top_level_names(&self) -> Vec<String> {
        match self {
            ObjectScheme::Graph { nodes, edges } => {
                let mut names: Vec<String> = Vec::new();
                let mut push = |n: &str| {
                    if !names.iter().any(|x| x == n) {
                        names.push(n.to_string());
                    }
                };
                for n in nodes {
                    n.properties.iter().for_each(|p| push(p.name()));
                }
                if !edges.is_empty() {
                    push(EDGE_FROM);
                    push(EDGE_TO);
                }
                for e in edges {
                    e.properties.iter().for_each(|p| push(p.name()));
                }
                names
            }
            _ => self
                .record_fields(None)
                .unwrap_or_default()
                .iter()
                .map(|f| f.name().to_string())
                .collect(),
        }
    }

    /// Name of the PRIMARY attribute for relations, KV objects and documents.
    pub fn primary_name(&self) -> Option<&str> {
        match self {
            ObjectScheme::Relational { columns } => columns
                .iter()
                .find(|c| c.constraint == Constraint::Primary)
                .map(|c| c.name.as_str()),
            ObjectScheme::KeyValue { key, .. } => Some(&key.name),
            ObjectScheme::Document { root } => root.iter().find_map(|f| match f {
                NestedTriple::Leaf(t) if t.constraint == Constraint::Primary => Some(t.name.as_str()),
                _ => None,
            }),
            ObjectScheme::Graph { .. } => None,
        }
    }
}

/// Catalog access needed to resolve FOREIGN targets.
pub trait SchemeLookup {
    fn scheme_of(&self, object: &str) -> Option<&ObjectScheme>;
}

/// Structural validation of a scheme, including FOREIGN target resolution.
/// `self_name` lets a FOREIGN constraint reference the object being defined.
pub fn validate_scheme(scheme: &ObjectScheme, self_name: &str, catalog: &dyn SchemeLookup) -> Vec<Violation> {
    let mut out = Vec::new();
    match scheme {
        ObjectScheme::Relational { columns } => {
            distinct_names(columns.iter().map(|c| c.name.as_str()), "", &mut out);
            let primaries = columns
                .iter()
                .filter(|c| c.constraint == Constraint::Primary)
                .count();
            if primaries > 1 {
                out.push(Violation::new("", "more than one PRIMARY column"));
            }
        }
        ObjectScheme::KeyValue { key, value } => {
            if key.constraint != Constraint::Primary {
                out.push(Violation::new(&key.name, "key must be PRIMARY"));
            }
            if value.constraint == Constraint::Primary {
                out.push(Violation::new(&value.name, "value cannot be PRIMARY"));
            }
            if key.name == value.name {
                out.push(Violation::new(&value.name, "duplicate attribute name"));
            }
        }
        ObjectScheme::Document { root } => {
            check_nested(root, "", true, &mut out);
            let primaries = root
                .iter()
                .filter(|f| matches!(f, NestedTriple::Leaf(t) if t.constraint == Constraint::Primary))
                .count();
            if primaries > 1 {
                out.push(Violation::new("", "more than one PRIMARY attribute"));
            }
        }
        ObjectScheme::Graph { nodes, edges } => {
            distinct_names(
                nodes
                    .iter()
                    .map(|n| n.name.as_str())
                    .chain(edges.iter().map(|e| e.name.as_str())),
                "",
                &mut out,
            );
            for n in nodes {
                check_nested(&n.properties, &n.name, true, &mut out);
                let keys = n
                    .properties
                    .iter()
                    .filter(|p| matches!(p, NestedTriple::Leaf(t) if t.constraint == Constraint::Primary))
                    .count();
                if keys != 1 {
                    out.push(Violation::new(
                        &n.name,
                        format!("node scheme needs exactly one PRIMARY attribute, found {keys}"),
                    ));
                }
            }
            for e in edges {
                check_nested(&e.properties, &e.name, false, &mut out);
                for (end, target) in [("FROM", &e.from), ("TO", &e.to)] {
                    if !nodes.iter().any(|n| &n.name == target) {
                        out.push(Violation::new(
                            &e.name,
                            format!("{end} names undeclared node scheme {target}"),
                        ));
                    }
                }
                for p in &e.properties {
                    if p.name() == EDGE_FROM || p.name() == EDGE_TO {
                        out.push(Violation::new(
                            join_path(&e.name, p.name()),
                            "reserved edge attribute name",
                        ));
                    }
                }
            }
        }
    }
    check_foreign_targets(scheme, self_name, catalog, &mut out);
    out
}

fn distinct_names<'a>(names: impl Iterator<Item = &'a str>, path: &str, out: &mut Vec<Violation>) {
    let mut seen = HashSet::new();
    for n in names {
        if n.is_empty() {
            out.push(Violation::new(path, "empty attribute name"));
        } else if !seen.insert(n) {
            out.push(Violation::new(join_path(path, n), "duplicate attribute name"));
        }
    }
}

fn check_nested(fields: &[NestedTriple], path: &str, top: bool, out: &mut Vec<Violation>) {
    distinct_names(fields.iter().map(|f| f.name()), path, out);
    for f in fields {
        let p = join_path(path, f.name());
        match f {
            NestedTriple::Leaf(t) => {
                if !top && t.constraint == Constraint::Primary {
                    out.push(Violation::new(p, "PRIMARY only allowed on top-level attributes"));
                }
            }
            NestedTriple::MapNode { children, .. } => check_nested(children, &p, false, out),
            NestedTriple::ListNode { element, .. } => check_nested(element, &p, false, out),
        }
    }
}

fn collect_triples<'a>(fields: &'a [NestedTriple], prefix: String, out: &mut Vec<(String, &'a Triple)>) {
    for f in fields {
        let p = join_path(&prefix, f.name());
        match f {
            NestedTriple::Leaf(t) => out.push((p, t)),
            NestedTriple::MapNode { children, .. } => collect_triples(children, p, out),
            NestedTriple::ListNode { element, .. } => collect_triples(element, p, out),
        }
    }
}

fn all_triples(scheme: &ObjectScheme) -> Vec<(String, &Triple)> {
    let mut out = Vec::new();
    match scheme {
        ObjectScheme::Relational { columns } => {
            out.extend(columns.iter().map(|c| (c.name.clone(), c)));
        }
        ObjectScheme::KeyValue { key, value } => {
            out.push((key.name.clone(), key));
            out.push((value.name.clone(), value));
        }
        ObjectScheme::Document { root } => collect_triples(root, String::new(), &mut out),
        ObjectScheme::Graph { nodes, edges } => {
            for n in nodes {
                collect_triples(&n.properties, n.name.clone(), &mut out);
            }
            for e in edges {
                collect_triples(&e.properties, e.name.clone(), &mut out);
            }
        }
    }
    out
}

fn check_foreign_targets(
    scheme: &ObjectScheme,
    self_name: &str,
    catalog: &dyn SchemeLookup,
    out: &mut Vec<Violation>,
) {
    for (path, t) in all_triples(scheme) {
        let Constraint::Foreign(Some(target)) = &t.constraint else {
            continue;
        };
        let Some((object, attr)) = target.split_first() else {
            out.push(Violation::new(path, "empty FOREIGN target"));
            continue;
        };
        let target_scheme = if object == self_name {
            Some(scheme)
        } else {
            catalog.scheme_of(object)
        };
        let Some(target_scheme) = target_scheme else {
            out.push(Violation::new(
                path,
                format!("FOREIGN target object {object} not found"),
            ));
            continue;
        };
        match target_scheme.field_at(attr) {
            Some(NestedTriple::Leaf(tt)) => {
                if tt.ty != t.ty {
                    out.push(Violation::new(
                        path,
                        format!("FOREIGN type {} does not match target type {}", t.ty, tt.ty),
                    ));
                }
            }
            _ => out.push(Violation::new(
                path,
                format!(
                    "FOREIGN target {} does not resolve to an attribute",
                    target.join(".")
                ),
            )),
        }
    }
}

/// Checks a stored record (relation row, KV pair, document, graph element)
/// against the object scheme. `element` names the node/edge scheme for graphs.
pub fn check_record_against(scheme: &ObjectScheme, element: Option<&str>, item: &Value) -> Vec<Violation> {
    match scheme.record_fields(element) {
        Some(fields) => conforms_fields(item, &fields),
        None => vec![Violation::new(
            element.unwrap_or(""),
            "unknown node or edge scheme",
        )],
    }
}
