use super::exec::Executor;
use super::plan::{Plan, PlanOptions, Planner};
use super::Database;
use crate::error::{Error, PlanError};
use crate::filters::resolve;
use crate::parser::{AttrPath, TransferSource};
use crate::scheme::{NestedTriple, ObjectScheme, TypeTag, Violation};
use crate::value::{Value, ValueMap};

/// Whether every value of type `from` converts into type `to` without loss.
pub fn widens(from: &TypeTag, to: &TypeTag) -> bool {
    match (from, to) {
        (_, TypeTag::Any) => true,
        (TypeTag::Any, _) => false,
        (TypeTag::Int, TypeTag::Str) => true,
        (TypeTag::List(a), TypeTag::List(b)) => widens(a, b),
        (a, b) => a == b,
    }
}

/// Required leaves (NOT NULL or PRIMARY) reachable through map fields.
fn required_leaves(fields: &[NestedTriple], prefix: &[String], out: &mut Vec<Vec<String>>) {
    for f in fields {
        let mut p = prefix.to_vec();
        p.push(f.name().to_string());
        match f {
            NestedTriple::Leaf(t) if t.constraint.rejects_null() => out.push(p),
            NestedTriple::MapNode { children, .. } => required_leaves(children, &p, out),
            _ => {}
        }
    }
}

/// The node or edge scheme a graph target is written through.
fn target_element(dst: &ObjectScheme, pairs: &[(AttrPath, AttrPath)]) -> Result<Option<String>, Violation> {
    if !matches!(dst, ObjectScheme::Graph { .. }) {
        return Ok(None);
    }
    let mut el: Option<&str> = None;
    for (_, t) in pairs {
        let first = t.rest().first().map(String::as_str).unwrap_or("");
        match el {
            None => el = Some(first),
            Some(e) if e != first => {
                return Err(Violation::new(
                    t.to_string(),
                    "all target attributes must belong to one node or edge scheme",
                ))
            }
            _ => {}
        }
    }
    el.map(|e| Some(e.to_string()))
        .ok_or_else(|| Violation::new("", "a graph target needs at least one co-relation pair"))
}

fn legality(
    source_type: &dyn Fn(&AttrPath) -> Option<TypeTag>,
    dst: &ObjectScheme,
    pairs: &[(AttrPath, AttrPath)],
) -> Vec<Violation> {
    let mut out = Vec::new();
    for (s, t) in pairs {
        let Some(from) = source_type(s) else {
            out.push(Violation::new(s.to_string(), "unknown source attribute"));
            continue;
        };
        let Some(to) = dst.field_at(t.rest()).map(|f| f.shape_tag()) else {
            out.push(Violation::new(t.to_string(), "unknown target attribute"));
            continue;
        };
        if !widens(&from, &to) {
            out.push(Violation::new(
                t.to_string(),
                format!("cannot convert {from} from {s} into {to}"),
            ));
        }
    }
    let element = match target_element(dst, pairs) {
        Ok(e) => e,
        Err(v) => {
            out.push(v);
            return out;
        }
    };
    let mut leaves = Vec::new();
    if let Some(fields) = dst.record_fields(element.as_deref()) {
        let prefix: Vec<String> = element.into_iter().collect();
        required_leaves(&fields, &prefix, &mut leaves);
    }
    for leaf in leaves {
        let covered = pairs.iter().any(|(_, t)| leaf.starts_with(t.rest()));
        if !covered {
            out.push(Violation::new(
                leaf.join("."),
                "required attribute is not covered by the co-relation",
            ));
        }
    }
    out
}

/// Violations of a co-relation between two object schemes; empty when the
/// conversion is legal. Paths are rooted at the object names.
pub fn check_transfer_legality(
    src: &ObjectScheme,
    dst: &ObjectScheme,
    pairs: &[(AttrPath, AttrPath)],
) -> Vec<Violation> {
    legality(&|p| src.field_at(p.rest()).map(|f| f.shape_tag()), dst, pairs)
}

fn convert(v: Value, to: &TypeTag) -> Value {
    match (v, to) {
        (Value::Int(n), TypeTag::Str) => Value::Str(n.to_string()),
        (Value::List(xs), TypeTag::List(t)) => Value::List(xs.into_iter().map(|x| convert(x, t)).collect()),
        (v, _) => v,
    }
}

/// An empty record: leaves Null, maps nested, lists empty.
fn skeleton(fields: &[NestedTriple]) -> Value {
    let mut m = ValueMap::new();
    for f in fields {
        let v = match f {
            NestedTriple::Leaf(_) => Value::Null,
            NestedTriple::MapNode { children, .. } => skeleton(children),
            NestedTriple::ListNode { .. } => Value::List(Vec::new()),
        };
        m.insert(f.name().to_string(), v);
    }
    Value::Map(m)
}

/// Stored bindings a plan produces, as (name, is stored).
fn leaf_kinds(plan: &Plan, out: &mut Vec<(String, bool)>) {
    match plan {
        Plan::Scan { object, .. } | Plan::KvLookup { object, .. } => out.push((object.clone(), true)),
        Plan::PathScan { object, .. } => out.push((object.clone(), false)),
        Plan::Derived { bind, .. } => out.push((bind.clone(), false)),
        Plan::Filter { child, .. } | Plan::Order { child, .. } => leaf_kinds(child, out),
        Plan::Join(j) => {
            leaf_kinds(&j.left, out);
            leaf_kinds(&j.right, out);
        }
    }
}

impl Database {
    pub(super) fn transfer(
        &mut self,
        source: &TransferSource,
        target: &str,
        pairs: &[(AttrPath, AttrPath)],
    ) -> Result<usize, Error> {
        if self.catalog.view(target).is_some() {
            return Err(PlanError::Unsupported(format!("view {target} cannot be modified")).into());
        }
        let dst = self.catalog.scheme(target)?.clone();
        for (_, t) in pairs {
            if t.root() != target || t.rest().is_empty() {
                return Err(PlanError::UnresolvableAttribute(t.to_string()).into());
            }
        }
        // source rows as bindings
        let (rows, violations) = match source {
            TransferSource::Object(name) => {
                let src = self.catalog.scheme(name)?.clone();
                for (s, _) in pairs {
                    if s.root() != name {
                        return Err(PlanError::UnresolvableAttribute(s.to_string()).into());
                    }
                }
                let violations = check_transfer_legality(&src, &dst, pairs);
                let element = match &src {
                    ObjectScheme::Graph { .. } => pairs.first().and_then(|(s, _)| s.rest().first().cloned()),
                    _ => None,
                };
                let rows: Vec<Vec<crate::filters::Binding>> = if violations.is_empty() {
                    Executor::new(self)
                        .rows(&Plan::Scan {
                            object: name.clone(),
                            element,
                        })?
                        .into_iter()
                        .map(|r| r.bindings)
                        .collect()
                } else {
                    Vec::new()
                };
                (rows, violations)
            }
            TransferSource::Query(q) => {
                let plan = Planner::new(self, PlanOptions::optimized()).query(q)?;
                if plan.outputs.len() != 1 {
                    return Err(PlanError::ShapeMismatch(
                        "a TRANSFER query must produce exactly one output object".into(),
                    )
                    .into());
                }
                let mut kinds = Vec::new();
                leaf_kinds(&plan.outputs[0].source, &mut kinds);
                let catalog = &self.catalog;
                let source_type = |p: &AttrPath| -> Option<TypeTag> {
                    let (_, stored) = kinds.iter().find(|(n, _)| n == p.root())?;
                    if !stored {
                        return Some(TypeTag::Any);
                    }
                    let s = catalog.scheme(p.root()).ok()?;
                    s.field_at(p.rest()).map(|f| f.shape_tag())
                };
                let violations = legality(&source_type, &dst, pairs);
                let rows = if violations.is_empty() {
                    Executor::new(self)
                        .rows(&plan.outputs[0].source)?
                        .into_iter()
                        .map(|r| r.bindings)
                        .collect()
                } else {
                    Vec::new()
                };
                (rows, violations)
            }
        };
        if !violations.is_empty() {
            return Err(PlanError::TransferIllegal(violations).into());
        }
        let element = target_element(&dst, pairs).map_err(|v| PlanError::TransferIllegal(vec![v]))?;
        let fields = dst.record_fields(element.as_deref()).ok_or_else(|| {
            PlanError::TransferIllegal(vec![Violation::new(target, "unknown node or edge scheme")])
        })?;
        let offset = usize::from(element.is_some());
        let mut items = Vec::with_capacity(rows.len());
        for bindings in &rows {
            let mut item = skeleton(&fields);
            for (s, t) in pairs {
                let v = resolve(bindings, s)?;
                let to = dst
                    .field_at(t.rest())
                    .map(|f| f.shape_tag())
                    .unwrap_or(TypeTag::Any);
                item.set_path(&t.rest()[offset..], convert(v, &to));
            }
            items.push((element.clone(), item));
        }
        self.atomically(|db| Ok(db.storage.insert_items(target, items)?))
    }
}
