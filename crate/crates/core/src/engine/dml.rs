use super::plan::{check_path, ScopeKind};
use super::Database;
use crate::error::{Error, PlanError};
use crate::filters::{eval_where, Binding};
use crate::parser::{print_filter, Assignment, FilterExpr, InsertRow, InsertSource};
use crate::scheme::{ModelType, ObjectScheme};
use crate::storage::{ItemRef, Mutation};
use crate::value::Value;

/// Assignments with paths relative to the item value.
type Assignments = Vec<(Vec<String>, Value)>;

impl Database {
    fn stored_scheme(&self, object: &str) -> Result<ObjectScheme, Error> {
        if self.catalog.view(object).is_some() {
            return Err(PlanError::Unsupported(format!("view {object} cannot be modified")).into());
        }
        Ok(self.catalog.scheme(object)?.clone())
    }

    pub(super) fn insert(&mut self, object: &str, source: &InsertSource) -> Result<usize, Error> {
        let scheme = self.stored_scheme(object)?;
        let items = match source {
            InsertSource::Values(rows) => {
                let mut items = Vec::with_capacity(rows.len());
                for it in rows {
                    let value = match &it.row {
                        InsertRow::Value(v) => v.clone(),
                        InsertRow::Tuple(vals) => {
                            let fields = scheme.record_fields(it.element.as_deref()).ok_or_else(|| {
                                PlanError::ShapeMismatch(format!(
                                    "{object}: a positional row needs a node or edge scheme"
                                ))
                            })?;
                            if fields.len() != vals.len() {
                                return Err(PlanError::ShapeMismatch(format!(
                                    "{object} expects {} values, found {}",
                                    fields.len(),
                                    vals.len()
                                ))
                                .into());
                            }
                            Value::Map(
                                fields
                                    .iter()
                                    .map(|f| f.name().to_string())
                                    .zip(vals.iter().cloned())
                                    .collect(),
                            )
                        }
                    };
                    items.push((it.element.clone(), value));
                }
                items
            }
            InsertSource::Query(q) => {
                if scheme.model() == ModelType::Graph {
                    return Err(PlanError::ShapeMismatch(format!(
                        "{object}: graph elements cannot be inserted from a query; use TRANSFER"
                    ))
                    .into());
                }
                let rs = self.query(q)?;
                if rs.outputs.len() != 1 {
                    return Err(PlanError::ShapeMismatch(format!(
                        "{object}: the query must produce exactly one output object"
                    ))
                    .into());
                }
                let mut expected = scheme.top_level_names();
                expected.sort();
                let mut items = Vec::new();
                for v in &rs.outputs[0].items {
                    let keys = v.as_map().map(|m| {
                        let mut k: Vec<String> = m.keys().cloned().collect();
                        k.sort();
                        k
                    });
                    if keys.as_ref() != Some(&expected) {
                        return Err(PlanError::ShapeMismatch(format!(
                            "{object}: item {v} does not have the attributes {}",
                            expected.join(", ")
                        ))
                        .into());
                    }
                    items.push((None, v.clone()));
                }
                items
            }
        };
        Ok(self.storage.insert_items(object, items)?)
    }

    /// Items of each object satisfying its part of the WHERE clause.
    fn select_targets(
        &self,
        objects: &[String],
        filter: &FilterExpr,
    ) -> Result<Vec<(String, ObjectScheme, Vec<Binding>)>, Error> {
        let mut schemes = Vec::new();
        for o in objects {
            if schemes.iter().any(|(n, _)| n == o) {
                return Err(PlanError::AmbiguousAttribute(o.clone()).into());
            }
            schemes.push((o.clone(), self.stored_scheme(o)?));
        }
        let scope: Vec<(String, ScopeKind)> = schemes
            .iter()
            .map(|(n, s)| (n.clone(), ScopeKind::Stored(s.clone())))
            .collect();
        let mut per: Vec<Vec<FilterExpr>> = vec![Vec::new(); objects.len()];
        for c in filter.conjuncts() {
            if c.contains_path() {
                return Err(PlanError::Unsupported(
                    "PATH filters are not supported in UPDATE or DELETE".into(),
                )
                .into());
            }
            let roots = c.roots();
            let idx: Vec<usize> = roots
                .iter()
                .map(|r| {
                    objects
                        .iter()
                        .position(|o| o == r)
                        .ok_or_else(|| PlanError::UnresolvableAttribute(r.clone()))
                })
                .collect::<Result<_, _>>()?;
            match idx.as_slice() {
                [] => {}
                [i, rest @ ..] if rest.iter().all(|j| j == i) => per[*i].push(c.clone()),
                _ => return Err(PlanError::CrossObjectPredicateInSelect(print_filter(c)).into()),
            }
            check_filter_paths(c, &scope)?;
        }
        let mut out = Vec::new();
        for ((name, scheme), terms) in schemes.into_iter().zip(per) {
            let store = self.storage.store(&name)?;
            let pred = FilterExpr::and(terms);
            let mut hits = Vec::new();
            for (r, v) in store.scan(None)? {
                let b = Binding {
                    name: name.clone(),
                    value: v,
                    element: r.kind.scheme().map(str::to_string),
                    model: Some(scheme.model()),
                    origin: Some(r),
                };
                if eval_where(&pred, std::slice::from_ref(&b), &self.filters)?.is_true() {
                    hits.push(b);
                }
            }
            out.push((name, scheme, hits));
        }
        Ok(out)
    }

    /// Runs `f` against the stores and rolls every store back if it fails.
    pub(super) fn atomically<T>(
        &mut self,
        f: impl FnOnce(&mut Self) -> Result<T, Error>,
    ) -> Result<T, Error> {
        let saved = self.storage.clone();
        let r = f(self);
        if r.is_err() {
            self.storage = saved;
        }
        r
    }

    pub(super) fn update(
        &mut self,
        objects: &[String],
        assignments: &[Assignment],
        filter: &FilterExpr,
    ) -> Result<usize, Error> {
        for a in assignments {
            if !objects.iter().any(|o| o == a.path.root()) || a.path.rest().is_empty() {
                return Err(PlanError::UnresolvableAttribute(a.path.to_string()).into());
            }
        }
        let targets = self.select_targets(objects, filter)?;
        let mut batches: Vec<(String, Vec<ItemRef>, Mutation)> = Vec::new();
        for (name, scheme, hits) in &targets {
            let mine: Vec<&Assignment> = assignments.iter().filter(|a| a.path.root() == name).collect();
            if mine.is_empty() {
                continue;
            }
            for a in &mine {
                let ok = scheme.top_level_names().contains(&a.path.rest()[0])
                    || scheme.node(&a.path.rest()[0]).is_some()
                    || scheme.edge(&a.path.rest()[0]).is_some();
                if !ok {
                    return Err(PlanError::UnresolvableAttribute(a.path.to_string()).into());
                }
            }
            // group items by the assignment set that applies to them
            let mut groups: Vec<(Assignments, Vec<ItemRef>)> = Vec::new();
            for b in hits {
                let sets = applicable(scheme, b.element.as_deref(), &mine);
                if sets.is_empty() {
                    continue;
                }
                let r = b.origin.clone().expect("stored item");
                match groups.iter_mut().find(|(s, _)| *s == sets) {
                    Some((_, refs)) => refs.push(r),
                    None => groups.push((sets, vec![r])),
                }
            }
            for (sets, refs) in groups {
                batches.push((name.clone(), refs, Mutation::Set(sets)));
            }
        }
        self.atomically(|db| {
            let mut n = 0;
            for (name, refs, m) in &batches {
                n += db.storage.apply_mutation(name, refs, m)?;
            }
            Ok(n)
        })
    }

    pub(super) fn delete(&mut self, objects: &[String], filter: &FilterExpr) -> Result<usize, Error> {
        let targets = self.select_targets(objects, filter)?;
        self.atomically(|db| {
            let mut n = 0;
            for (name, _, hits) in &targets {
                // skip edges already removed with their nodes
                let store = db.storage.store(name)?;
                let refs: Vec<ItemRef> = hits
                    .iter()
                    .filter_map(|b| b.origin.clone())
                    .filter(|r| store.get(r).is_some())
                    .collect();
                n += db.storage.apply_mutation(name, &refs, &Mutation::Delete)?;
            }
            Ok(n)
        })
    }
}

/// Assignments, relative to the item value, that apply to an item of the
/// given graph element (or of any record for other models).
fn applicable(scheme: &ObjectScheme, element: Option<&str>, assignments: &[&Assignment]) -> Assignments {
    let mut out = Vec::new();
    for a in assignments {
        let rest = a.path.rest();
        match scheme {
            ObjectScheme::Graph { .. } => {
                let el = element.unwrap_or_default();
                let names_scheme = scheme.node(&rest[0]).is_some() || scheme.edge(&rest[0]).is_some();
                if names_scheme {
                    if rest[0] == el && rest.len() > 1 {
                        out.push((rest[1..].to_vec(), a.value.clone()));
                    }
                } else if scheme
                    .record_fields(Some(el))
                    .unwrap_or_default()
                    .iter()
                    .any(|f| f.name() == rest[0])
                {
                    out.push((rest.to_vec(), a.value.clone()));
                }
            }
            _ => out.push((rest.to_vec(), a.value.clone())),
        }
    }
    out
}

fn check_filter_paths(f: &FilterExpr, scope: &[(String, ScopeKind)]) -> Result<(), PlanError> {
    match f {
        FilterExpr::Cmp { left, right, .. } => {
            check_path(scope, left)?;
            if let crate::parser::Operand::Path(p) = right {
                check_path(scope, p)?;
            }
            Ok(())
        }
        FilterExpr::Logical { children, .. } => {
            children.iter().try_for_each(|c| check_filter_paths(c, scope))
        }
        _ => Ok(()),
    }
}
