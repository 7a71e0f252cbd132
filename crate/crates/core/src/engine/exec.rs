use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};

use super::plan::{path_aliases, JoinAlgo, JoinPlan, Plan, Projection, QueryPlan, Side};
use super::project::{project_group, project_output, Group};
use super::{Database, OutputObject, ResultSet};
use crate::error::Error;
use crate::filters::{eval_cmp, eval_path, eval_where, resolve, Binding};
use crate::parser::{CmpOp, JoinKind, OrderKey};
use crate::value::{compare_values, Value};

/// Bound items flowing between operators. Join rows also carry the value
/// their rule produced.
#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub bindings: Vec<Binding>,
    pub value: Option<Value>,
}

impl Row {
    fn bound(b: Binding) -> Self {
        Row {
            bindings: vec![b],
            value: None,
        }
    }
}

pub(crate) struct Executor<'a> {
    db: &'a Database,
}

impl<'a> Executor<'a> {
    pub fn new(db: &'a Database) -> Self {
        Executor { db }
    }

    pub fn query(&self, plan: &QueryPlan) -> Result<ResultSet, Error> {
        let mut outputs = Vec::with_capacity(plan.outputs.len());
        for o in &plan.outputs {
            let rows = self.rows(&o.source)?;
            let mut items = Vec::with_capacity(rows.len());
            for r in &rows {
                items.push(match &o.projection {
                    Projection::Attrs(a) => project_output(a, &r.bindings)?,
                    Projection::RowValue => r.value.clone().unwrap_or(Value::Null),
                });
            }
            if o.distinct {
                let mut seen = HashSet::new();
                items.retain(|v| seen.insert(v.clone()));
            }
            outputs.push(OutputObject {
                label: o.label.clone(),
                items,
            });
        }
        Ok(ResultSet { outputs })
    }

    /// Rows of a plan with the bindings visible to operators above it.
    pub fn rows(&self, plan: &Plan) -> Result<Vec<Row>, Error> {
        match plan {
            Plan::Scan { object, element } => {
                let store = self.db.storage.store(object)?;
                let model = store.model();
                Ok(store
                    .scan(element.as_deref())?
                    .into_iter()
                    .map(|(r, v)| {
                        Row::bound(Binding {
                            name: object.clone(),
                            value: v,
                            element: r.kind.scheme().map(str::to_string),
                            model: Some(model),
                            origin: Some(r),
                        })
                    })
                    .collect())
            }
            Plan::KvLookup { object, key } => {
                let store = self.db.storage.store(object)?;
                let model = store.model();
                Ok(store
                    .kv_lookup(key)?
                    .into_iter()
                    .map(|(r, v)| {
                        Row::bound(Binding {
                            name: object.clone(),
                            value: v,
                            element: None,
                            model: Some(model),
                            origin: Some(r),
                        })
                    })
                    .collect())
            }
            Plan::PathScan { object, steps, mode } => {
                let store = self.db.storage.store(object)?;
                let aliases = path_aliases(steps.len());
                Ok(eval_path(steps, store, *mode)?
                    .into_iter()
                    .map(|pb| {
                        let m = Value::map(aliases.iter().cloned().zip(pb.items.into_iter().map(|(_, v)| v)));
                        Row::bound(Binding::derived(object, m))
                    })
                    .collect())
            }
            Plan::Derived { bind, query } => {
                let rs = self.query(query)?;
                Ok(rs
                    .outputs
                    .into_iter()
                    .flat_map(|o| o.items)
                    .map(|v| Row::bound(Binding::derived(bind, v)))
                    .collect())
            }
            Plan::Filter { pred, child } => {
                let rows = self.rows(child)?;
                let mut out = Vec::with_capacity(rows.len());
                for r in rows {
                    if eval_where(pred, &r.bindings, &self.db.filters)?.is_true() {
                        out.push(r);
                    }
                }
                Ok(out)
            }
            Plan::Order { keys, child } => {
                let rows = self.rows(child)?;
                sort_rows(rows, keys)
            }
            Plan::Join(j) => self.join(j),
        }
    }

    fn join(&self, j: &JoinPlan) -> Result<Vec<Row>, Error> {
        let left = self.rows(&j.left)?;
        let right = self.rows(&j.right)?;
        let driving_side = j.driving();
        let (drive, other) = match driving_side {
            Side::Left => (&left, &right),
            Side::Right => (&right, &left),
        };
        let matches = match j.algo {
            JoinAlgo::NestedLoop => nested_loop(j, drive, other, driving_side)?,
            JoinAlgo::Hash { build } => hash_join(j, drive, other, driving_side, build)?,
        };
        let other_names = match driving_side {
            Side::Left => &j.right_names,
            Side::Right => &j.left_names,
        };

        let mut out = Vec::new();
        for (d, ms) in drive.iter().zip(&matches) {
            let outer = matches!(j.kind, JoinKind::Left | JoinKind::Right);
            if ms.is_empty() && !outer {
                continue;
            }
            if j.aggregate {
                let group = Group {
                    names: other_names,
                    matches: ms.iter().map(|&i| other[i].bindings.as_slice()).collect(),
                };
                let value = project_group(&j.rule, &d.bindings, &group)?;
                out.push(Row {
                    bindings: d.bindings.clone(),
                    value: Some(value),
                });
                continue;
            }
            let picked: Vec<Vec<Binding>> = if ms.is_empty() {
                vec![other_names
                    .iter()
                    .map(|n| Binding::derived(n, Value::Null))
                    .collect()]
            } else if j.kind == JoinKind::OneToOne {
                vec![other[ms[0]].bindings.clone()]
            } else {
                ms.iter().map(|&i| other[i].bindings.clone()).collect()
            };
            for o in picked {
                let bindings = match driving_side {
                    Side::Left => [d.bindings.clone(), o].concat(),
                    Side::Right => [o, d.bindings.clone()].concat(),
                };
                let value = project_output(&j.rule, &bindings)?;
                out.push(Row {
                    bindings,
                    value: Some(value),
                });
            }
        }
        Ok(out)
    }
}

/// Whether every join condition holds between a left and a right row.
fn conds_hold(j: &JoinPlan, l: &Row, r: &Row, skip_eq: bool) -> Result<bool, Error> {
    for c in &j.conds {
        if skip_eq && c.op == CmpOp::Eq {
            continue;
        }
        let a = resolve(&l.bindings, &c.left)?;
        let b = resolve(&r.bindings, &c.right)?;
        if !eval_cmp(&a, c.op, &b).is_true() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn oriented<'r>(side: Side, d: &'r Row, o: &'r Row) -> (&'r Row, &'r Row) {
    match side {
        Side::Left => (d, o),
        Side::Right => (o, d),
    }
}

/// For each driving row, the ascending indices of matching other rows.
fn nested_loop(j: &JoinPlan, drive: &[Row], other: &[Row], side: Side) -> Result<Vec<Vec<usize>>, Error> {
    let mut out = Vec::with_capacity(drive.len());
    for d in drive {
        let mut ms = Vec::new();
        for (i, o) in other.iter().enumerate() {
            let (l, r) = oriented(side, d, o);
            if conds_hold(j, l, r, false)? {
                ms.push(i);
            }
        }
        out.push(ms);
    }
    Ok(out)
}

fn eq_key(j: &JoinPlan, row: &Row, side: Side) -> Result<Vec<Value>, Error> {
    let mut key = Vec::new();
    for c in j.conds.iter().filter(|c| c.op == CmpOp::Eq) {
        let p = match side {
            Side::Left => &c.left,
            Side::Right => &c.right,
        };
        key.push(resolve(&row.bindings, p)?);
    }
    Ok(key)
}

/// Hash join on the equality conditions; the result is identical to
/// [`nested_loop`] whichever side is built.
fn hash_join(
    j: &JoinPlan,
    drive: &[Row],
    other: &[Row],
    side: Side,
    build: Side,
) -> Result<Vec<Vec<usize>>, Error> {
    let other_side = match side {
        Side::Left => Side::Right,
        Side::Right => Side::Left,
    };
    let mut out = vec![Vec::new(); drive.len()];
    if build == other_side {
        let mut table: HashMap<Vec<Value>, Vec<usize>> = HashMap::new();
        for (i, o) in other.iter().enumerate() {
            table.entry(eq_key(j, o, other_side)?).or_default().push(i);
        }
        for (di, d) in drive.iter().enumerate() {
            if let Some(cands) = table.get(&eq_key(j, d, side)?) {
                for &i in cands {
                    let (l, r) = oriented(side, d, &other[i]);
                    if conds_hold(j, l, r, true)? {
                        out[di].push(i);
                    }
                }
            }
        }
    } else {
        let mut table: HashMap<Vec<Value>, Vec<usize>> = HashMap::new();
        for (di, d) in drive.iter().enumerate() {
            table.entry(eq_key(j, d, side)?).or_default().push(di);
        }
        for (i, o) in other.iter().enumerate() {
            if let Some(cands) = table.get(&eq_key(j, o, other_side)?) {
                for &di in cands {
                    let (l, r) = oriented(side, &drive[di], o);
                    if conds_hold(j, l, r, true)? {
                        out[di].push(i);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Stable sort by the keys; Null sorts first ascending.
fn sort_rows(rows: Vec<Row>, keys: &[OrderKey]) -> Result<Vec<Row>, Error> {
    let mut keyed = Vec::with_capacity(rows.len());
    for r in rows {
        let k = keys
            .iter()
            .map(|k| resolve(&r.bindings, &k.path))
            .collect::<Result<Vec<_>, _>>()?;
        keyed.push((k, r));
    }
    keyed.sort_by(|(a, _), (b, _)| {
        for (i, k) in keys.iter().enumerate() {
            let o = compare_values(&a[i], &b[i]);
            let o = if k.descending { o.reverse() } else { o };
            if o != Ordering::Equal {
                return o;
            }
        }
        Ordering::Equal
    });
    Ok(keyed.into_iter().map(|(_, r)| r).collect())
}
