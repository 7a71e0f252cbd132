use super::plan::{check_path, Scope};
use crate::error::{Error, PlanError};
use crate::filters::{find_binding, resolve, Binding};
use crate::parser::{print_attribution, Attribution};
use crate::value::{Value, ValueMap};

/// Whether some list in the rule reads from one of `names`.
pub(crate) fn paths_reference(rule: &[Attribution], names: &[String]) -> bool {
    fn walk(a: &Attribution, names: &[String], in_list: bool) -> bool {
        match a {
            Attribution::Attr(p) => in_list && names.iter().any(|n| n == p.root()),
            Attribution::Labeled { value, .. } => walk(value, names, in_list),
            Attribution::Map(c) => c.iter().any(|x| walk(x, names, in_list)),
            Attribution::List(c) => c.iter().any(|x| walk(x, names, true)),
        }
    }
    rule.iter().any(|a| walk(a, names, false))
}

fn whole_value(list: &[Attribution]) -> bool {
    match list {
        [Attribution::Map(_)] | [Attribution::List(_)] => true,
        [Attribution::Attr(p)] => p.rest().is_empty(),
        _ => false,
    }
}

fn base_key(a: &Attribution) -> Option<String> {
    match a {
        Attribution::Attr(p) => Some(p.last().to_string()),
        Attribution::Labeled { label, .. } => Some(label.last().to_string()),
        _ => None,
    }
}

/// Output keys of map entries. Unlabeled attributes whose last segment
/// collides with another entry are keyed by their full dotted path.
fn entry_keys(entries: &[Attribution]) -> Result<Vec<String>, PlanError> {
    let base: Vec<String> = entries
        .iter()
        .map(|e| base_key(e).ok_or_else(|| PlanError::UnlabeledCollection(print_attribution(e))))
        .collect::<Result<_, _>>()?;
    let mut keys = Vec::with_capacity(entries.len());
    for (e, k) in entries.iter().zip(&base) {
        let clash = base.iter().filter(|x| *x == k).count() > 1;
        keys.push(match e {
            Attribution::Attr(p) if clash => p.to_string(),
            _ => k.clone(),
        });
    }
    for (i, k) in keys.iter().enumerate() {
        if keys[..i].contains(k) {
            return Err(PlanError::DuplicateOutputKey(k.clone()));
        }
    }
    Ok(keys)
}

fn check_entries(entries: &[Attribution]) -> Result<(), PlanError> {
    entry_keys(entries).map(|_| ())
}

fn check_shape(a: &Attribution) -> Result<(), PlanError> {
    match a {
        Attribution::Attr(_) => Ok(()),
        Attribution::Labeled { value, .. } => check_shape(value),
        Attribution::Map(c) => {
            check_entries(c)?;
            c.iter().try_for_each(check_shape)
        }
        Attribution::List(c) => c.iter().try_for_each(check_shape),
    }
}

/// Checks that an output scheme resolves in `scope` and yields a well-formed
/// item.
pub(crate) fn check_output(list: &[Attribution], scope: &Scope) -> Result<(), Error> {
    for p in crate::parser::attribution_paths(list) {
        check_path(scope, p)?;
    }
    if !whole_value(list) {
        check_entries(list)?;
    }
    list.iter().try_for_each(check_shape)?;
    Ok(())
}

/// Rows of the non-driving join side matched by the current driving row.
pub(crate) struct Group<'a> {
    pub names: &'a [String],
    pub matches: Vec<&'a [Binding]>,
}

struct Ctx<'a> {
    base: &'a [Binding],
    group: Option<&'a Group<'a>>,
}

impl Ctx<'_> {
    fn attr(&self, a: &Attribution) -> Result<Value, Error> {
        match a {
            Attribution::Attr(p) => {
                if find_binding(self.base, p.root()).is_some() {
                    return Ok(resolve(self.base, p)?);
                }
                if let Some(g) = self.group {
                    if g.names.iter().any(|n| n == p.root()) {
                        return Ok(match g.matches.first() {
                            Some(m) => resolve(m, p)?,
                            None => Value::Null,
                        });
                    }
                }
                Ok(resolve(self.base, p)?)
            }
            Attribution::Labeled { value, .. } => self.attr(value),
            Attribution::Map(c) => self.map(c).map(Value::Map),
            Attribution::List(c) => {
                if let Some(g) = self.group {
                    if paths_reference(&[Attribution::List(c.clone())], g.names) {
                        let mut out = Vec::with_capacity(g.matches.len());
                        for m in &g.matches {
                            let mut bs = self.base.to_vec();
                            bs.extend(m.iter().cloned());
                            let inner = Ctx {
                                base: &bs,
                                group: None,
                            };
                            out.push(match c.as_slice() {
                                [one] => inner.attr(one)?,
                                many => {
                                    Value::List(many.iter().map(|x| inner.attr(x)).collect::<Result<_, _>>()?)
                                }
                            });
                        }
                        return Ok(Value::List(out));
                    }
                }
                Ok(Value::List(
                    c.iter().map(|x| self.attr(x)).collect::<Result<_, _>>()?,
                ))
            }
        }
    }

    fn map(&self, entries: &[Attribution]) -> Result<ValueMap, Error> {
        let mut m = ValueMap::new();
        for (e, key) in entries.iter().zip(entry_keys(entries)?) {
            m.insert(key, self.attr(e)?);
        }
        Ok(m)
    }

    fn output(&self, list: &[Attribution]) -> Result<Value, Error> {
        if whole_value(list) {
            self.attr(&list[0])
        } else {
            self.map(list).map(Value::Map)
        }
    }
}

/// Builds one output item from an output scheme and the bound items.
pub fn project_output(list: &[Attribution], bindings: &[Binding]) -> Result<Value, Error> {
    Ctx {
        base: bindings,
        group: None,
    }
    .output(list)
}

/// Builds one aggregated join item: lists reading the other side collect one
/// element per match.
pub(crate) fn project_group(
    list: &[Attribution],
    bindings: &[Binding],
    group: &Group<'_>,
) -> Result<Value, Error> {
    Ctx {
        base: bindings,
        group: Some(group),
    }
    .output(list)
}
