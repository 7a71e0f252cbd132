//! Atomic filters: generic comparisons, structural MATCH, graph PATH, and
//! the registry of model-specific filters.

mod path;
mod registry;

use std::cmp::Ordering;

use crate::parser::{AttrPath, CmpOp, FilterExpr, LogicOp, MatchPattern, Operand, PatternEntry};
use crate::scheme::ModelType;
use crate::storage::ItemRef;
use crate::value::{compare_values, Value};

pub use path::{eval_path, PathBinding, PathMode};
pub use registry::{Evaluator, FilterFamily, FilterImpl};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TriBool {
    True,
    False,
    Unknown,
}

impl TriBool {
    pub fn and(self, other: TriBool) -> TriBool {
        use TriBool::*;
        match (self, other) {
            (False, _) | (_, False) => False,
            (True, True) => True,
            _ => Unknown,
        }
    }

    pub fn or(self, other: TriBool) -> TriBool {
        use TriBool::*;
        match (self, other) {
            (True, _) | (_, True) => True,
            (False, False) => False,
            _ => Unknown,
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> TriBool {
        match self {
            TriBool::True => TriBool::False,
            TriBool::False => TriBool::True,
            TriBool::Unknown => TriBool::Unknown,
        }
    }

    pub fn xor(self, other: TriBool) -> TriBool {
        match (self, other) {
            (TriBool::Unknown, _) | (_, TriBool::Unknown) => TriBool::Unknown,
            (a, b) => TriBool::from(a != b),
        }
    }

    pub fn is_true(self) -> bool {
        self == TriBool::True
    }
}

impl From<bool> for TriBool {
    fn from(b: bool) -> Self {
        if b {
            TriBool::True
        } else {
            TriBool::False
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FilterError {
    #[error("unknown object {0} in filter")]
    UnresolvableObject(String),
    #[error("unknown filter {name} for {model} objects")]
    UnknownFilter { name: String, model: String },
    #[error("filter name {0} is already registered")]
    DuplicateFilterName(String),
    #[error("{0} is a reserved word")]
    ReservedName(String),
    #[error("unknown node or edge scheme {0}")]
    UnknownScheme(String),
    #[error("{0} is not a basic filter")]
    NotBasic(String),
    #[error("PATH filters must be top-level AND terms of a WHERE clause")]
    PathNotTopLevel,
}

/// An item bound to an object name while a filter or projection runs.
#[derive(Clone, Debug, PartialEq)]
pub struct Binding {
    pub name: String,
    pub value: Value,
    /// Node or edge scheme for graph elements.
    pub element: Option<String>,
    /// Model of the stored object; `None` for derived items (views,
    /// subqueries, path bindings).
    pub model: Option<ModelType>,
    pub origin: Option<ItemRef>,
}

impl Binding {
    pub fn derived(name: &str, value: Value) -> Self {
        Binding {
            name: name.to_string(),
            value,
            element: None,
            model: None,
            origin: None,
        }
    }

    /// Resolves the attribute part of a path. On graph elements a leading
    /// segment equal to the element's scheme name is skipped.
    pub fn lookup(&self, rest: &[String]) -> Value {
        let mut rest = rest;
        if self.model == Some(ModelType::Graph) {
            if let (Some(first), Some(el)) = (rest.first(), &self.element) {
                if first == el {
                    rest = &rest[1..];
                }
            }
        }
        self.value.get_path(rest).cloned().unwrap_or(Value::Null)
    }
}

pub fn find_binding<'a>(bindings: &'a [Binding], name: &str) -> Option<&'a Binding> {
    bindings.iter().find(|b| b.name == name)
}

/// Value of a path against the bound items; a missing attribute is Null.
pub fn resolve(bindings: &[Binding], path: &AttrPath) -> Result<Value, FilterError> {
    let b = find_binding(bindings, path.root())
        .ok_or_else(|| FilterError::UnresolvableObject(path.root().to_string()))?;
    Ok(b.lookup(path.rest()))
}

/// One comparison under three-valued logic. Null = Null is TRUE; any other
/// comparison involving Null is UNKNOWN.
pub fn eval_cmp(a: &Value, op: CmpOp, b: &Value) -> TriBool {
    if op == CmpOp::Eq {
        return match (a.is_null(), b.is_null()) {
            (true, true) => TriBool::True,
            (false, false) => TriBool::from(a == b),
            _ => TriBool::Unknown,
        };
    }
    if a.is_null() || b.is_null() {
        return TriBool::Unknown;
    }
    let ord = compare_values(a, b);
    match op {
        CmpOp::Lt => TriBool::from(ord == Ordering::Less),
        CmpOp::Gt => TriBool::from(ord == Ordering::Greater),
        CmpOp::Le => TriBool::from(ord != Ordering::Greater),
        CmpOp::Ge => TriBool::from(ord != Ordering::Less),
        CmpOp::In => match b {
            Value::List(items) => TriBool::from(items.iter().any(|x| x == a)),
            _ => TriBool::Unknown,
        },
        CmpOp::Eq => unreachable!(),
    }
}

fn combine(op: LogicOp, vals: impl Iterator<Item = TriBool>) -> TriBool {
    let mut vals = vals;
    let first = vals.next().unwrap_or(TriBool::True);
    match op {
        LogicOp::Not => first.not(),
        LogicOp::And => vals.fold(first, TriBool::and),
        LogicOp::Or => vals.fold(first, TriBool::or),
        LogicOp::Xor => vals.fold(first, TriBool::xor),
    }
}

/// Evaluates comparisons and logical connectives. `Null` means no condition.
pub fn eval_basic(expr: &FilterExpr, bindings: &[Binding]) -> Result<TriBool, FilterError> {
    match expr {
        FilterExpr::Null => Ok(TriBool::True),
        FilterExpr::Cmp { left, op, right } => {
            let a = resolve(bindings, left)?;
            let b = match right {
                Operand::Value(v) => v.clone(),
                Operand::Path(p) => resolve(bindings, p)?,
            };
            Ok(eval_cmp(&a, *op, &b))
        }
        FilterExpr::Logical { op, children } => {
            let vals = children
                .iter()
                .map(|c| eval_basic(c, bindings))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(combine(*op, vals.into_iter()))
        }
        other => Err(FilterError::NotBasic(crate::parser::print_filter(other))),
    }
}

/// Evaluates a full WHERE expression, dispatching MATCH and registered
/// filters. PATH terms are consumed by the planner before this point.
pub fn eval_where(
    expr: &FilterExpr,
    bindings: &[Binding],
    family: &FilterFamily,
) -> Result<TriBool, FilterError> {
    match expr {
        FilterExpr::Null | FilterExpr::Cmp { .. } => eval_basic(expr, bindings),
        FilterExpr::Logical { op, children } => {
            let vals = children
                .iter()
                .map(|c| eval_where(c, bindings, family))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(combine(*op, vals.into_iter()))
        }
        FilterExpr::Match {
            object,
            element,
            pattern,
        } => {
            let b = find_binding(bindings, object)
                .ok_or_else(|| FilterError::UnresolvableObject(object.clone()))?;
            if element.is_some() && *element != b.element {
                return Ok(TriBool::False);
            }
            Ok(TriBool::from(eval_match(pattern, &b.value)))
        }
        FilterExpr::Path { .. } => Err(FilterError::PathNotTopLevel),
        FilterExpr::Call { name, object, args } => {
            let b = find_binding(bindings, object)
                .ok_or_else(|| FilterError::UnresolvableObject(object.clone()))?;
            let unknown = || FilterError::UnknownFilter {
                name: name.clone(),
                model: b.model.map(|m| m.to_string()).unwrap_or_else(|| "derived".into()),
            };
            let model = b.model.ok_or_else(unknown)?;
            match family.lookup(model, name) {
                Some(FilterImpl::Custom(f)) => Ok(f(&b.value, args)),
                _ => Err(unknown()),
            }
        }
    }
}

/// Structural match. Every entry must hold; a missing attribute behaves as
/// Null, a sub-pattern needs a map, and a list pattern needs some matching
/// element.
pub fn eval_match(pattern: &MatchPattern, item: &Value) -> bool {
    let Some(m) = item.as_map() else {
        return false;
    };
    pattern.0.iter().all(|(k, entry)| match entry {
        PatternEntry::Pred(op, v) => eval_cmp(m.get(k).unwrap_or(&Value::Null), *op, v).is_true(),
        PatternEntry::Sub(p) => m.get(k).is_some_and(|x| eval_match(p, x)),
        PatternEntry::List(p) => {
            matches!(m.get(k), Some(Value::List(xs)) if xs.iter().any(|x| eval_match(p, x)))
        }
    })
}

#[cfg(test)]
mod tests;
