use std::fmt;
use std::sync::Arc;

use indexmap::IndexMap;

use super::{FilterError, TriBool};
use crate::parser::is_keyword;
use crate::scheme::ModelType;
use crate::value::Value;

/// A user filter: receives the bound item and the literal arguments.
pub type Evaluator = Arc<dyn Fn(&Value, &[Value]) -> TriBool + Send + Sync>;

#[derive(Clone)]
pub enum FilterImpl {
    Match,
    Path,
    Custom(Evaluator),
}

impl fmt::Debug for FilterImpl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FilterImpl::Match => f.write_str("Match"),
            FilterImpl::Path => f.write_str("Path"),
            FilterImpl::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// Filters available per data model. Names are case-insensitive.
#[derive(Clone, Debug)]
pub struct FilterFamily {
    entries: IndexMap<(ModelType, String), FilterImpl>,
}

impl Default for FilterFamily {
    fn default() -> Self {
        let mut entries = IndexMap::new();
        entries.insert((ModelType::Document, "MATCH".to_string()), FilterImpl::Match);
        entries.insert((ModelType::Graph, "MATCH".to_string()), FilterImpl::Match);
        entries.insert((ModelType::Graph, "PATH".to_string()), FilterImpl::Path);
        FilterFamily { entries }
    }
}

impl FilterFamily {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register_filter(
        &mut self,
        model: ModelType,
        name: &str,
        evaluator: Evaluator,
    ) -> Result<&mut Self, FilterError> {
        let key = (model, name.to_ascii_uppercase());
        if self.entries.contains_key(&key) {
            return Err(FilterError::DuplicateFilterName(name.to_string()));
        }
        if is_keyword(name) {
            return Err(FilterError::ReservedName(name.to_string()));
        }
        self.entries.insert(key, FilterImpl::Custom(evaluator));
        Ok(self)
    }

    pub fn lookup(&self, model: ModelType, name: &str) -> Option<&FilterImpl> {
        self.entries.get(&(model, name.to_ascii_uppercase()))
    }

    pub fn names(&self) -> impl Iterator<Item = (ModelType, &str)> {
        self.entries.keys().map(|(m, n)| (*m, n.as_str()))
    }
}
