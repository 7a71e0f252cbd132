//! Query planning and execution, DML and model conversion.

mod dml;
mod exec;
mod plan;
mod project;
mod transfer;

use std::fmt;

use crate::catalog::Catalog;
use crate::error::{Error, PlanError};
use crate::filters::{Evaluator, FilterFamily};
use crate::parser::{parse_script, Query, Statement};
use crate::scheme::ModelType;
use crate::storage::Storage;
use crate::value::Value;

pub use exec::Row;
pub use plan::{JoinAlgo, JoinPlan, OutputPlan, Plan, PlanOptions, Projection, QueryPlan, Side};
pub use project::project_output;
pub use transfer::{check_transfer_legality, widens};

/// One `&`-separated part of a query result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutputObject {
    pub label: String,
    pub items: Vec<Value>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ResultSet {
    pub outputs: Vec<OutputObject>,
}

impl ResultSet {
    pub fn is_empty(&self) -> bool {
        self.outputs.iter().all(|o| o.items.is_empty())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Created(String),
    Initialized(String),
    ViewDefined(String),
    Rows(ResultSet),
    Inserted(usize),
    Updated(usize),
    Deleted(usize),
    Transferred(usize),
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Created(n) => write!(f, "created {n}"),
            Outcome::Initialized(n) => write!(f, "initialized {n}"),
            Outcome::ViewDefined(n) => write!(f, "view {n} defined"),
            Outcome::Rows(rs) => {
                let n: usize = rs.outputs.iter().map(|o| o.items.len()).sum();
                write!(f, "{n} items")
            }
            Outcome::Inserted(n) => write!(f, "{n} inserted"),
            Outcome::Updated(n) => write!(f, "{n} updated"),
            Outcome::Deleted(n) => write!(f, "{n} deleted"),
            Outcome::Transferred(n) => write!(f, "{n} transferred"),
        }
    }
}

/// A catalog, its stores and the filter registry.
#[derive(Clone, Debug, Default)]
pub struct Database {
    pub catalog: Catalog,
    pub storage: Storage,
    pub filters: FilterFamily,
    pub options: PlanOptions,
}

impl Database {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register_filter(
        &mut self,
        model: ModelType,
        name: &str,
        evaluator: Evaluator,
    ) -> Result<(), Error> {
        self.filters.register_filter(model, name, evaluator)?;
        Ok(())
    }

    /// Parses and runs a script, stopping at the first error.
    pub fn execute_script(&mut self, text: &str) -> Result<Vec<Outcome>, Error> {
        let stmts = parse_script(text)?;
        stmts.iter().map(|s| self.execute(s)).collect()
    }

    pub fn execute(&mut self, stmt: &Statement) -> Result<Outcome, Error> {
        match stmt {
            Statement::CreateObject { model, name } => {
                self.catalog.create(*model, name)?;
                Ok(Outcome::Created(name.clone()))
            }
            Statement::InitObject { model, name, scheme } => {
                self.catalog.init(*model, name, scheme.clone())?;
                self.storage.create(name, scheme.clone());
                Ok(Outcome::Initialized(name.clone()))
            }
            Statement::CreateView { vtype, name, query } => {
                if self.catalog.contains(name) {
                    return Err(crate::catalog::CatalogError::DuplicateName(name.clone()).into());
                }
                // the query must plan against the current catalog
                for r in crate::catalog::referenced_names(query) {
                    if !self.catalog.contains(&r) {
                        return Err(PlanError::UnknownObject(r).into());
                    }
                }
                self.plan(query, self.options)?;
                self.catalog.define_view(*vtype, name, query.clone())?;
                Ok(Outcome::ViewDefined(name.clone()))
            }
            Statement::Query(q) => Ok(Outcome::Rows(self.query(q)?)),
            Statement::Insert { object, source } => Ok(Outcome::Inserted(self.insert(object, source)?)),
            Statement::Update {
                objects,
                assignments,
                filter,
            } => Ok(Outcome::Updated(self.update(objects, assignments, filter)?)),
            Statement::Delete { objects, filter } => Ok(Outcome::Deleted(self.delete(objects, filter)?)),
            Statement::Transfer {
                source,
                target,
                pairs,
            } => Ok(Outcome::Transferred(self.transfer(source, target, pairs)?)),
        }
    }

    /// Runs a query with the database's planning options.
    pub fn query(&self, q: &Query) -> Result<ResultSet, Error> {
        let plan = self.plan(q, self.options)?;
        self.execute_plan(&plan)
    }

    pub fn plan(&self, q: &Query, options: PlanOptions) -> Result<QueryPlan, Error> {
        plan::Planner::new(self, options).query(q)
    }

    pub fn execute_plan(&self, plan: &QueryPlan) -> Result<ResultSet, Error> {
        exec::Executor::new(self).query(plan)
    }

    /// Items visited in all stores since the last reset.
    pub fn visits(&self) -> u64 {
        self.storage.total_visits()
    }

    pub fn reset_visits(&self) {
        self.storage.reset_visits()
    }
}
