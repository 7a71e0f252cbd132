use crate::catalog::CatalogError;
use crate::filters::FilterError;
use crate::parser::ParseError;
use crate::scheme::Violation;
use crate::storage::StorageError;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PlanError {
    #[error("unknown object or view {0}")]
    UnknownObject(String),
    #[error("cannot resolve attribute {0}")]
    UnresolvableAttribute(String),
    #[error("{0} is bound on both sides of a join")]
    AmbiguousAttribute(String),
    #[error("WHERE term {0} references several FROM objects; use a JOIN")]
    CrossObjectPredicateInSelect(String),
    #[error("output object {0} references several FROM objects")]
    OutputSpansSources(String),
    #[error("duplicate output key {0}; add a label")]
    DuplicateOutputKey(String),
    #[error("nested map or list {0} needs a label")]
    UnlabeledCollection(String),
    #[error("join condition {0} must compare one attribute from each side")]
    InvalidJoinCondition(String),
    #[error("only one PATH filter per object is allowed ({0})")]
    MultiplePaths(String),
    #[error("query result does not fit {0}")]
    ShapeMismatch(String),
    #[error("illegal TRANSFER: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    TransferIllegal(Vec<Violation>),
    #[error("{0}")]
    Unsupported(String),
}

/// Any failure while parsing or executing a statement.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("syntax error at {0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Storage(#[from] StorageError),
    #[error(transparent)]
    Filter(#[from] FilterError),
    #[error(transparent)]
    Plan(#[from] PlanError),
}
