//! Multi-model query engine: relational, key-value, document and graph
//! objects defined from one scheme unit and queried through one language.

pub mod catalog;
pub mod engine;
pub mod error;
pub mod filters;
pub mod parser;
pub mod scheme;
pub mod snapshot;
pub mod storage;
pub mod value;

pub use engine::{Database, Outcome, OutputObject, PlanOptions, ResultSet};
pub use error::{Error, PlanError};
pub use scheme::*;
pub use snapshot::{load_snapshot, save_snapshot, SnapshotError, SNAPSHOT_HEADER};
pub use value::{compare_values, Value, ValueMap};
