//! Annotation projects for the three TYPIC workflows: free-text diagnosis,
//! template application and informativeness judging.
//!
//! A [`Service`] owns projects built over corpus directories. Each project
//! assigns items to annotators (a seeded share doubly), hands them out one
//! at a time, accepts revision-checked submissions and exports the result
//! in the corpus format. State lives in an append-only JSON-lines log.
//! [`http::router`] exposes the service as a JSON API.

mod assign;
pub mod export;
pub mod http;
mod model;
pub mod schemas;
mod service;
pub mod store;

use std::path::PathBuf;

use thiserror::Error;

pub use assign::{assign, overlap_count};
pub use export::Export;
pub use model::*;
pub use service::{workflow_items, Service};

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error("unknown project {0:?}")]
    UnknownProject(String),
    #[error("unknown annotator {0:?}")]
    UnknownAnnotator(String),
    #[error("missing or invalid bearer token")]
    Unauthorized,
    #[error("unknown item {0:?}")]
    UnknownItem(String),
    #[error("item {item_id:?} is not assigned to {annotator:?}")]
    NotAssigned { item_id: String, annotator: String },
    #[error("revision conflict on {item_id:?}: current revision is {expected}, submit carried {got}")]
    RevisionConflict { item_id: String, expected: u64, got: u64 },
    #[error("invalid payload: {0}")]
    Validation(String),
    #[error("invalid project: {0}")]
    Config(String),
    #[error("bad request: {0}")]
    BadRequest(String),
    #[error(transparent)]
    Template(#[from] typic_core::TemplateError),
    #[error("{path}: {source}")]
    Storage {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: unreadable log entry: {message}")]
    CorruptLog { path: PathBuf, line: usize, message: String },
    #[error("export does not load: {0}")]
    Export(String),
}

impl ServiceError {
    /// Stable machine-readable error code.
    pub fn kind(&self) -> &'static str {
        match self {
            ServiceError::UnknownProject(_) => "UnknownProject",
            ServiceError::UnknownAnnotator(_) => "UnknownAnnotator",
            ServiceError::Unauthorized => "Unauthorized",
            ServiceError::UnknownItem(_) => "UnknownItem",
            ServiceError::NotAssigned { .. } => "NotAssigned",
            ServiceError::RevisionConflict { .. } => "RevisionConflict",
            ServiceError::Validation(_) => "ValidationError",
            ServiceError::Config(_) => "SchemaError",
            ServiceError::BadRequest(_) => "BadRequest",
            ServiceError::Template(_) => "TemplateError",
            ServiceError::Storage { .. } => "StorageError",
            ServiceError::CorruptLog { .. } => "StorageError",
            ServiceError::Export(_) => "ExportError",
        }
    }
}
