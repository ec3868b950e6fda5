use std::path::PathBuf;

use thiserror::Error;

use crate::model::NodeId;

/// Errors raised across the model, solver, and simulation layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("graph is disconnected: node {node} cannot reach source {source_node}")]
    Disconnected { node: NodeId, source_node: NodeId },

    #[error("network has no nodes")]
    EmptyNetwork,

    #[error("invalid topology: {0}")]
    Topology(String),

    #[error("invalid tier configuration: {0}")]
    Tiers(String),

    #[error("object catalog must contain at least one object")]
    EmptyCatalog,

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("benefit matrix entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("brute force guard exceeded: {objects} objects, {slots} slots (limit 8 each)")]
    BruteForceGuard { objects: usize, slots: usize },

    #[error("no permitted outgoing link at node {node} for object {object}")]
    NoRoute { node: NodeId, object: usize },

    #[error("cache action rejected at node {node}: {reason}")]
    CacheAction { node: NodeId, reason: String },

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },

    #[error("missing figure cells: {0:?}")]
    MissingCells(Vec<String>),

    #[error("run failed for {config}: {source}")]
    Run {
        config: String,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error in {path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
