use std::path::PathBuf;

use thiserror::Error;

use crate::graph::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph {graph_id}: {violation}")]
    InvalidGraph { graph_id: usize, violation: Violation },

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("incompatible embeddings: {0}")]
    IncompatibleEmbeddings(String),

    #[error("graph {0} has no nodes")]
    EmptyGraph(usize),

    #[error("empty set")]
    EmptySet,

    #[error("missing node labels on graph {0}")]
    MissingNodeLabels(usize),

    #[error("missing file {}", .0.display())]
    MissingFile(PathBuf),

    #[error("parse error in {file} line {line}: {message}")]
    Parse { file: String, line: usize, message: String },

    #[error("node index out of range: {index} (dataset has {count} nodes)")]
    NodeIndexOutOfRange { index: usize, count: usize },

    #[error("anomalous class too small: requested ratio {requested}, achievable ratio {achievable:.4}")]
    RatioUnreachable { requested: f64, achievable: f64 },

    #[error("score length {found} does not match node count {expected}")]
    ScoreLength { expected: usize, found: usize },

    #[error(
        "no cluster discovered: first candidate threshold gamma = {first_gamma} is not above tau = {tau}; lower tau"
    )]
    NoClusters { first_gamma: f64, tau: f64 },

    #[error("single-class labels: AUC needs both anomalies and normals")]
    SingleClass,

    #[error("unknown graph id {0}")]
    UnknownGraph(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
