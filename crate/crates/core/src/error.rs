use thiserror::Error;

use crate::graph::EdgeTypePair;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid node pair ({0}, {1})")]
    InvalidNode(usize, usize),

    #[error("edge ({0}, {1}) is not present")]
    MissingEdge(usize, usize),

    #[error("graph sizes differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("target for {pair} is {target} with {max} possible edges; parameter would be infinite")]
    Boundary {
        pair: EdgeTypePair,
        target: f64,
        max: u64,
    },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("missing matrix mpc.{0}")]
    MissingMatrix(&'static str),

    #[error("branch references unknown bus {0}")]
    UnknownBus(u64),

    #[error("invalid manifest: {0}")]
    Manifest(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
