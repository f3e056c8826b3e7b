use thiserror::Error;

pub type Result<T, E = TangleError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum TangleError {
    #[error("bipartition has an empty side")]
    EmptySide,

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("object universe mismatch: cut has {cut} objects, data has {data}")]
    UniverseMismatch { cut: usize, data: usize },

    #[error("input too large for exhaustive search: {size} exceeds limit {limit}")]
    TooLarge { size: usize, limit: usize },

    #[error("graph needs at least two nodes, got {0}")]
    TooFewNodes(usize),

    #[error("no usable axis: every coordinate axis is constant")]
    DegenerateAxis,

    #[error("invalid parameters: {0}")]
    BadParams(String),

    #[error("split node {0} has no distinguishing cuts")]
    NoDistinguishingCuts(usize),

    #[error("invalid node selection: {0}")]
    InvalidSelection(String),

    #[error("cut {0} carries no axis metadata")]
    MissingAxisMetadata(usize),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl TangleError {
    pub(crate) fn params(msg: impl Into<String>) -> Self {
        TangleError::BadParams(msg.into())
    }
}
