use thiserror::Error;

/// Errors surfaced by the engine. Variants mirror the failure modes of the
/// public operations; the CLI maps configuration/usage problems to exit 2.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid characteristic: {0}")]
    InvalidChar(String),
    #[error("length mismatch: {0}")]
    LengthMismatch(String),
    #[error("declared orbit data is inconsistent with u: {0}")]
    InconsistentOrbits(String),
    #[error("object exceeds truncation bound: {0}")]
    TruncationExceeded(String),
    #[error("type mismatch in composition: {0}")]
    TypeMismatch(String),
    #[error("rewriting exceeded its work budget; relation tables are likely inconsistent")]
    RewriteDivergence,
    #[error("set of objects is not an upper set for the order")]
    NotUpperSet,
    #[error("subspace is not an ideal")]
    NotIdeal,
    #[error("field not supported for this operation: {0}")]
    UnsupportedField(String),
    #[error("missing cellular data for layer {0}")]
    MissingLayerData(String),
    #[error("unknown label: {0}")]
    UnknownLabel(String),
    #[error("truncation too shallow for the requested computation: {0}")]
    InsufficientTruncation(String),
    #[error("missing decomposition table for layer {0}")]
    MissingTable(String),
    #[error("content lies outside the index set I")]
    ContentOutsideI,
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
