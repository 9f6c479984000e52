use thiserror::Error;

/// Errors raised while building or reading instances.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("duplicate {what} id `{id}`")]
    DuplicateId { what: String, id: String },
    #[error("unknown {what} id `{id}`")]
    UnknownId { what: String, id: String },
    #[error("malformed instance: {0}")]
    Malformed(String),
    #[error("not a map: {0}")]
    NotAMap(String),
    #[error("unbounded hom-set: the graph has a directed cycle and no path-length bound was given")]
    UnboundedHomSet,
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("nesting depth {requested} exceeds the configured maximum {max}")]
    NestingDepth { requested: usize, max: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
