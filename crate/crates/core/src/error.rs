use thiserror::Error;

/// Errors raised by the engine.
///
/// Axiom failures of otherwise well-formed data are not errors: they are
/// returned as a [`crate::ValidationReport`]. Errors are reserved for data
/// that cannot be interpreted at all, for violated preconditions and for
/// exhausted resources.
#[derive(Debug, Error)]
pub enum Error {
    #[error("structural error: {0}")]
    Structural(String),

    #[error("not a normal subgroup: {0}")]
    NotNormal(String),

    #[error("invariant violation: {what} at ({})", join(.witness))]
    Invariant { what: String, witness: Vec<usize> },

    #[error("input not liftable: {what} at ({})", join(.witness))]
    NotLiftable { what: String, witness: Vec<usize> },

    #[error("not implemented: {0}")]
    Unsupported(String),

    #[error("not composable: {0}")]
    Composability(String),

    #[error("search budget exceeded: bound {bound} exceeds limit {limit}")]
    Budget { bound: String, limit: u64 },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown document kind `{0}`")]
    UnknownKind(String),

    #[error("unsupported document version {found} (expected {expected})")]
    Version { found: u64, expected: u64 },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn join(w: &[usize]) -> String {
    w.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

pub(crate) fn structural(msg: impl Into<String>) -> Error {
    Error::Structural(msg.into())
}

pub(crate) fn invariant(what: impl Into<String>, witness: &[usize]) -> Error {
    Error::Invariant {
        what: what.into(),
        witness: witness.to_vec(),
    }
}
