use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("id out of range at line {line}")]
    IdOutOfRange { line: usize },

    #[error("graph contains a cycle")]
    Cycle,

    #[error("oracle refuses graphs with {n} vertices (cap {cap})")]
    OracleCap { n: usize, cap: usize },

    #[error("graph has no reachable pair (u, v) with u != v")]
    NoPositivePairs,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("ground pair ({0}, {1}) is not covered by any candidate set")]
    Uncoverable(u32, u32),

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
