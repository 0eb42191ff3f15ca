use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violated an operation's precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Exact integer arithmetic left the 64-bit unsigned range.
    #[error("overflow: {0}")]
    Overflow(String),

    /// A query point does not match the oracle's universe.
    #[error(
        "universe mismatch: oracle is ({expected_n},{expected_k}), query is ({got_n},{got_k})"
    )]
    UniverseMismatch {
        expected_n: u32,
        expected_k: u32,
        got_n: u32,
        got_k: u32,
    },

    /// A text family file failed to parse; `line` is 1-based.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// An instance exceeds a configured exact-oracle or memory budget.
    #[error("instance too large for exact oracle: {0}")]
    Budget(String),

    /// The matching search could not reach the requested size.
    #[error("insufficient matching: found {found} pairs, target {target}")]
    InsufficientMatching { found: u64, target: u64 },

    /// The far-restriction search ended without a certifiable triple.
    #[error("restriction search failed: {0}")]
    Search(String),

    /// An I/O failure, annotated with the path involved.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
