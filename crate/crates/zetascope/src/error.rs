use thiserror::Error;

/// Errors shared by all zetascope modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{op}: argument out of domain: {detail}")]
    OutOfDomain { op: &'static str, detail: String },

    #[error("{op}: pole at {detail}")]
    Pole { op: &'static str, detail: String },

    #[error("{op}: iteration cap reached; working precision is likely misconfigured")]
    NoConvergence { op: &'static str },

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("no sign change in bracket [{lo:.6}, {hi:.6}] around seed {seed:.6}")]
    NoRootInBracket { lo: f64, hi: f64, seed: f64 },

    #[error("working precision insufficient: {0}")]
    PrecisionInsufficient(String),

    #[error("parse error at line {line}: {detail}")]
    Parse { line: usize, detail: String },

    #[error("ordering violation at line {line}: ordinates must be strictly ascending")]
    Ordering { line: usize },

    #[error("bad cache file {path}: {detail}")]
    CacheFormat { path: String, detail: String },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::OutOfDomain { op, detail: detail.into() }
    }

    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
