use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("truncation orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),

    #[error("constant term {0} is not a unit; the inverse series would not be integral")]
    NonUnitConstant(String),

    #[error("exact integer arithmetic overflowed at index {0}")]
    Overflow(usize),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("coefficient table too short: {0}")]
    InsufficientTable(String),

    #[error("series or continued fraction did not converge: {0}")]
    NoConvergence(String),

    #[error("pole of the gamma function at {0}")]
    Pole(f64),

    #[error("zero on the contour persists after {retries} dilations ({detail})")]
    BoundaryZero { retries: usize, detail: String },

    #[error("zero reconciliation failed: {0}")]
    Reconciliation(String),

    #[error("realness check failed: discarded component {discarded:e} vs kept {kept:e} at t = {t}")]
    Realness { t: f64, kept: f64, discarded: f64 },

    #[error("zero database: {0}")]
    Schema(String),

    #[error("checksum mismatch: header says {expected}, content hashes to {actual}")]
    Checksum { expected: String, actual: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
