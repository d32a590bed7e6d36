use std::path::PathBuf;

use crate::linalg::Field;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("field mismatch: expected {expected}, found {found}")]
    FieldMismatch { expected: Field, found: Field },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },

    #[error("cannot read {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("not a strict partial order: {0}")]
    Poset(String),

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("unknown label {0:?}")]
    UnknownLabel(String),

    #[error("set is not saturated: {above} > {below} but only {below} is in the set")]
    NotSaturated { above: String, below: String },

    #[error("characteristic {p} is too small: the trace-form radical needs p = 0 or p > dim A = {dim}")]
    CharacteristicTooSmall { p: u64, dim: usize },

    #[error("module {0} is not absolutely irreducible over this field (End has dimension {1})")]
    NonSplit(String, usize),

    #[error("side mismatch: {0}")]
    SideMismatch(String),

    #[error("label mismatch: {0}")]
    LabelMismatch(String),

    #[error("path algebra not finite-dimensional within path length cap {cap}")]
    NotFiniteWithinCap { cap: usize },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("invalid alpha datum: {0}")]
    InvalidAlpha(String),

    #[error("composition check failed: {0}")]
    Composition(String),

    #[error("internal error: {0}")]
    Internal(String),
}
