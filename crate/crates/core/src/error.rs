use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("geometry {geometry} requires dimension 1, got {dim}")]
    GeometryMismatch { geometry: &'static str, dim: usize },

    #[error("enumeration of {requested} points exceeds the cap of {cap}")]
    CapExceeded { requested: String, cap: u64 },

    #[error("truncation radius {given} is smaller than the support radius {required}")]
    TruncationTooSmall { given: u64, required: u64 },

    #[error("tail majorant for {kind} constant in dimension {dim} only certified from k = {crossover}; need terms >= {min_terms}")]
    BelowCrossover { kind: &'static str, dim: usize, crossover: u64, min_terms: u64 },

    #[error("the zero function has no variation ratio")]
    ZeroFunction,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
