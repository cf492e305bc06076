use thiserror::Error;

/// Errors produced while building states or evaluating the criterion.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("block count k={k} out of range for n={n} parties (need 2 <= k <= n)")]
    BlockCountOutOfRange { k: usize, n: usize },

    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("trace deviates from 1 (got {0})")]
    BadTrace(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("factor {index} is not normalized (norm {norm})")]
    NotNormalized { index: usize, norm: f64 },

    #[error("matrix {index} is not unitary (max deviation {deviation:e})")]
    NotUnitary { index: usize, deviation: f64 },

    #[error("negative diagonal expectation {0:e}: density matrix is invalid")]
    NegativeDiagonal(f64),

    #[error("two-copy space of dimension {0} exceeds the oracle size guard of 4096")]
    OracleTooLarge(usize),

    #[error("no sign change of the criterion value on [0, 1] (value(0)={low}, value(1)={high})")]
    NoSignChange { low: f64, high: f64 },

    #[error("degenerate chain specification: trace {0:e}")]
    DegenerateTrace(f64),

    #[error("partition count S({n},{k}) overflows u64")]
    CountOverflow { n: usize, k: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by malformed or invalid input data (as opposed to
    /// well-formed inputs that are incompatible with each other or the request).
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Shape(_)
                | Error::NotHermitian(_)
                | Error::BadTrace(_)
                | Error::NotPositive(_)
                | Error::NotNormalized { .. }
                | Error::NotUnitary { .. }
                | Error::InvalidPartition(_)
                | Error::Io(_)
                | Error::Json(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
