use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("amplitude vector has zero norm")]
    DegenerateState,
    #[error("preparation weights must be nonnegative and not all zero")]
    InvalidWeights,
    #[error("matrix is not unitary (deviation {deviation:e})")]
    NotUnitary { deviation: f64 },
    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("density matrix has zero trace")]
    ZeroTrace,
    #[error("series has no strictly positive value")]
    NoPositiveValue,
    #[error("series is empty")]
    EmptySeries,
    #[error("exposure must be positive and finite, got {0}")]
    InvalidExposure(f64),
    #[error("background rate must be nonnegative and finite, got {0}")]
    InvalidBackground(f64),
    #[error("expected {expected} count rows, got {got}")]
    RowCount { expected: usize, got: usize },
    #[error("at least {min} trials are required, got {got}")]
    TooFewTrials { min: usize, got: usize },
    #[error("linear system is singular")]
    Singular,
    #[error("basis {basis} is not orthonormal (deviation {deviation:e})")]
    MalformedBasis { basis: usize, deviation: f64 },
    #[error("unknown state label `{0}`")]
    UnknownLabel(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
