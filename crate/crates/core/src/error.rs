use thiserror::Error;

use crate::attack::Violation;

/// Errors raised by the simulation toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operand kinds differ: {left} vs {right}")]
    KindMismatch {
        left: &'static str,
        right: &'static str,
    },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("subsystem index {index} out of range for {count} subsystems")]
    InvalidSubsystem { index: usize, count: usize },

    #[error("state vector norm {norm} deviates from 1")]
    NotNormalized { norm: f64 },

    #[error("dimension must be at least {min}, found {found}")]
    DimensionTooSmall { min: usize, found: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("trace {trace} deviates from 1")]
    BadTrace { trace: f64 },

    #[error("not positive semidefinite: eigenvalue {eigenvalue:e}")]
    NotPositiveSemidefinite { eigenvalue: f64 },

    #[error("operator is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("measurement basis is not orthonormal (max deviation {deviation:e})")]
    NonOrthonormalBasis { deviation: f64 },

    #[error("probabilities sum to {sum}, expected 1")]
    BadProbabilities { sum: f64 },

    #[error("encoding index {index} out of range ({count} encoding operations)")]
    InvalidSymbol { index: usize, count: usize },

    #[error("invalid attack: {}", join_violations(.0))]
    InvalidAttack(Vec<Violation>),

    #[error("expected {expected} parameters, found {found}")]
    ParameterCount { expected: usize, found: usize },

    #[error("value {value} outside [{lo}, {hi}]")]
    OutOfRange { value: f64, lo: f64, hi: f64 },

    #[error("unknown built-in attack `{0}`")]
    UnknownAttack(String),

    #[error("{0}")]
    InvalidArgument(String),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;
