use thiserror::Error;

/// Failures raised while validating a 4x4 matrix as a two-qubit state.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError {
    #[error("matrix is not Hermitian (max |m_ij - conj(m_ji)| = {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("trace is not one (|tr - 1| = {deviation:e})")]
    TraceNotOne { deviation: f64 },
    #[error("matrix is not positive semidefinite (min eigenvalue = {min_eigenvalue:e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },
    #[error("matrix has a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeasureError {
    #[error("argument {value} outside [{min}, {max}]")]
    OutOfRange { value: f64, min: f64, max: f64 },
    #[error("negativity quartic has no real root (smallest |Im| = {min_imaginary:e})")]
    NoRealRoot { min_imaginary: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum XStateError {
    #[error("invalid X-state parameters: {0}")]
    InvalidParams(String),
    #[error("case {case_id}: {constraint}")]
    OutOfValidityRange { case_id: u8, constraint: String },
    #[error("unknown case id {0} (expected 1..=8)")]
    UnknownCase(u8),
    #[error("case {case_id} expects {expected} free parameter(s), got {got}")]
    ParamCount { case_id: u8, expected: usize, got: usize },
    #[error("parameters do not belong to case {case_id}: {reason}")]
    CaseMismatch { case_id: u8, reason: String },
    #[error("canonical spec: {0}")]
    InvalidSpec(String),
    #[error("mixture has rank {actual}, label requires {expected}")]
    RankDeficient {
        expected: usize,
        actual: usize,
        state: Box<crate::qmat::DensityMatrix>,
    },
    #[error(transparent)]
    State(#[from] StateError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EnsembleError {
    #[error("relative noise bound must be finite and >= 0, got {0}")]
    InvalidNoiseBound(f64),
    #[error("a study needs at least one state")]
    EmptyStudy,
    #[error("unknown ensemble '{0}', expected hs, bures or mixed-rank")]
    UnknownEnsemble(String),
}
