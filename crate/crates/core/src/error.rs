use thiserror::Error;

/// Failures raised by the factorization engine.
///
/// Each variant names the numerical gate that rejected the input, so callers
/// can tell "this loop has no factorization" apart from "this truncation is
/// too coarse".
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("constant term {modulus:.3e} is below tolerance {tol:.3e}")]
    ZeroConstantTerm { modulus: f64, tol: f64 },

    #[error("block Toeplitz truncation is not invertible (reciprocal condition {rcond:.3e} <= {tol:.3e})")]
    NotInvertible { rcond: f64, tol: f64 },

    #[error("shifted Toeplitz operator is not invertible: |(g0)_11| = {pivot:.3e} <= {tol:.3e}")]
    ShiftedNotInvertible { pivot: f64, tol: f64 },

    #[error("loop is not factorizable: {gate}")]
    NotFactorizable { gate: String },

    #[error("symbol vanishes on the circle (min modulus {min_modulus:.3e})")]
    VanishingSymbol { min_modulus: f64 },

    #[error("bad normalization: {0}")]
    BadNormalization(String),

    #[error("normal equations are rank deficient (reciprocal condition {rcond:.3e})")]
    RankDeficient { rcond: f64 },

    #[error("truncation unstable: results moved by {drift:.3e} between N={n} and N={n_next}")]
    TruncationUnstable { drift: f64, n: usize, n_next: usize },

    #[error("peeling diverged at index {index}: {reason}")]
    PeelDivergence { index: usize, reason: String },

    #[error("consistency identity violated on the grid (deviation {deviation:.3e})")]
    ConsistencyViolation { deviation: f64 },

    #[error("loop is not unitary on the grid (defect {defect:.3e})")]
    NotUnitary { defect: f64 },

    #[error("denominator vanishes on the grid (min {min_value:.3e})")]
    DenominatorVanishes { min_value: f64 },

    #[error("invalid index pair: {0}")]
    InvalidIndex(String),

    #[error("polynomial identity test failed: {0}")]
    IdentityTestFailed(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
