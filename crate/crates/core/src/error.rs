use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: |a[{row}][{col}] - conj(a[{col}][{row}])| = {deviation:e} exceeds {tolerance:e}")]
    NotHermitian {
        row: usize,
        col: usize,
        deviation: f64,
        tolerance: f64,
    },

    #[error("eigensolver did not converge after {sweeps} sweeps (residual {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("function `{name}` is not finite at eigenvalue {eigenvalue}")]
    NonFiniteAtEigenvalue { name: String, eigenvalue: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown function `{0}`")]
    UnknownFunction(String),

    #[error("unknown ensemble `{0}`")]
    UnknownEnsemble(String),

    #[error("declared Lipschitz bound {declared} violated by `{name}`: sampled slope {observed} at ({a}, {b})")]
    LipschitzViolation {
        name: String,
        declared: f64,
        observed: f64,
        a: f64,
        b: f64,
    },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("grid too small: {0}")]
    GridTooSmall(String),

    #[error("spectrum is not integer: eigenvalue {0}")]
    NonIntegerSpectrum(f64),

    #[error("slope bound violated at pair (i={i}, j={j}): direction ({dx}, {dy}) lies outside the tan arcs")]
    SlopeBound { i: i64, j: i64, dx: f64, dy: f64 },

    #[error("aliasing guard violated: {samples} samples for K_max = {k_max} (need at least {needed})")]
    Aliasing {
        samples: usize,
        k_max: usize,
        needed: usize,
    },

    #[error("decay certificate insufficient: tail bound {tail:e} exceeds requested accuracy {accuracy:e}")]
    DecayCertificate { tail: f64, accuracy: f64 },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Errors caused by bad user input rather than numerical failure.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter(_)
                | Error::UnknownFunction(_)
                | Error::UnknownEnsemble(_)
                | Error::Parse { .. }
        )
    }
}
