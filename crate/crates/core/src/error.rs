use thiserror::Error;

/// Errors raised by the kernels, verifiers and the search harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("dimension mismatch: expected order {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("matrix is not Hermitian (asymmetry {asymmetry:.3e})")]
    NotHermitian { asymmetry: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("matrix is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("strict contraction required (largest singular value {sigma_max})")]
    StrictContractionRequired { sigma_max: f64 },

    #[error("I - UZ is singular (|det| = {det_abs:.3e})")]
    SingularHypothesis { det_abs: f64 },

    #[error("eigenvalue iteration did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("bad eigenvalue range [{lo}, {hi}]")]
    BadRange { lo: f64, hi: f64 },

    #[error("bad weights: {0}")]
    WeightError(String),

    #[error("argument outside domain: {0}")]
    BadDomain(String),

    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),

    #[error("unknown inequality `{0}`")]
    UnknownInequality(String),

    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),

    #[error("numerical inconsistency: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Variant name, stable for scripts matching on diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidMatrix(_) => "InvalidMatrix",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::NotHermitian { .. } => "NotHermitian",
            Error::NotPsd { .. } => "NotPsd",
            Error::NotUnitary { .. } => "NotUnitary",
            Error::StrictContractionRequired { .. } => "StrictContractionRequired",
            Error::SingularHypothesis { .. } => "SingularHypothesis",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::BadRange { .. } => "BadRange",
            Error::WeightError(_) => "WeightError",
            Error::BadDomain(_) => "BadDomain",
            Error::HypothesisFailed(_) => "HypothesisFailed",
            Error::UnknownInequality(_) => "UnknownInequality",
            Error::InvalidConfig(_) => "InvalidConfig",
            Error::Numerical(_) => "Numerical",
        }
    }
}
