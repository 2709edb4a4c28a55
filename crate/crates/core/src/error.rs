use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("bad joint dimension: expected {expected}x{expected}, got {rows}x{cols}")]
    BadJointDimension {
        expected: usize,
        rows: usize,
        cols: usize,
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("not hermitian (defect {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("not unitary (defect {defect:.3e})")]
    NotUnitary { defect: f64 },

    #[error("non-finite matrix entry")]
    NonFinite,

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("ensemble does not commute (max commutator {commutator:.3e})")]
    NotCommuting { commutator: f64 },

    #[error("no family found (final defect {defect:.3e} after {sweeps} sweeps)")]
    NoFamilyFound { defect: f64, sweeps: usize },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// True for failures of a numerical routine rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NotUnitary { .. } | Error::NoFamilyFound { .. } | Error::Numerical(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
