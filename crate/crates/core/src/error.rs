use thiserror::Error;

/// Errors raised by the analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is empty")]
    Empty,
    #[error("matrix is not square: expected {expected} entries, found {found}")]
    NotSquare { expected: usize, found: usize },
    #[error("matrix dimension {dim} exceeds the hard limit of {limit}")]
    TooLarge { dim: usize, limit: usize },
    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not Hermitian (relative asymmetry {asymmetry:.3e})")]
    NotHermitian { asymmetry: f64 },
    #[error("basis is not orthonormal (Gram deviation {deviation:.3e})")]
    BasisNotOrthonormal { deviation: f64 },
    #[error("operation requires a nonzero element")]
    ZeroElement,
    #[error("cannot build a state from the zero vector")]
    ZeroVector,
    #[error("best approximation needs a nonzero direction")]
    ZeroDirection,
    #[error("operation requires positive semidefinite elements")]
    NotPositive,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error(
        "orthogonality routes disagree: derivative margin {derivative_margin:.3e}, \
         pencil margin {pencil_margin:.3e}"
    )]
    InconsistentRoutes { derivative_margin: f64, pencil_margin: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
