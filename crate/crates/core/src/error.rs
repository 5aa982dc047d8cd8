//! Error types for the matrix kernel and the frame machinery.

use thiserror::Error;

/// Errors from the dense matrix kernel.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix entry ({row},{col}) is not finite")]
    NonFiniteEntry { row: usize, col: usize },

    #[error("matrix must have at least one row and one column, got {rows}x{cols}")]
    EmptyMatrix { rows: usize, cols: usize },

    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("{context}: expected {expected}, got {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: String,
        found: String,
    },

    #[error("matrix is not Hermitian: asymmetry {residual:.3e} exceeds tolerance {tol:.3e}")]
    NotHermitian { residual: f64, tol: f64 },

    #[error("basis columns are not orthonormal: residual {residual:.3e} exceeds tolerance {tol:.3e}")]
    NotOrthonormal { residual: f64, tol: f64 },

    #[error("all columns are negligible at rank tolerance {rank_tol:.3e}; the zero subspace has no basis")]
    AllColumnsNegligible { rank_tol: f64 },

    #[error("matrix is not positive semidefinite: smallest eigenvalue {min_eigenvalue:.3e}")]
    NotPsd { min_eigenvalue: f64 },

    #[error("matrix is numerically singular: smallest eigenvalue {min_eigenvalue:.3e}")]
    Singular { min_eigenvalue: f64 },

    #[error("eigenvalue iteration failed to converge within the iteration budget")]
    ConvergenceFailure,
}

/// Errors from family-level operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FrameError {
    #[error("invalid family: {reason}")]
    InvalidFamily { reason: String },

    #[error("{context}: expected {expected}, got {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: String,
        found: String,
    },

    #[error("families are not shape-compatible: {reason}")]
    ShapeMismatch { reason: String },

    #[error("family is not a frame: optimal lower bound {lower_bound:.3e}")]
    NotAFrame { lower_bound: f64 },

    #[error("{name} is not invertible: smallest singular value {sigma_min:.3e}")]
    NotInvertible { name: &'static str, sigma_min: f64 },

    #[error(
        "claimed bounds fail verification: lower margin {lower_margin:.3e}, upper margin {upper_margin:.3e}"
    )]
    CertificateRejected {
        lower_margin: f64,
        upper_margin: f64,
    },

    #[error("guaranteed bounds fail verification: lower margin {lower_margin:.3e}, upper margin {upper_margin:.3e}")]
    GuaranteeViolated {
        lower_margin: f64,
        upper_margin: f64,
    },

    #[error("transformed family does not match the construction from the original members (residual {residual:.3e})")]
    InconsistentPair { residual: f64 },

    #[error("operators do not commute: residual {residual:.3e} exceeds tolerance {tol:.3e}")]
    CommutationViolation { residual: f64, tol: f64 },

    #[error("operation requires a canonical dual pair")]
    WrongCoupling,

    #[error("reconstruction residual {residual:.3e} exceeds tolerance {tol:.3e}")]
    ReconstructionFailure { residual: f64, tol: f64 },

    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
