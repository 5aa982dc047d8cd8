//! Dense complex-matrix kernel.
//!
//! Scalars are complex double precision; real input is promoted. Matrices
//! admit only finite entries. Heavy decompositions (Hermitian eigen, SVD, QR)
//! are delegated to `nalgebra`; everything public here is stated in terms of
//! the contracts the rest of the crate relies on: residual-bounded
//! orthonormal bases, projectors that square to themselves, ascending
//! eigenvalues, Moore–Penrose residuals, and the PSD partial order.

mod hermitian;
mod matrix;
mod ops;

pub use hermitian::{Eigen, HermitianMatrix};
pub use matrix::{Matrix, Scalar};
pub use ops::{
    operator_norm, orthonormal_basis, projection_identity_check, projector, pseudo_inverse,
    psd_order, vec_norm, ProjectionIdentityReport,
};
