//! Finite-dimensional toolkit for g-fusion frames and K-g-fusion frames.
//!
//! A g-fusion family over `ℂⁿ` is a finite list of triples `(W_j, Λ_j, v_j)`:
//! a subspace `W_j` (stored as an orthonormal basis), a member operator
//! `Λ_j : ℂⁿ → ℂ^{m_j}`, and a positive weight `v_j`. The family is a frame
//! when the energy map `f ↦ Σ_j v_j² ‖Λ_j P_{W_j} f‖²` is bounded below and
//! above by positive multiples of `‖f‖²`, and a K-frame when the lower bound
//! is measured against `‖K* f‖²` instead.
//!
//! The crate is organized around that object:
//!
//! - [`linalg`] — the dense complex-matrix kernel (orthonormalization,
//!   projectors, Hermitian eigendecomposition, PSD square roots,
//!   pseudoinverses, PSD ordering).
//! - [`frames`] — the family model, synthesis/analysis operators, frame
//!   operator assembly, optimal and K-relative bounds, bound certificates.
//! - [`duals`] — canonical duals and the transported dual pair with two-sided
//!   reconstruction.
//! - [`transforms`] — constructions that manufacture new (K-)g-fusion frames
//!   from old ones together with their guaranteed bounds.
//! - [`stability`] — perturbation gaps between two families and the derived
//!   stability constants for their canonical duals.
//! - [`quotient`] — quotient operators and the three-way equivalence between
//!   UK-g-fusion frames and bounded quotients.
//!
//! Every operation is a pure function of its inputs; all values are immutable
//! after construction and safe to share across threads.

pub mod duals;
pub mod error;
pub mod frames;
pub mod linalg;
pub mod quotient;
pub mod stability;
pub mod tol;
pub mod transforms;

pub use error::{FrameError, LinalgError};
pub use frames::{
    BoundCertificate, CertificateKind, DirectSumVector, FrameClass, FrameMember, FrameOperator,
    GFusionFamily,
};
pub use linalg::{HermitianMatrix, Matrix, Scalar};
pub use tol::Tolerances;
