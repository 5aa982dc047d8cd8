use std::fmt;
use std::sync::OnceLock;

use nalgebra::{DMatrix, SymmetricEigen};

use super::matrix::{Matrix, Scalar};
use crate::error::LinalgError;
use crate::tol;

/// Iteration budget for the implicit-shift eigenvalue iteration.
const EIG_MAX_ITERATIONS: usize = 10_000;

/// Spectral decomposition of a Hermitian matrix: ascending real eigenvalues
/// and a unitary matrix of eigenvectors (column `k` pairs with `values[k]`).
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

impl Eigen {
    /// `V · diag(f(λ)) · V*` as a Hermitian matrix.
    fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> HermitianMatrix {
        let n = self.values.len();
        let diag = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Scalar::new(f(self.values[i]), 0.0)
            } else {
                Scalar::new(0.0, 0.0)
            }
        });
        let v = &self.vectors.inner;
        HermitianMatrix::from_hermitian_product(Matrix::wrap(v * diag * v.adjoint()))
    }
}

/// A square matrix certified Hermitian at construction, with a lazily cached
/// spectral decomposition.
pub struct HermitianMatrix {
    base: Matrix,
    eig: OnceLock<Eigen>,
}

impl HermitianMatrix {
    /// Validates Hermitian symmetry within `tol_herm` (relative, Frobenius)
    /// and stores the symmetrized part `(M + M*)/2`.
    pub fn new(m: Matrix, tol_herm: f64) -> Result<Self, LinalgError> {
        if !m.is_square() {
            return Err(LinalgError::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        let residual = (&m - &m.adjoint()).frobenius_norm();
        let scale = 1.0 + m.frobenius_norm();
        if residual > tol_herm * scale {
            return Err(LinalgError::NotHermitian {
                residual: residual / scale,
                tol: tol_herm,
            });
        }
        Ok(Self::from_hermitian_product(m))
    }

    /// Wraps a matrix that is Hermitian by construction (products of the form
    /// `A·A*`, sums and real-scalar multiples of Hermitian matrices). The
    /// stored matrix is symmetrized exactly.
    pub fn from_hermitian_product(m: Matrix) -> Self {
        let sym = (&m.inner + m.inner.adjoint()) * Scalar::new(0.5, 0.0);
        HermitianMatrix {
            base: Matrix::wrap(sym),
            eig: OnceLock::new(),
        }
    }

    /// `c · I_n`.
    pub fn scaled_identity(n: usize, c: f64) -> Self {
        HermitianMatrix {
            base: Matrix::identity(n).scale(c),
            eig: OnceLock::new(),
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.base
    }

    pub fn dim(&self) -> usize {
        self.base.rows()
    }

    /// Spectral decomposition with ascending eigenvalues, computed on first
    /// use and cached.
    pub fn eig(&self) -> Result<&Eigen, LinalgError> {
        if let Some(e) = self.eig.get() {
            return Ok(e);
        }
        let computed = self.compute_eig()?;
        Ok(self.eig.get_or_init(|| computed))
    }

    fn compute_eig(&self) -> Result<Eigen, LinalgError> {
        let n = self.dim();
        let se = SymmetricEigen::try_new(self.base.inner.clone(), f64::EPSILON, EIG_MAX_ITERATIONS)
            .ok_or(LinalgError::ConvergenceFailure)?;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
        let values: Vec<f64> = order.iter().map(|&k| se.eigenvalues[k]).collect();
        let vectors = DMatrix::from_fn(n, n, |i, j| se.eigenvectors[(i, order[j])]);
        Ok(Eigen {
            values,
            vectors: Matrix::wrap(vectors),
        })
    }

    pub fn eigenvalues(&self) -> Result<&[f64], LinalgError> {
        Ok(&self.eig()?.values)
    }

    pub fn min_eigenvalue(&self) -> Result<f64, LinalgError> {
        Ok(self.eig()?.values[0])
    }

    pub fn max_eigenvalue(&self) -> Result<f64, LinalgError> {
        Ok(*self.eig()?.values.last().expect("non-empty spectrum"))
    }

    /// Operator norm, `max |λ|`.
    pub fn operator_norm(&self) -> Result<f64, LinalgError> {
        let e = self.eig()?;
        Ok(e.values
            .iter()
            .fold(0.0f64, |acc, &l| acc.max(l.abs())))
    }

    /// Hermitian PSD square root. Eigenvalues in `[-tol_psd·‖H‖, 0)` are
    /// clamped to zero; anything lower is rejected.
    pub fn sqrt_psd(&self, tol_psd: f64) -> Result<HermitianMatrix, LinalgError> {
        let e = self.eig()?;
        let norm = e.values.iter().fold(0.0f64, |acc, &l| acc.max(l.abs()));
        let min = e.values[0];
        if min < -tol_psd * norm {
            return Err(LinalgError::NotPsd {
                min_eigenvalue: min,
            });
        }
        Ok(e.map_spectrum(|l| if l > 0.0 { l.sqrt() } else { 0.0 }))
    }

    /// Spectral inverse `V · diag(1/λ) · V*`. Requires the matrix to be
    /// positive definite relative to `tol`: `λ_min > tol · λ_max`.
    pub fn spectral_inverse(&self, tol: f64) -> Result<HermitianMatrix, LinalgError> {
        let e = self.eig()?;
        let max = *e.values.last().expect("non-empty spectrum");
        let min = e.values[0];
        if min <= tol * max.max(0.0) || min <= 0.0 {
            return Err(LinalgError::Singular {
                min_eigenvalue: min,
            });
        }
        Ok(e.map_spectrum(|l| 1.0 / l))
    }

    /// Spectral pseudoinverse for PSD matrices: eigenvalues at or below
    /// `rank_tol · λ_max` are treated as zero.
    pub fn spectral_pseudo_inverse(&self, rank_tol: f64) -> Result<HermitianMatrix, LinalgError> {
        let e = self.eig()?;
        let max = e.values.iter().fold(0.0f64, |acc, &l| acc.max(l.abs()));
        let cut = rank_tol * max;
        Ok(e.map_spectrum(|l| if l > cut { 1.0 / l } else { 0.0 }))
    }

    /// Applies a real function to the spectrum.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> Result<HermitianMatrix, LinalgError> {
        Ok(self.eig()?.map_spectrum(f))
    }
}

impl Clone for HermitianMatrix {
    fn clone(&self) -> Self {
        let eig = OnceLock::new();
        if let Some(e) = self.eig.get() {
            let _ = eig.set(e.clone());
        }
        HermitianMatrix {
            base: self.base.clone(),
            eig,
        }
    }
}

impl PartialEq for HermitianMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base
    }
}

impl fmt::Debug for HermitianMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HermitianMatrix({}x{})", self.dim(), self.dim())
    }
}

impl HermitianMatrix {
    /// Convenience constructor using the global Hermitian tolerance.
    pub fn with_default_tol(m: Matrix) -> Result<Self, LinalgError> {
        Self::new(m, tol::global().herm)
    }
}
