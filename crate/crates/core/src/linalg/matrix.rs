use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::LinalgError;

/// The scalar field: complex double precision.
pub type Scalar = Complex64;

/// Dense complex matrix with finite entries and at least one row and column.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    pub(crate) inner: DMatrix<Scalar>,
}

fn validate_finite(m: &DMatrix<Scalar>) -> Result<(), LinalgError> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Err(LinalgError::EmptyMatrix {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let z = m[(i, j)];
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(LinalgError::NonFiniteEntry { row: i, col: j });
            }
        }
    }
    Ok(())
}

impl Matrix {
    /// Wraps a matrix produced by internal arithmetic. Panics on non-finite
    /// entries: inputs are validated at the public boundary, so overflow here
    /// means the caller fed unreasonably scaled data.
    pub(crate) fn wrap(inner: DMatrix<Scalar>) -> Self {
        if let Err(e) = validate_finite(&inner) {
            panic!("internal matrix arithmetic produced an invalid matrix: {e}");
        }
        Matrix { inner }
    }

    pub fn from_dmatrix(inner: DMatrix<Scalar>) -> Result<Self, LinalgError> {
        validate_finite(&inner)?;
        Ok(Matrix { inner })
    }

    /// Builds a `rows x cols` matrix from row-major complex entries.
    pub fn from_row_major(
        rows: usize,
        cols: usize,
        entries: Vec<Scalar>,
    ) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch {
                context: "from_row_major",
                expected: format!("{} entries", rows * cols),
                found: format!("{} entries", entries.len()),
            });
        }
        let inner = DMatrix::from_row_iterator(rows, cols, entries);
        Self::from_dmatrix(inner)
    }

    /// Builds a matrix from row-major real entries, promoted to complex.
    pub fn from_real_row_major(
        rows: usize,
        cols: usize,
        entries: &[f64],
    ) -> Result<Self, LinalgError> {
        Self::from_row_major(
            rows,
            cols,
            entries.iter().map(|&x| Scalar::new(x, 0.0)).collect(),
        )
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> Result<Self, LinalgError> {
        Self::from_dmatrix(DMatrix::from_fn(rows, cols, |i, j| f(i, j)))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            inner: DMatrix::zeros(rows.max(1), cols.max(1)),
        }
    }

    pub fn identity(n: usize) -> Self {
        Matrix {
            inner: DMatrix::identity(n.max(1), n.max(1)),
        }
    }

    /// Diagonal matrix from real entries.
    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Matrix::wrap(DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Scalar::new(diag[i], 0.0)
            } else {
                Scalar::new(0.0, 0.0)
            }
        }))
    }

    /// Column vector from a slice.
    pub fn column(entries: &[Scalar]) -> Result<Self, LinalgError> {
        Self::from_row_major(entries.len(), 1, entries.to_vec())
    }

    pub fn rows(&self) -> usize {
        self.inner.nrows()
    }

    pub fn cols(&self) -> usize {
        self.inner.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, row: usize, col: usize) -> Scalar {
        self.inner[(row, col)]
    }

    /// Row-major copy of the entries.
    pub fn row_major_entries(&self) -> Vec<Scalar> {
        let (r, c) = (self.rows(), self.cols());
        let mut out = Vec::with_capacity(r * c);
        for i in 0..r {
            for j in 0..c {
                out.push(self.inner[(i, j)]);
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Matrix {
        Matrix {
            inner: self.inner.adjoint(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.norm()
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Matrix::wrap(&self.inner * Scalar::new(s, 0.0))
    }

    pub fn scale_complex(&self, s: Scalar) -> Matrix {
        Matrix::wrap(&self.inner * s)
    }

    /// Applies the matrix to a vector.
    pub fn apply(&self, v: &[Scalar]) -> Result<Vec<Scalar>, LinalgError> {
        if v.len() != self.cols() {
            return Err(LinalgError::DimensionMismatch {
                context: "matrix-vector product",
                expected: format!("vector of length {}", self.cols()),
                found: format!("length {}", v.len()),
            });
        }
        let x = nalgebra::DVector::from_column_slice(v);
        let y = &self.inner * x;
        Ok(y.iter().copied().collect())
    }

    /// Largest absolute entry difference with another matrix of equal shape.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!(
            (self.rows(), self.cols()),
            (other.rows(), other.cols()),
            "max_abs_diff requires equal shapes"
        );
        let mut worst = 0.0f64;
        for j in 0..self.cols() {
            for i in 0..self.rows() {
                worst = worst.max((self.inner[(i, j)] - other.inner[(i, j)]).norm());
            }
        }
        worst
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix({}x{})", self.rows(), self.cols())?;
        if self.rows() <= 8 && self.cols() <= 8 {
            write!(f, " {}", self.inner)?;
        }
        Ok(())
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        Matrix::wrap(&self.inner * &rhs.inner)
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        Matrix::wrap(&self.inner + &rhs.inner)
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        Matrix::wrap(&self.inner - &rhs.inner)
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix::wrap(-&self.inner)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite_entries() {
        let err = Matrix::from_real_row_major(1, 2, &[1.0, f64::NAN]).unwrap_err();
        assert!(matches!(err, LinalgError::NonFiniteEntry { row: 0, col: 1 }));
    }

    #[test]
    fn rejects_empty_shapes() {
        let err = Matrix::from_row_major(0, 3, vec![]).unwrap_err();
        assert!(matches!(err, LinalgError::EmptyMatrix { .. }));
    }

    #[test]
    fn adjoint_conjugates() {
        let m = Matrix::from_row_major(1, 2, vec![Scalar::new(1.0, 2.0), Scalar::new(0.0, -1.0)])
            .unwrap();
        let a = m.adjoint();
        assert_eq!(a.get(0, 0), Scalar::new(1.0, -2.0));
        assert_eq!(a.get(1, 0), Scalar::new(0.0, 1.0));
    }

    #[test]
    fn apply_checks_length() {
        let m = Matrix::identity(2);
        assert!(m.apply(&[Scalar::new(1.0, 0.0)]).is_err());
    }
}
