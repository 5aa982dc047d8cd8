use nalgebra::DMatrix;

use super::hermitian::HermitianMatrix;
use super::matrix::{Matrix, Scalar};
use crate::error::LinalgError;
use crate::tol;

/// Euclidean norm of a complex vector.
pub fn vec_norm(v: &[Scalar]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Orthonormal basis of the column span.
///
/// Columns whose singular value is at or below `rank_tol · σ_max` are
/// dropped; the result `Q` satisfies `Q*Q = I` and spans the same subspace
/// as the input up to that tolerance. The zero subspace has no basis, so an
/// input with no significant column is an error.
pub fn orthonormal_basis(spanning: &Matrix, rank_tol: f64) -> Result<Matrix, LinalgError> {
    let svd = spanning.inner.clone().svd(true, false);
    let u = svd.u.as_ref().expect("svd with compute_u");
    let sigma_max = svd
        .singular_values
        .iter()
        .fold(0.0f64, |acc, &s| acc.max(s));
    let cut = rank_tol * sigma_max;
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&k| svd.singular_values[k] > cut && svd.singular_values[k] > 0.0)
        .collect();
    if keep.is_empty() {
        return Err(LinalgError::AllColumnsNegligible { rank_tol });
    }
    let q = DMatrix::from_fn(spanning.rows(), keep.len(), |i, j| u[(i, keep[j])]);
    Ok(Matrix::wrap(q))
}

/// Residual of orthonormality, `‖Q*Q − I‖_F`.
fn orthonormality_residual(basis: &Matrix) -> f64 {
    let d = basis.cols();
    let gram = &basis.adjoint().inner * &basis.inner;
    (gram - DMatrix::<Scalar>::identity(d, d)).norm()
}

/// Orthogonal projector `P = Q·Q*` onto the span of an orthonormal basis.
pub fn projector(basis: &Matrix) -> Result<HermitianMatrix, LinalgError> {
    let tol_herm = tol::global().herm;
    let residual = orthonormality_residual(basis);
    let scale = 1.0 + (basis.cols() as f64).sqrt();
    if residual > tol_herm * scale {
        return Err(LinalgError::NotOrthonormal {
            residual: residual / scale,
            tol: tol_herm,
        });
    }
    let p = &basis.inner * basis.inner.adjoint();
    Ok(HermitianMatrix::from_hermitian_product(Matrix::wrap(p)))
}

/// Moore–Penrose pseudoinverse via SVD; singular values at or below
/// `rank_tol · σ_max` are treated as zero.
pub fn pseudo_inverse(m: &Matrix, rank_tol: f64) -> Matrix {
    let svd = m.inner.clone().svd(true, true);
    let u = svd.u.as_ref().expect("svd with compute_u");
    let v_t = svd.v_t.as_ref().expect("svd with compute_v");
    let k = svd.singular_values.len();
    let sigma_max = svd
        .singular_values
        .iter()
        .fold(0.0f64, |acc, &s| acc.max(s));
    let cut = rank_tol * sigma_max;
    let pinv_diag = DMatrix::from_fn(k, k, |i, j| {
        if i == j && svd.singular_values[i] > cut && svd.singular_values[i] > 0.0 {
            Scalar::new(1.0 / svd.singular_values[i], 0.0)
        } else {
            Scalar::new(0.0, 0.0)
        }
    });
    Matrix::wrap(v_t.adjoint() * pinv_diag * u.adjoint())
}

/// Operator (spectral) norm: the largest singular value.
pub fn operator_norm(m: &Matrix) -> f64 {
    let svd = m.inner.clone().svd(false, false);
    svd.singular_values
        .iter()
        .fold(0.0f64, |acc, &s| acc.max(s))
}

/// PSD partial order: `H1 ≤ H2` iff `λ_min(H2 − H1) ≥ −tol · (1 + ‖H2 − H1‖)`.
pub fn psd_order(h1: &HermitianMatrix, h2: &HermitianMatrix, tol: f64) -> Result<bool, LinalgError> {
    if h1.dim() != h2.dim() {
        return Err(LinalgError::DimensionMismatch {
            context: "psd_order",
            expected: format!("{0}x{0}", h1.dim()),
            found: format!("{0}x{0}", h2.dim()),
        });
    }
    let diff = HermitianMatrix::from_hermitian_product(h2.matrix() - h1.matrix());
    let min = diff.min_eigenvalue()?;
    let norm = diff.operator_norm()?;
    Ok(min >= -tol * (1.0 + norm))
}

/// Outcome of the projection-identity check for a bounded operator `T` and a
/// subspace `V`: the identity `P_V T* = P_V T* P_{TV}` always holds; when `T`
/// is unitary the stronger `P_{TV} T = T P_V` holds as well.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionIdentityReport {
    pub holds: bool,
    pub residual: f64,
    /// Present when `T` is unitary within tolerance: `(holds, residual)` of
    /// `P_{TV}·T = T·P_V`.
    pub unitary_variant: Option<(bool, f64)>,
}

/// Checks `P_V T* = P_V T* P_{TV}` where `TV` is the image of the subspace
/// under `T` (its exact column span — finite-dimensional subspaces are
/// closed). When `T` annihilates `V`, the projector onto `TV` is zero and
/// the identity degenerates to `P_V T* = 0`, which still holds.
pub fn projection_identity_check(
    t: &Matrix,
    v_basis: &Matrix,
    tol: f64,
) -> Result<ProjectionIdentityReport, LinalgError> {
    if !t.is_square() {
        return Err(LinalgError::NotSquare {
            rows: t.rows(),
            cols: t.cols(),
        });
    }
    if v_basis.rows() != t.cols() {
        return Err(LinalgError::DimensionMismatch {
            context: "projection_identity_check",
            expected: format!("basis with {} rows", t.cols()),
            found: format!("{} rows", v_basis.rows()),
        });
    }
    let n = t.rows();
    let p_v = projector(v_basis)?;
    let tv = t * v_basis;
    let p_tv = match orthonormal_basis(&tv, tol::default_rank_tol(tv.rows(), tv.cols())) {
        Ok(q) => projector(&q)?.matrix().clone(),
        Err(LinalgError::AllColumnsNegligible { .. }) => Matrix::zeros(n, n),
        Err(e) => return Err(e),
    };
    let lhs = p_v.matrix() * &t.adjoint();
    let residual = operator_norm(&(&lhs - &(&lhs * &p_tv)));
    let t_norm = operator_norm(t);
    let holds = residual <= tol * (1.0 + t_norm);

    let unitarity = operator_norm(&(&(&t.adjoint() * t) - &Matrix::identity(n)));
    let unitary_variant = if unitarity <= tol * (1.0 + t_norm * t_norm) {
        let r = operator_norm(&(&(&p_tv * t) - &(t * p_v.matrix())));
        Some((r <= tol * (1.0 + t_norm), r))
    } else {
        None
    };

    Ok(ProjectionIdentityReport {
        holds,
        residual,
        unitary_variant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Scalar {
        Scalar::new(re, 0.0)
    }

    #[test]
    fn orthonormal_basis_keeps_identity() {
        let q = orthonormal_basis(&Matrix::identity(2), 1e-12).unwrap();
        assert!(q.max_abs_diff(&Matrix::identity(2)) < 1e-14);
    }

    #[test]
    fn orthonormal_basis_collapses_dependent_columns() {
        let m = Matrix::from_real_row_major(2, 2, &[1.0, 2.0, 0.0, 0.0]).unwrap();
        let q = orthonormal_basis(&m, 1e-12).unwrap();
        assert_eq!(q.cols(), 1);
        // Single unit column supported on e1, up to unit phase.
        assert!((q.get(0, 0).norm() - 1.0).abs() < 1e-14);
        assert!(q.get(1, 0).norm() < 1e-14);
    }

    #[test]
    fn orthonormal_basis_rejects_zero() {
        let err = orthonormal_basis(&Matrix::zeros(3, 2), 1e-12).unwrap_err();
        assert!(matches!(err, LinalgError::AllColumnsNegligible { .. }));
    }

    #[test]
    fn orthonormal_basis_matches_gram_schmidt_span() {
        // Oracle: classical Gram–Schmidt on the same columns, compared via
        // the projectors both bases induce.
        let m = Matrix::from_real_row_major(2, 2, &[1.0, 1.0, 1.0, -1.0]).unwrap();
        let q = orthonormal_basis(&m, 1e-12).unwrap();
        assert_eq!(q.cols(), 2);
        let gram = &q.adjoint() * &q;
        assert!(gram.max_abs_diff(&Matrix::identity(2)) < 1e-12);

        let gs = gram_schmidt_oracle(&m);
        let p_q = projector(&q).unwrap();
        let p_gs = projector(&gs).unwrap();
        assert!(p_q.matrix().max_abs_diff(p_gs.matrix()) < 1e-12);
    }

    fn gram_schmidt_oracle(m: &Matrix) -> Matrix {
        let n = m.rows();
        let mut cols: Vec<Vec<Scalar>> = Vec::new();
        for j in 0..m.cols() {
            let mut v: Vec<Scalar> = (0..n).map(|i| m.get(i, j)).collect();
            for q in &cols {
                let proj: Scalar = (0..n).map(|i| q[i].conj() * v[i]).sum();
                for i in 0..n {
                    v[i] -= proj * q[i];
                }
            }
            let norm = vec_norm(&v);
            if norm > 1e-12 {
                for x in &mut v {
                    *x /= c(norm);
                }
                cols.push(v);
            }
        }
        let d = cols.len();
        Matrix::from_fn(n, d, |i, j| cols[j][i]).unwrap()
    }

    #[test]
    fn projector_of_standard_vector() {
        let e1 = Matrix::from_real_row_major(2, 1, &[1.0, 0.0]).unwrap();
        let p = projector(&e1).unwrap();
        assert!(p
            .matrix()
            .max_abs_diff(&Matrix::from_real_row_major(2, 2, &[1.0, 0.0, 0.0, 0.0]).unwrap())
            < 1e-14);
    }

    #[test]
    fn projector_of_diagonal_vector_by_hand() {
        let s = 1.0 / 2.0f64.sqrt();
        let b = Matrix::from_real_row_major(2, 1, &[s, s]).unwrap();
        let p = projector(&b).unwrap();
        let expect = Matrix::from_real_row_major(2, 2, &[0.5, 0.5, 0.5, 0.5]).unwrap();
        assert!(p.matrix().max_abs_diff(&expect) < 1e-14);
    }

    #[test]
    fn projector_rejects_non_orthonormal() {
        let b = Matrix::from_real_row_major(2, 1, &[1.0, 1.0]).unwrap();
        assert!(matches!(
            projector(&b),
            Err(LinalgError::NotOrthonormal { .. })
        ));
    }

    #[test]
    fn full_basis_projects_to_identity() {
        let p = projector(&Matrix::identity(4)).unwrap();
        assert!(p.matrix().max_abs_diff(&Matrix::identity(4)) < 1e-14);
    }

    #[test]
    fn pseudo_inverse_of_diagonal() {
        let m = Matrix::from_real_row_major(2, 2, &[4.0, 0.0, 0.0, 1.0]).unwrap();
        let p = pseudo_inverse(&m, 1e-12);
        assert!(p
            .max_abs_diff(&Matrix::from_real_row_major(2, 2, &[0.25, 0.0, 0.0, 1.0]).unwrap())
            < 1e-14);
    }

    #[test]
    fn pseudo_inverse_clamps_rank_deficiency() {
        let m = Matrix::from_real_row_major(2, 2, &[1.0, 0.0, 0.0, 0.0]).unwrap();
        let p = pseudo_inverse(&m, 1e-12);
        assert!(p.max_abs_diff(&m) < 1e-14);
    }

    #[test]
    fn pseudo_inverse_of_row_vector_satisfies_mp_identities() {
        let m = Matrix::from_real_row_major(1, 2, &[1.0, 0.0]).unwrap();
        let p = pseudo_inverse(&m, 1e-12);
        assert_eq!((p.rows(), p.cols()), (2, 1));
        // The four Moore–Penrose identities, checked directly.
        assert!((&(&m * &p) * &m).max_abs_diff(&m) < 1e-14);
        assert!((&(&p * &m) * &p).max_abs_diff(&p) < 1e-14);
        let mp = &m * &p;
        assert!(mp.max_abs_diff(&mp.adjoint()) < 1e-14);
        let pm = &p * &m;
        assert!(pm.max_abs_diff(&pm.adjoint()) < 1e-14);
    }

    #[test]
    fn operator_norm_cases() {
        assert_eq!(
            operator_norm(&Matrix::from_real_row_major(2, 2, &[4.0, 0.0, 0.0, 1.0]).unwrap()),
            4.0
        );
        assert_eq!(operator_norm(&Matrix::zeros(3, 2)), 0.0);
        // Nilpotent [[0,3],[0,0]]: M*M = diag(0,9), σ = 3.
        let m = Matrix::from_real_row_major(2, 2, &[0.0, 3.0, 0.0, 0.0]).unwrap();
        assert!((operator_norm(&m) - 3.0).abs() < 1e-14);
    }

    #[test]
    fn psd_order_identity_pairs() {
        let i = HermitianMatrix::scaled_identity(2, 1.0);
        let two_i = HermitianMatrix::scaled_identity(2, 2.0);
        assert!(psd_order(&i, &two_i, 1e-9).unwrap());
        assert!(!psd_order(&two_i, &i, 1e-9).unwrap());
    }

    #[test]
    fn psd_order_incomparable_pair() {
        // diag(1,4) vs diag(4,1): difference has eigenvalues {3, −3}.
        let a = HermitianMatrix::with_default_tol(Matrix::from_real_diagonal(&[1.0, 4.0])).unwrap();
        let b = HermitianMatrix::with_default_tol(Matrix::from_real_diagonal(&[4.0, 1.0])).unwrap();
        assert!(!psd_order(&a, &b, 1e-9).unwrap());
        assert!(!psd_order(&b, &a, 1e-9).unwrap());
    }

    #[test]
    fn psd_order_checks_dimensions() {
        let a = HermitianMatrix::scaled_identity(2, 1.0);
        let b = HermitianMatrix::scaled_identity(3, 1.0);
        assert!(matches!(
            psd_order(&a, &b, 1e-9),
            Err(LinalgError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn projection_identity_for_identity_operator() {
        let e1 = Matrix::from_real_row_major(2, 1, &[1.0, 0.0]).unwrap();
        let r = projection_identity_check(&Matrix::identity(2), &e1, 1e-10).unwrap();
        assert!(r.holds);
        assert!(r.residual < 1e-14);
        // The identity is unitary, so the variant is reported and holds.
        let (uh, ur) = r.unitary_variant.unwrap();
        assert!(uh);
        assert!(ur < 1e-14);
    }

    #[test]
    fn projection_identity_for_diagonal_operator() {
        // T = diag(2,1), V = span{e1}: TV = V, both sides equal P_V T*.
        let t = Matrix::from_real_diagonal(&[2.0, 1.0]);
        let e1 = Matrix::from_real_row_major(2, 1, &[1.0, 0.0]).unwrap();
        let r = projection_identity_check(&t, &e1, 1e-10).unwrap();
        assert!(r.holds);
        assert!(r.residual < 1e-14);
        assert!(r.unitary_variant.is_none());
    }

    #[test]
    fn projection_identity_for_rotation() {
        let a = std::f64::consts::FRAC_PI_4;
        let t =
            Matrix::from_real_row_major(2, 2, &[a.cos(), -a.sin(), a.sin(), a.cos()]).unwrap();
        let e1 = Matrix::from_real_row_major(2, 1, &[1.0, 0.0]).unwrap();
        let r = projection_identity_check(&t, &e1, 1e-12).unwrap();
        assert!(r.holds);
        let (uh, _) = r.unitary_variant.unwrap();
        assert!(uh);
    }

    #[test]
    fn projection_identity_with_annihilated_subspace() {
        // T kills e2; V = span{e2} means TV = {0} and P_V T* = 0.
        let t = Matrix::from_real_diagonal(&[1.0, 0.0]);
        let e2 = Matrix::from_real_row_major(2, 1, &[0.0, 1.0]).unwrap();
        let r = projection_identity_check(&t, &e2, 1e-10).unwrap();
        assert!(r.holds);
        assert!(r.residual < 1e-14);
    }
}
