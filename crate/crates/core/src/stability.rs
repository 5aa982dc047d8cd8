//! Perturbation machinery: the gap functional between two shape-compatible
//! families, the mixed-synthesis norm bound, frame-operator distance bounds,
//! and the stability constants for the canonical duals.

use crate::duals::canonical_dual;
use crate::error::FrameError;
use crate::frames::{
    assemble_frame_operator, require_frame, DirectSumVector, GFusionFamily,
};
use crate::linalg::{operator_norm, vec_norm, HermitianMatrix, Matrix, Scalar};
use crate::tol;

/// Gap and distance measurements between two frames together with the
/// guaranteed stability constants and one verdict per certified inequality.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationReport {
    /// Smallest valid perturbation constant `D`:
    /// `λ_max(Σ v_j² (Λ_jP_{W_j} − Γ_jP_{V_j})*(Λ_jP_{W_j} − Γ_jP_{V_j}))`.
    pub d_opt: f64,
    /// `‖S_Λ − S_Γ‖`.
    pub frame_op_distance: f64,
    /// `‖S_Λ⁻¹ − S_Γ⁻¹‖`.
    pub inverse_distance: f64,
    /// Gap between the two canonical dual families.
    pub dual_gap: f64,
    /// Mixed-synthesis bound `√D`.
    pub bound_421: f64,
    /// Dual-gap bound `D·((A₁+B₁+√(B₁B₂))/(A₁A₂))²`.
    pub bound_422_i: f64,
    /// Inverse-distance bound `D_II/(A₁A₂)` with `D_II = ‖S_Λ − S_Γ‖` by
    /// default.
    pub bound_422_ii: f64,
    pub verdicts: PerturbationVerdicts,
}

/// One verdict per certified inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PerturbationVerdicts {
    /// `‖mixed synthesis‖ ≤ √D`.
    pub mixed_synthesis: bool,
    /// `‖S_Λ − S_Γ‖ ≤ √D(√B₁ + √B₂)`.
    pub frame_operator: bool,
    /// `‖S_Λ⁻¹ − S_Γ⁻¹‖ ≤ √D(√B₁ + √B₂)/(A₁A₂)`.
    pub inverse_operator: bool,
    /// Dual gap against `bound_422_i`.
    pub dual_gap: bool,
    /// Inverse distance against `bound_422_ii`.
    pub inverse_gap: bool,
    /// Assembled dual frame-operator distance against `bound_422_ii`.
    pub dual_operator_gap: bool,
}

impl PerturbationVerdicts {
    pub fn all(&self) -> bool {
        self.mixed_synthesis
            && self.frame_operator
            && self.inverse_operator
            && self.dual_gap
            && self.inverse_gap
            && self.dual_operator_gap
    }
}

/// Outcome of one mixed-synthesis evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixedSynthesisCheck {
    pub norm: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Frame-operator and inverse distances with their guaranteed bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorDistances {
    pub frame_op: f64,
    pub inverse: f64,
    pub frame_op_bound: f64,
    pub inverse_bound: f64,
}

/// Requires equal ambient dimension, member count, exactly equal weights,
/// and matching codomain dimension per index.
fn check_shapes(lhs: &GFusionFamily, rhs: &GFusionFamily) -> Result<(), FrameError> {
    if lhs.ambient_dim() != rhs.ambient_dim() {
        return Err(FrameError::ShapeMismatch {
            reason: format!(
                "ambient dimensions {} vs {}",
                lhs.ambient_dim(),
                rhs.ambient_dim()
            ),
        });
    }
    if lhs.member_count() != rhs.member_count() {
        return Err(FrameError::ShapeMismatch {
            reason: format!(
                "member counts {} vs {}",
                lhs.member_count(),
                rhs.member_count()
            ),
        });
    }
    for (j, (a, b)) in lhs.members().iter().zip(rhs.members()).enumerate() {
        if a.weight() != b.weight() {
            return Err(FrameError::ShapeMismatch {
                reason: format!("weights differ at member {j}"),
            });
        }
        if a.codomain_dim() != b.codomain_dim() {
            return Err(FrameError::ShapeMismatch {
                reason: format!("codomain dimensions differ at member {j}"),
            });
        }
    }
    Ok(())
}

/// The difference composites `E_j = Λ_jP_{W_j} − Γ_jP_{V_j}`.
fn difference_composites(lhs: &GFusionFamily, rhs: &GFusionFamily) -> Vec<Matrix> {
    lhs.members()
        .iter()
        .zip(rhs.members())
        .map(|(a, b)| &a.composite() - &b.composite())
        .collect()
}

/// Smallest `D` with `Σ v_j²‖(Λ_jP_{W_j} − Γ_jP_{V_j})f‖² ≤ D‖f‖²` for all
/// `f`: the top eigenvalue of the accumulated difference Gram operator.
pub fn perturbation_gap(lhs: &GFusionFamily, rhs: &GFusionFamily) -> Result<f64, FrameError> {
    check_shapes(lhs, rhs)?;
    let n = lhs.ambient_dim();
    let mut gram = Matrix::zeros(n, n);
    for (e, m) in difference_composites(lhs, rhs).iter().zip(lhs.members()) {
        gram = &gram + &(&e.adjoint() * e).scale(m.weight() * m.weight());
    }
    let top = HermitianMatrix::from_hermitian_product(gram).max_eigenvalue()?;
    Ok(top.max(0.0))
}

/// The mixed synthesis map `g ↦ Σ v_j (P_{W_j}Λ_j* − P_{V_j}Γ_j*) g_j` as an
/// `n × Σ m_j` block matrix. Its operator norm equals `√perturbation_gap`.
pub fn mixed_synthesis_matrix(
    lhs: &GFusionFamily,
    rhs: &GFusionFamily,
) -> Result<Matrix, FrameError> {
    check_shapes(lhs, rhs)?;
    let n = lhs.ambient_dim();
    let total = lhs.total_codomain_dim();
    let mut out = nalgebra::DMatrix::<Scalar>::zeros(n, total);
    let mut col = 0;
    for (e, m) in difference_composites(lhs, rhs).iter().zip(lhs.members()) {
        let block = e.adjoint().scale(m.weight());
        for j in 0..block.cols() {
            for i in 0..n {
                out[(i, col + j)] = block.get(i, j);
            }
        }
        col += block.cols();
    }
    Ok(Matrix::wrap(out))
}

/// Evaluates `‖Σ v_j (P_{W_j}Λ_j* − P_{V_j}Γ_j*) g_j‖ ≤ √D · ‖g‖` for one
/// direct-sum vector.
pub fn mixed_synthesis_check(
    lhs: &GFusionFamily,
    rhs: &GFusionFamily,
    g: &DirectSumVector,
) -> Result<MixedSynthesisCheck, FrameError> {
    check_shapes(lhs, rhs)?;
    if g.block_count() != lhs.member_count() {
        return Err(FrameError::ShapeMismatch {
            reason: format!(
                "direct-sum vector has {} blocks, families have {} members",
                g.block_count(),
                lhs.member_count()
            ),
        });
    }
    let n = lhs.ambient_dim();
    let mut acc = vec![Scalar::new(0.0, 0.0); n];
    for ((e, m), block) in difference_composites(lhs, rhs)
        .iter()
        .zip(lhs.members())
        .zip(g.blocks())
    {
        if block.len() != m.codomain_dim() {
            return Err(FrameError::ShapeMismatch {
                reason: "direct-sum block length differs from member codomain".into(),
            });
        }
        let lifted = e.adjoint().apply(block)?;
        for (a, x) in acc.iter_mut().zip(lifted) {
            *a += x * Scalar::new(m.weight(), 0.0);
        }
    }
    let norm = vec_norm(&acc);
    let d = perturbation_gap(lhs, rhs)?;
    let bound = d.sqrt() * g.norm();
    let tol = tol::global().eig;
    Ok(MixedSynthesisCheck {
        norm,
        bound,
        holds: norm <= bound + tol * (1.0 + bound),
    })
}

/// Distances `‖S_Λ − S_Γ‖` and `‖S_Λ⁻¹ − S_Γ⁻¹‖` with their guaranteed
/// bounds `√D(√B₁+√B₂)` and `√D(√B₁+√B₂)/(A₁A₂)`.
pub fn operator_distances(
    lhs: &GFusionFamily,
    rhs: &GFusionFamily,
) -> Result<OperatorDistances, FrameError> {
    check_shapes(lhs, rhs)?;
    let (s_l, b_l) = require_frame(lhs)?;
    let (s_r, b_r) = require_frame(rhs)?;
    let tols = tol::global();
    let d = perturbation_gap(lhs, rhs)?;
    let frame_op = operator_norm(&(s_l.matrix().matrix() - s_r.matrix().matrix()));
    let inv_l = s_l.matrix().spectral_inverse(tols.psd)?;
    let inv_r = s_r.matrix().spectral_inverse(tols.psd)?;
    let inverse = operator_norm(&(inv_l.matrix() - inv_r.matrix()));
    let frame_op_bound = d.sqrt() * (b_l.upper.sqrt() + b_r.upper.sqrt());
    let inverse_bound = frame_op_bound / (b_l.lower * b_r.lower);
    Ok(OperatorDistances {
        frame_op,
        inverse,
        frame_op_bound,
        inverse_bound,
    })
}

/// Full stability report for two frames and their canonical duals.
///
/// `d_override`, when given, is used as the hypothesis constant for every
/// inequality; by default each inequality uses its own minimal valid
/// constant — the perturbation gap for the dual-gap bound, and the
/// frame-operator distance for the quadratic/operator-norm bounds.
pub fn dual_stability_report(
    lhs: &GFusionFamily,
    rhs: &GFusionFamily,
    d_override: Option<f64>,
) -> Result<PerturbationReport, FrameError> {
    check_shapes(lhs, rhs)?;
    let tols = tol::global();
    let (s_l, b_l) = require_frame(lhs)?;
    let (s_r, b_r) = require_frame(rhs)?;
    let (a1, b1) = (b_l.lower, b_l.upper);
    let (a2, b2) = (b_r.lower, b_r.upper);

    let d_opt = perturbation_gap(lhs, rhs)?;
    let frame_op_distance = operator_norm(&(s_l.matrix().matrix() - s_r.matrix().matrix()));
    let inv_l = s_l.matrix().spectral_inverse(tols.psd)?;
    let inv_r = s_r.matrix().spectral_inverse(tols.psd)?;
    let inverse_distance = operator_norm(&(inv_l.matrix() - inv_r.matrix()));

    let d_i = d_override.unwrap_or(d_opt);
    let d_ii = d_override.unwrap_or(frame_op_distance);

    let dual_l = canonical_dual(lhs)?;
    let dual_r = canonical_dual(rhs)?;
    let dual_gap = perturbation_gap(&dual_l.dual, &dual_r.dual)?;

    let mixed_norm = operator_norm(&mixed_synthesis_matrix(lhs, rhs)?);
    let bound_421 = d_i.sqrt();

    let ratio = (a1 + b1 + (b1 * b2).sqrt()) / (a1 * a2);
    let bound_422_i = d_i * ratio * ratio;
    let bound_422_ii = d_ii / (a1 * a2);

    // The operator-norm variant measures the assembled dual frame operators
    // directly; by the dual-operator identity it must agree with the
    // inverse-distance route.
    let s_dual_l = assemble_frame_operator(&dual_l.dual)?;
    let s_dual_r = assemble_frame_operator(&dual_r.dual)?;
    let dual_operator_distance =
        operator_norm(&(s_dual_l.matrix().matrix() - s_dual_r.matrix().matrix()));

    let slack = |bound: f64| bound + tols.eig * (1.0 + bound);
    let verdicts = PerturbationVerdicts {
        mixed_synthesis: mixed_norm <= slack(bound_421),
        frame_operator: frame_op_distance <= slack(d_i.sqrt() * (b1.sqrt() + b2.sqrt())),
        inverse_operator: inverse_distance
            <= slack(d_i.sqrt() * (b1.sqrt() + b2.sqrt()) / (a1 * a2)),
        dual_gap: dual_gap <= slack(bound_422_i),
        inverse_gap: inverse_distance <= slack(bound_422_ii),
        dual_operator_gap: dual_operator_distance <= slack(bound_422_ii),
    };

    Ok(PerturbationReport {
        d_opt,
        frame_op_distance,
        inverse_distance,
        dual_gap,
        bound_421,
        bound_422_i,
        bound_422_ii,
        verdicts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::FrameMember;

    fn c(re: f64) -> Scalar {
        Scalar::new(re, 0.0)
    }

    fn diagonal_family() -> GFusionFamily {
        let m1 = FrameMember::new(
            Matrix::from_real_row_major(2, 1, &[1.0, 0.0]).unwrap(),
            Matrix::from_real_row_major(1, 2, &[1.0, 0.0]).unwrap(),
            2.0,
        )
        .unwrap();
        let m2 = FrameMember::new(
            Matrix::from_real_row_major(2, 1, &[0.0, 1.0]).unwrap(),
            Matrix::from_real_row_major(1, 2, &[0.0, 1.0]).unwrap(),
            1.0,
        )
        .unwrap();
        GFusionFamily::new(2, vec![m1, m2]).unwrap()
    }

    fn scaled_family() -> GFusionFamily {
        diagonal_family().with_scaled_operators(1.1).unwrap()
    }

    #[test]
    fn gap_of_identical_families_is_zero() {
        let fam = diagonal_family();
        assert_eq!(perturbation_gap(&fam, &fam).unwrap(), 0.0);
    }

    #[test]
    fn gap_of_scaled_family_by_hand() {
        // Scaling member operators by 1.1 makes the difference 0.1·Λ_jP_j,
        // so the gap operator is 0.01·S and d_opt = 0.01·4 = 0.04.
        let d = perturbation_gap(&diagonal_family(), &scaled_family()).unwrap();
        assert!((d - 0.04).abs() < 1e-12);
    }

    #[test]
    fn gap_rejects_mismatched_weights() {
        let fam = diagonal_family();
        let reweighted = fam.with_scaled_weights(2.0).unwrap();
        assert!(matches!(
            perturbation_gap(&fam, &reweighted),
            Err(FrameError::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn mixed_synthesis_tight_case() {
        // g = ([1],[0]): norm = 2·0.1 = 0.2 equals √0.04·1 exactly.
        let lhs = diagonal_family();
        let rhs = scaled_family();
        let g = DirectSumVector::new(vec![vec![c(1.0)], vec![c(0.0)]]);
        let r = mixed_synthesis_check(&lhs, &rhs, &g).unwrap();
        assert!((r.norm - 0.2).abs() < 1e-12);
        assert!((r.bound - 0.2).abs() < 1e-12);
        assert!(r.holds);
    }

    #[test]
    fn mixed_synthesis_matrix_norm_is_sqrt_gap() {
        let lhs = diagonal_family();
        let rhs = scaled_family();
        let ms = mixed_synthesis_matrix(&lhs, &rhs).unwrap();
        let d = perturbation_gap(&lhs, &rhs).unwrap();
        assert!((operator_norm(&ms) - d.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn mixed_synthesis_zero_for_identical() {
        let fam = diagonal_family();
        let g = DirectSumVector::new(vec![vec![c(0.3)], vec![c(-2.0)]]);
        let r = mixed_synthesis_check(&fam, &fam, &g).unwrap();
        assert_eq!(r.norm, 0.0);
        assert!(r.holds);
    }

    #[test]
    fn operator_distances_hand_case() {
        // d_S = ‖diag(4,1)·0.21‖ = 0.84; bound √0.04·(2 + 2.2) = 0.84.
        let lhs = diagonal_family();
        let rhs = scaled_family();
        let d = operator_distances(&lhs, &rhs).unwrap();
        assert!((d.frame_op - 0.84).abs() < 1e-12);
        assert!((d.frame_op_bound - 0.84).abs() < 1e-12);
        assert!(d.frame_op <= d.frame_op_bound + 1e-12);
        assert!(d.inverse <= d.inverse_bound + 1e-12);
    }

    #[test]
    fn identical_frames_have_zero_report() {
        let fam = diagonal_family();
        let r = dual_stability_report(&fam, &fam, None).unwrap();
        assert_eq!(r.d_opt, 0.0);
        assert_eq!(r.frame_op_distance, 0.0);
        assert!(r.dual_gap < 1e-20);
        assert!(r.verdicts.all());
    }

    #[test]
    fn scaled_pair_report_hand_constants() {
        // A1=1, B1=4, A2=1.21, B2=4.84, D=0.04:
        // bound_I = 0.04·((5+4.4)/1.21)² ≈ 2.414...
        // gap_II: ‖diag(.25,1) − diag(1/4.84,1/1.21)‖ ≈ 0.17355 ≤ 0.84/1.21 ≈ 0.6942.
        let lhs = diagonal_family();
        let rhs = scaled_family();
        let r = dual_stability_report(&lhs, &rhs, None).unwrap();
        assert!((r.d_opt - 0.04).abs() < 1e-12);
        let expect_i = 0.04 * ((5.0 + 4.4) / 1.21f64).powi(2);
        assert!((r.bound_422_i - expect_i).abs() < 1e-9);
        assert!((r.inverse_distance - (1.0 - 1.0 / 1.21)).abs() < 1e-9);
        assert!((r.bound_422_ii - 0.84 / 1.21).abs() < 1e-9);
        assert!(r.verdicts.all());
    }

    #[test]
    fn gap_scales_quadratically() {
        let lhs = diagonal_family();
        let rhs = scaled_family();
        let base = perturbation_gap(&lhs, &rhs).unwrap();
        let scaled = perturbation_gap(
            &lhs.with_scaled_operators(3.0).unwrap(),
            &rhs.with_scaled_operators(3.0).unwrap(),
        )
        .unwrap();
        assert!((scaled - 9.0 * base).abs() < 1e-10 * scaled.max(1.0));
    }
}
