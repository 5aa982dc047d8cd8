//! Quotient operators and the three-way equivalence between UK-g-fusion
//! frames and bounded quotients.
//!
//! The quotient `[N / V]` maps `Vf ↦ Nf`; it is well defined exactly when
//! `null(V) ⊆ null(N)`, and in finite dimensions well-definedness is the
//! whole of boundedness. The inclusion is tested through the residual
//! `‖N(I − V⁺V)‖`, and the quotient's norm is `‖N·V⁺‖`.

use crate::error::FrameError;
use crate::frames::{
    assemble_frame_operator, optimal_k_lower_bound, GFusionFamily,
};
use crate::linalg::{operator_norm, pseudo_inverse, Matrix};
use crate::tol;

/// A (possibly undefined) quotient operator. Undefined quotients are values,
/// not errors: the equivalence report needs the negative branch.
#[derive(Debug, Clone)]
pub struct QuotientOperator {
    pub numerator: Matrix,
    pub denominator: Matrix,
    /// `‖N(I − V⁺V)‖ / (1 + ‖N‖)`; the quotient is defined iff this is at
    /// most the PSD tolerance.
    pub null_inclusion_residual: f64,
    /// `‖N·V⁺‖` when defined.
    pub norm: Option<f64>,
}

impl QuotientOperator {
    pub fn is_defined(&self) -> bool {
        self.norm.is_some()
    }
}

/// Builds the quotient `[numerator / denominator]`. Both operators must act
/// on the same domain (equal column counts).
pub fn make_quotient(
    numerator: &Matrix,
    denominator: &Matrix,
) -> Result<QuotientOperator, FrameError> {
    if numerator.cols() != denominator.cols() {
        return Err(FrameError::DimensionMismatch {
            context: "make_quotient",
            expected: format!("denominator with {} columns", numerator.cols()),
            found: format!("{} columns", denominator.cols()),
        });
    }
    let tols = tol::global();
    let den_pinv = pseudo_inverse(
        denominator,
        tol::default_rank_tol(denominator.rows(), denominator.cols()),
    );
    let row_space_projector = &den_pinv * denominator; // V⁺V
    let escaped = numerator - &(numerator * &row_space_projector);
    let numerator_norm = operator_norm(numerator);
    let residual = operator_norm(&escaped) / (1.0 + numerator_norm);
    let norm = if residual <= tols.psd {
        Some(operator_norm(&(numerator * &den_pinv)))
    } else {
        None
    };
    Ok(QuotientOperator {
        numerator: numerator.clone(),
        denominator: denominator.clone(),
        null_inclusion_residual: residual,
        norm,
    })
}

/// Residual of the defining relation `T·V = N` with `T = N·V⁺`, relative to
/// `1 + ‖N‖`. Zero (up to tolerance) whenever the quotient is defined.
pub fn defining_relation_residual(q: &QuotientOperator) -> f64 {
    let den_pinv = pseudo_inverse(
        &q.denominator,
        tol::default_rank_tol(q.denominator.rows(), q.denominator.cols()),
    );
    let t = &q.numerator * &den_pinv;
    operator_norm(&(&(&t * &q.denominator) - &q.numerator)) / (1.0 + operator_norm(&q.numerator))
}

/// One condition of the equivalence: whether it holds and its witness value
/// (the optimal relative lower bound for the frame condition, the quotient
/// norm for the quotient conditions).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionOutcome {
    pub holds: bool,
    pub value: Option<f64>,
}

/// The three equivalent statements, evaluated independently:
/// (I) the conjugated family is a UK-g-fusion frame,
/// (II) the quotient `[(UK)* / S^{1/2}U*]` is bounded,
/// (III) the quotient `[(UK)* / (U S U*)^{1/2}]` is bounded.
/// `consistent` records whether all three agreed, which the equivalence
/// asserts must always be the case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquivalenceReport {
    pub cond_i: ConditionOutcome,
    pub cond_ii: ConditionOutcome,
    pub cond_iii: ConditionOutcome,
    pub consistent: bool,
}

/// Evaluates the three conditions for a g-fusion Bessel family (its frame
/// operator may be singular), a square `K` (singular allowed), and an
/// invertible `U`.
pub fn theorem_4_5_report(
    family: &GFusionFamily,
    k: &Matrix,
    u: &Matrix,
) -> Result<EquivalenceReport, FrameError> {
    let tols = tol::global();
    let n = family.ambient_dim();
    for (m, name) in [(k, "K"), (u, "U")] {
        if !m.is_square() || m.rows() != n {
            return Err(FrameError::DimensionMismatch {
                context: "theorem_4_5_report",
                expected: format!("{n}x{n} operator {name}"),
                found: format!("{}x{}", m.rows(), m.cols()),
            });
        }
    }
    let (u_min, u_max) = {
        let svd = u.inner.clone().svd(false, false);
        let mut smin = f64::INFINITY;
        let mut smax = 0.0f64;
        for &s in svd.singular_values.iter() {
            smin = smin.min(s);
            smax = smax.max(s);
        }
        (smin, smax)
    };
    if u_min <= tol::default_rank_tol(n, n) * u_max {
        return Err(FrameError::NotInvertible {
            name: "U",
            sigma_min: u_min,
        });
    }

    let s = assemble_frame_operator(family)?;
    let uk = u * k;
    let uk_adjoint = uk.adjoint();

    // (I) conjugated family, relative lower bound against UK.
    let gamma = conjugate(family, u)?;
    let relative_bound = optimal_k_lower_bound(&gamma, &uk)?;
    let cond_i = ConditionOutcome {
        holds: matches!(relative_bound, Some(a) if a > tols.psd),
        value: relative_bound,
    };

    // (II) quotient over S^{1/2} U*.
    let sqrt_s = s.matrix().sqrt_psd(tols.psd)?;
    let q_ii = make_quotient(&uk_adjoint, &(sqrt_s.matrix() * &u.adjoint()))?;
    let cond_ii = ConditionOutcome {
        holds: q_ii.is_defined(),
        value: q_ii.norm,
    };

    // (III) quotient over (U S U*)^{1/2}.
    let conjugated_s = crate::linalg::HermitianMatrix::from_hermitian_product(
        &(u * s.matrix().matrix()) * &u.adjoint(),
    );
    let sqrt_conjugated = conjugated_s.sqrt_psd(tols.psd)?;
    let q_iii = make_quotient(&uk_adjoint, sqrt_conjugated.matrix())?;
    let cond_iii = ConditionOutcome {
        holds: q_iii.is_defined(),
        value: q_iii.norm,
    };

    Ok(EquivalenceReport {
        cond_i,
        cond_ii,
        cond_iii,
        consistent: cond_i.holds == cond_ii.holds && cond_ii.holds == cond_iii.holds,
    })
}

/// `{(U W_j, Λ_j P_{W_j} U*, v_j)}` without any frame-condition gate: the
/// equivalence must also be evaluated for Bessel-only families, on which the
/// conjugation transform would refuse to certify bounds.
fn conjugate(family: &GFusionFamily, u: &Matrix) -> Result<GFusionFamily, FrameError> {
    use crate::frames::FrameMember;
    use crate::linalg::orthonormal_basis;
    let n = family.ambient_dim();
    let u_adj = u.adjoint();
    let members = family
        .members()
        .iter()
        .map(|m| {
            let basis = orthonormal_basis(
                &(u * m.subspace_basis()),
                tol::default_rank_tol(n, m.subspace_dim()),
            )?;
            Ok(FrameMember::new(
                basis,
                &m.composite() * &u_adj,
                m.weight(),
            )?)
        })
        .collect::<Result<Vec<_>, FrameError>>()?;
    GFusionFamily::new(n, members)
}

/// When all conditions hold, `A = 1/‖[·/·]‖²` from condition (II) is a valid
/// relative lower bound for the conjugated family; this re-verifies it as a
/// certificate through the conjugation transform.
pub fn norm_bridge_certificate(
    family: &GFusionFamily,
    k: &Matrix,
    u: &Matrix,
    report: &EquivalenceReport,
) -> Result<Option<crate::frames::BoundCertificate>, FrameError> {
    let Some(norm_ii) = report.cond_ii.value else {
        return Ok(None);
    };
    if !report.cond_i.holds || norm_ii == 0.0 {
        return Ok(None);
    }
    let a = 1.0 / (norm_ii * norm_ii);
    let gamma = conjugate(family, u)?;
    let upper = crate::frames::classify_frame_operator(
        assemble_frame_operator(&gamma)?.matrix(),
    )?
    .upper;
    let uk = u * k;
    let cert = crate::frames::BoundCertificate::k_frame(a, upper * (1.0 + tol::global().eig), uk);
    Ok(Some(crate::frames::verify_certificate(
        &gamma,
        &cert,
        tol::global().recon,
    )?))
}
