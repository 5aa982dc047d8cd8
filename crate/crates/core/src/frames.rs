//! The g-fusion family model: members, synthesis/analysis operators, frame
//! operator assembly, optimal and K-relative bounds, and bound certificates.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::FrameError;
use crate::linalg::{
    operator_norm, psd_order, vec_norm, HermitianMatrix, Matrix, Scalar,
};
use crate::tol;

static NEXT_FAMILY_ID: AtomicU64 = AtomicU64::new(1);

/// Reference identity of a family: preserved by `Clone`, fresh per
/// construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FamilyId(u64);

/// One triple `(W_j, Λ_j, v_j)`: an orthonormal basis of the subspace `W_j`
/// (n×d_j), the member operator `Λ_j : ℂⁿ → ℂ^{m_j}` (m_j×n), and a positive
/// weight.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameMember {
    subspace_basis: Matrix,
    member_operator: Matrix,
    weight: f64,
}

impl FrameMember {
    pub fn new(
        subspace_basis: Matrix,
        member_operator: Matrix,
        weight: f64,
    ) -> Result<Self, FrameError> {
        if !(weight.is_finite() && weight > 0.0) {
            return Err(FrameError::InvalidFamily {
                reason: format!("weight must be a positive finite number, got {weight}"),
            });
        }
        if member_operator.cols() != subspace_basis.rows() {
            return Err(FrameError::DimensionMismatch {
                context: "frame member",
                expected: format!("operator with {} columns", subspace_basis.rows()),
                found: format!("{} columns", member_operator.cols()),
            });
        }
        // Orthonormality is validated by the projector constructor.
        crate::linalg::projector(&subspace_basis)?;
        Ok(FrameMember {
            subspace_basis,
            member_operator,
            weight,
        })
    }

    pub fn subspace_basis(&self) -> &Matrix {
        &self.subspace_basis
    }

    pub fn member_operator(&self) -> &Matrix {
        &self.member_operator
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn ambient_dim(&self) -> usize {
        self.subspace_basis.rows()
    }

    pub fn subspace_dim(&self) -> usize {
        self.subspace_basis.cols()
    }

    pub fn codomain_dim(&self) -> usize {
        self.member_operator.rows()
    }

    /// Orthogonal projector onto `W_j`.
    pub fn projector(&self) -> Matrix {
        &self.subspace_basis * &self.subspace_basis.adjoint()
    }

    /// The composite `Λ_j · P_{W_j}` (m_j×n).
    pub fn composite(&self) -> Matrix {
        &self.member_operator * &self.projector()
    }
}

/// A finite g-fusion family `{(W_j, Λ_j, v_j)}` over `ℂⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct GFusionFamily {
    ambient_dim: usize,
    members: Vec<FrameMember>,
    id: FamilyId,
}

impl GFusionFamily {
    /// Validates a nonempty family whose members are all consistent with the
    /// ambient dimension. An empty family is rejected: the empty sum is never
    /// a frame.
    pub fn new(ambient_dim: usize, members: Vec<FrameMember>) -> Result<Self, FrameError> {
        if ambient_dim == 0 {
            return Err(FrameError::InvalidFamily {
                reason: "ambient dimension must be positive".into(),
            });
        }
        if members.is_empty() {
            return Err(FrameError::InvalidFamily {
                reason: "family must have at least one member".into(),
            });
        }
        for (j, m) in members.iter().enumerate() {
            if m.ambient_dim() != ambient_dim {
                return Err(FrameError::InvalidFamily {
                    reason: format!(
                        "member {j} lives in dimension {}, expected {ambient_dim}",
                        m.ambient_dim()
                    ),
                });
            }
        }
        Ok(GFusionFamily {
            ambient_dim,
            members,
            id: FamilyId(NEXT_FAMILY_ID.fetch_add(1, Ordering::Relaxed)),
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn members(&self) -> &[FrameMember] {
        &self.members
    }

    pub fn member_count(&self) -> usize {
        self.members.len()
    }

    pub fn id(&self) -> FamilyId {
        self.id
    }

    /// Total codomain dimension `Σ m_j`.
    pub fn total_codomain_dim(&self) -> usize {
        self.members.iter().map(|m| m.codomain_dim()).sum()
    }

    /// New family with every member operator scaled by `c`.
    pub fn with_scaled_operators(&self, c: f64) -> Result<GFusionFamily, FrameError> {
        let members = self
            .members
            .iter()
            .map(|m| {
                FrameMember::new(
                    m.subspace_basis().clone(),
                    m.member_operator().scale(c),
                    m.weight(),
                )
            })
            .collect::<Result<Vec<_>, _>>()?;
        GFusionFamily::new(self.ambient_dim, members)
    }

    /// New family with every weight scaled by `c > 0`.
    pub fn with_scaled_weights(&self, c: f64) -> Result<GFusionFamily, FrameError> {
        let members = self
            .members
            .iter()
            .map(|m| {
                FrameMember::new(
                    m.subspace_basis().clone(),
                    m.member_operator().clone(),
                    m.weight() * c,
                )
            })
            .collect::<Result<Vec<_>, _>>()?;
        GFusionFamily::new(self.ambient_dim, members)
    }
}

/// Element of the direct sum `⊕_j ℂ^{m_j}`: one block per member.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectSumVector {
    blocks: Vec<Vec<Scalar>>,
}

impl DirectSumVector {
    pub fn new(blocks: Vec<Vec<Scalar>>) -> Self {
        DirectSumVector { blocks }
    }

    pub fn zeros_for(family: &GFusionFamily) -> Self {
        DirectSumVector {
            blocks: family
                .members()
                .iter()
                .map(|m| vec![Scalar::new(0.0, 0.0); m.codomain_dim()])
                .collect(),
        }
    }

    pub fn blocks(&self) -> &[Vec<Scalar>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// ℓ² norm across all blocks.
    pub fn norm(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| b.iter().map(|z| z.norm_sqr()).sum::<f64>())
            .sum::<f64>()
            .sqrt()
    }

    fn conforms(&self, family: &GFusionFamily) -> Result<(), FrameError> {
        if self.blocks.len() != family.member_count() {
            return Err(FrameError::DimensionMismatch {
                context: "direct-sum vector",
                expected: format!("{} blocks", family.member_count()),
                found: format!("{} blocks", self.blocks.len()),
            });
        }
        for (j, (b, m)) in self.blocks.iter().zip(family.members()).enumerate() {
            if b.len() != m.codomain_dim() {
                return Err(FrameError::DimensionMismatch {
                    context: "direct-sum vector block",
                    expected: format!("block {j} of length {}", m.codomain_dim()),
                    found: format!("length {}", b.len()),
                });
            }
        }
        Ok(())
    }
}

/// The frame operator `S = Σ_j v_j² P_{W_j} Λ_j* Λ_j P_{W_j}` of a family.
#[derive(Debug, Clone)]
pub struct FrameOperator {
    matrix: HermitianMatrix,
    source: FamilyId,
}

impl FrameOperator {
    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn source(&self) -> FamilyId {
        self.source
    }
}

/// Frame classification from the optimal bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameClass {
    NotFrame,
    Frame,
    Tight,
    Parseval,
}

impl std::fmt::Display for FrameClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            FrameClass::NotFrame => "not_frame",
            FrameClass::Frame => "frame",
            FrameClass::Tight => "tight",
            FrameClass::Parseval => "parseval",
        };
        f.write_str(s)
    }
}

/// Optimal bounds `A = λ_min(S)`, `B = λ_max(S)` with the classification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalBounds {
    pub lower: f64,
    pub upper: f64,
    pub class: FrameClass,
}

/// Which inequality family a certificate claims.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateKind {
    /// Upper bound only.
    Bessel,
    /// `A‖f‖² ≤ ⟨Sf, f⟩ ≤ B‖f‖²`.
    Frame,
    /// `A‖K*f‖² ≤ ⟨Sf, f⟩ ≤ B‖f‖²` for a fixed operator `K`.
    KFrame,
}

/// Claimed bounds plus, once verified, a verdict and the residual margins.
///
/// Margins are the smallest eigenvalues of the slack operators: the lower
/// margin is `λ_min(S − A·KK*)` (or `S − A·I`), the upper margin is
/// `λ_min(B·I − S)`. Negative margins beyond tolerance falsify the claim.
#[derive(Debug, Clone)]
pub struct BoundCertificate {
    pub kind: CertificateKind,
    pub lower: Option<f64>,
    pub upper: f64,
    pub k_operator: Option<Matrix>,
    pub verdict: bool,
    pub margins: (f64, f64),
}

impl BoundCertificate {
    pub fn frame(lower: f64, upper: f64) -> Self {
        BoundCertificate {
            kind: CertificateKind::Frame,
            lower: Some(lower),
            upper,
            k_operator: None,
            verdict: false,
            margins: (f64::NAN, f64::NAN),
        }
    }

    pub fn bessel(upper: f64) -> Self {
        BoundCertificate {
            kind: CertificateKind::Bessel,
            lower: None,
            upper,
            k_operator: None,
            verdict: false,
            margins: (f64::NAN, f64::NAN),
        }
    }

    pub fn k_frame(lower: f64, upper: f64, k_operator: Matrix) -> Self {
        BoundCertificate {
            kind: CertificateKind::KFrame,
            lower: Some(lower),
            upper,
            k_operator: Some(k_operator),
            verdict: false,
            margins: (f64::NAN, f64::NAN),
        }
    }
}

/// Assembles `S = Σ_j v_j² P_{W_j} Λ_j* Λ_j P_{W_j}` and cross-checks it
/// against `T·T*` for the synthesis block matrix `T`; the two routes must
/// agree within the spectral tolerance.
pub fn assemble_frame_operator(family: &GFusionFamily) -> Result<FrameOperator, FrameError> {
    let tols = tol::global();
    let n = family.ambient_dim();
    let mut sum = Matrix::zeros(n, n);
    for m in family.members() {
        let composite = m.composite();
        let term = (&composite.adjoint() * &composite).scale(m.weight() * m.weight());
        sum = &sum + &term;
    }
    let s = HermitianMatrix::from_hermitian_product(sum);

    let synth = synthesis_matrix(family);
    let tt = &synth * &synth.adjoint();
    let s_norm = s.operator_norm()?;
    let cross = operator_norm(&(s.matrix() - &tt));
    if cross > tols.eig * (1.0 + s_norm) {
        return Err(FrameError::InvalidFamily {
            reason: format!(
                "frame operator assembly disagrees with synthesis route (residual {cross:.3e})"
            ),
        });
    }
    let min = s.min_eigenvalue()?;
    if min < -tols.psd * (1.0 + s_norm) {
        return Err(FrameError::InvalidFamily {
            reason: format!("frame operator is not PSD (min eigenvalue {min:.3e})"),
        });
    }
    Ok(FrameOperator {
        matrix: s,
        source: family.id(),
    })
}

/// Analysis operator: block `j` of the result is `v_j · Λ_j P_{W_j} f`.
pub fn analysis_apply(
    family: &GFusionFamily,
    f: &[Scalar],
) -> Result<DirectSumVector, FrameError> {
    if f.len() != family.ambient_dim() {
        return Err(FrameError::DimensionMismatch {
            context: "analysis_apply",
            expected: format!("vector of length {}", family.ambient_dim()),
            found: format!("length {}", f.len()),
        });
    }
    let blocks = family
        .members()
        .iter()
        .map(|m| {
            let y = m.composite().apply(f)?;
            Ok(y.into_iter()
                .map(|z| z * Scalar::new(m.weight(), 0.0))
                .collect())
        })
        .collect::<Result<Vec<_>, FrameError>>()?;
    Ok(DirectSumVector::new(blocks))
}

/// Synthesis operator: `Σ_j v_j P_{W_j} Λ_j* g_j`.
pub fn synthesis_apply(
    family: &GFusionFamily,
    g: &DirectSumVector,
) -> Result<Vec<Scalar>, FrameError> {
    g.conforms(family)?;
    let n = family.ambient_dim();
    let mut out = vec![Scalar::new(0.0, 0.0); n];
    for (m, block) in family.members().iter().zip(g.blocks()) {
        let lifted = m.composite().adjoint().apply(block)?;
        for (o, x) in out.iter_mut().zip(lifted) {
            *o += x * Scalar::new(m.weight(), 0.0);
        }
    }
    Ok(out)
}

/// The synthesis operator as an `n × Σ m_j` block matrix
/// `[v_1 P_1 Λ_1* | v_2 P_2 Λ_2* | …]`.
pub fn synthesis_matrix(family: &GFusionFamily) -> Matrix {
    let n = family.ambient_dim();
    let total = family.total_codomain_dim();
    let mut blocks: Vec<Matrix> = Vec::with_capacity(family.member_count());
    for m in family.members() {
        blocks.push(m.composite().adjoint().scale(m.weight()));
    }
    let mut out = nalgebra::DMatrix::<Scalar>::zeros(n, total);
    let mut col = 0;
    for b in &blocks {
        for j in 0..b.cols() {
            for i in 0..n {
                out[(i, col + j)] = b.get(i, j);
            }
        }
        col += b.cols();
    }
    Matrix::wrap(out)
}

/// The energy `Σ_j v_j² ‖Λ_j P_{W_j} f‖²`, computed by direct summation
/// (not through the frame operator); agreement with `⟨Sf, f⟩` is itself a
/// tested contract.
pub fn quadratic_form(family: &GFusionFamily, f: &[Scalar]) -> Result<f64, FrameError> {
    if f.len() != family.ambient_dim() {
        return Err(FrameError::DimensionMismatch {
            context: "quadratic_form",
            expected: format!("vector of length {}", family.ambient_dim()),
            found: format!("length {}", f.len()),
        });
    }
    let mut total = 0.0;
    for m in family.members() {
        let y = m.composite().apply(f)?;
        total += m.weight() * m.weight() * vec_norm(&y).powi(2);
    }
    Ok(total)
}

/// Optimal bounds are the extreme eigenvalues of the frame operator.
/// Classification thresholds: not a frame when `A ≤ tol_psd·B`; tight when
/// `|A − B| ≤ tol_eig·B`; Parseval when additionally `|B − 1| ≤ tol_eig`.
pub fn optimal_bounds(family: &GFusionFamily) -> Result<OptimalBounds, FrameError> {
    let s = assemble_frame_operator(family)?;
    classify_frame_operator(s.matrix())
}

/// Optimal bounds read off an already assembled frame operator.
pub fn classify_frame_operator(s: &HermitianMatrix) -> Result<OptimalBounds, FrameError> {
    let tols = tol::global();
    let lower = s.min_eigenvalue()?;
    let upper = s.max_eigenvalue()?;
    let class = if lower <= tols.psd * upper {
        FrameClass::NotFrame
    } else if (upper - lower).abs() <= tols.eig * upper {
        if (upper - 1.0).abs() <= tols.eig {
            FrameClass::Parseval
        } else {
            FrameClass::Tight
        }
    } else {
        FrameClass::Frame
    };
    Ok(OptimalBounds {
        lower,
        upper,
        class,
    })
}

/// Assembles the frame operator and insists the family is a frame, returning
/// the operator together with its optimal bounds.
pub fn require_frame(
    family: &GFusionFamily,
) -> Result<(FrameOperator, OptimalBounds), FrameError> {
    let s = assemble_frame_operator(family)?;
    let bounds = classify_frame_operator(s.matrix())?;
    if bounds.class == FrameClass::NotFrame {
        return Err(FrameError::NotAFrame {
            lower_bound: bounds.lower,
        });
    }
    Ok((s, bounds))
}

/// Largest `A` with `A·KK* ≤ S`, or `None` when no positive `A` exists.
///
/// Existence is exactly the range condition `range(K) ⊆ range(S)`, tested as
/// `‖(I − S·S⁺)K‖ ≤ tol_psd·‖K‖`; the optimum is `1 / λ_max(K* S⁺ K)`.
/// Degenerately, `K = 0` admits every `A`, reported as `+∞`.
pub fn optimal_k_lower_bound(
    family: &GFusionFamily,
    k: &Matrix,
) -> Result<Option<f64>, FrameError> {
    let n = family.ambient_dim();
    if !k.is_square() || k.rows() != n {
        return Err(FrameError::DimensionMismatch {
            context: "optimal_k_lower_bound",
            expected: format!("{n}x{n} operator"),
            found: format!("{}x{}", k.rows(), k.cols()),
        });
    }
    let tols = tol::global();
    let s = assemble_frame_operator(family)?;
    let s_pinv = s
        .matrix()
        .spectral_pseudo_inverse(tol::default_rank_tol(n, n))?;
    let residual_op = &(&Matrix::identity(n) - &(s.matrix().matrix() * s_pinv.matrix())) * k;
    let k_norm = operator_norm(k);
    if operator_norm(&residual_op) > tols.psd * k_norm {
        return Ok(None);
    }
    let gram = HermitianMatrix::from_hermitian_product(&(&k.adjoint() * s_pinv.matrix()) * k);
    let lam_max = gram.max_eigenvalue()?;
    if lam_max <= 0.0 {
        return Ok(Some(f64::INFINITY));
    }
    Ok(Some(1.0 / lam_max))
}

/// Fills the verdict and margins of a claimed certificate against the
/// family's frame operator. The lower inequality is checked against `A·I`
/// (frame), `A·KK*` (K-frame), or skipped (Bessel, margin `+∞`).
pub fn verify_certificate(
    family: &GFusionFamily,
    cert: &BoundCertificate,
    tol: f64,
) -> Result<BoundCertificate, FrameError> {
    let n = family.ambient_dim();
    let s = assemble_frame_operator(family)?;

    let upper_ref = HermitianMatrix::scaled_identity(n, cert.upper);
    let upper_ok = psd_order(s.matrix(), &upper_ref, tol)?;
    let upper_margin =
        HermitianMatrix::from_hermitian_product(upper_ref.matrix() - s.matrix().matrix())
            .min_eigenvalue()?;

    let (lower_ok, lower_margin) = match cert.kind {
        CertificateKind::Bessel => (true, f64::INFINITY),
        CertificateKind::Frame => {
            let a = cert.lower.ok_or(FrameError::InvalidFamily {
                reason: "frame certificate requires a lower bound".into(),
            })?;
            let lower_ref = HermitianMatrix::scaled_identity(n, a);
            let ok = psd_order(&lower_ref, s.matrix(), tol)? && a > 0.0;
            let margin = HermitianMatrix::from_hermitian_product(
                s.matrix().matrix() - lower_ref.matrix(),
            )
            .min_eigenvalue()?;
            (ok, margin)
        }
        CertificateKind::KFrame => {
            let a = cert.lower.ok_or(FrameError::InvalidFamily {
                reason: "K-frame certificate requires a lower bound".into(),
            })?;
            let k = cert.k_operator.as_ref().ok_or(FrameError::InvalidFamily {
                reason: "K-frame certificate requires the operator K".into(),
            })?;
            if !k.is_square() || k.rows() != n {
                return Err(FrameError::DimensionMismatch {
                    context: "verify_certificate",
                    expected: format!("{n}x{n} operator K"),
                    found: format!("{}x{}", k.rows(), k.cols()),
                });
            }
            let kkt = HermitianMatrix::from_hermitian_product((k * &k.adjoint()).scale(a));
            let ok = psd_order(&kkt, s.matrix(), tol)? && a > 0.0;
            let margin =
                HermitianMatrix::from_hermitian_product(s.matrix().matrix() - kkt.matrix())
                    .min_eigenvalue()?;
            (ok, margin)
        }
    };

    let mut out = cert.clone();
    out.verdict = lower_ok && upper_ok;
    out.margins = (lower_margin, upper_margin);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Scalar {
        Scalar::new(re, 0.0)
    }

    /// Identity family: dim n, one member with W = H, Λ = I, v = 1.
    pub(crate) fn identity_family(n: usize) -> GFusionFamily {
        let member =
            FrameMember::new(Matrix::identity(n), Matrix::identity(n), 1.0).unwrap();
        GFusionFamily::new(n, vec![member]).unwrap()
    }

    /// Two-member diagonal family over ℂ²:
    /// member 1: W = span{e1}, Λ = [1 0], v = 2;
    /// member 2: W = span{e2}, Λ = [0 1], v = 1.
    /// Frame operator diag(4, 1).
    pub(crate) fn diagonal_family() -> GFusionFamily {
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

    /// Bessel-only family with S = diag(1, 0).
    pub(crate) fn bessel_only_family() -> GFusionFamily {
        let m = FrameMember::new(
            Matrix::from_real_row_major(2, 1, &[1.0, 0.0]).unwrap(),
            Matrix::from_real_row_major(1, 2, &[1.0, 0.0]).unwrap(),
            1.0,
        )
        .unwrap();
        GFusionFamily::new(2, vec![m]).unwrap()
    }

    #[test]
    fn rejects_empty_family() {
        assert!(matches!(
            GFusionFamily::new(2, vec![]),
            Err(FrameError::InvalidFamily { .. })
        ));
    }

    #[test]
    fn rejects_non_positive_weight() {
        let err = FrameMember::new(Matrix::identity(2), Matrix::identity(2), 0.0).unwrap_err();
        assert!(matches!(err, FrameError::InvalidFamily { .. }));
    }

    #[test]
    fn identity_family_is_parseval() {
        let fam = identity_family(3);
        let s = assemble_frame_operator(&fam).unwrap();
        assert!(s.matrix().matrix().max_abs_diff(&Matrix::identity(3)) < 1e-14);
        let b = optimal_bounds(&fam).unwrap();
        assert_eq!(b.class, FrameClass::Parseval);
        assert!((b.lower - 1.0).abs() < 1e-12 && (b.upper - 1.0).abs() < 1e-12);
    }

    #[test]
    fn diagonal_family_operator_by_hand() {
        let fam = diagonal_family();
        let s = assemble_frame_operator(&fam).unwrap();
        let expect = Matrix::from_real_diagonal(&[4.0, 1.0]);
        assert!(s.matrix().matrix().max_abs_diff(&expect) < 1e-14);
        let b = optimal_bounds(&fam).unwrap();
        assert_eq!(b.class, FrameClass::Frame);
        assert_eq!((b.lower, b.upper), (1.0, 4.0));
    }

    #[test]
    fn weight_scaling_is_quadratic() {
        let fam = diagonal_family();
        let scaled = fam.with_scaled_weights(3.0).unwrap();
        let s = assemble_frame_operator(&scaled).unwrap();
        let expect = Matrix::from_real_diagonal(&[36.0, 9.0]);
        assert!(s.matrix().matrix().max_abs_diff(&expect) < 1e-12);
    }

    #[test]
    fn analysis_on_identity_family_is_identity() {
        let fam = identity_family(2);
        let g = analysis_apply(&fam, &[c(1.0), c(-2.0)]).unwrap();
        assert_eq!(g.blocks(), &[vec![c(1.0), c(-2.0)]]);
    }

    #[test]
    fn analysis_on_diagonal_family_by_hand() {
        let fam = diagonal_family();
        let g = analysis_apply(&fam, &[c(1.0), c(1.0)]).unwrap();
        assert_eq!(g.blocks(), &[vec![c(2.0)], vec![c(1.0)]]);
    }

    #[test]
    fn analysis_of_zero_is_zero() {
        let fam = diagonal_family();
        let g = analysis_apply(&fam, &[c(0.0), c(0.0)]).unwrap();
        assert!(g.norm() == 0.0);
    }

    #[test]
    fn synthesis_on_diagonal_family_by_hand() {
        let fam = diagonal_family();
        let g = DirectSumVector::new(vec![vec![c(1.0)], vec![c(1.0)]]);
        let f = synthesis_apply(&fam, &g).unwrap();
        assert_eq!(f, vec![c(2.0), c(1.0)]);
    }

    #[test]
    fn synthesis_of_zero_blocks_is_zero() {
        let fam = diagonal_family();
        let f = synthesis_apply(&fam, &DirectSumVector::zeros_for(&fam)).unwrap();
        assert!(vec_norm(&f) == 0.0);
    }

    #[test]
    fn synthesis_adjoint_of_analysis() {
        // ⟨synthesis(g), f⟩ = ⟨g, analysis(f)⟩ on a sampled pair.
        let fam = diagonal_family();
        let f = [c(0.3), c(-1.2)];
        let g = DirectSumVector::new(vec![vec![c(0.7)], vec![c(0.2)]]);
        let sg = synthesis_apply(&fam, &g).unwrap();
        let af = analysis_apply(&fam, &f).unwrap();
        let lhs: Scalar = sg.iter().zip(&f).map(|(a, b)| a.conj() * b).sum();
        let rhs: Scalar = g
            .blocks()
            .iter()
            .zip(af.blocks())
            .flat_map(|(gb, ab)| gb.iter().zip(ab).map(|(a, b)| a.conj() * b))
            .sum();
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn synthesis_matrix_shape_and_norm() {
        let fam = diagonal_family();
        let t = synthesis_matrix(&fam);
        assert_eq!((t.rows(), t.cols()), (2, 2));
        // Columns (2,0)ᵀ and (0,1)ᵀ; operator norm 2.
        assert!((operator_norm(&t) - 2.0).abs() < 1e-12);
        let doubled = fam.with_scaled_weights(2.0).unwrap();
        assert!((operator_norm(&synthesis_matrix(&doubled)) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn quadratic_form_by_hand() {
        let fam = diagonal_family();
        assert!((quadratic_form(&fam, &[c(1.0), c(1.0)]).unwrap() - 5.0).abs() < 1e-12);
        assert_eq!(quadratic_form(&fam, &[c(0.0), c(0.0)]).unwrap(), 0.0);
        let id = identity_family(2);
        assert!((quadratic_form(&id, &[c(3.0), c(4.0)]).unwrap() - 25.0).abs() < 1e-12);
    }

    #[test]
    fn bessel_only_family_is_not_frame() {
        let fam = bessel_only_family();
        let b = optimal_bounds(&fam).unwrap();
        assert_eq!(b.class, FrameClass::NotFrame);
        assert!(b.lower.abs() < 1e-14);
        assert!((b.upper - 1.0).abs() < 1e-12);
    }

    #[test]
    fn k_lower_bound_for_rank_deficient_k() {
        // Largest A with A|f1|² ≤ 4|f1|² + |f2|² is 4.
        let fam = diagonal_family();
        let k = Matrix::from_real_diagonal(&[1.0, 0.0]);
        let a = optimal_k_lower_bound(&fam, &k).unwrap().unwrap();
        assert!((a - 4.0).abs() < 1e-10);
    }

    #[test]
    fn k_lower_bound_with_identity_reduces_to_optimal() {
        let fam = diagonal_family();
        let a = optimal_k_lower_bound(&fam, &Matrix::identity(2))
            .unwrap()
            .unwrap();
        assert!((a - 1.0).abs() < 1e-10);
    }

    #[test]
    fn k_lower_bound_absent_outside_range() {
        // S = diag(1,0) cannot dominate any positive multiple of KK* = I.
        let fam = bessel_only_family();
        assert_eq!(
            optimal_k_lower_bound(&fam, &Matrix::identity(2)).unwrap(),
            None
        );
    }

    #[test]
    fn certificate_verification_exact_and_violated() {
        let fam = diagonal_family();
        let ok = verify_certificate(&fam, &BoundCertificate::frame(1.0, 4.0), 1e-9).unwrap();
        assert!(ok.verdict);
        assert!(ok.margins.0.abs() < 1e-12 && ok.margins.1.abs() < 1e-12);

        let bad = verify_certificate(&fam, &BoundCertificate::frame(2.0, 4.0), 1e-9).unwrap();
        assert!(!bad.verdict);
        assert!(bad.margins.0 < -0.9);

        let slack =
            verify_certificate(&fam, &BoundCertificate::frame(1.0, 4.0 * (1.0 + 1e-8)), 1e-9)
                .unwrap();
        assert!(slack.verdict);
    }

    #[test]
    fn bessel_certificate_checks_upper_only() {
        let fam = bessel_only_family();
        let cert = verify_certificate(&fam, &BoundCertificate::bessel(1.0), 1e-9).unwrap();
        assert!(cert.verdict);
        assert!(cert.margins.0.is_infinite());
    }
}
