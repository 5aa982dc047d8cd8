//! Canonical dual g-fusion frames and the transported dual pair with
//! two-sided reconstruction.
//!
//! The canonical dual of a frame `Λ = {(W_j, Λ_j, v_j)}` with frame operator
//! `S` is `Λ° = {(S⁻¹W_j, Λ_j P_{W_j} S⁻¹, v_j)}`; its frame operator is
//! `S⁻¹` and the pair resolves the identity in both orders. The transported
//! variant maps the subspaces through an invertible `T` and the member
//! codomains through invertible `T_j`, producing dual operators
//! `Δ_j = T_j*T_j · Λ_j P_{W_j} · U` with `U = T* S_Γ⁻¹ T`.

use crate::error::FrameError;
use crate::frames::{
    assemble_frame_operator, require_frame, FrameMember, GFusionFamily,
};
use crate::linalg::{operator_norm, orthonormal_basis, vec_norm, HermitianMatrix, Matrix, Scalar};
use crate::tol;

/// How a dual pair was constructed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DualCoupling {
    Canonical,
    Theorem38,
}

/// A primal family together with a dual family that reconstructs it.
///
/// The j-th dual member's subspace is the transported subspace (`S⁻¹W_j` for
/// the canonical coupling, `TW_j` otherwise) and its operator is the dual
/// operator `Δ_j`. Reconstruction holds in both orders within the
/// reconstruction tolerance; this is checked at construction.
#[derive(Debug, Clone)]
pub struct DualPair {
    pub primal: GFusionFamily,
    pub dual: GFusionFamily,
    pub coupling: DualCoupling,
    /// The transport operator of the construction; `None` for canonical
    /// (where the transport is the identity).
    pub transport: Option<Matrix>,
}

/// Outcome of checking the dual frame-operator identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualOperatorCheck {
    pub holds: bool,
    pub residual: f64,
}

/// Result of reconstructing a vector through a dual pair: the two summation
/// orders and their relative residuals.
#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    pub left: Vec<Scalar>,
    pub right: Vec<Scalar>,
    pub residuals: (f64, f64),
}

/// Canonical dual: dual member `j` has subspace `S⁻¹W_j` (re-orthonormalized)
/// and operator `Λ_j P_{W_j} S⁻¹`, with the primal weight.
pub fn canonical_dual(family: &GFusionFamily) -> Result<DualPair, FrameError> {
    let (s, _) = require_frame(family)?;
    let s_inv = s.matrix().spectral_inverse(tol::global().psd)?;
    let dual_members = family
        .members()
        .iter()
        .map(|m| {
            let basis = orthonormal_basis(
                &(s_inv.matrix() * m.subspace_basis()),
                tol::default_rank_tol(family.ambient_dim(), m.subspace_dim()),
            )?;
            let op = &m.composite() * s_inv.matrix();
            Ok(FrameMember::new(basis, op, m.weight())?)
        })
        .collect::<Result<Vec<_>, FrameError>>()?;
    let dual = GFusionFamily::new(family.ambient_dim(), dual_members)?;
    let pair = DualPair {
        primal: family.clone(),
        dual,
        coupling: DualCoupling::Canonical,
        transport: None,
    };
    check_resolution_of_identity(&pair)?;
    Ok(pair)
}

/// Residual of the identity `S_dual = S_primal⁻¹`, relative to `‖S_primal⁻¹‖`.
/// Only meaningful for the canonical coupling.
pub fn verify_dual_operator(pair: &DualPair, tol: f64) -> Result<DualOperatorCheck, FrameError> {
    if pair.coupling != DualCoupling::Canonical {
        return Err(FrameError::WrongCoupling);
    }
    let s_primal = assemble_frame_operator(&pair.primal)?;
    let s_dual = assemble_frame_operator(&pair.dual)?;
    let s_inv = s_primal.matrix().spectral_inverse(tol::global().psd)?;
    let denom = s_inv.operator_norm()?;
    let residual = operator_norm(&(s_dual.matrix().matrix() - s_inv.matrix())) / denom;
    Ok(DualOperatorCheck {
        holds: residual <= tol,
        residual,
    })
}

/// Transported dual pair.
///
/// Builds the transported family `Γ = {(TW_j, T_jΛ_jP_{W_j}T*, v_j)}`, its
/// frame operator `S_Γ` (assembled both directly and through the expanded sum
/// `Σ v_j² T P_j Λ_j* T_j* T_j Λ_j P_j T*`, which must agree), then
/// `U = T* S_Γ⁻¹ T`, `L_j = T_j* T_j`, and dual operators
/// `Δ_j = L_j Λ_j P_{W_j} U`. The dual family is `{(U W_j, Δ_j, v_j)}`:
/// `U` is self-adjoint, so `Δ_j` absorbs the projector onto `U W_j` and both
/// resolution-of-identity orders hold exactly. (With `T = I` and all
/// `T_j = I` this reduces to the canonical dual, subspaces included.)
pub fn theorem_3_8_dual(
    family: &GFusionFamily,
    t: &Matrix,
    member_maps: &[Matrix],
) -> Result<DualPair, FrameError> {
    let n = family.ambient_dim();
    let tols = tol::global();
    if !t.is_square() || t.rows() != n {
        return Err(FrameError::DimensionMismatch {
            context: "theorem_3_8_dual",
            expected: format!("{n}x{n} transport"),
            found: format!("{}x{}", t.rows(), t.cols()),
        });
    }
    if member_maps.len() != family.member_count() {
        return Err(FrameError::DimensionMismatch {
            context: "theorem_3_8_dual",
            expected: format!("{} member maps", family.member_count()),
            found: format!("{}", member_maps.len()),
        });
    }
    let (sigma_min_t, sigma_max_t) = singular_extremes(t);
    if sigma_min_t <= tol::default_rank_tol(n, n) * sigma_max_t {
        return Err(FrameError::NotInvertible {
            name: "transport operator",
            sigma_min: sigma_min_t,
        });
    }
    let mut codomain_min = f64::INFINITY; // m = inf 1/‖T_j⁻¹‖ = min σ_min(T_j)
    let mut codomain_max: f64 = 0.0; //      M = sup ‖T_j‖     = max σ_max(T_j)
    for (j, (map, member)) in member_maps.iter().zip(family.members()).enumerate() {
        let mj = member.codomain_dim();
        if map.rows() != mj || map.cols() != mj {
            return Err(FrameError::DimensionMismatch {
                context: "theorem_3_8_dual member map",
                expected: format!("{mj}x{mj} at index {j}"),
                found: format!("{}x{}", map.rows(), map.cols()),
            });
        }
        let (smin, smax) = singular_extremes(map);
        if smin <= tol::default_rank_tol(mj, mj) * smax {
            return Err(FrameError::NotInvertible {
                name: "member map",
                sigma_min: smin,
            });
        }
        codomain_min = codomain_min.min(smin);
        codomain_max = codomain_max.max(smax);
    }
    let (_, bounds) = require_frame(family)?;

    // Transported family and its frame operator via the expanded sum.
    let t_adj = t.adjoint();
    let mut gamma_members = Vec::with_capacity(family.member_count());
    let mut s_gamma_expanded = Matrix::zeros(n, n);
    for (map, member) in member_maps.iter().zip(family.members()) {
        let basis = orthonormal_basis(
            &(t * member.subspace_basis()),
            tol::default_rank_tol(n, member.subspace_dim()),
        )?;
        let op = &(map * &member.composite()) * &t_adj;
        let w2 = member.weight() * member.weight();
        s_gamma_expanded = &s_gamma_expanded + &(&op.adjoint() * &op).scale(w2);
        gamma_members.push(FrameMember::new(basis, op, member.weight())?);
    }
    let gamma = GFusionFamily::new(n, gamma_members)?;
    let s_gamma = assemble_frame_operator(&gamma)?;
    let expand_residual =
        operator_norm(&(s_gamma.matrix().matrix() - &s_gamma_expanded));
    let s_norm = s_gamma.matrix().operator_norm()?;
    if expand_residual > tols.eig * (1.0 + s_norm) {
        return Err(FrameError::InvalidFamily {
            reason: format!(
                "expanded frame-operator sum disagrees with direct assembly (residual {expand_residual:.3e})"
            ),
        });
    }

    let s_gamma_inv = s_gamma.matrix().spectral_inverse(tols.psd)?;
    let u = HermitianMatrix::from_hermitian_product(&(&t_adj * s_gamma_inv.matrix()) * t);

    // Proof-guaranteed norm bounds on U and L_j.
    let u_bound = sigma_max_t * sigma_max_t
        / (codomain_min * codomain_min * bounds.lower * sigma_min_t * sigma_min_t);
    let u_norm = u.operator_norm()?;
    if u_norm > u_bound * (1.0 + tols.eig) {
        return Err(FrameError::GuaranteeViolated {
            lower_margin: u_bound - u_norm,
            upper_margin: f64::INFINITY,
        });
    }

    let dual_members = member_maps
        .iter()
        .zip(family.members())
        .map(|(map, member)| {
            let l = &map.adjoint() * map;
            let l_norm = operator_norm(&l);
            if l_norm > codomain_max * codomain_max * (1.0 + tols.eig) {
                return Err(FrameError::GuaranteeViolated {
                    lower_margin: codomain_max * codomain_max - l_norm,
                    upper_margin: f64::INFINITY,
                });
            }
            let delta = &(&l * &member.composite()) * u.matrix();
            let basis = orthonormal_basis(
                &(u.matrix() * member.subspace_basis()),
                tol::default_rank_tol(n, member.subspace_dim()),
            )?;
            Ok(FrameMember::new(basis, delta, member.weight())?)
        })
        .collect::<Result<Vec<_>, FrameError>>()?;
    let dual = GFusionFamily::new(n, dual_members)?;

    let pair = DualPair {
        primal: family.clone(),
        dual,
        coupling: DualCoupling::Theorem38,
        transport: Some(t.clone()),
    };
    check_resolution_of_identity(&pair)?;
    Ok(pair)
}

/// Reconstructs `f` through both summation orders:
/// `f_left  = Σ v_j² P_{W_j} Λ_j* Δ_j P_{W_j°} f` and
/// `f_right = Σ v_j² P_{W_j°} Δ_j* Λ_j P_{W_j} f`,
/// where `W_j°` is the dual member's subspace.
pub fn reconstruct(pair: &DualPair, f: &[Scalar]) -> Result<Reconstruction, FrameError> {
    let n = pair.primal.ambient_dim();
    if f.len() != n {
        return Err(FrameError::DimensionMismatch {
            context: "reconstruct",
            expected: format!("vector of length {n}"),
            found: format!("length {}", f.len()),
        });
    }
    let (left_op, right_op) = resolution_matrices(pair);
    let left = left_op.apply(f)?;
    let right = right_op.apply(f)?;
    let f_norm = vec_norm(f);
    let rel = |g: &[Scalar]| {
        let diff: Vec<Scalar> = g.iter().zip(f).map(|(a, b)| a - b).collect();
        if f_norm == 0.0 {
            vec_norm(&diff)
        } else {
            vec_norm(&diff) / f_norm
        }
    };
    let residuals = (rel(&left), rel(&right));
    Ok(Reconstruction {
        left,
        right,
        residuals,
    })
}

/// The two resolution-of-identity operators of a pair, assembled as matrices.
pub fn resolution_matrices(pair: &DualPair) -> (Matrix, Matrix) {
    let n = pair.primal.ambient_dim();
    let mut left = Matrix::zeros(n, n);
    let mut right = Matrix::zeros(n, n);
    for (primal, dual) in pair.primal.members().iter().zip(pair.dual.members()) {
        let w2 = primal.weight() * primal.weight();
        let primal_composite = primal.composite(); // Λ_j P_{W_j}
        let dual_composite = dual.composite(); //     Δ_j P_{W_j°}
        left = &left + &(&primal_composite.adjoint() * &dual_composite).scale(w2);
        right = &right + &(&dual_composite.adjoint() * &primal_composite).scale(w2);
    }
    (left, right)
}

fn check_resolution_of_identity(pair: &DualPair) -> Result<(), FrameError> {
    let tol_recon = tol::global().recon;
    let n = pair.primal.ambient_dim();
    let id = Matrix::identity(n);
    let (left, right) = resolution_matrices(pair);
    let residual = operator_norm(&(&left - &id)).max(operator_norm(&(&right - &id)));
    if residual > tol_recon {
        return Err(FrameError::ReconstructionFailure {
            residual,
            tol: tol_recon,
        });
    }
    Ok(())
}

fn singular_extremes(m: &Matrix) -> (f64, f64) {
    let svd = m.inner.clone().svd(false, false);
    let mut smin = f64::INFINITY;
    let mut smax = 0.0f64;
    for &s in svd.singular_values.iter() {
        smin = smin.min(s);
        smax = smax.max(s);
    }
    // A non-square matrix has a nontrivial kernel or cokernel.
    if m.rows() != m.cols() {
        smin = 0.0;
    }
    (smin, smax)
}
