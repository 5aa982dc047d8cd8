//! Centralized numerical tolerances.
//!
//! The operators handled here are exact mathematical objects; finite precision
//! demands explicit thresholds. All defaults are relative tolerances and can
//! be overridden per call where an operation takes a tolerance argument, or
//! process-wide via [`set_global`] (intended to be called once at startup,
//! e.g. from a CLI flag or environment variable).

use std::sync::RwLock;

/// Base relative tolerance from which the default set is derived.
pub const DEFAULT_BASE: f64 = 1e-9;

/// The tolerance set used by operations that do not take an explicit
/// tolerance argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Hermitian-symmetry and orthonormality validation (relative).
    pub herm: f64,
    /// Spectral residuals: eigendecomposition, operator identities (relative).
    pub eig: f64,
    /// PSD / rank / frame-classification threshold (relative).
    pub psd: f64,
    /// Reconstruction residual budget; looser than `eig` because
    /// reconstruction accumulates member-count-many products.
    pub recon: f64,
}

impl Tolerances {
    /// Derives a full tolerance set from a base relative tolerance,
    /// preserving the default ratios (`psd` one decade tighter, `recon`
    /// one decade looser).
    pub fn from_base(base: f64) -> Self {
        Tolerances {
            herm: base,
            eig: base,
            psd: base / 10.0,
            recon: base * 10.0,
        }
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances::from_base(DEFAULT_BASE)
    }
}

static GLOBAL: RwLock<Tolerances> = RwLock::new(Tolerances {
    herm: DEFAULT_BASE,
    eig: DEFAULT_BASE,
    psd: DEFAULT_BASE / 10.0,
    recon: DEFAULT_BASE * 10.0,
});

/// Returns the process-wide tolerance set.
pub fn global() -> Tolerances {
    *GLOBAL.read().expect("tolerance lock poisoned")
}

/// Replaces the process-wide tolerance set. Call once at startup, before any
/// numerical work; operations read the set at call time.
pub fn set_global(tol: Tolerances) {
    *GLOBAL.write().expect("tolerance lock poisoned") = tol;
}

/// Default rank tolerance for an `rows × cols` matrix: `max(rows, cols) · ε`,
/// applied relative to the largest singular value.
pub fn default_rank_tol(rows: usize, cols: usize) -> f64 {
    rows.max(cols) as f64 * f64::EPSILON
}
