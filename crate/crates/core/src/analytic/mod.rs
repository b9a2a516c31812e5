//! Weight functions, Fenchel conjugates, index functions, 𝒜^λ norm
//! estimators and L∞–L1 interpolation inequalities.

mod index;
mod interp;
mod norm;
mod weight;

pub use index::{phi_p, phi_p_log, IndexFunction};
pub use interp::{check_from_norms, interp_check, InterpCheck, InterpProfile};
pub use norm::{anorm, anorm_circle, anorm_interval, anorm_sphere};
pub use weight::{gradiometry_conjugate, WeightFunction, WeightKind};

/// λ*(s); closed form when available.
pub fn fenchel_conjugate(w: &WeightFunction, s: f64) -> f64 {
    w.conjugate(s)
}

/// ψ(α) = sup_τ [φ(τ) - τ/α].
pub fn psi(alpha: f64, phi: &IndexFunction) -> f64 {
    phi.psi(alpha)
}

pub(crate) use weight::golden_max;
