//! A-posteriori checks of the energy bound and the error/residual bounds.

use crate::analytic::{IndexFunction, InterpProfile};
use crate::error::{invalid, Result};
use crate::operators::DiagonalOperator;
use crate::spectral::SpectralFunction;

/// γ for the composed map f ↦ Tf − g†: the interpolation γ of the image
/// space times the Lipschitz constant of T into it.
#[derive(Clone, Debug)]
pub struct OperatorGamma {
    pub profile: InterpProfile,
    pub lipschitz: f64,
}

impl OperatorGamma {
    pub fn gamma(&self, delta: f64) -> Result<f64> {
        Ok(self.lipschitz * self.profile.gamma(delta)?)
    }
    pub fn delta0(&self) -> f64 {
        self.profile.delta0()
    }
    /// Same profile with γ multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        OperatorGamma { profile: self.profile.clone(), lipschitz: self.lipschitz * factor }
    }
}

pub fn operator_gamma(op: &DiagonalOperator) -> Result<OperatorGamma> {
    Ok(OperatorGamma {
        profile: InterpProfile::new(op.manifold(), op.weight().clone())?,
        lipschitz: op.norm_bound(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// ‖f̂‖ ≤ ‖u†‖ + √(2ε/α) + 2ηγ(2η)/α; needs 2η ≤ δ₀.
pub fn energy_bound_check(
    f_hat: &SpectralFunction,
    udag: &SpectralFunction,
    alpha: f64,
    eps: f64,
    eta: f64,
    gamma: &OperatorGamma,
) -> Result<EnergyCheck> {
    if 2.0 * eta > gamma.delta0() * (1.0 + 1e-12) {
        return Err(invalid(format!("eta = {eta} exceeds delta0/2 = {}", gamma.delta0() / 2.0)));
    }
    let g = if eta > 0.0 { 2.0 * eta * gamma.gamma(2.0 * eta)? / alpha } else { 0.0 };
    let lhs = f_hat.l2_norm();
    let rhs = udag.l2_norm() + (2.0 * eps / alpha).sqrt() + g;
    Ok(EnergyCheck { lhs, rhs, holds: lhs <= rhs + 1e-9 })
}

/// Both sides of the error and residual bounds with q′ = 2, b = 2:
///
///   β D ≤ 4ε/α + (2ηγ(4η)/α)²/β + 2ψ(2α)
///   ½‖Tf̂ − g†‖_{L1} ≤ 8ε + 2(2ηγ(4η))²/(βα) + 4αψ(4α)
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateBounds {
    pub error_lhs: f64,
    pub error_rhs: f64,
    pub residual_lhs: f64,
    pub residual_rhs: f64,
    /// false when η exceeds η₀ = δ₀/4 and the bounds make no claim.
    pub applicable: bool,
}

impl RateBounds {
    pub fn holds(&self) -> bool {
        !self.applicable
            || (self.error_lhs <= self.error_rhs * (1.0 + 1e-9) + 1e-14
                && self.residual_lhs <= self.residual_rhs * (1.0 + 1e-9) + 1e-14)
    }
}

#[allow(clippy::too_many_arguments)]
pub fn rate_bounds(
    bregman: f64,
    residual_l1: f64,
    alpha: f64,
    eps: f64,
    eta: f64,
    beta: f64,
    phi: &IndexFunction,
    gamma: &OperatorGamma,
) -> Result<RateBounds> {
    if !(beta > 0.0 && alpha > 0.0) {
        return Err(invalid("rate bounds need beta > 0 and alpha > 0"));
    }
    let applicable = eta <= gamma.delta0() / 4.0;
    let eg = if eta > 0.0 && applicable { 2.0 * eta * gamma.gamma(4.0 * eta)? } else { 0.0 };
    Ok(RateBounds {
        error_lhs: beta * bregman,
        error_rhs: 4.0 * eps / alpha + (eg / alpha).powi(2) / beta + 2.0 * phi.psi(2.0 * alpha),
        residual_lhs: residual_l1 / 2.0,
        residual_rhs: 8.0 * eps + 2.0 * eg * eg / (beta * alpha) + 4.0 * alpha * phi.psi(4.0 * alpha),
        applicable,
    })
}
