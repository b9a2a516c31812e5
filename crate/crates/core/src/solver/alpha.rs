//! A-priori parameter choice rules.

use crate::error::{invalid, Result};
use std::f64::consts::PI;

fn check_noise(eps: f64, eta: f64, p: f64) -> Result<()> {
    if !(eps >= 0.0 && eta >= 0.0 && p > 0.0) {
        return Err(invalid(format!("need eps >= 0, eta >= 0, p > 0 (got {eps}, {eta}, {p})")));
    }
    if eps == 0.0 && eta == 0.0 {
        return Err(invalid("eps and eta are both zero"));
    }
    if eps >= 1.0 {
        return Err(invalid(format!("eps = {eps} must be below 1")));
    }
    Ok(())
}

/// Heat rule: max(ε(−ln ε)^p, exp(−π²t̄/(16η²))), never below the smallest
/// normal f64.
pub fn choose_alpha_heat(eps: f64, eta: f64, p: f64, t_bar: f64) -> Result<f64> {
    check_noise(eps, eta, p)?;
    if !(t_bar > 0.0) {
        return Err(invalid(format!("t_bar = {t_bar} must be positive")));
    }
    let a1 = if eps > 0.0 { eps * (-eps.ln()).powf(p) } else { 0.0 };
    let a2 = if eta > 0.0 { (-PI * PI * t_bar / (16.0 * eta * eta)).exp() } else { 0.0 };
    Ok(a1.max(a2).max(f64::MIN_POSITIVE))
}

/// Gradiometry rule: α₁ = ε(−ln ε)^{2p}; α₂ balances the exponential part
/// of the η term, (R^{−√(π/η)}/α)², against (−ln α)^{−2p}.
pub fn choose_alpha_gradiometry(eps: f64, eta: f64, p: f64, radius: f64) -> Result<f64> {
    check_noise(eps, eta, p)?;
    if !(radius > 1.0) {
        return Err(invalid(format!("R = {radius} must exceed 1")));
    }
    let a1 = if eps > 0.0 { eps * (-eps.ln()).powf(2.0 * p) } else { 0.0 };
    let a2 = if eta > 0.0 { gradiometry_alpha2(eta, p, radius) } else { 0.0 };
    Ok(a1.max(a2).max(f64::MIN_POSITIVE))
}

/// Root of x + p ln x = √(π/η) ln R in x = −ln α.
fn gradiometry_alpha2(eta: f64, p: f64, radius: f64) -> f64 {
    let a = (PI / eta).sqrt() * radius.ln();
    let f = |x: f64| x + p * x.ln() - a;
    let (mut lo, mut hi) = (1e-300f64, a.max(1.0) + 1.0);
    while f(hi) < 0.0 {
        hi *= 2.0;
    }
    for _ in 0..400 {
        let mid = if hi / lo > 4.0 { (lo * hi).sqrt() } else { 0.5 * (lo + hi) };
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    (-0.5 * (lo + hi)).exp()
}

/// The two balanced quantities at α: ((R^{−√(π/η)})/α)² and (−ln α)^{−2p}.
pub fn gradiometry_alpha_terms(alpha: f64, eta: f64, p: f64, radius: f64) -> (f64, f64) {
    let decay = -(PI / eta).sqrt() * radius.ln();
    ((2.0 * (decay - alpha.ln())).exp(), (-alpha.ln()).powf(-2.0 * p))
}
