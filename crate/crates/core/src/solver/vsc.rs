//! Empirical check of the variational source condition with r = 1:
//!
//!   β‖f − u†‖² ≤ ‖f‖² − ‖u†‖² + φ(‖Tf − Tu†‖_{L1}).

use crate::analytic::IndexFunction;
use crate::error::{invalid, Result};
use crate::operators::DiagonalOperator;
use crate::spectral::SpectralFunction;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VscReport {
    /// probes checked (tail family plus random ones)
    pub samples: usize,
    pub violations: usize,
    /// Smallest value of RHS − LHS over the samples.
    pub margin: f64,
}

/// Nodal-quadrature L1 norm of T(f − u†).
fn residual_l1(op: &DiagonalOperator, e: &SpectralFunction) -> Result<f64> {
    let v = op.apply(e)?.synthesize();
    Ok(v.iter().zip(e.grid().weights()).map(|(a, w)| w * a.abs()).sum())
}

/// RHS − LHS at f.
pub fn vsc_margin(
    op: &DiagonalOperator,
    udag: &SpectralFunction,
    f: &SpectralFunction,
    phi: &IndexFunction,
    beta: f64,
) -> Result<f64> {
    let e = f.sub(udag)?;
    let tau = residual_l1(op, &e)?;
    Ok(f.norm_sq() - udag.norm_sq() + phi.eval(tau) - beta * e.norm_sq())
}

/// Constant β′ ≥ 0 needed at f for φ = β′·φ₀ (0 when f satisfies the
/// inequality without the φ term).
fn required_scale(op: &DiagonalOperator, udag: &SpectralFunction, f: &SpectralFunction, phi: &IndexFunction, beta: f64) -> Result<f64> {
    let e = f.sub(udag)?;
    let deficit = beta * e.norm_sq() - (f.norm_sq() - udag.norm_sq());
    if deficit <= 0.0 {
        return Ok(0.0);
    }
    let p = phi.eval(residual_l1(op, &e)?);
    Ok(if p > 0.0 { deficit / p } else { f64::INFINITY })
}

/// Probe elements around u†: the whole family u† − t·(u† − P_m u†),
/// t ∈ {0.5, 1, 2}, m = 0..=degree, which tests the high-frequency tail,
/// followed by `samples` random perturbations of log-uniform size up to ‖u†‖.
fn probes(udag: &SpectralFunction, samples: usize, seed: u64) -> Result<Vec<SpectralFunction>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid = udag.grid().clone();
    let radius = udag.l2_norm().max(1e-12);
    let top = udag.degree();
    let mut out = Vec::with_capacity(samples + 3 * (top + 1));
    for m in 0..=top {
        let tail = udag.sub(&udag.project(m))?;
        for t in [0.5, 1.0, 2.0] {
            out.push(udag.sub(&tail.scaled(t))?);
        }
    }
    for _ in 0..samples {
        let d = SpectralFunction::from_fn(grid.clone(), |_, _| rng.gen_range(-1.0..=1.0))?;
        let n = d.l2_norm().max(1e-300);
        let r = radius * 10f64.powf(rng.gen_range(-4.0..=0.0));
        out.push(udag.sub(&d.scaled(r / n))?);
    }
    Ok(out)
}

/// Sample f around u† and count violations of the inequality.
pub fn vsc_check(
    op: &DiagonalOperator,
    udag: &SpectralFunction,
    phi: &IndexFunction,
    beta: f64,
    samples: usize,
    seed: u64,
) -> Result<VscReport> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(invalid(format!("beta = {beta} must lie in (0, 1)")));
    }
    let mut violations = 0;
    let mut margin = f64::INFINITY;
    let probes = probes(udag, samples, seed)?;
    let total = probes.len();
    for f in probes {
        let m = vsc_margin(op, udag, &f, phi, beta)?;
        if m < -1e-12 * (1.0 + udag.norm_sq()) {
            violations += 1;
        }
        margin = margin.min(m);
    }
    Ok(VscReport { samples: total, violations, margin })
}

/// Smallest β′ such that φ = β′·`phi` satisfies the inequality on the probe
/// set plus the given extra points.
pub fn fit_vsc_beta(
    op: &DiagonalOperator,
    udag: &SpectralFunction,
    phi: &IndexFunction,
    beta: f64,
    samples: usize,
    seed: u64,
    extra: &[SpectralFunction],
) -> Result<f64> {
    let mut best: f64 = 0.0;
    for f in probes(udag, samples, seed)?.iter().chain(extra) {
        best = best.max(required_scale(op, udag, f, phi, beta)?);
    }
    Ok(best)
}
