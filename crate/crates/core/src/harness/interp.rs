//! Sampling study of the interpolation inequality
//! ‖g‖_∞ ≤ γ(δ)‖g‖_{𝒜^λ} + ‖g‖_{L1}/δ.

use crate::analytic::{anorm, check_from_norms, InterpProfile, WeightFunction};
use crate::error::{invalid, Result};
use crate::spectral::{Grid, Manifold, ManifoldKind, SpectralFunction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq)]
pub struct InterpReport {
    pub checks: usize,
    /// (sample seed, δ) of every violation
    pub violations: Vec<(u64, f64)>,
    /// max lhs/rhs over all checks
    pub max_ratio: f64,
    pub delta0: f64,
}

/// n log-spaced δ from δ₀·10⁻³ up to δ₀.
pub fn default_delta_grid(profile: &InterpProfile, n: usize) -> Vec<f64> {
    let d0 = profile.delta0();
    if n == 1 {
        return vec![d0];
    }
    (0..n).map(|i| d0 * 10f64.powf(-3.0 * (n - 1 - i) as f64 / (n - 1) as f64)).collect()
}

/// Random g with coefficients u·e^{−λ*(degree)}, u uniform in [−1, 1]:
/// Fourier coefficients on the circle, Chebyshev coefficients on the
/// interval, real harmonic coefficients (divided by 2l+1) on the sphere.
pub fn sample_ball_function(grid: &Arc<Grid>, weight: &WeightFunction, seed: u64) -> Result<SpectralFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = grid.degree();
    let decay: Vec<f64> = (0..=n).map(|m| (-weight.conjugate(m as f64)).exp()).collect();
    match grid.kind() {
        ManifoldKind::Circle => {
            let z: Vec<(f64, f64)> = (0..=n).map(|_| (rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))).collect();
            SpectralFunction::from_fourier(grid.clone(), |k| {
                num_complex::Complex64::new(z[k].0, if k == 0 { 0.0 } else { z[k].1 }) * decay[k]
            })
        }
        ManifoldKind::Interval => {
            let a: Vec<f64> = decay.iter().map(|d| rng.gen_range(-1.0..=1.0) * d).collect();
            SpectralFunction::from_chebyshev(grid.clone(), &a)
        }
        ManifoldKind::Sphere => SpectralFunction::from_fn(grid.clone(), |_, i| {
            let l = grid.basis_degree(i);
            rng.gen_range(-1.0..=1.0) * decay[l] / (2 * l + 1) as f64
        }),
    }
}

/// Check the inequality for `samples` random functions (seeds seed,
/// seed+1, …) at every δ of `deltas`.
pub fn run_interp_study(
    manifold: ManifoldKind,
    weight: &WeightFunction,
    degree: usize,
    samples: usize,
    deltas: &[f64],
    seed: u64,
) -> Result<InterpReport> {
    let profile = InterpProfile::new(Manifold::new(manifold), weight.clone())?;
    if deltas.iter().any(|&d| !(d > 0.0 && d <= profile.delta0() * (1.0 + 1e-12))) {
        return Err(invalid(format!("deltas must lie in (0, {}]", profile.delta0())));
    }
    let grid = Grid::standard(manifold, degree)?;
    let gammas: Vec<f64> = deltas.iter().map(|&d| profile.gamma(d)).collect::<Result<_>>()?;
    // samples are independent: norms are computed in parallel, merged in seed order
    let seeds: Vec<u64> = (0..samples as u64).map(|i| seed.wrapping_add(i)).collect();
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(seeds.len().max(1));
    let chunk = seeds.len().div_ceil(workers).max(1);
    let norms: Vec<(f64, f64, f64)> = std::thread::scope(|scope| {
        let handles: Vec<_> = seeds
            .chunks(chunk)
            .map(|part| {
                let grid = &grid;
                scope.spawn(move || -> Result<Vec<(f64, f64, f64)>> {
                    part.iter()
                        .map(|&s| {
                            let g = sample_ball_function(grid, weight, s)?;
                            let (sup, l1) = g.sup_l1();
                            Ok((sup, l1, anorm(&g, weight)?))
                        })
                        .collect()
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("interpolation worker panicked")).collect::<Result<Vec<_>>>()
    })?
    .into_iter()
    .flatten()
    .collect();
    let mut report = InterpReport { checks: 0, violations: Vec::new(), max_ratio: 0.0, delta0: profile.delta0() };
    for (&s, &(sup, l1, a)) in seeds.iter().zip(&norms) {
        for (&d, &gm) in deltas.iter().zip(&gammas) {
            let c = check_from_norms(sup, l1, a, gm, d);
            report.checks += 1;
            if c.rhs > 0.0 {
                report.max_ratio = report.max_ratio.max(c.lhs / c.rhs);
            }
            if !c.holds {
                report.violations.push((s, d));
            }
        }
    }
    Ok(report)
}
