//! Single-cell drivers behind the CLI: one noise instance, one solve, one
//! source-condition check.

use super::config::ExperimentConfig;
use super::study::{draw_noise, rule_alpha, study_source, vsc_index};
use crate::error::Result;
use crate::noise::NoiseInstance;
use crate::operators::DiagonalOperator;
use crate::solver::{bregman, fit_vsc_beta, solve, vsc_check, Fidelity, SolveResult, TikhonovProblem, VscReport};
use crate::spectral::Grid;
use std::sync::Arc;

/// Noise of the cell (ε, η) for `seed`, exactly as the rate study draws it.
pub fn cell_noise(
    cfg: &ExperimentConfig,
    op: &DiagonalOperator,
    grid: &Arc<Grid>,
    eps: f64,
    eta: f64,
    seed: u64,
) -> Result<NoiseInstance> {
    let src = study_source(cfg, op, grid, seed)?;
    let gdag = op.apply(&src.udag)?.synthesize();
    draw_noise(cfg, grid, &gdag, eps, eta, seed)
}

#[derive(Clone, Debug)]
pub struct CellOutcome {
    pub alpha: f64,
    pub noise: NoiseInstance,
    pub result: SolveResult,
    /// ‖f̂ − u†‖²
    pub bregman_error: f64,
}

/// Solve one cell. `alpha` overrides the a-priori rule.
pub fn run_cell(
    cfg: &ExperimentConfig,
    eps: f64,
    eta: f64,
    seed: u64,
    alpha: Option<f64>,
    fidelity: Fidelity,
) -> Result<CellOutcome> {
    cfg.validate()?;
    let op = cfg.operator()?;
    let grid = op.standard_grid()?;
    let src = study_source(cfg, &op, &grid, seed)?;
    let gdag = op.apply(&src.udag)?.synthesize();
    let noise = draw_noise(cfg, &grid, &gdag, eps, eta, seed)?;
    let alpha = match alpha {
        Some(a) => a,
        None => rule_alpha(cfg, eps, eta)?,
    };
    let gobs = gdag.iter().zip(&noise.xi).map(|(a, b)| a + b).collect();
    let prob = TikhonovProblem::new(op, grid, gobs, alpha, fidelity)?;
    let result = solve(&prob, &cfg.solver)?;
    let bregman_error = bregman(&result.f_hat, &src.udag)?;
    Ok(CellOutcome { alpha, noise, result, bregman_error })
}

/// Fit β′ on `samples` probes (seed) and re-test β′·(1 + 1e-6) on fresh
/// probes (seed + 1).
pub fn run_vsc(cfg: &ExperimentConfig, seed: u64, samples: usize) -> Result<(f64, VscReport)> {
    cfg.validate()?;
    let op = cfg.operator()?;
    let grid = op.standard_grid()?;
    let src = study_source(cfg, &op, &grid, seed)?;
    let phi = vsc_index(cfg);
    let b = fit_vsc_beta(&op, &src.udag, &phi, cfg.beta, samples, seed, &[])?;
    let report = vsc_check(&op, &src.udag, &phi.with_scale(b * (1.0 + 1e-6)), cfg.beta, samples, seed.wrapping_add(1))?;
    Ok((b, report))
}
