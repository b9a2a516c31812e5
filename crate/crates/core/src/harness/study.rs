//! η- and ε-sweeps of the L1 Tikhonov estimator with a-posteriori bound
//! checks and rate fits.

use super::config::{AlphaRule, ExperimentConfig, Problem};
use crate::analytic::IndexFunction;
use crate::error::Result;
use crate::noise::{make_noise, NoiseInstance, NoiseSpec};
use crate::operators::{make_source_with, source_from, DiagonalOperator, SourceElement};
use crate::solver::{
    bregman, choose_alpha_gradiometry, choose_alpha_heat, energy_bound_check, fit_vsc_beta, operator_gamma,
    rate_bounds, solve_l1, solve_l2, EnergyCheck, Fidelity, OperatorGamma, RateBounds, TikhonovProblem,
};
use crate::spectral::{Grid, SpectralFunction};
use std::sync::Arc;

/// One CSV row: a (cell, seed) pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateRow {
    pub eps: f64,
    pub eta: f64,
    pub alpha: f64,
    /// ‖f̂ − u†‖²
    pub bregman_error: f64,
    /// ‖Tf̂ − g†‖_{L1} against exact data
    pub residual_l1: f64,
    pub iterations: usize,
    pub converged: bool,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sweep {
    /// ε = 0, η > 0
    Eta,
    /// η = 0, ε > 0
    Eps,
    /// ε = η = 0
    Zero,
}

/// Everything recorded for one (cell, seed) beyond the CSV row.
#[derive(Clone, Debug)]
pub struct CellReport {
    pub sweep: Sweep,
    pub row: RateRow,
    pub eps_measured: f64,
    pub eta_measured: f64,
    /// ‖f̂₂ − u†‖² of the r = 2 estimator at the same α
    pub l2_error: Option<f64>,
    /// None when 2η exceeds δ₀
    pub energy: Option<EnergyCheck>,
    pub bounds: RateBounds,
    /// fitted source-condition constant for this seed
    pub beta_prime: f64,
}

impl CellReport {
    pub fn violated(&self) -> bool {
        self.energy.map(|e| !e.holds).unwrap_or(false) || !self.bounds.holds()
    }
}

/// Least-squares line y = slope·x + intercept.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub n: usize,
}

pub fn fit_line(x: &[f64], y: &[f64]) -> Option<LineFit> {
    let n = x.len();
    if n < 2 || y.len() != n {
        return None;
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    if !(sxx > 0.0) {
        return None;
    }
    let slope = sxy / sxx;
    let r2 = if syy > 0.0 { sxy * sxy / (sxx * syy) } else { 1.0 };
    Some(LineFit { slope, intercept: my - slope * mx, r2, n })
}

#[derive(Clone, Debug)]
pub struct RateStudy {
    pub rows: Vec<RateRow>,
    pub cells: Vec<CellReport>,
    /// η₀ = δ₀/4; η-cells above it are outside the fit window
    pub eta0: f64,
    /// ln D̄ vs ln η over cells with η ≤ η₀ (D̄ = geometric mean over seeds)
    pub eta_fit: Option<LineFit>,
    /// same fit over every η-cell
    pub eta_fit_all: Option<LineFit>,
    /// D̄ vs (−ln ε)^{−k} (D̄ = arithmetic mean over seeds)
    pub eps_fit: Option<LineFit>,
    pub eta_exponent: f64,
    pub eps_power: f64,
    pub violations: usize,
    pub nonconverged: usize,
    /// (cells where r = 1 beats r = 2, cells compared)
    pub l1_wins: (usize, usize),
}

impl RateStudy {
    pub fn eta_slope_ok(&self) -> bool {
        self.eta_fit
            .map(|f| (f.slope - self.eta_exponent).abs() <= 0.3 * self.eta_exponent)
            .unwrap_or(false)
    }
    pub fn eps_fit_ok(&self) -> bool {
        self.eps_fit.map(|f| f.r2 >= 0.9).unwrap_or(false)
    }
    pub fn l1_win_fraction(&self) -> f64 {
        if self.l1_wins.1 == 0 {
            return f64::NAN;
        }
        self.l1_wins.0 as f64 / self.l1_wins.1 as f64
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Noise seed of a cell; independent of the order in which cells run.
pub fn cell_seed(seed: u64, eps: f64, eta: f64) -> u64 {
    splitmix(splitmix(splitmix(seed) ^ eps.to_bits()) ^ eta.to_bits())
}

/// Source element of the study for one seed.
pub fn study_source(cfg: &ExperimentConfig, op: &DiagonalOperator, grid: &Arc<Grid>, seed: u64) -> Result<SourceElement> {
    let s = make_source_with(op, cfg.p, seed, cfg.profile, grid)?;
    source_from(op, cfg.p, s.w.scaled(cfg.source_norm))
}

/// α of the a-priori rule for nominal (ε, η).
pub fn rule_alpha(cfg: &ExperimentConfig, eps: f64, eta: f64) -> Result<f64> {
    match cfg.problem {
        Problem::Heat => choose_alpha_heat(eps, eta, cfg.p, cfg.t_bar),
        Problem::Gradiometry => choose_alpha_gradiometry(eps, eta, cfg.p, cfg.radius),
    }
}

/// Index function of the source condition: φ_p (heat) or φ_{2p}
/// (gradiometry), matching the error rates in ε.
pub fn vsc_index(cfg: &ExperimentConfig) -> IndexFunction {
    IndexFunction::log(cfg.eps_power())
}

struct Solved {
    sweep: Sweep,
    eps: f64,
    eta: f64,
    alpha: f64,
    eps_measured: f64,
    eta_measured: f64,
    f_hat: SpectralFunction,
    error: f64,
    residual: f64,
    iterations: usize,
    converged: bool,
    l2_error: Option<f64>,
}

fn cells(cfg: &ExperimentConfig) -> Vec<(Sweep, f64, f64)> {
    let mut out: Vec<(Sweep, f64, f64)> = cfg.eta_grid.iter().map(|&h| (Sweep::Eta, 0.0, h)).collect();
    out.extend(cfg.eps_grid.iter().map(|&e| (Sweep::Eps, e, 0.0)));
    if cfg.zero_cell {
        out.push((Sweep::Zero, 0.0, 0.0));
    }
    out
}

/// Impulses of amplitude `amplitude_factor`·max|g†| on the cell's mask.
pub(crate) fn draw_noise(
    cfg: &ExperimentConfig,
    grid: &Arc<Grid>,
    gdag: &[f64],
    eps: f64,
    eta: f64,
    seed: u64,
) -> Result<NoiseInstance> {
    let amp = cfg.amplitude_factor * gdag.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    let mut spec = NoiseSpec::new(eta, eps, amp, cell_seed(seed, eps, eta));
    spec.geometry = cfg.geometry;
    spec.signs = cfg.signs;
    make_noise(grid, &spec)
}

fn residual_l1(op: &DiagonalOperator, f: &SpectralFunction, gdag: &[f64]) -> Result<f64> {
    let v = op.apply(f)?.synthesize();
    Ok(v.iter().zip(gdag).zip(f.grid().weights()).map(|((a, b), w)| w * (a - b).abs()).sum())
}

#[allow(clippy::too_many_arguments)]
fn solve_cell(
    cfg: &ExperimentConfig,
    op: &DiagonalOperator,
    grid: &Arc<Grid>,
    src: &SourceElement,
    gdag: &[f64],
    sweep: Sweep,
    eps: f64,
    eta: f64,
    seed: u64,
) -> Result<Solved> {
    let noise = draw_noise(cfg, grid, gdag, eps, eta, seed)?;
    let gobs: Vec<f64> = gdag.iter().zip(&noise.xi).map(|(a, b)| a + b).collect();
    let alphas = match (sweep, cfg.alpha_rule) {
        (Sweep::Zero, _) => vec![cfg.zero_alpha],
        (_, AlphaRule::Paper) => vec![rule_alpha(cfg, eps, eta)?],
        (_, AlphaRule::FixedGrid) => cfg.alpha_grid.clone(),
    };
    let mut best: Option<Solved> = None;
    for alpha in alphas {
        let prob = TikhonovProblem::new(op.clone(), grid.clone(), gobs.clone(), alpha, Fidelity::L1)?;
        let r = solve_l1(&prob, &cfg.solver)?;
        let error = bregman(&r.f_hat, &src.udag)?;
        if best.as_ref().map(|b| error < b.error).unwrap_or(true) {
            best = Some(Solved {
                sweep,
                eps,
                eta,
                alpha,
                eps_measured: noise.epsilon_measured,
                eta_measured: noise.eta_measured,
                residual: residual_l1(op, &r.f_hat, gdag)?,
                f_hat: r.f_hat,
                error,
                iterations: r.iterations,
                converged: r.converged,
                l2_error: None,
            });
        }
    }
    let mut s = best.expect("at least one alpha");
    if cfg.compare_l2 && sweep == Sweep::Eta {
        let prob = TikhonovProblem::new(op.clone(), grid.clone(), gobs, s.alpha, Fidelity::L2)?;
        s.l2_error = Some(bregman(&solve_l2(&prob)?.f_hat, &src.udag)?);
    }
    Ok(s)
}

/// Run every cell for every seed, check the bounds and fit the rates.
/// Non-converged solves are flagged in their row and the study continues.
pub fn run_rate_study(cfg: &ExperimentConfig) -> Result<RateStudy> {
    cfg.validate()?;
    let op = cfg.operator()?;
    let grid = op.standard_grid()?;
    let gamma: OperatorGamma = operator_gamma(&op)?.scaled(cfg.gamma_scale);
    let phi = vsc_index(cfg);
    let eta0 = gamma.delta0() / 4.0;
    let mut reports = Vec::new();
    for &seed in &cfg.seeds {
        let src = study_source(cfg, &op, &grid, seed)?;
        let gdag = op.apply(&src.udag)?.synthesize();
        let solved = cells(cfg)
            .into_iter()
            .map(|(sw, e, h)| solve_cell(cfg, &op, &grid, &src, &gdag, sw, e, h, seed))
            .collect::<Result<Vec<_>>>()?;
        let extra: Vec<SpectralFunction> = solved.iter().map(|s| s.f_hat.clone()).collect();
        let beta_prime = fit_vsc_beta(&op, &src.udag, &phi, cfg.beta, cfg.vsc_samples, seed, &extra)?;
        let phi_fit = phi.with_scale(beta_prime);
        for s in solved {
            let energy = if 2.0 * s.eta_measured <= gamma.delta0() {
                Some(energy_bound_check(&s.f_hat, &src.udag, s.alpha, s.eps_measured, s.eta_measured, &gamma)?)
            } else {
                None
            };
            let bounds =
                rate_bounds(s.error, s.residual, s.alpha, s.eps_measured, s.eta_measured, cfg.beta, &phi_fit, &gamma)?;
            reports.push(CellReport {
                sweep: s.sweep,
                row: RateRow {
                    eps: s.eps,
                    eta: s.eta,
                    alpha: s.alpha,
                    bregman_error: s.error,
                    residual_l1: s.residual,
                    iterations: s.iterations,
                    converged: s.converged,
                    seed,
                },
                eps_measured: s.eps_measured,
                eta_measured: s.eta_measured,
                l2_error: s.l2_error,
                energy,
                bounds,
                beta_prime,
            });
        }
    }
    Ok(summarize(cfg, reports, eta0))
}

fn mean_by<F: Fn(&[f64]) -> f64>(reports: &[CellReport], sweep: Sweep, key: impl Fn(&RateRow) -> f64, agg: F) -> Vec<(f64, f64)> {
    let mut xs: Vec<f64> = reports.iter().filter(|c| c.sweep == sweep).map(|c| key(&c.row)).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs.into_iter()
        .map(|x| {
            let d: Vec<f64> =
                reports.iter().filter(|c| c.sweep == sweep && key(&c.row) == x).map(|c| c.row.bregman_error).collect();
            (x, agg(&d))
        })
        .collect()
}

fn summarize(cfg: &ExperimentConfig, cells: Vec<CellReport>, eta0: f64) -> RateStudy {
    let geo = |d: &[f64]| (d.iter().map(|v| v.max(f64::MIN_POSITIVE).ln()).sum::<f64>() / d.len() as f64).exp();
    let arith = |d: &[f64]| d.iter().sum::<f64>() / d.len() as f64;
    let eta_pts = mean_by(&cells, Sweep::Eta, |r| r.eta, geo);
    let eps_pts = mean_by(&cells, Sweep::Eps, |r| r.eps, arith);
    let log_fit = |pts: &[&(f64, f64)]| {
        let x: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
        let y: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
        fit_line(&x, &y)
    };
    let inside: Vec<&(f64, f64)> = eta_pts.iter().filter(|p| p.0 <= eta0).collect();
    let all: Vec<&(f64, f64)> = eta_pts.iter().collect();
    let k = cfg.eps_power();
    let ex: Vec<f64> = eps_pts.iter().map(|p| (-p.0.ln()).powf(-k)).collect();
    let ey: Vec<f64> = eps_pts.iter().map(|p| p.1).collect();
    let compared: Vec<&CellReport> = cells.iter().filter(|c| c.l2_error.is_some()).collect();
    let wins = compared.iter().filter(|c| c.row.bregman_error <= c.l2_error.unwrap_or(f64::INFINITY)).count();
    let mut rows: Vec<RateRow> = cells.iter().map(|c| c.row).collect();
    sort_rows(&mut rows);
    RateStudy {
        violations: cells.iter().filter(|c| c.violated()).count(),
        nonconverged: cells.iter().filter(|c| !c.row.converged).count(),
        l1_wins: (wins, compared.len()),
        eta_fit: log_fit(&inside),
        eta_fit_all: log_fit(&all),
        eps_fit: fit_line(&ex, &ey),
        eta_exponent: cfg.eta_exponent(),
        eps_power: k,
        eta0,
        rows,
        cells,
    }
}

/// Lexicographic by cell (ε, η), then seed.
pub fn sort_rows(rows: &mut [RateRow]) {
    rows.sort_by(|a, b| a.eps.total_cmp(&b.eps).then(a.eta.total_cmp(&b.eta)).then(a.seed.cmp(&b.seed)));
}
