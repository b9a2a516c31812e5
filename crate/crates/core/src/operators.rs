//! Forward operators diagonal in the manifold basis: periodic backwards heat
//! and satellite gradiometry.

use crate::analytic::{golden_max, phi_p_log, WeightFunction};
use crate::error::{invalid, Error, Result};
use crate::spectral::{Grid, Manifold, ManifoldKind, SpectralFunction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::sync::Arc;

/// Multipliers below this are flushed to it.
pub const SIGMA_FLOOR: f64 = 1e-300;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OperatorKind {
    /// σ_n = e^{-n² t̄} on the circle.
    Heat { t_bar: f64 },
    /// σ_l = (l+1)(l+2)/R^{l+3} on the sphere.
    Gradiometry { radius: f64 },
}

/// Operator acting by a real multiplier per basis degree.
#[derive(Clone, Debug)]
pub struct DiagonalOperator {
    manifold: Manifold,
    kind: OperatorKind,
    log_sigma: Vec<f64>,
    sigma: Vec<f64>,
    weight: WeightFunction,
    norm_bound: f64,
}

/// Backwards heat operator up to |n| <= bandwidth, mapping L² into
/// 𝒜^λ with λ(r) = r²/(4t̄).
pub fn heat_operator(t_bar: f64, bandwidth: usize) -> Result<DiagonalOperator> {
    let weight = WeightFunction::heat(t_bar)?;
    let log_sigma: Vec<f64> = (0..=bandwidth).map(|n| -((n * n) as f64) * t_bar).collect();
    Ok(DiagonalOperator::build(
        Manifold::circle(),
        OperatorKind::Heat { t_bar },
        log_sigma,
        weight,
        2.0 * f64::max(1.0, 1.0 / t_bar.sqrt()),
    ))
}

/// Gradiometry operator up to degree `max_degree`, mapping L²(S²) into
/// 𝒜^λ(S²) with λ(r) = -4 ln(R - e^r).
pub fn gradiometry_operator(radius: f64, max_degree: usize) -> Result<DiagonalOperator> {
    if !(radius > 1.0 && radius.is_finite()) {
        return Err(invalid(format!("R = {radius} must exceed 1")));
    }
    let weight = WeightFunction::gradiometry(radius)?;
    let log_sigma = (0..=max_degree)
        .map(|l| (((l + 1) * (l + 2)) as f64).ln() - (l as f64 + 3.0) * radius.ln())
        .collect();
    Ok(DiagonalOperator::build(
        Manifold::sphere(),
        OperatorKind::Gradiometry { radius },
        log_sigma,
        weight,
        gradiometry_norm_bound(radius),
    ))
}

/// sup_{0 ≤ r < ln R} (R - e^r)^4 Σ_m σ_m e^{mr} √((2m+1)/(4π)): bound on
/// ‖Tf‖_{𝒜^λ(S²)}/‖f‖_{L²} from |P_m| ≤ e^{mr} on ∂ℰ_r and
/// ‖Q_m f‖_∞ ≤ √((2m+1)/(4π)) ‖f‖_{L²}.
pub fn gradiometry_norm_bound(radius: f64) -> f64 {
    let series = |r: f64| -> f64 {
        let q = r.exp() / radius;
        let mut sum = 0.0;
        let mut qm = 1.0;
        for m in 0..1_000_000usize {
            let mf = m as f64;
            let term = (mf + 1.0) * (mf + 2.0) * qm * ((2.0 * mf + 1.0) / (4.0 * PI)).sqrt();
            sum += term;
            if m > 10 && term < 1e-17 * sum {
                break;
            }
            qm *= q;
        }
        (radius - r.exp()).powi(4) * sum / radius.powi(3)
    };
    let hi = radius.ln() * (1.0 - 1e-6);
    let n = 400;
    let rs: Vec<f64> = (0..=n).map(|i| hi * i as f64 / n as f64).collect();
    let vals: Vec<f64> = rs.iter().map(|&r| series(r)).collect();
    let best = (0..=n).max_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap_or(0);
    let refined = golden_max(series, rs[best.saturating_sub(1)], rs[(best + 1).min(n)], 1e-12);
    // small safety factor for the truncated tail
    refined.max(vals[best]) * (1.0 + 1e-9)
}

impl DiagonalOperator {
    fn build(
        manifold: Manifold,
        kind: OperatorKind,
        log_sigma: Vec<f64>,
        weight: WeightFunction,
        norm_bound: f64,
    ) -> Self {
        let sigma = log_sigma.iter().map(|l| l.exp().max(SIGMA_FLOOR)).collect();
        DiagonalOperator { manifold, kind, log_sigma, sigma, weight, norm_bound }
    }

    pub fn manifold(&self) -> Manifold {
        self.manifold
    }
    pub fn kind(&self) -> OperatorKind {
        self.kind
    }
    /// Largest degree the operator is defined for.
    pub fn degree(&self) -> usize {
        self.sigma.len() - 1
    }
    /// σ per degree (floored at [`SIGMA_FLOOR`]).
    pub fn multipliers(&self) -> &[f64] {
        &self.sigma
    }
    /// Exact ln σ per degree (no floor).
    pub fn log_multipliers(&self) -> &[f64] {
        &self.log_sigma
    }
    /// Weight of the analytic space the operator maps into.
    pub fn weight(&self) -> &WeightFunction {
        &self.weight
    }
    /// Bound on ‖T‖ from L² into 𝒜^λ.
    pub fn norm_bound(&self) -> f64 {
        self.norm_bound
    }

    /// Standard grid for this operator: 4x oversampled circle or
    /// (L+1) x (2L+2) sphere.
    pub fn standard_grid(&self) -> Result<Arc<Grid>> {
        Grid::standard(self.manifold.kind(), self.degree())
    }

    /// σ for every basis index of `grid`.
    pub fn multipliers_on(&self, grid: &Grid) -> Result<Vec<f64>> {
        self.check_grid(grid)?;
        Ok((0..grid.basis_dim()).map(|i| self.sigma[grid.basis_degree(i)]).collect())
    }

    fn check_grid(&self, grid: &Grid) -> Result<()> {
        if grid.kind() != self.manifold.kind() {
            return Err(Error::ManifoldMismatch(format!(
                "operator on {:?}, function on {:?}",
                self.manifold.kind(),
                grid.kind()
            )));
        }
        if grid.degree() > self.degree() {
            return Err(invalid(format!(
                "function degree {} exceeds operator degree {}",
                grid.degree(),
                self.degree()
            )));
        }
        Ok(())
    }

    fn scale(&self, f: &SpectralFunction, power: i32) -> Result<SpectralFunction> {
        self.check_grid(f.grid())?;
        let g = f.grid().clone();
        let c = f.coeffs().iter().enumerate().map(|(i, c)| c * self.sigma[g.basis_degree(i)].powi(power)).collect();
        SpectralFunction::new(g, c)
    }

    /// T f.
    pub fn apply(&self, f: &SpectralFunction) -> Result<SpectralFunction> {
        self.scale(f, 1)
    }

    /// T* g; the multipliers are real so this equals [`apply`](Self::apply).
    pub fn adjoint_apply(&self, g: &SpectralFunction) -> Result<SpectralFunction> {
        self.scale(g, 1)
    }

    /// T*T f.
    pub fn apply_normal(&self, f: &SpectralFunction) -> Result<SpectralFunction> {
        self.scale(f, 2)
    }

    /// Index of the source condition φ(T*T) that corresponds to H^p:
    /// p/2 for heat, p for gradiometry.
    pub fn source_index(&self, p: f64) -> f64 {
        match self.kind {
            OperatorKind::Heat { .. } => p / 2.0,
            OperatorKind::Gradiometry { .. } => p,
        }
    }
}

/// Spectral shape of the random representer w.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SourceProfile {
    /// i.i.d. uniform coefficients.
    Flat,
    /// i.i.d. uniform coefficients rescaled so that each degree shell
    /// carries energy exactly ∝ 1/(1+degree).
    Critical,
}

/// udag = φ_s(T*T) w with unit ‖w‖.
#[derive(Clone, Debug)]
pub struct SourceElement {
    pub udag: SpectralFunction,
    pub p: f64,
    pub w: SpectralFunction,
    pub norm_w: f64,
}

/// Random source element on the operator's standard grid.
pub fn make_source(op: &DiagonalOperator, p: f64, seed: u64) -> Result<SourceElement> {
    make_source_with(op, p, seed, SourceProfile::Flat, &op.standard_grid()?)
}

/// Random source element with a chosen profile on a given grid.
pub fn make_source_with(
    op: &DiagonalOperator,
    p: f64,
    seed: u64,
    profile: SourceProfile,
    grid: &Arc<Grid>,
) -> Result<SourceElement> {
    if !(p > 0.0) {
        return Err(invalid(format!("p = {p} must be positive")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c: Vec<f64> = (0..grid.basis_dim()).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    if profile == SourceProfile::Critical {
        // random direction inside each degree shell, shell energy 1/(1+d)
        let mut shell = vec![0.0; grid.degree() + 1];
        for (i, v) in c.iter().enumerate() {
            shell[grid.basis_degree(i)] += v * v;
        }
        for (i, v) in c.iter_mut().enumerate() {
            let d = grid.basis_degree(i);
            if shell[d] > 0.0 {
                *v /= (shell[d] * (1.0 + d as f64)).sqrt();
            }
        }
    }
    let w = SpectralFunction::new(grid.clone(), c)?;
    let nw = w.l2_norm();
    let w = w.scaled(1.0 / nw);
    source_from(op, p, w)
}

/// udag = φ_s(T*T) w for a given representer.
pub fn source_from(op: &DiagonalOperator, p: f64, w: SpectralFunction) -> Result<SourceElement> {
    op.check_grid(w.grid())?;
    let s = op.source_index(p);
    let g = w.grid().clone();
    let c = w
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| c * phi_p_log(2.0 * op.log_sigma[g.basis_degree(i)], s))
        .collect();
    let udag = SpectralFunction::new(g, c)?;
    let norm_w = w.l2_norm();
    Ok(SourceElement { udag, p, w, norm_w })
}

/// Sobolev H^p norm from coefficients: weights (1+n²)^p on the circle and
/// (1+l(l+1))^p on the sphere.
pub fn sobolev_norm(f: &SpectralFunction, p: f64) -> Result<f64> {
    let g = f.grid();
    let w = |d: f64| match g.kind() {
        ManifoldKind::Circle => Ok((1.0 + d * d).powf(p)),
        ManifoldKind::Sphere => Ok((1.0 + d * (d + 1.0)).powf(p)),
        ManifoldKind::Interval => Err(invalid("Sobolev norm is implemented for circle and sphere")),
    };
    let mut s = 0.0;
    for (i, c) in f.coeffs().iter().enumerate() {
        s += w(g.basis_degree(i) as f64)? * c * c;
    }
    Ok(s.sqrt())
}
