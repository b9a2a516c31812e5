//! Grid-sup estimators of the 𝒜^λ norms. Every estimator returns a lower
//! bound of the true supremum.

use super::weight::{golden_argmax, WeightFunction};
use crate::error::{Error, Result};
use crate::spectral::{legendre::legendre_all, ManifoldKind, SpectralFunction};
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::f64::consts::PI;
use std::sync::Arc;

/// Number of level lines sampled before local refinement.
const LINES: usize = 64;

/// 𝒜^λ norm of a function on any of the three manifolds.
pub fn anorm(g: &SpectralFunction, w: &WeightFunction) -> Result<f64> {
    match g.grid().kind() {
        ManifoldKind::Circle => anorm_circle(g, w),
        ManifoldKind::Interval => anorm_interval(g, w),
        ManifoldKind::Sphere => anorm_sphere(g, w),
    }
}

/// sup over the strip |Im z| < B of e^{-λ(|Im z|)} |g̃(z)|.
pub fn anorm_circle(g: &SpectralFunction, w: &WeightFunction) -> Result<f64> {
    let n = g.degree();
    let ghat: Vec<Complex64> = (0..=n as i64).map(|k| g.fourier(k)).collect::<Result<_>>()?;
    let abs_sum: f64 = ghat.iter().map(|z| z.norm()).sum();
    if abs_sum == 0.0 {
        return Ok(0.0);
    }
    let size = (4 * (2 * n + 1)).next_power_of_two();
    let fft = FftPlanner::new().plan_fft_inverse(size);
    let line = |y: f64| -> f64 {
        let mut best = f64::NEG_INFINITY;
        for sign in [1.0, -1.0] {
            let mut buf = vec![Complex64::new(0.0, 0.0); size];
            let yy = sign * y;
            // factor e^{n|y|} out to avoid overflow
            for (k, z) in ghat.iter().enumerate() {
                let kf = k as f64;
                buf[k] += z * (-kf * yy - n as f64 * y).exp();
                if k > 0 {
                    buf[size - k] += z.conj() * (kf * yy - n as f64 * y).exp();
                }
            }
            fft.process(&mut buf);
            let m = buf.iter().fold(0.0f64, |m, z| m.max(z.norm()));
            best = best.max(m.ln() + n as f64 * y);
        }
        best - w.eval(y)
    };
    let hi = line_range(w, n, abs_sum, line(0.0))?;
    Ok(maximize_lines(line, hi).exp())
}

/// sup over Bernstein ellipses ℰ_t, t < B, of e^{-λ(t)} |g̃|.
pub fn anorm_interval(g: &SpectralFunction, w: &WeightFunction) -> Result<f64> {
    let a = g.chebyshev()?;
    let est = EllipseEstimator::new(a.len().saturating_sub(1));
    est.norm(&a, w)
}

/// sup over x of the interval norm of (Mg)(x, ·); x restricted to grid nodes.
pub fn anorm_sphere(g: &SpectralFunction, w: &WeightFunction) -> Result<f64> {
    if g.grid().kind() != ManifoldKind::Sphere {
        return Err(Error::ManifoldMismatch("anorm_sphere on a non-sphere function".into()));
    }
    let l = g.degree();
    let conv = legendre_chebyshev_matrix(l);
    let est = EllipseEstimator::new(l);
    // (Chebyshev coefficients, sampled range, majorant) per node
    let mut nodes = Vec::new();
    for p in g.grid().points() {
        // (Mg)(x, t) = Σ_l g_l(x) P_l(t)
        let comps = g.degree_components(p)?;
        let mut a = vec![0.0; l + 1];
        for (ll, c) in comps.iter().enumerate() {
            for (n, an) in a.iter_mut().enumerate() {
                *an += conv[n * (l + 1) + ll] * c;
            }
        }
        if let Some(hi) = est.range(&a, w)? {
            let m = est.majorant(&a, w, hi);
            nodes.push((a, hi, m));
        }
    }
    // visiting nodes by decreasing majorant lets most of them be skipped
    nodes.sort_by(|x, y| y.2.total_cmp(&x.2));
    let mut best = 0.0f64;
    for (a, hi, m) in &nodes {
        if *m <= best {
            break;
        }
        best = best.max(est.norm_in(a, w, *hi));
    }
    Ok(best)
}

/// Row-major (n, l) Chebyshev coefficient n of P_l, halved-constant
/// convention.
fn legendre_chebyshev_matrix(l: usize) -> Vec<f64> {
    let k = l + 1;
    let mut m = vec![0.0; k * k];
    for j in 0..k {
        let theta = PI * (j as f64 + 0.5) / k as f64;
        let p = legendre_all(l, theta.cos());
        for n in 0..k {
            let c = (n as f64 * theta).cos() * 2.0 / k as f64;
            for ll in 0..k {
                m[n * k + ll] += c * p[ll];
            }
        }
    }
    m
}

struct EllipseEstimator {
    n: usize,
    size: usize,
    fft: Arc<dyn Fft<f64>>,
}

impl EllipseEstimator {
    fn new(n: usize) -> Self {
        let size = (4 * (2 * n + 1)).next_power_of_two();
        EllipseEstimator { n, size, fft: FftPlanner::new().plan_fft_inverse(size) }
    }

    fn norm(&self, a: &[f64], w: &WeightFunction) -> Result<f64> {
        Ok(match self.range(a, w)? {
            Some(hi) => self.norm_in(a, w, hi),
            None => 0.0,
        })
    }

    /// Sampled range [0, hi] of t, or None for the zero function.
    fn range(&self, a: &[f64], w: &WeightFunction) -> Result<Option<f64>> {
        let abs_sum: f64 = a.iter().map(|x| x.abs()).sum();
        if abs_sum == 0.0 {
            return Ok(None);
        }
        line_range(w, self.n, abs_sum, self.line(a, w, 0.0)).map(Some)
    }

    /// ln sup_θ |g̃(cosh(t + iθ))| − λ(t), sampled on one ellipse.
    fn line(&self, a: &[f64], w: &WeightFunction, t: f64) -> f64 {
        let n = self.n as f64;
        // w = e^{t+iθ}, T_k(z) = (w^k + w^{-k})/2
        let mut buf = vec![Complex64::new(0.0, 0.0); self.size];
        buf[0] = Complex64::new(0.5 * a[0] * (-n * t).exp(), 0.0);
        for (k, &ak) in a.iter().enumerate().skip(1) {
            let kf = k as f64;
            buf[k] += 0.5 * ak * (kf * t - n * t).exp();
            buf[self.size - k] += 0.5 * ak * (-kf * t - n * t).exp();
        }
        self.fft.process(&mut buf);
        let m = buf.iter().fold(0.0f64, |m, z| m.max(z.norm()));
        m.ln() + n * t - w.eval(t)
    }

    fn norm_in(&self, a: &[f64], w: &WeightFunction, hi: f64) -> f64 {
        maximize_lines(|t| self.line(a, w, t), hi).exp()
    }

    /// Upper bound of `norm_in`: on [tᵢ, tᵢ₊₁] the line value is at most
    /// ln S(tᵢ₊₁) − λ(tᵢ) with S(t) = |a₀|/2 + Σ|aₖ| cosh(kt), since both S
    /// and λ are non-decreasing.
    fn majorant(&self, a: &[f64], w: &WeightFunction, hi: f64) -> f64 {
        let n = self.n as f64;
        let ln_s = |t: f64| -> f64 {
            let scaled: f64 = a
                .iter()
                .enumerate()
                .map(|(k, ak)| {
                    let kf = k as f64;
                    let c = if k == 0 { (-n * t).exp() } else { (kf * t - n * t).exp() + (-kf * t - n * t).exp() };
                    0.5 * ak.abs() * c
                })
                .sum();
            scaled.ln() + n * t
        };
        let k = 4 * LINES;
        let ts: Vec<f64> = (0..=k).map(|i| hi * i as f64 / k as f64).collect();
        let m = ts.windows(2).map(|p| ln_s(p[1]) - w.eval(p[0])).fold(f64::NEG_INFINITY, f64::max);
        // headroom for rounding in the FFT evaluation
        m.exp() * (1.0 + 1e-9)
    }
}

/// Upper end of the sampled range of Im z (circle) or t (interval).
fn line_range(w: &WeightFunction, n: usize, abs_sum: f64, at_zero: f64) -> Result<f64> {
    let b = w.bound();
    if b.is_finite() {
        return Ok(b * (1.0 - 1e-9));
    }
    // beyond hi the crude bound ln Σ|c| + n y - λ(y) is far below the value at 0
    let floor = at_zero - 40.0;
    let mut hi = 1.0;
    while abs_sum.ln() + n as f64 * hi - w.eval(hi) >= floor {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::Divergent(format!(
                "{} grows too slowly to control the extension of a degree-{n} function",
                w.name()
            )));
        }
    }
    Ok(hi)
}

fn maximize_lines(f: impl Fn(f64) -> f64, hi: f64) -> f64 {
    let ys: Vec<f64> = (0..=LINES).map(|i| hi * i as f64 / LINES as f64).collect();
    let vals: Vec<f64> = ys.iter().map(|&y| f(y)).collect();
    let best = (0..vals.len()).max_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap_or(0);
    let lo = ys[best.saturating_sub(1)];
    let up = ys[(best + 1).min(LINES)];
    let (_, v) = golden_argmax(&f, lo, up, 1e-9);
    v.max(vals[best])
}
