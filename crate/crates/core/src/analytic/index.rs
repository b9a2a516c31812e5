use super::weight::golden_argmax;
use std::f64::consts::E;

/// φ_p(t) = (-ln t)^(-p) on (0, 1/e], 0 at 0, continued linearly with slope
/// p·e beyond 1/e. Increasing everywhere; concave on [0, e^{-(p+1)}] and on
/// [1/e, ∞), convex in between.
pub fn phi_p(t: f64, p: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t <= 1.0 / E {
        (-t.ln()).powf(-p)
    } else {
        1.0 + p * E * (t - 1.0 / E)
    }
}

/// φ_p evaluated at t = e^x, exact for tiny t where e^x underflows.
pub fn phi_p_log(x: f64, p: f64) -> f64 {
    if x <= -1.0 {
        (-x).powf(-p)
    } else {
        phi_p(x.exp(), p)
    }
}

/// Concave increasing index function with φ(0) = 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum IndexFunction {
    /// scale · φ_p
    Log { p: f64, scale: f64 },
    /// slope · t
    Linear { slope: f64 },
}

impl IndexFunction {
    pub fn log(p: f64) -> Self {
        IndexFunction::Log { p, scale: 1.0 }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            IndexFunction::Log { p, scale } => scale * phi_p(t, p),
            IndexFunction::Linear { slope } => slope * t,
        }
    }

    pub fn with_scale(&self, s: f64) -> Self {
        match *self {
            IndexFunction::Log { p, scale } => IndexFunction::Log { p, scale: scale * s },
            IndexFunction::Linear { slope } => IndexFunction::Linear { slope: slope * s },
        }
    }

    /// ψ(α) = sup_{τ ≥ 0} [φ(τ) - τ/α]; +∞ when the sup is unbounded.
    pub fn psi(&self, alpha: f64) -> f64 {
        assert!(alpha > 0.0, "psi needs alpha > 0");
        match *self {
            IndexFunction::Linear { slope } => {
                if slope * alpha <= 1.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            IndexFunction::Log { p, scale } => {
                if scale <= 0.0 {
                    return 0.0;
                }
                // beyond 1/e φ is linear with slope scale·p·e
                if 1.0 / alpha < scale * p * E {
                    return f64::INFINITY;
                }
                // maximize over u = ln τ ∈ [-5000, -1], sampled densely near -1
                // where φ_p is not concave
                let f = |u: f64| scale * (-u).powf(-p) - u.exp() / alpha;
                let n = 800;
                let vmax = 5000f64.ln();
                let us: Vec<f64> = (0..=n).rev().map(|i| -(vmax * i as f64 / n as f64).exp()).collect();
                let vals: Vec<f64> = us.iter().map(|&u| f(u)).collect();
                let best = (0..vals.len()).max_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap_or(0);
                let a = us[best.saturating_sub(1)];
                let b = us[(best + 1).min(n)];
                let (_, v) = golden_argmax(f, a, b, 1e-14);
                v.max(vals[best]).max(0.0)
            }
        }
    }
}
