use crate::error::{invalid, Result};
use std::fmt;
use std::sync::Arc;

const GOLDEN: f64 = 0.618_033_988_749_894_8;

#[derive(Clone)]
pub enum WeightKind {
    /// λ(r) = r²/(4t̄), B = ∞.
    Heat { t_bar: f64 },
    /// λ(r) = -4 ln(R - e^r) on [0, ln R).
    Gradiometry { radius: f64 },
    /// λ = 0 on [0, B], ∞ beyond.
    Indicator { bound: f64 },
    /// Any non-decreasing λ on [0, bound).
    Custom { bound: f64, eval: Arc<dyn Fn(f64) -> f64 + Send + Sync> },
}

/// Increasing weight λ: [0, ∞) → ℝ ∪ {∞} that is finite on [0, B_λ).
#[derive(Clone)]
pub struct WeightFunction {
    kind: WeightKind,
    name: String,
}

impl fmt::Debug for WeightFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeightFunction({})", self.name)
    }
}

impl WeightFunction {
    pub fn heat(t_bar: f64) -> Result<Self> {
        if !(t_bar > 0.0 && t_bar.is_finite()) {
            return Err(invalid(format!("t_bar = {t_bar} must be positive")));
        }
        Ok(WeightFunction { kind: WeightKind::Heat { t_bar }, name: format!("heat(t_bar={t_bar})") })
    }

    pub fn gradiometry(radius: f64) -> Result<Self> {
        if !(radius > 1.0 && radius.is_finite()) {
            return Err(invalid(format!("R = {radius} must exceed 1")));
        }
        Ok(WeightFunction {
            kind: WeightKind::Gradiometry { radius },
            name: format!("gradiometry(R={radius})"),
        })
    }

    pub fn indicator(bound: f64) -> Result<Self> {
        if !(bound > 0.0 && bound.is_finite()) {
            return Err(invalid(format!("bound = {bound} must be positive")));
        }
        Ok(WeightFunction { kind: WeightKind::Indicator { bound }, name: format!("indicator(B={bound})") })
    }

    pub fn custom(
        name: impl Into<String>,
        bound: f64,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if !(bound > 0.0) {
            return Err(invalid("custom weight needs a positive bound"));
        }
        Ok(WeightFunction { kind: WeightKind::Custom { bound, eval: Arc::new(eval) }, name: name.into() })
    }

    pub fn kind(&self) -> &WeightKind {
        &self.kind
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// B_λ, the supremum of the finite domain (may be +∞).
    pub fn bound(&self) -> f64 {
        match &self.kind {
            WeightKind::Heat { .. } => f64::INFINITY,
            WeightKind::Gradiometry { radius } => radius.ln(),
            WeightKind::Indicator { bound } | WeightKind::Custom { bound, .. } => *bound,
        }
    }

    pub fn eval(&self, r: f64) -> f64 {
        let r = r.abs();
        match &self.kind {
            WeightKind::Heat { t_bar } => r * r / (4.0 * t_bar),
            WeightKind::Gradiometry { radius } => {
                let d = radius - r.exp();
                if d > 0.0 {
                    -4.0 * d.ln()
                } else {
                    f64::INFINITY
                }
            }
            WeightKind::Indicator { bound } => {
                if r <= *bound {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            WeightKind::Custom { bound, eval } => {
                if r < *bound {
                    eval(r)
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    /// Closed-form Fenchel conjugate when one is known.
    pub fn conjugate_closed(&self, s: f64) -> Option<f64> {
        match &self.kind {
            WeightKind::Heat { t_bar } => Some(s * s * t_bar),
            WeightKind::Gradiometry { radius } => Some(gradiometry_conjugate(*radius, s)),
            WeightKind::Indicator { bound } => Some(bound * s),
            WeightKind::Custom { .. } => None,
        }
    }

    /// λ*(s) = sup_{r ≥ 0} [s r - λ(r)].
    pub fn conjugate(&self, s: f64) -> f64 {
        self.conjugate_closed(s).unwrap_or_else(|| self.conjugate_numeric(s))
    }

    /// Numeric conjugate: 512-point log grid plus golden-section refinement.
    pub fn conjugate_numeric(&self, s: f64) -> f64 {
        let h = |r: f64| s * r - self.eval(r);
        let b = self.bound();
        let r_hi = if b.is_finite() {
            b * (1.0 - 1e-9)
        } else {
            let mut r = 1.0;
            while r < 1e150 && h(2.0 * r) > h(r) {
                r *= 2.0;
            }
            4.0 * r
        };
        let lo = 1e-6f64.min(r_hi * 1e-3);
        let n = 512;
        let mut rs = Vec::with_capacity(n + 1);
        rs.push(0.0);
        let ratio = (r_hi / lo).ln() / (n - 1) as f64;
        for i in 0..n {
            rs.push(lo * (ratio * i as f64).exp());
        }
        let vals: Vec<f64> = rs.iter().map(|&r| h(r)).collect();
        let best = (0..vals.len()).max_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap_or(0);
        let a = rs[best.saturating_sub(1)];
        let c = rs[(best + 1).min(rs.len() - 1)];
        let refined = golden_max(h, a, c, 1e-10);
        refined.max(vals[best])
    }
}

/// Conjugate of -4 ln(R - e^r). The interior maximizer e^r = sR/(4+s) lies in
/// the domain only for s ≥ 4/(R-1); below that the sup sits at r = 0.
pub fn gradiometry_conjugate(radius: f64, s: f64) -> f64 {
    if s * (radius - 1.0) >= 4.0 {
        s * (s * radius / (4.0 + s)).ln() + 4.0 * (4.0 * radius / (4.0 + s)).ln()
    } else {
        4.0 * (radius - 1.0).ln()
    }
}

/// Maximize a unimodal function on [a, b]; returns the best value seen.
pub(crate) fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut x1 = b - GOLDEN * (b - a);
    let mut x2 = a + GOLDEN * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut best = f(a).max(f(b)).max(f1).max(f2);
    for _ in 0..200 {
        if (b - a).abs() <= tol * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + GOLDEN * (b - a);
            f2 = f(x2);
            best = best.max(f2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - GOLDEN * (b - a);
            f1 = f(x1);
            best = best.max(f1);
        }
    }
    best
}

/// Like [`golden_max`] but returns the maximizer.
pub(crate) fn golden_argmax(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut x1 = b - GOLDEN * (b - a);
    let mut x2 = a + GOLDEN * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..300 {
        if (b - a).abs() <= tol * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + GOLDEN * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - GOLDEN * (b - a);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heat_conjugate() {
        let w = WeightFunction::heat(0.7).unwrap();
        for s in [0.0, 1.0, 3.5, 40.0, 100.0] {
            let want = s * s * 0.7;
            let got = w.conjugate_numeric(s);
            assert!((got - want).abs() <= 1e-8 * want.max(1.0), "s={s} {got} {want}");
        }
    }

    #[test]
    fn indicator_conjugate() {
        let w = WeightFunction::indicator(1.3).unwrap();
        for s in [0.0, 0.5, 7.0] {
            assert!((w.conjugate_numeric(s) - 1.3 * s).abs() < 1e-8);
        }
    }

    #[test]
    fn gradiometry_closed_form_and_boundary_regime() {
        let r: f64 = 2.0;
        let w = WeightFunction::gradiometry(r).unwrap();
        for s in [4.0, 5.0, 12.0, 60.0] {
            let e = ((4.0 + s) / (4.0 * r)).powi(4) * ((4.0 + s) / (s * r)).powf(s);
            assert!(((-w.conjugate(s)).exp() - e).abs() < 1e-12 * e);
        }
        // below s = 4/(R-1) the sup is at r = 0
        assert_eq!(gradiometry_conjugate(3.0, 1.0), 4.0 * 2f64.ln());
        assert_eq!(gradiometry_conjugate(2.0, 3.0), 0.0);
        for s in [0.5, 1.0, 1.9, 2.5] {
            let n = WeightFunction::gradiometry(3.0).unwrap().conjugate_numeric(s);
            assert!((n - gradiometry_conjugate(3.0, s)).abs() < 1e-8);
        }
    }

    #[test]
    fn eval_domain() {
        let w = WeightFunction::gradiometry(2.0).unwrap();
        assert_eq!(w.eval(0.0), 0.0);
        assert!(w.eval(2f64.ln()).is_infinite());
        assert!(w.eval(1.0).is_infinite());
        assert!(WeightFunction::gradiometry(1.0).is_err());
    }
}
