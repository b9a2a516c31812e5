use super::norm::anorm;
use super::weight::WeightFunction;
use crate::error::{invalid, Error, Result};
use crate::spectral::{Manifold, ManifoldKind, SpectralFunction};
use std::f64::consts::PI;

/// Search horizon for m₀.
const M0_HORIZON: usize = 10_000;
/// Number of λ*(m) values memoized at construction.
const TABLE: usize = 1024;

/// Constants of the L∞–L1 interpolation inequality
/// ‖g‖_∞ ≤ γ(δ)‖g‖_{𝒜^λ} + ‖g‖_{L1}/δ on one manifold.
#[derive(Clone, Debug)]
pub struct InterpProfile {
    manifold: Manifold,
    weight: WeightFunction,
    m0: usize,
    a: f64,
    c_lambda: f64,
    d_lambda: f64,
    delta0: f64,
    conj: Vec<f64>,
}

/// Both sides of the interpolation inequality for one (g, δ).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InterpCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl InterpProfile {
    pub fn new(manifold: Manifold, weight: WeightFunction) -> Result<Self> {
        if !(weight.bound() > 0.0) {
            return Err(invalid("weight bound must be positive"));
        }
        let mut conj: Vec<f64> = (0..TABLE).map(|m| weight.conjugate(m as f64)).collect();
        let mut m0 = None;
        for m in 0..M0_HORIZON {
            if m + 1 >= conj.len() {
                conj.push(weight.conjugate((m + 1) as f64));
            }
            if conj[m] > 0.0 && conj[m + 1] - conj[m] > 0.0 {
                m0 = Some(m);
                break;
            }
        }
        let m0 = m0.ok_or_else(|| {
            Error::DegenerateWeight(format!("λ* not increasing and positive below m = {M0_HORIZON}"))
        })?;
        let a = conj[m0 + 1] - conj[m0];
        let (c_lambda, d_lambda) = match manifold.kind() {
            ManifoldKind::Circle | ManifoldKind::Interval => (2.0 / a.exp_m1(), 0.0),
            ManifoldKind::Sphere => {
                let q = -(-a).exp_m1(); // 1 - e^{-a}
                (1.0 / (2.0 * q * q) + 1.0 / (4.0 * q), 1.0 / (2.0 * q))
            }
        };
        let m0f = m0 as f64;
        let delta0 = match manifold.kind() {
            ManifoldKind::Circle => PI / (m0f + 0.5),
            ManifoldKind::Interval => 2.0 / ((m0f + 1.0) * (m0f + 1.0)),
            ManifoldKind::Sphere => 4.0 * PI / ((m0f + 1.0) * (m0f + 1.0)),
        };
        Ok(InterpProfile { manifold, weight, m0, a, c_lambda, d_lambda, delta0, conj })
    }

    pub fn manifold(&self) -> Manifold {
        self.manifold
    }
    pub fn weight(&self) -> &WeightFunction {
        &self.weight
    }
    pub fn m0(&self) -> usize {
        self.m0
    }
    /// Conjugate increment a = λ*(m₀+1) - λ*(m₀).
    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn c_lambda(&self) -> f64 {
        self.c_lambda
    }
    pub fn d_lambda(&self) -> f64 {
        self.d_lambda
    }
    pub fn delta0(&self) -> f64 {
        self.delta0
    }

    /// λ*(m), memoized for small m.
    pub fn lambda_star(&self, m: usize) -> f64 {
        match self.conj.get(m) {
            Some(v) => *v,
            None => self.weight.conjugate(m as f64),
        }
    }

    /// Degree of the projection used at resolution δ (may be negative for
    /// large δ).
    pub fn m_of_delta(&self, delta: f64) -> i64 {
        // nudge against representation error at exact breakpoints
        let fl = |x: f64| (x * (1.0 + 1e-12)).floor() as i64;
        match self.manifold.kind() {
            ManifoldKind::Circle => fl(PI / delta - 0.5),
            ManifoldKind::Interval => fl((2.0 / delta).sqrt()) - 1,
            ManifoldKind::Sphere => fl((4.0 * PI / delta).sqrt()) - 1,
        }
    }

    /// γ(δ) for 0 < δ ≤ δ₀.
    pub fn gamma(&self, delta: f64) -> Result<f64> {
        if !(delta > 0.0 && delta <= self.delta0 * (1.0 + 1e-12)) {
            return Err(invalid(format!("delta = {delta} outside (0, {}]", self.delta0)));
        }
        let m = self.m_of_delta(delta).max(self.m0 as i64) as usize;
        let e = (-self.lambda_star(m)).exp();
        Ok(match self.manifold.kind() {
            // the projection error on the circle carries the factor 2
            ManifoldKind::Circle => 2.0 * self.c_lambda * e,
            ManifoldKind::Interval => self.c_lambda * e,
            ManifoldKind::Sphere => (self.c_lambda + (4.0 * PI / delta).sqrt() * self.d_lambda) * e,
        })
    }

    /// Bound on ‖g - P_m g‖_∞ for ‖g‖_{𝒜^λ} ≤ 1 as used in the proofs:
    /// 2c_λ e^{-λ*(m)} (circle), c_λ e^{-λ*(m)} (interval, Chebyshev
    /// truncation), (c_λ + m d_λ) e^{-λ*(m)} (sphere).
    pub fn projection_bound(&self, m: usize) -> f64 {
        let e = (-self.lambda_star(m)).exp();
        match self.manifold.kind() {
            ManifoldKind::Circle => 2.0 * self.c_lambda * e,
            ManifoldKind::Interval => self.c_lambda * e,
            ManifoldKind::Sphere => (self.c_lambda + m as f64 * self.d_lambda) * e,
        }
    }
}

/// Check ‖g‖_∞ ≤ γ(δ)‖g‖_{𝒜^λ} + ‖g‖_{L1}/δ with quadrature norms and the
/// grid-sup norm estimator.
pub fn interp_check(g: &SpectralFunction, profile: &InterpProfile, delta: f64) -> Result<InterpCheck> {
    if g.grid().kind() != profile.manifold.kind() {
        return Err(Error::ManifoldMismatch("function and profile live on different manifolds".into()));
    }
    let gamma = profile.gamma(delta)?;
    let (sup, l1) = g.sup_l1();
    let a = anorm(g, &profile.weight)?;
    Ok(check_from_norms(sup, l1, a, gamma, delta))
}

/// Inequality check from precomputed norms.
pub fn check_from_norms(sup: f64, l1: f64, anorm: f64, gamma: f64, delta: f64) -> InterpCheck {
    // γ > 0 always; an underflowed γ must not turn an infinite norm into NaN
    let a_term = if anorm.is_infinite() { f64::INFINITY } else { gamma * anorm };
    let rhs = a_term + l1 / delta;
    InterpCheck { lhs: sup, rhs, holds: sup <= rhs * (1.0 + 1e-9) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;

    #[test]
    fn m_of_delta_examples() {
        let w = WeightFunction::heat(1.0).unwrap();
        let c = InterpProfile::new(Manifold::circle(), w.clone()).unwrap();
        assert_eq!(c.m_of_delta(PI / 2.0), 1);
        let i = InterpProfile::new(Manifold::interval(), w).unwrap();
        assert_eq!(i.m_of_delta(0.02), 9);
    }

    #[test]
    fn heat_profile_matches_closed_form_gamma() {
        for t_bar in [0.3, 1.0, 2.0] {
            let w = WeightFunction::heat(t_bar).unwrap();
            let p = InterpProfile::new(Manifold::circle(), w).unwrap();
            assert_eq!(p.m0(), 1);
            assert!((p.a() - 3.0 * t_bar).abs() < 1e-12);
            let norm_bound = 2.0 * f64::max(1.0, 1.0 / t_bar.sqrt());
            for delta in [0.01, 0.1, 0.5, 1.0, p.delta0()] {
                let m = (PI / delta - 0.5).floor();
                let bound = 8.0 * f64::max(1.0, 1.0 / t_bar.sqrt()) / (3.0 * t_bar).exp_m1() * (-m * m * t_bar).exp();
                let g = p.gamma(delta).unwrap() * norm_bound;
                assert!((g - bound).abs() <= 1e-12 * bound, "{g} {bound}");
            }
        }
    }

    #[test]
    fn gradiometry_profile_constants() {
        let w = WeightFunction::gradiometry(2.0).unwrap();
        let p = InterpProfile::new(Manifold::sphere(), w).unwrap();
        assert_eq!(p.m0(), 5);
        assert!(p.lambda_star(4) <= 0.0 && p.lambda_star(5) > 0.0);
        assert!((p.delta0() - 4.0 * PI / 36.0).abs() < 1e-15);
        assert!(p.gamma(p.delta0() * 1.01).is_err());
    }

    #[test]
    fn zero_and_constant_functions() {
        let w = WeightFunction::heat(1.0).unwrap();
        let p = InterpProfile::new(Manifold::circle(), w).unwrap();
        let g = Grid::circle(8, 32).unwrap();
        let z = SpectralFunction::zeros(g.clone());
        let c = interp_check(&z, &p, 0.5).unwrap();
        assert_eq!((c.lhs, c.rhs, c.holds), (0.0, 0.0, true));
        let mut one = SpectralFunction::zeros(g);
        one.coeffs_mut()[0] = (2.0 * PI).sqrt();
        for delta in [0.01, 0.3, p.delta0()] {
            let c = interp_check(&one, &p, delta).unwrap();
            assert!((c.lhs - 1.0).abs() < 1e-12);
            assert!(c.rhs >= 2.0 * PI / delta * (1.0 - 1e-12));
            assert!(c.holds);
        }
        assert!(interp_check(&z, &p, 0.0).is_err());
    }
}
