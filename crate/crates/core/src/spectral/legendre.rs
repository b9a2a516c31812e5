//! Legendre polynomials, Gauss–Legendre quadrature and normalized associated
//! Legendre functions.

use num_complex::Complex64;
use std::f64::consts::PI;

/// Gauss–Legendre nodes (ascending) and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        // Tricomi initial guess for the i-th largest root.
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, p_prev) = legendre_pair(n, z);
            dp = n as f64 * (z * p - p_prev) / (z * z - 1.0);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (p, p_prev) = legendre_pair(n, z);
        dp = if p.is_finite() { n as f64 * (z * p - p_prev) / (z * z - 1.0) } else { dp };
        x[n - 1 - i] = z;
        w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    (x, w)
}

/// (P_n(x), P_{n-1}(x)).
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut p0, mut p1) = (1.0, x);
    for k in 1..n {
        let k = k as f64;
        let p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}

/// P_0(x), ..., P_m(x) for real x.
pub fn legendre_all(m: usize, x: f64) -> Vec<f64> {
    let mut p = vec![0.0; m + 1];
    p[0] = 1.0;
    if m >= 1 {
        p[1] = x;
    }
    for k in 1..m {
        let kf = k as f64;
        p[k + 1] = ((2.0 * kf + 1.0) * x * p[k] - kf * p[k - 1]) / (kf + 1.0);
    }
    p
}

/// Legendre polynomial P_m at a complex argument (three-term recurrence).
pub fn legendre_eval(m: usize, z: Complex64) -> Complex64 {
    if m == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let (mut p0, mut p1) = (Complex64::new(1.0, 0.0), z);
    for k in 1..m {
        let k = k as f64;
        let p2 = (z * p1 * (2.0 * k + 1.0) - p0 * k) / (k + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// Index of (l, m), 0 <= m <= l, in a triangular table.
#[inline]
pub fn tri(l: usize, m: usize) -> usize {
    l * (l + 1) / 2 + m
}

/// Fully normalized associated Legendre functions
/// `sqrt((2l+1)/(4π) (l-m)!/(l+m)!) P_l^m(cos θ)` for `l <= lmax`,
/// without the Condon–Shortley phase. Layout follows [`tri`].
pub fn normalized_alf(lmax: usize, cos_t: f64, sin_t: f64) -> Vec<f64> {
    let mut p = vec![0.0; tri(lmax, lmax) + 1];
    p[0] = 0.5 / PI.sqrt();
    for m in 1..=lmax {
        let mf = m as f64;
        p[tri(m, m)] = ((2.0 * mf + 1.0) / (2.0 * mf)).sqrt() * sin_t * p[tri(m - 1, m - 1)];
    }
    for m in 0..lmax {
        let mf = m as f64;
        p[tri(m + 1, m)] = (2.0 * mf + 3.0).sqrt() * cos_t * p[tri(m, m)];
        for l in (m + 2)..=lmax {
            let lf = l as f64;
            let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
            let b = (((lf - 1.0).powi(2) - mf * mf) / (4.0 * (lf - 1.0).powi(2) - 1.0)).sqrt();
            p[tri(l, m)] = a * (cos_t * p[tri(l - 1, m)] - b * p[tri(l - 2, m)]);
        }
    }
    p
}

/// Real orthonormal spherical harmonics Y_{l,k}, |k| <= l <= lmax, at
/// (colatitude, azimuth). Index `l*l + l + k`; k > 0 uses cos(kφ), k < 0 uses
/// sin(|k|φ).
pub fn real_harmonics(lmax: usize, colatitude: f64, azimuth: f64) -> Vec<f64> {
    let alf = normalized_alf(lmax, colatitude.cos(), colatitude.sin());
    let mut y = vec![0.0; (lmax + 1) * (lmax + 1)];
    let s2 = std::f64::consts::SQRT_2;
    for l in 0..=lmax {
        let base = l * l + l;
        y[base] = alf[tri(l, 0)];
        for m in 1..=l {
            let (s, c) = (m as f64 * azimuth).sin_cos();
            y[base + m] = s2 * alf[tri(l, m)] * c;
            y[base - m] = s2 * alf[tri(l, m)] * s;
        }
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(12);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        // degree 22 monomial: ∫ x^22 = 2/23
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(22)).sum();
        assert!((s - 2.0 / 23.0).abs() < 1e-14);
        assert!(x.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn gauss_legendre_large_order() {
        let (x, w) = gauss_legendre(300);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-12);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x * x).sum();
        assert!((s - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn low_order_values() {
        let z = Complex64::new(0.3, -0.7);
        assert_eq!(legendre_eval(0, z), Complex64::new(1.0, 0.0));
        assert_eq!(legendre_eval(1, z), z);
        let p2 = (z * z * 3.0 - 1.0) / 2.0;
        assert!((legendre_eval(2, z) - p2).norm() < 1e-15);
        let r = legendre_all(5, 0.3);
        // P_5(x) = (63x^5 - 70x^3 + 15x)/8
        let x: f64 = 0.3;
        let p5 = (63.0 * x.powi(5) - 70.0 * x.powi(3) + 15.0 * x) / 8.0;
        assert!((r[5] - p5).abs() < 1e-15);
    }

    #[test]
    fn alf_matches_closed_forms() {
        let t: f64 = 0.7;
        let (c, s) = (t.cos(), t.sin());
        let p = normalized_alf(3, c, s);
        let k = |x: f64| x / (4.0 * PI).sqrt();
        assert!((p[tri(1, 0)] - k(3f64.sqrt() * c)).abs() < 1e-15);
        assert!((p[tri(2, 0)] - k(5f64.sqrt() * (3.0 * c * c - 1.0) / 2.0)).abs() < 1e-15);
        // N_22 P_2^2 = sqrt(5/(4π) / 24) * 3 s^2
        assert!((p[tri(2, 2)] - (5.0 / (4.0 * PI) / 24.0).sqrt() * 3.0 * s * s).abs() < 1e-15);
        // N_31 P_3^1 = sqrt(7/(4π) * 2/24) * 1.5 (5c^2 - 1) s
        let want = (7.0 / (4.0 * PI) * 2.0 / 24.0).sqrt() * 1.5 * (5.0 * c * c - 1.0) * s;
        assert!((p[tri(3, 1)] - want).abs() < 1e-15);
    }
}
