use super::function::SpectralFunction;
use super::grid::{Manifold, ManifoldKind, Point};
use super::legendre::legendre_all;
use crate::error::{invalid, Error, Result};
use std::f64::consts::PI;

/// Sup of the projection kernel onto degrees <= m, κ_m, which gives
/// ‖P_m g‖_∞ <= κ_m ‖g‖_{L1}.
pub fn kernel_sup_bound(manifold: Manifold, m: usize) -> f64 {
    let m = m as f64;
    match manifold.kind() {
        ManifoldKind::Circle => (2.0 * m + 1.0) / (2.0 * PI),
        ManifoldKind::Interval => (m + 1.0) * (m + 1.0) / 2.0,
        ManifoldKind::Sphere => (m + 1.0) * (m + 1.0) / (4.0 * PI),
    }
}

/// Reproducing kernel of the degree-m harmonics, (2m+1)/(4π) P_m(⟨x,y⟩).
pub fn addition_formula_kernel(m: usize, x: [f64; 3], y: [f64; 3]) -> f64 {
    let t = (x[0] * y[0] + x[1] * y[1] + x[2] * y[2]).clamp(-1.0, 1.0);
    (2.0 * m as f64 + 1.0) / (4.0 * PI) * legendre_all(m, t)[m]
}

/// Mean of a sphere function over the circle {y : ⟨y, x⟩ = t}.
///
/// For g of pure degree m this equals P_m(t) g(x).
pub fn average_operator(g: &SpectralFunction, x: Point, t: f64) -> Result<f64> {
    if g.grid().kind() != ManifoldKind::Sphere {
        return Err(Error::ManifoldMismatch("average_operator needs a sphere function".into()));
    }
    if !(-1.0..=1.0).contains(&t) {
        return Err(invalid(format!("|t| = {} > 1", t.abs())));
    }
    let xv = x.unit_vector().ok_or_else(|| invalid("average_operator needs a sphere point"))?;
    let (e1, e2) = orthonormal_frame(xv);
    let s = (1.0 - t * t).max(0.0).sqrt();
    // restricted to the circle, g is a trigonometric polynomial of degree <= L
    let k = 2 * g.degree() + 2;
    let mut acc = 0.0;
    for j in 0..k {
        let (sp, cp) = (2.0 * PI * j as f64 / k as f64).sin_cos();
        let y = [
            t * xv[0] + s * (cp * e1[0] + sp * e2[0]),
            t * xv[1] + s * (cp * e1[1] + sp * e2[1]),
            t * xv[2] + s * (cp * e1[2] + sp * e2[2]),
        ];
        acc += g.eval(Point::from_unit_vector(y))?;
    }
    Ok(acc / k as f64)
}

fn orthonormal_frame(x: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    // axis least aligned with x
    let i = (0..3).min_by(|&a, &b| x[a].abs().total_cmp(&x[b].abs())).unwrap_or(0);
    let mut a = [0.0; 3];
    a[i] = 1.0;
    let e1 = normalize(cross(x, a));
    let e2 = cross(x, e1);
    (e1, e2)
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn normalize(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}
