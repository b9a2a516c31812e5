use super::legendre::{gauss_legendre, normalized_alf, tri};
use crate::error::{invalid, Error, Result};
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::sync::{Arc, OnceLock};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ManifoldKind {
    Circle,
    Interval,
    Sphere,
}

/// One of the three model manifolds: ℝ/2πℤ, (-1, 1) and S².
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Manifold {
    kind: ManifoldKind,
    measure_total: f64,
}

impl Manifold {
    pub fn new(kind: ManifoldKind) -> Self {
        let measure_total = match kind {
            ManifoldKind::Circle => 2.0 * PI,
            ManifoldKind::Interval => 2.0,
            ManifoldKind::Sphere => 4.0 * PI,
        };
        Manifold { kind, measure_total }
    }
    pub fn circle() -> Self {
        Self::new(ManifoldKind::Circle)
    }
    pub fn interval() -> Self {
        Self::new(ManifoldKind::Interval)
    }
    pub fn sphere() -> Self {
        Self::new(ManifoldKind::Sphere)
    }
    pub fn kind(&self) -> ManifoldKind {
        self.kind
    }
    pub fn measure_total(&self) -> f64 {
        self.measure_total
    }
}

/// A point on a manifold.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Point {
    Angle(f64),
    Abscissa(f64),
    Sphere { colatitude: f64, azimuth: f64 },
}

impl Point {
    pub fn unit_vector(&self) -> Option<[f64; 3]> {
        match *self {
            Point::Sphere { colatitude, azimuth } => {
                let (st, ct) = colatitude.sin_cos();
                let (sp, cp) = azimuth.sin_cos();
                Some([st * cp, st * sp, ct])
            }
            _ => None,
        }
    }

    pub fn from_unit_vector(v: [f64; 3]) -> Point {
        let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        let colatitude = (v[2] / r).clamp(-1.0, 1.0).acos();
        let azimuth = v[1].atan2(v[0]);
        Point::Sphere { colatitude, azimuth }
    }
}

#[derive(Clone)]
enum Layout {
    Uniform { n: usize },
    GaussLegendre { x: Vec<f64> },
    SphereProduct { colat: Vec<f64>, ring_w: Vec<f64>, n_az: usize },
}

#[derive(Clone)]
enum Tables {
    Circle { fwd: Arc<dyn Fft<f64>>, inv: Arc<dyn Fft<f64>> },
    /// Row-major n_nodes × (degree+1) values of the orthonormal Legendre basis.
    Interval { vander: Vec<f64> },
    /// Per ring: normalized ALF with the √2 real-harmonic factor folded in;
    /// trig: n_az × (2L+1) values of 1, cos kφ, sin kφ indexed by k+L.
    Sphere { alf: Vec<Vec<f64>>, trig: Vec<f64> },
}

/// Quadrature grid on a manifold together with the orthonormal basis up to
/// `degree` that it resolves exactly.
///
/// Basis ordering: circle `[1, cos x, sin x, cos 2x, sin 2x, …]/norm`;
/// interval `√(j+½) P_j`; sphere real harmonics at `l² + l + k`.
#[derive(Clone)]
pub struct Grid {
    manifold: Manifold,
    degree: usize,
    layout: Layout,
    weights: Vec<f64>,
    tables: OnceLock<Tables>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("manifold", &self.manifold.kind)
            .field("degree", &self.degree)
            .field("nodes", &self.weights.len())
            .finish()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.manifold == other.manifold
            && self.degree == other.degree
            && self.weights == other.weights
    }
}

impl Grid {
    /// Uniform grid with `n_nodes` points on [0, 2π).
    pub fn circle(degree: usize, n_nodes: usize) -> Result<Arc<Grid>> {
        if n_nodes < 2 * degree + 1 {
            return Err(invalid(format!("{n_nodes} circle nodes cannot resolve degree {degree}")));
        }
        let weights = vec![2.0 * PI / n_nodes as f64; n_nodes];
        Ok(Arc::new(Grid {
            manifold: Manifold::circle(),
            degree,
            layout: Layout::Uniform { n: n_nodes },
            weights,
            tables: OnceLock::new(),
        }))
    }

    /// Gauss–Legendre grid on (-1, 1).
    pub fn interval(degree: usize, n_nodes: usize) -> Result<Arc<Grid>> {
        if n_nodes < 2 * degree + 1 {
            return Err(invalid(format!("{n_nodes} interval nodes cannot resolve degree {degree}")));
        }
        let (x, weights) = gauss_legendre(n_nodes);
        Ok(Arc::new(Grid {
            manifold: Manifold::interval(),
            degree,
            layout: Layout::GaussLegendre { x },
            weights,
            tables: OnceLock::new(),
        }))
    }

    /// Gauss–Legendre rings in cos(colatitude) times equispaced azimuths.
    pub fn sphere(degree: usize, n_rings: usize, n_azimuth: usize) -> Result<Arc<Grid>> {
        if n_rings < degree + 1 || n_azimuth < 2 * degree + 1 {
            return Err(invalid(format!(
                "{n_rings}x{n_azimuth} sphere grid cannot resolve degree {degree}"
            )));
        }
        let (t, ring_w) = gauss_legendre(n_rings);
        // ascending t = cos θ means descending θ; store north to south
        let colat: Vec<f64> = t.iter().rev().map(|t| t.acos()).collect();
        let ring_w: Vec<f64> = ring_w.into_iter().rev().collect();
        let dphi = 2.0 * PI / n_azimuth as f64;
        let weights = ring_w
            .iter()
            .flat_map(|w| std::iter::repeat_n(w * dphi, n_azimuth))
            .collect();
        Ok(Arc::new(Grid {
            manifold: Manifold::sphere(),
            degree,
            layout: Layout::SphereProduct { colat, ring_w, n_az: n_azimuth },
            weights,
            tables: OnceLock::new(),
        }))
    }

    /// Default grid for a manifold: 4x oversampled uniform circle, 2(N+1)
    /// Gauss–Legendre nodes on the interval, (L+1) x (2L+2) on the sphere.
    pub fn standard(manifold: ManifoldKind, degree: usize) -> Result<Arc<Grid>> {
        match manifold {
            ManifoldKind::Circle => Grid::circle(degree, (4 * degree).max(2 * degree + 1)),
            ManifoldKind::Interval => Grid::interval(degree, 2 * degree + 2),
            ManifoldKind::Sphere => Grid::sphere(degree, degree + 1, 2 * degree + 2),
        }
    }

    /// Same basis, `factor` times more nodes per direction; used for sup and
    /// L1 norms.
    pub fn oversampled(&self, factor: usize) -> Result<Arc<Grid>> {
        let f = factor.max(1);
        let d = self.degree;
        match &self.layout {
            Layout::Uniform { n } => Grid::circle(d, f * n),
            Layout::GaussLegendre { x } => Grid::interval(d, f * x.len()),
            Layout::SphereProduct { colat, n_az, .. } => Grid::sphere(d, f * colat.len(), f * n_az),
        }
    }

    pub fn manifold(&self) -> Manifold {
        self.manifold
    }

    pub fn kind(&self) -> ManifoldKind {
        self.manifold.kind
    }

    /// Maximal basis degree (|n| on the circle, polynomial degree, l).
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Number of real basis functions.
    pub fn basis_dim(&self) -> usize {
        basis_dim(self.kind(), self.degree)
    }

    /// Degree of the basis function at index `i` (|n|, j or l).
    pub fn basis_degree(&self, i: usize) -> usize {
        basis_degree(self.kind(), i)
    }

    /// Sphere grids only: (ring count, azimuth count).
    pub fn sphere_shape(&self) -> Option<(usize, usize)> {
        match &self.layout {
            Layout::SphereProduct { colat, n_az, .. } => Some((colat.len(), *n_az)),
            _ => None,
        }
    }

    pub fn point(&self, i: usize) -> Point {
        match &self.layout {
            Layout::Uniform { n } => Point::Angle(2.0 * PI * i as f64 / *n as f64),
            Layout::GaussLegendre { x } => Point::Abscissa(x[i]),
            Layout::SphereProduct { colat, n_az, .. } => Point::Sphere {
                colatitude: colat[i / n_az],
                azimuth: 2.0 * PI * (i % n_az) as f64 / *n_az as f64,
            },
        }
    }

    pub fn points(&self) -> Vec<Point> {
        (0..self.len()).map(|i| self.point(i)).collect()
    }

    fn tables(&self) -> &Tables {
        self.tables.get_or_init(|| match &self.layout {
            Layout::Uniform { n } => {
                let mut planner = FftPlanner::new();
                Tables::Circle { fwd: planner.plan_fft_forward(*n), inv: planner.plan_fft_inverse(*n) }
            }
            Layout::GaussLegendre { x } => {
                let d = self.degree + 1;
                let mut vander = vec![0.0; x.len() * d];
                for (i, &xi) in x.iter().enumerate() {
                    let p = super::legendre::legendre_all(self.degree, xi);
                    for j in 0..d {
                        vander[i * d + j] = (j as f64 + 0.5).sqrt() * p[j];
                    }
                }
                Tables::Interval { vander }
            }
            Layout::SphereProduct { colat, n_az, .. } => {
                let l = self.degree;
                let alf = colat
                    .iter()
                    .map(|t| {
                        let mut a = normalized_alf(l, t.cos(), t.sin());
                        for ll in 0..=l {
                            for m in 1..=ll {
                                a[tri(ll, m)] *= SQRT_2;
                            }
                        }
                        a
                    })
                    .collect();
                let width = 2 * l + 1;
                let mut trig = vec![0.0; n_az * width];
                for q in 0..*n_az {
                    let phi = 2.0 * PI * q as f64 / *n_az as f64;
                    trig[q * width + l] = 1.0;
                    for k in 1..=l {
                        let (s, c) = (k as f64 * phi).sin_cos();
                        trig[q * width + l + k] = c;
                        trig[q * width + l - k] = s;
                    }
                }
                Tables::Sphere { alf, trig }
            }
        })
    }

    /// Basis expansion evaluated at the nodes.
    pub fn synthesize(&self, coeffs: &[f64]) -> Result<Vec<f64>> {
        check_len(self.basis_dim(), coeffs.len())?;
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("coefficients"));
        }
        Ok(self.synthesize_unchecked(coeffs))
    }

    pub(crate) fn synthesize_unchecked(&self, coeffs: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.len()];
        self.synthesize_into(coeffs, &mut out);
        out
    }

    pub(crate) fn synthesize_into(&self, c: &[f64], out: &mut [f64]) {
        match (self.tables(), &self.layout) {
            (Tables::Circle { inv, .. }, Layout::Uniform { n }) => {
                let n = *n;
                let mut buf = vec![Complex64::new(0.0, 0.0); n];
                buf[0] = Complex64::new(c[0] / (2.0 * PI).sqrt(), 0.0);
                let s = 0.5 / PI.sqrt();
                for k in 1..=self.degree {
                    let z = Complex64::new(c[2 * k - 1] * s, -c[2 * k] * s);
                    buf[k] += z;
                    buf[n - k] += z.conj();
                }
                inv.process(&mut buf);
                for (o, b) in out.iter_mut().zip(&buf) {
                    *o = b.re;
                }
            }
            (Tables::Interval { vander }, _) => {
                let d = self.degree + 1;
                for (i, o) in out.iter_mut().enumerate() {
                    *o = vander[i * d..(i + 1) * d].iter().zip(c).map(|(v, c)| v * c).sum();
                }
            }
            (Tables::Sphere { alf, trig }, Layout::SphereProduct { n_az, .. }) => {
                let l = self.degree;
                let width = 2 * l + 1;
                let mut f = vec![0.0; width];
                for (j, a) in alf.iter().enumerate() {
                    f.iter_mut().for_each(|v| *v = 0.0);
                    for ll in 0..=l {
                        let base = ll * ll + ll;
                        for k in 0..=ll {
                            f[l + k] += c[base + k] * a[tri(ll, k)];
                            if k > 0 {
                                f[l - k] += c[base - k] * a[tri(ll, k)];
                            }
                        }
                    }
                    for q in 0..*n_az {
                        let t = &trig[q * width..(q + 1) * width];
                        out[j * n_az + q] = f.iter().zip(t).map(|(a, b)| a * b).sum();
                    }
                }
            }
            _ => unreachable!("grid tables do not match layout"),
        }
    }

    /// Discrete inner products of nodal values against the basis.
    pub fn analyze(&self, values: &[f64]) -> Result<Vec<f64>> {
        check_len(self.len(), values.len())?;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("nodal values"));
        }
        let mut out = vec![0.0; self.basis_dim()];
        self.analyze_into(values, &mut out);
        Ok(out)
    }

    pub(crate) fn analyze_into(&self, v: &[f64], out: &mut [f64]) {
        match (self.tables(), &self.layout) {
            (Tables::Circle { fwd, .. }, Layout::Uniform { n }) => {
                let n = *n;
                let mut buf: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
                fwd.process(&mut buf);
                let inv_n = 1.0 / n as f64;
                out[0] = (2.0 * PI).sqrt() * buf[0].re * inv_n;
                let s = 2.0 * PI.sqrt() * inv_n;
                for k in 1..=self.degree {
                    // average the ±k bins so that aliasing-free data is exact
                    let z = (buf[k] + buf[n - k].conj()) * 0.5;
                    out[2 * k - 1] = s * z.re;
                    out[2 * k] = -s * z.im;
                }
            }
            (Tables::Interval { vander }, _) => {
                let d = self.degree + 1;
                out.iter_mut().for_each(|o| *o = 0.0);
                for (i, (&vi, &wi)) in v.iter().zip(&self.weights).enumerate() {
                    let wv = wi * vi;
                    for (o, b) in out.iter_mut().zip(&vander[i * d..(i + 1) * d]) {
                        *o += wv * b;
                    }
                }
            }
            (Tables::Sphere { alf, trig }, Layout::SphereProduct { n_az, ring_w, .. }) => {
                let l = self.degree;
                let width = 2 * l + 1;
                let dphi = 2.0 * PI / *n_az as f64;
                out.iter_mut().for_each(|o| *o = 0.0);
                let mut g = vec![0.0; width];
                for (j, a) in alf.iter().enumerate() {
                    g.iter_mut().for_each(|x| *x = 0.0);
                    for q in 0..*n_az {
                        let val = v[j * n_az + q] * dphi;
                        let t = &trig[q * width..(q + 1) * width];
                        for (gk, tk) in g.iter_mut().zip(t) {
                            *gk += val * tk;
                        }
                    }
                    let w = ring_w[j];
                    for ll in 0..=l {
                        let base = ll * ll + ll;
                        for k in 0..=ll {
                            let lam = w * a[tri(ll, k)];
                            out[base + k] += lam * g[l + k];
                            if k > 0 {
                                out[base - k] += lam * g[l - k];
                            }
                        }
                    }
                }
            }
            _ => unreachable!("grid tables do not match layout"),
        }
    }

    /// Basis functions evaluated at an arbitrary point.
    pub fn basis_at(&self, p: Point) -> Result<Vec<f64>> {
        let d = self.degree;
        match (self.kind(), p) {
            (ManifoldKind::Circle, Point::Angle(x)) => {
                let mut b = vec![0.0; 2 * d + 1];
                b[0] = 1.0 / (2.0 * PI).sqrt();
                let s = 1.0 / PI.sqrt();
                for k in 1..=d {
                    let (sn, cs) = (k as f64 * x).sin_cos();
                    b[2 * k - 1] = s * cs;
                    b[2 * k] = s * sn;
                }
                Ok(b)
            }
            (ManifoldKind::Interval, Point::Abscissa(x)) => {
                let p = super::legendre::legendre_all(d, x);
                Ok(p.iter().enumerate().map(|(j, p)| (j as f64 + 0.5).sqrt() * p).collect())
            }
            (ManifoldKind::Sphere, Point::Sphere { colatitude, azimuth }) => {
                Ok(super::legendre::real_harmonics(d, colatitude, azimuth))
            }
            (k, p) => Err(Error::ManifoldMismatch(format!("{p:?} is not a point of {k:?}"))),
        }
    }
}

pub(crate) fn basis_dim(kind: ManifoldKind, degree: usize) -> usize {
    match kind {
        ManifoldKind::Circle => 2 * degree + 1,
        ManifoldKind::Interval => degree + 1,
        ManifoldKind::Sphere => (degree + 1) * (degree + 1),
    }
}

pub(crate) fn basis_degree(kind: ManifoldKind, i: usize) -> usize {
    match kind {
        ManifoldKind::Circle => i.div_ceil(2),
        ManifoldKind::Interval => i,
        ManifoldKind::Sphere => (i as f64).sqrt().floor() as usize,
    }
}

pub(crate) fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::LengthMismatch { expected, got });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_measure() {
        for g in [
            Grid::circle(10, 64).unwrap(),
            Grid::interval(10, 21).unwrap(),
            Grid::sphere(10, 11, 22).unwrap(),
        ] {
            let s: f64 = g.weights().iter().sum();
            let m = g.manifold().measure_total();
            assert!(((s - m) / m).abs() < 1e-12, "{g:?}");
            assert!(g.len() > 2 * g.degree());
        }
    }

    #[test]
    fn rejects_underresolved_grids() {
        assert!(Grid::circle(10, 20).is_err());
        assert!(Grid::interval(10, 20).is_err());
        assert!(Grid::sphere(10, 10, 22).is_err());
        assert!(Grid::sphere(10, 11, 20).is_err());
    }

    #[test]
    fn sphere_basis_degree_index() {
        assert_eq!(basis_degree(ManifoldKind::Sphere, 0), 0);
        assert_eq!(basis_degree(ManifoldKind::Sphere, 3), 1);
        assert_eq!(basis_degree(ManifoldKind::Sphere, 4), 2);
        assert_eq!(basis_degree(ManifoldKind::Sphere, 8), 2);
        assert_eq!(basis_degree(ManifoldKind::Sphere, 9), 3);
        assert_eq!(basis_degree(ManifoldKind::Circle, 0), 0);
        assert_eq!(basis_degree(ManifoldKind::Circle, 1), 1);
        assert_eq!(basis_degree(ManifoldKind::Circle, 2), 1);
        assert_eq!(basis_degree(ManifoldKind::Circle, 3), 2);
    }

    #[test]
    fn gram_matrix_is_identity() {
        for g in [
            Grid::circle(6, 13).unwrap(),
            Grid::interval(6, 13).unwrap(),
            Grid::sphere(6, 7, 14).unwrap(),
        ] {
            let d = g.basis_dim();
            for a in 0..d {
                let mut e = vec![0.0; d];
                e[a] = 1.0;
                let v = g.synthesize(&e).unwrap();
                let c = g.analyze(&v).unwrap();
                for (b, cb) in c.iter().enumerate() {
                    let want = if a == b { 1.0 } else { 0.0 };
                    assert!((cb - want).abs() < 1e-12, "{:?} {a} {b} {cb}", g.kind());
                }
            }
        }
    }

    #[test]
    fn nodal_synthesis_matches_pointwise_basis() {
        for g in [
            Grid::circle(5, 16).unwrap(),
            Grid::interval(5, 12).unwrap(),
            Grid::sphere(5, 6, 12).unwrap(),
        ] {
            let c: Vec<f64> = (0..g.basis_dim()).map(|i| ((i * 7 + 3) % 11) as f64 - 5.0).collect();
            let v = g.synthesize(&c).unwrap();
            for i in 0..g.len() {
                let b = g.basis_at(g.point(i)).unwrap();
                let direct: f64 = b.iter().zip(&c).map(|(b, c)| b * c).sum();
                assert!((direct - v[i]).abs() < 1e-12);
            }
        }
    }
}
