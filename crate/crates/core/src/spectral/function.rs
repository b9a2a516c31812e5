use super::grid::{check_len, Grid, ManifoldKind, Point};
use super::legendre::legendre_all;
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::Arc;

/// Oversampling factor used for sup and L1 norms.
pub const NORM_OVERSAMPLING: usize = 4;

/// A real function on a manifold stored by its orthonormal basis
/// coefficients (see [`Grid`] for the ordering).
#[derive(Clone, Debug)]
pub struct SpectralFunction {
    grid: Arc<Grid>,
    coeffs: Vec<f64>,
}

/// Coefficients from nodal values by quadrature.
pub fn analyze(values: &[f64], grid: &Arc<Grid>) -> Result<SpectralFunction> {
    let coeffs = grid.analyze(values)?;
    Ok(SpectralFunction { grid: grid.clone(), coeffs })
}

/// Nodal values of `f` on its grid.
pub fn synthesize(f: &SpectralFunction) -> Vec<f64> {
    f.synthesize()
}

/// Orthogonal projection onto degrees `<= m`.
pub fn project(f: &SpectralFunction, m: usize) -> SpectralFunction {
    f.project(m)
}

impl SpectralFunction {
    pub fn new(grid: Arc<Grid>, coeffs: Vec<f64>) -> Result<Self> {
        check_len(grid.basis_dim(), coeffs.len())?;
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("coefficients"));
        }
        Ok(SpectralFunction { grid, coeffs })
    }

    pub fn zeros(grid: Arc<Grid>) -> Self {
        let n = grid.basis_dim();
        SpectralFunction { grid, coeffs: vec![0.0; n] }
    }

    /// Coefficients given as a function of the basis degree and the
    /// position inside the basis.
    pub fn from_fn(grid: Arc<Grid>, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let coeffs = (0..grid.basis_dim()).map(|i| f(grid.basis_degree(i), i)).collect();
        Self::new(grid, coeffs)
    }

    /// Circle function from complex Fourier coefficients ĝ(n), n >= 0; the
    /// negative half follows from realness. The imaginary part of ĝ(0) is
    /// ignored.
    pub fn from_fourier(grid: Arc<Grid>, ghat: impl Fn(usize) -> Complex64) -> Result<Self> {
        if grid.kind() != ManifoldKind::Circle {
            return Err(Error::ManifoldMismatch("Fourier coefficients need a circle grid".into()));
        }
        let mut c = vec![0.0; grid.basis_dim()];
        c[0] = (2.0 * PI).sqrt() * ghat(0).re;
        let s = 2.0 * PI.sqrt();
        for n in 1..=grid.degree() {
            let z = ghat(n);
            c[2 * n - 1] = s * z.re;
            c[2 * n] = -s * z.im;
        }
        Self::new(grid, c)
    }

    /// Interval function from Chebyshev coefficients, g = a_0/2 + Σ a_n T_n.
    pub fn from_chebyshev(grid: Arc<Grid>, a: &[f64]) -> Result<Self> {
        if grid.kind() != ManifoldKind::Interval {
            return Err(Error::ManifoldMismatch("Chebyshev coefficients need an interval grid".into()));
        }
        if a.len() > grid.degree() + 1 {
            return Err(Error::InvalidInput(format!(
                "{} Chebyshev coefficients exceed degree {}",
                a.len(),
                grid.degree()
            )));
        }
        let values: Vec<f64> = grid
            .points()
            .into_iter()
            .map(|p| match p {
                Point::Abscissa(x) => chebyshev_sum(a, x),
                _ => unreachable!(),
            })
            .collect();
        analyze(&values, &grid)
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.grid.degree()
    }

    pub fn synthesize(&self) -> Vec<f64> {
        self.grid.synthesize_unchecked(&self.coeffs)
    }

    pub fn project(&self, m: usize) -> SpectralFunction {
        let mut out = self.clone();
        for (i, c) in out.coeffs.iter_mut().enumerate() {
            if self.grid.basis_degree(i) > m {
                *c = 0.0;
            }
        }
        out
    }

    /// Complex Fourier coefficient ĝ(n) of a circle function; zero outside
    /// the band.
    pub fn fourier(&self, n: i64) -> Result<Complex64> {
        if self.grid.kind() != ManifoldKind::Circle {
            return Err(Error::ManifoldMismatch("fourier() on a non-circle function".into()));
        }
        let k = n.unsigned_abs() as usize;
        if k > self.degree() {
            return Ok(Complex64::new(0.0, 0.0));
        }
        if k == 0 {
            return Ok(Complex64::new(self.coeffs[0] / (2.0 * PI).sqrt(), 0.0));
        }
        let s = 0.5 / PI.sqrt();
        let z = Complex64::new(self.coeffs[2 * k - 1] * s, -self.coeffs[2 * k] * s);
        Ok(if n > 0 { z } else { z.conj() })
    }

    /// Chebyshev coefficients a_0..a_N of an interval function with
    /// g = a_0/2 + Σ a_n T_n, by Chebyshev–Gauss quadrature (exact in the band).
    pub fn chebyshev(&self) -> Result<Vec<f64>> {
        if self.grid.kind() != ManifoldKind::Interval {
            return Err(Error::ManifoldMismatch("chebyshev() on a non-interval function".into()));
        }
        let legendre: Vec<f64> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| c * (j as f64 + 0.5).sqrt())
            .collect();
        Ok(legendre_to_chebyshev(&legendre))
    }

    /// Truncation of the Chebyshev series after degree m.
    pub fn project_chebyshev(&self, m: usize) -> Result<SpectralFunction> {
        let mut a = self.chebyshev()?;
        a.truncate(m + 1);
        Self::from_chebyshev(self.grid.clone(), &a)
    }

    /// Squared L² norm from the coefficients.
    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    pub fn l2_norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn dot(&self, other: &SpectralFunction) -> Result<f64> {
        self.check_compatible(other)?;
        Ok(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a * b).sum())
    }

    pub fn sub(&self, other: &SpectralFunction) -> Result<SpectralFunction> {
        self.check_compatible(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(SpectralFunction { grid: self.grid.clone(), coeffs })
    }

    pub fn scaled(&self, s: f64) -> SpectralFunction {
        SpectralFunction { grid: self.grid.clone(), coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub(crate) fn check_compatible(&self, other: &SpectralFunction) -> Result<()> {
        if self.grid.kind() != other.grid.kind() || self.degree() != other.degree() {
            return Err(Error::ManifoldMismatch(format!(
                "{:?} degree {} vs {:?} degree {}",
                self.grid.kind(),
                self.degree(),
                other.grid.kind(),
                other.degree()
            )));
        }
        Ok(())
    }

    /// The same function on another grid of the same manifold; coefficients
    /// are padded with zeros or must vanish above the target degree.
    pub fn on_grid(&self, grid: Arc<Grid>) -> Result<SpectralFunction> {
        if grid.kind() != self.grid.kind() {
            return Err(Error::ManifoldMismatch("on_grid across manifolds".into()));
        }
        let mut c = vec![0.0; grid.basis_dim()];
        for (i, &v) in self.coeffs.iter().enumerate() {
            if self.grid.basis_degree(i) <= grid.degree() {
                c[i] = v;
            } else if v != 0.0 {
                return Err(Error::InvalidInput("target grid degree too small".into()));
            }
        }
        // both layouts index by increasing degree, so positions coincide
        Ok(SpectralFunction { grid, coeffs: c })
    }

    /// Value at an arbitrary point of the manifold.
    pub fn eval(&self, p: Point) -> Result<f64> {
        let b = self.grid.basis_at(p)?;
        Ok(b.iter().zip(&self.coeffs).map(|(b, c)| b * c).sum())
    }

    /// Quadrature L² norm of the nodal values.
    pub fn quadrature_l2(&self) -> f64 {
        let v = self.synthesize();
        v.iter().zip(self.grid.weights()).map(|(v, w)| w * v * v).sum::<f64>().sqrt()
    }

    /// (sup norm, L1 norm) from values on `fine`, a grid of the same manifold.
    pub fn sup_l1_on(&self, fine: &Arc<Grid>) -> Result<(f64, f64)> {
        let v = self.on_grid(fine.clone())?.synthesize();
        let sup = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let l1 = v.iter().zip(fine.weights()).map(|(v, w)| w * v.abs()).sum();
        Ok((sup, l1))
    }

    /// (sup norm, L1 norm) on a grid oversampled by [`NORM_OVERSAMPLING`].
    pub fn sup_l1(&self) -> (f64, f64) {
        let fine = self.grid.oversampled(NORM_OVERSAMPLING).expect("oversampling a valid grid");
        self.sup_l1_on(&fine).expect("same manifold")
    }

    /// Sphere only: the degree components g_l(x) = (Q_l g)(x), l = 0..L.
    pub fn degree_components(&self, p: Point) -> Result<Vec<f64>> {
        if self.grid.kind() != ManifoldKind::Sphere {
            return Err(Error::ManifoldMismatch("degree components need a sphere function".into()));
        }
        let b = self.grid.basis_at(p)?;
        let l = self.degree();
        Ok((0..=l)
            .map(|ll| {
                let r = ll * ll..(ll + 1) * (ll + 1);
                b[r.clone()].iter().zip(&self.coeffs[r]).map(|(b, c)| b * c).sum()
            })
            .collect())
    }
}

/// Σ' a_n T_n(x) with the halved constant term.
pub fn chebyshev_sum(a: &[f64], x: f64) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    // Clenshaw
    let (mut b1, mut b2) = (0.0, 0.0);
    for &an in a.iter().skip(1).rev() {
        let b0 = 2.0 * x * b1 - b2 + an;
        b2 = b1;
        b1 = b0;
    }
    x * b1 - b2 + 0.5 * a[0]
}

/// Chebyshev coefficients (halved-constant convention) of Σ c_l P_l.
pub fn legendre_to_chebyshev(c: &[f64]) -> Vec<f64> {
    let n = c.len();
    if n == 0 {
        return Vec::new();
    }
    let k = n;
    let mut a = vec![0.0; n];
    for j in 0..k {
        let theta = PI * (j as f64 + 0.5) / k as f64;
        let p = legendre_all(n - 1, theta.cos());
        let h: f64 = p.iter().zip(c).map(|(p, c)| p * c).sum();
        for (m, am) in a.iter_mut().enumerate() {
            *am += h * (m as f64 * theta).cos();
        }
    }
    a.iter_mut().for_each(|x| *x *= 2.0 / k as f64);
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_and_cosine_on_circle() {
        let g = Grid::circle(31, 64).unwrap();
        let f = analyze(&vec![1.0; 64], &g).unwrap();
        assert!((f.fourier(0).unwrap().re - 1.0).abs() < 1e-15);
        for n in 1..=31 {
            assert!(f.fourier(n).unwrap().norm() < 1e-15);
        }
        let v: Vec<f64> = (0..64).map(|j| (3.0 * 2.0 * PI * j as f64 / 64.0).cos()).collect();
        let f = analyze(&v, &g).unwrap();
        for n in -31i64..=31 {
            let want = if n.abs() == 3 { 0.5 } else { 0.0 };
            assert!((f.fourier(n).unwrap() - Complex64::new(want, 0.0)).norm() < 1e-14, "n={n}");
        }
    }

    #[test]
    fn length_mismatch_rejected() {
        let g = Grid::circle(3, 8).unwrap();
        assert!(matches!(analyze(&[1.0; 7], &g), Err(Error::LengthMismatch { expected: 8, got: 7 })));
    }

    #[test]
    fn circle_constant_synthesis() {
        let g = Grid::circle(4, 16).unwrap();
        let f = SpectralFunction::from_fourier(g, |n| Complex64::new(if n == 0 { 2.5 } else { 0.0 }, 0.0)).unwrap();
        assert!(f.synthesize().iter().all(|v| (v - 2.5).abs() < 1e-14));
    }

    #[test]
    fn interval_degree_one() {
        let g = Grid::interval(4, 9).unwrap();
        let mut c = vec![0.0; 5];
        c[1] = 1.0;
        let f = SpectralFunction::new(g.clone(), c).unwrap();
        for (v, p) in f.synthesize().iter().zip(g.points()) {
            let Point::Abscissa(x) = p else { unreachable!() };
            assert!((v - 1.5f64.sqrt() * x).abs() < 1e-15);
        }
    }

    #[test]
    fn sphere_zonal_degree_one() {
        let g = Grid::sphere(4, 5, 10).unwrap();
        let mut c = vec![0.0; 25];
        c[2] = 1.0; // l=1, k=0
        let f = SpectralFunction::new(g.clone(), c).unwrap();
        let v = f.synthesize();
        let k = (3.0 / (4.0 * PI)).sqrt();
        for (v, p) in v.iter().zip(g.points()) {
            let Point::Sphere { colatitude, .. } = p else { unreachable!() };
            assert!((v - k * colatitude.cos()).abs() < 1e-14);
        }
        assert!((f.quadrature_l2() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn chebyshev_round_trip() {
        let g = Grid::interval(6, 14).unwrap();
        let a = [1.0, -0.5, 0.25, 0.0, 0.3, -0.1, 0.05];
        let f = SpectralFunction::from_chebyshev(g, &a).unwrap();
        let b = f.chebyshev().unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-13);
        }
        // T_2 at 0.4
        assert!((chebyshev_sum(&[0.0, 0.0, 1.0], 0.4) - (2.0 * 0.16 - 1.0)).abs() < 1e-15);
        assert!((chebyshev_sum(&[2.0], 0.4) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn projection_zeroes_high_degrees() {
        let g = Grid::circle(5, 20).unwrap();
        let f = SpectralFunction::from_fn(g, |d, _| 1.0 + d as f64).unwrap();
        let p = f.project(0);
        assert_eq!(p.coeffs()[0], 1.0);
        assert!(p.coeffs()[1..].iter().all(|c| *c == 0.0));
        assert_eq!(f.project(5).coeffs(), f.coeffs());
    }
}
