//! Linear maps from coefficient space into a weighted data space.

use crate::spectral::Grid;
use std::sync::Arc;

/// K: ℝⁿ → (ℝᴹ, ⟨u, v⟩_w = Σ w_i u_i v_i).
pub trait LinearMap {
    fn n_cols(&self) -> usize;
    fn n_rows(&self) -> usize;
    /// Quadrature weights of the data space.
    fn weights(&self) -> &[f64];
    fn apply(&self, c: &[f64], out: &mut [f64]);
    /// Adjoint with respect to the weighted inner product: Kᵀ W v.
    fn adjoint(&self, v: &[f64], out: &mut [f64]);
    /// Upper bound on the operator norm (weighted).
    fn norm_bound(&self) -> f64;
    /// Weighted norm of column j.
    fn column_norm(&self, j: usize) -> f64 {
        let mut e = vec![0.0; self.n_cols()];
        e[j] = 1.0;
        let mut col = vec![0.0; self.n_rows()];
        self.apply(&e, &mut col);
        col.iter().zip(self.weights()).map(|(c, w)| w * c * c).sum::<f64>().sqrt()
    }
    /// Column j as plain nodal values.
    fn column(&self, j: usize, out: &mut [f64]) {
        let mut e = vec![0.0; self.n_cols()];
        e[j] = 1.0;
        self.apply(&e, out);
    }
}

/// Row-major dense matrix with row weights.
#[derive(Clone, Debug)]
pub struct DenseMap {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
    weights: Vec<f64>,
}

impl DenseMap {
    /// Panics if the sizes disagree.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>, weights: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols);
        assert_eq!(weights.len(), rows);
        DenseMap { rows, cols, data, weights }
    }
}

impl LinearMap for DenseMap {
    fn n_cols(&self) -> usize {
        self.cols
    }
    fn n_rows(&self) -> usize {
        self.rows
    }
    fn weights(&self) -> &[f64] {
        &self.weights
    }
    fn apply(&self, c: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.data[i * self.cols..(i + 1) * self.cols].iter().zip(c).map(|(a, b)| a * b).sum();
        }
    }
    fn adjoint(&self, v: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for i in 0..self.rows {
            let s = self.weights[i] * v[i];
            for (o, a) in out.iter_mut().zip(&self.data[i * self.cols..(i + 1) * self.cols]) {
                *o += s * a;
            }
        }
    }
    fn norm_bound(&self) -> f64 {
        // weighted Frobenius norm
        (0..self.rows)
            .map(|i| self.weights[i] * self.data[i * self.cols..(i + 1) * self.cols].iter().map(|a| a * a).sum::<f64>())
            .sum::<f64>()
            .sqrt()
    }
}

/// c ↦ synthesize(σ ⊙ c) on a quadrature grid.
#[derive(Clone)]
pub struct SpectralMap {
    grid: Arc<Grid>,
    sigma: Vec<f64>,
}

impl SpectralMap {
    pub fn new(grid: Arc<Grid>, sigma: Vec<f64>) -> Self {
        assert_eq!(sigma.len(), grid.basis_dim());
        SpectralMap { grid, sigma }
    }
    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }
    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }
}

impl LinearMap for SpectralMap {
    fn n_cols(&self) -> usize {
        self.sigma.len()
    }
    fn n_rows(&self) -> usize {
        self.grid.len()
    }
    fn weights(&self) -> &[f64] {
        self.grid.weights()
    }
    fn apply(&self, c: &[f64], out: &mut [f64]) {
        let sc: Vec<f64> = c.iter().zip(&self.sigma).map(|(a, s)| a * s).collect();
        self.grid.synthesize_into(&sc, out);
    }
    fn adjoint(&self, v: &[f64], out: &mut [f64]) {
        self.grid.analyze_into(v, out);
        out.iter_mut().zip(&self.sigma).for_each(|(o, s)| *o *= s);
    }
    fn norm_bound(&self) -> f64 {
        // the synthesis is an isometry into the weighted space
        self.sigma.iter().fold(0.0, |a: f64, s| a.max(s.abs()))
    }
    fn column_norm(&self, j: usize) -> f64 {
        self.sigma[j].abs()
    }
}
