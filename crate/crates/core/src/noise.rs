//! Impulsive noise: large values on a set of small measure η, small L1 mass
//! ε elsewhere.

use crate::error::{invalid, Result};
use crate::spectral::{check_len, Grid, Point};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MaskGeometry {
    /// One arc (circle, interval) or spherical cap.
    #[default]
    Contiguous,
    /// Nodes picked in random order.
    Scattered,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SignPattern {
    /// Independent sign per corrupted node.
    #[default]
    Random,
    /// One sign for the whole corrupted set.
    Constant,
}

/// Requested noise parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseSpec {
    pub eta: f64,
    pub epsilon: f64,
    pub amplitude: f64,
    pub geometry: MaskGeometry,
    pub signs: SignPattern,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(eta: f64, epsilon: f64, amplitude: f64, seed: u64) -> Self {
        NoiseSpec {
            eta,
            epsilon,
            amplitude,
            geometry: MaskGeometry::Contiguous,
            signs: SignPattern::Random,
            seed,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NoiseInstance {
    pub xi: Vec<f64>,
    pub corrupt_mask: Vec<bool>,
    pub epsilon_measured: f64,
    pub eta_measured: f64,
    pub amplitude: f64,
    pub seed: u64,
}

/// Contiguous mask with random impulse signs.
pub fn make_impulsive(grid: &Arc<Grid>, eta: f64, epsilon: f64, amplitude: f64, seed: u64) -> Result<NoiseInstance> {
    make_noise(grid, &NoiseSpec::new(eta, epsilon, amplitude, seed))
}

pub fn make_noise(grid: &Arc<Grid>, spec: &NoiseSpec) -> Result<NoiseInstance> {
    let total = grid.manifold().measure_total();
    if !(spec.eta >= 0.0 && spec.eta < total) {
        return Err(invalid(format!("eta = {} must lie in [0, {total})", spec.eta)));
    }
    if !(spec.epsilon >= 0.0 && spec.epsilon.is_finite()) {
        return Err(invalid(format!("epsilon = {} must be finite and >= 0", spec.epsilon)));
    }
    if !(spec.amplitude >= 0.0 && spec.amplitude.is_finite()) {
        return Err(invalid(format!("amplitude = {} must be finite and >= 0", spec.amplitude)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let w = grid.weights();
    let n = grid.len();

    let order = match spec.geometry {
        MaskGeometry::Contiguous => contiguous_order(grid, &mut rng),
        MaskGeometry::Scattered => {
            let mut o: Vec<usize> = (0..n).collect();
            o.shuffle(&mut rng);
            o
        }
    };
    let mut mask = vec![false; n];
    let mut used = 0.0;
    for i in order {
        if used + w[i] > spec.eta {
            if spec.geometry == MaskGeometry::Contiguous {
                break;
            }
            continue;
        }
        used += w[i];
        mask[i] = true;
    }

    let mut xi = vec![0.0; n];
    let global_sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
    for i in 0..n {
        if mask[i] {
            let s = match spec.signs {
                SignPattern::Random => {
                    if rng.gen::<bool>() {
                        1.0
                    } else {
                        -1.0
                    }
                }
                SignPattern::Constant => global_sign,
            };
            xi[i] = s * spec.amplitude;
        }
    }

    // smooth background cos(k⟨u,v⟩ + φ) scaled to the ε budget
    if spec.epsilon > 0.0 {
        let k = rng.gen_range(1..=4) as f64;
        let phase = rng.gen_range(0.0..std::f64::consts::TAU);
        let dir = random_direction(&mut rng);
        let mut bg = vec![0.0; n];
        let mut l1 = 0.0;
        for i in 0..n {
            if !mask[i] {
                bg[i] = (k * coordinate(grid.point(i), dir) + phase).cos();
                l1 += w[i] * bg[i].abs();
            }
        }
        if l1 > 0.0 {
            let s = spec.epsilon / l1;
            for i in 0..n {
                if !mask[i] {
                    xi[i] = s * bg[i];
                }
            }
            // rounding may push the measured mass a hair above the target
            let (e, _) = measure(&xi, &mask, grid)?;
            if e > spec.epsilon {
                let shrink = spec.epsilon / e * (1.0 - 1e-15);
                for i in 0..n {
                    if !mask[i] {
                        xi[i] *= shrink;
                    }
                }
            }
        }
    }

    let (epsilon_measured, eta_measured) = measure(&xi, &mask, grid)?;
    Ok(NoiseInstance {
        xi,
        corrupt_mask: mask,
        epsilon_measured,
        eta_measured,
        amplitude: spec.amplitude,
        seed: spec.seed,
    })
}

/// (L1 norm of ξ off the mask, measure of the mask), both by quadrature.
pub fn measure(xi: &[f64], mask: &[bool], grid: &Grid) -> Result<(f64, f64)> {
    check_len(grid.len(), xi.len())?;
    check_len(grid.len(), mask.len())?;
    let mut eps = 0.0;
    let mut eta = 0.0;
    for ((x, &m), w) in xi.iter().zip(mask).zip(grid.weights()) {
        if m {
            eta += w;
        } else {
            eps += w * x.abs();
        }
    }
    Ok((eps, eta))
}

fn random_direction(rng: &mut ChaCha8Rng) -> [f64; 3] {
    let z: f64 = rng.gen_range(-1.0..=1.0);
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let s = (1.0 - z * z).sqrt();
    [s * phi.cos(), s * phi.sin(), z]
}

/// Scalar coordinate of a point used for the background and cap ordering.
fn coordinate(p: Point, dir: [f64; 3]) -> f64 {
    match p {
        Point::Angle(x) | Point::Abscissa(x) => x,
        Point::Sphere { .. } => {
            let u = p.unit_vector().unwrap_or([0.0, 0.0, 1.0]);
            u[0] * dir[0] + u[1] * dir[1] + u[2] * dir[2]
        }
    }
}

/// Node order in which a contiguous set grows from a random seed point.
fn contiguous_order(grid: &Grid, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let n = grid.len();
    match grid.point(0) {
        Point::Angle(_) => {
            let start = rng.gen_range(0..n);
            (0..n).map(|k| (start + k) % n).collect()
        }
        Point::Abscissa(_) => {
            // nodes are sorted; grow to the right, then to the left
            let mut idx: Vec<usize> = (0..n).collect();
            idx.sort_by(|&a, &b| abscissa(grid.point(a)).total_cmp(&abscissa(grid.point(b))));
            let start = rng.gen_range(0..n);
            let mut o: Vec<usize> = idx[start..].to_vec();
            o.extend(idx[..start].iter().rev());
            o
        }
        Point::Sphere { .. } => {
            let c = random_direction(rng);
            let mut o: Vec<usize> = (0..n).collect();
            let d: Vec<f64> = (0..n).map(|i| -coordinate(grid.point(i), c)).collect();
            o.sort_by(|&a, &b| d[a].total_cmp(&d[b]).then(a.cmp(&b)));
            o
        }
    }
}

fn abscissa(p: Point) -> f64 {
    match p {
        Point::Abscissa(x) => x,
        _ => 0.0,
    }
}
