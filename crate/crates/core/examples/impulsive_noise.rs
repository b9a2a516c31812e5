//! Impulsive noise instances: a large component on a set of measure η and a
//! small L1 component ε elsewhere.
//!
//!     cargo run --release --example impulsive_noise

use impulsive_tikhonov::noise::{make_noise, MaskGeometry, NoiseSpec, SignPattern};
use impulsive_tikhonov::spectral::{Grid, ManifoldKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (kind, degree) in [(ManifoldKind::Circle, 64), (ManifoldKind::Interval, 64), (ManifoldKind::Sphere, 16)] {
        let grid = Grid::standard(kind, degree)?;
        for geometry in [MaskGeometry::Contiguous, MaskGeometry::Scattered] {
            let mut spec = NoiseSpec::new(0.2, 1e-3, 5.0, 11);
            spec.geometry = geometry;
            spec.signs = SignPattern::Random;
            let n = make_noise(&grid, &spec)?;
            let corrupt = n.corrupt_mask.iter().filter(|&&c| c).count();
            let peak = n.xi.iter().fold(0.0f64, |a, b| a.max(b.abs()));
            println!(
                "{kind:?} {geometry:?}: eta {:.4} (requested 0.2), eps {:.3e} (requested 1e-3), {corrupt}/{} nodes corrupt, peak {peak:.2}",
                n.eta_measured,
                n.epsilon_measured,
                grid.len()
            );
        }
    }
    Ok(())
}
