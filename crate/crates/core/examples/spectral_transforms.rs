//! Analysis/synthesis round trips on the circle, the interval and the sphere.
//!
//!     cargo run --release --example spectral_transforms

use impulsive_tikhonov::spectral::{analyze, Grid, ManifoldKind, Point, SpectralFunction};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (kind, degree) in [(ManifoldKind::Circle, 32), (ManifoldKind::Interval, 32), (ManifoldKind::Sphere, 12)] {
        let grid = Grid::standard(kind, degree)?;
        // smooth test function with geometric coefficient decay
        let f = SpectralFunction::from_fn(grid.clone(), |d, i| 0.7f64.powi(d as i32) * ((i % 5) as f64 - 2.0))?;
        let values = f.synthesize();
        let back = analyze(&values, &grid)?;
        let err = back.sub(&f)?.l2_norm();
        let (sup, l1) = f.sup_l1();
        println!(
            "{kind:?}: degree {degree}, {} nodes, {} coefficients, round-trip error {err:.2e}, sup {sup:.4}, L1 {l1:.4}",
            grid.len(),
            grid.basis_dim()
        );
        let p = match kind {
            ManifoldKind::Circle => Point::Angle(0.3),
            ManifoldKind::Interval => Point::Abscissa(0.3),
            ManifoldKind::Sphere => Point::Sphere { colatitude: 0.3, azimuth: 1.1 },
        };
        println!("  f(p) = {:.12}", f.eval(p)?);
    }
    let circle = Grid::standard(ManifoldKind::Circle, 8)?;
    let f = SpectralFunction::from_fn(circle, |d, _| 1.0 / (1 + d) as f64)?;
    println!("circle Fourier coefficient at n = 3: {:.6}", f.fourier(3)?);
    Ok(())
}
