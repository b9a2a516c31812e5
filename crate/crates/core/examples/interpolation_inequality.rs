//! Random sampling of the interpolation inequality
//! ‖g‖_∞ ≤ γ(δ)‖g‖_𝒜 + ‖g‖_{L1}/δ on all three manifolds.
//!
//!     cargo run --release --example interpolation_inequality

use impulsive_tikhonov::analytic::{InterpProfile, WeightFunction};
use impulsive_tikhonov::harness::{default_delta_grid, run_interp_study};
use impulsive_tikhonov::spectral::{Manifold, ManifoldKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cases = [
        (ManifoldKind::Circle, WeightFunction::heat(1.0)?, 64),
        (ManifoldKind::Interval, WeightFunction::gradiometry(2.0)?, 32),
        (ManifoldKind::Sphere, WeightFunction::gradiometry(2.0)?, 24),
    ];
    for (kind, w, degree) in cases {
        let profile = InterpProfile::new(Manifold::new(kind), w.clone())?;
        let deltas = default_delta_grid(&profile, 8);
        let r = run_interp_study(kind, &w, degree, 50, &deltas, 7)?;
        println!(
            "{kind:?} ({}): delta0 {:.4}, {} checks, {} violations, max lhs/rhs {:.4}",
            w.name(),
            r.delta0,
            r.checks,
            r.violations.len(),
            r.max_ratio
        );
    }
    Ok(())
}
