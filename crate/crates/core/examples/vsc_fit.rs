//! Fit the constant of the variational source condition and re-check it on
//! fresh probes.
//!
//!     cargo run --release --example vsc_fit

use impulsive_tikhonov::harness::{run_vsc, ExperimentConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for cfg in [ExperimentConfig::heat(), ExperimentConfig::gradiometry()] {
        for seed in 0..3 {
            let (b, r) = run_vsc(&cfg, seed, 60)?;
            println!(
                "{} seed {seed}: beta' {b:.4e}, {} probes, {} violations, min margin {:.2e}",
                cfg.problem.name(),
                r.samples,
                r.violations,
                r.margin
            );
        }
    }
    Ok(())
}
