//! Energy bound and error/residual bounds evaluated on solved cells.
//!
//!     cargo run --release --example bound_checks

use impulsive_tikhonov::harness::{run_rate_study, ExperimentConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut cfg = ExperimentConfig::gradiometry();
    cfg.seeds = vec![0];
    cfg.compare_l2 = false;
    let s = run_rate_study(&cfg)?;
    for c in &s.cells {
        let e = c
            .energy
            .map(|e| format!("{:.3e} <= {:.3e}", e.lhs, e.rhs))
            .unwrap_or_else(|| "n/a".to_string());
        let b = &c.bounds;
        println!(
            "eps {:.0e} eta {:<5}  energy {e}  error {:.3e} <= {:.3e}  residual {:.3e} <= {:.3e}{}",
            c.row.eps,
            c.row.eta,
            b.error_lhs,
            b.error_rhs,
            b.residual_lhs,
            b.residual_rhs,
            if b.applicable { "" } else { "  (no claim)" }
        );
    }
    println!("violations {}", s.violations);
    Ok(())
}
