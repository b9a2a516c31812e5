//! One heat cell with impulsive noise, solved with L1 and L2 fidelity at the
//! same α.
//!
//!     cargo run --release --example l1_vs_l2

use impulsive_tikhonov::harness::{run_cell, ExperimentConfig};
use impulsive_tikhonov::solver::{Fidelity, Method};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut cfg = ExperimentConfig::heat();
    cfg.bandwidth = 64;
    for eta in [0.5, 0.4, 0.3, 0.2] {
        let l1 = run_cell(&cfg, 0.0, eta, 0, None, Fidelity::L1)?;
        let l2 = run_cell(&cfg, 0.0, eta, 0, Some(l1.alpha), Fidelity::L2)?;
        println!(
            "eta {eta}: alpha {:.3e}  |f-u|^2  L1 {:.4e} ({} IPM iterations, gap {:.1e})  L2 {:.4e}",
            l1.alpha, l1.bregman_error, l1.result.iterations, l1.result.pd_gap, l2.bregman_error
        );
    }
    cfg.solver.method = Method::PrimalDual;
    cfg.solver.max_iter = 200_000;
    let pd = run_cell(&cfg, 0.0, 0.5, 0, None, Fidelity::L1)?;
    println!(
        "primal-dual at eta 0.5: |f-u|^2 {:.4e}, {} iterations, converged {}",
        pd.bregman_error, pd.result.iterations, pd.result.converged
    );
    Ok(())
}
