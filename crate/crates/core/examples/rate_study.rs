//! Full rate study for one problem and smoothness index.
//!
//!     cargo run --release --example rate_study -- heat 1
//!     cargo run --release --example rate_study -- gradiometry 2

use impulsive_tikhonov::harness::{run_rate_study, CellReport, ExperimentConfig, Problem, Sweep};
use std::time::Instant;

fn mean_error(cells: &[&CellReport]) -> f64 {
    cells.iter().map(|c| c.row.bregman_error).sum::<f64>() / cells.len() as f64
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().collect();
    let problem: Problem = args.get(1).map(|s| s.parse()).transpose()?.unwrap_or(Problem::Heat);
    let mut cfg = ExperimentConfig::default_for(problem);
    if let Some(p) = args.get(2) {
        cfg.p = p.parse()?;
    }
    let t = Instant::now();
    let s = run_rate_study(&cfg)?;
    println!("{} p={} ({} rows, {:.1?})", problem.name(), cfg.p, s.rows.len(), t.elapsed());
    for (sweep, grid) in [(Sweep::Eta, &cfg.eta_grid), (Sweep::Eps, &cfg.eps_grid)] {
        for &v in grid.iter() {
            let cells: Vec<&CellReport> = s
                .cells
                .iter()
                .filter(|c| c.sweep == sweep && (if sweep == Sweep::Eta { c.row.eta } else { c.row.eps }) == v)
                .collect();
            println!(
                "  {:?} {v:<8.2e} alpha {:.2e}  mean |f-u|^2 {:.3e}",
                sweep,
                cells[0].row.alpha,
                mean_error(&cells)
            );
        }
    }
    if let Some(f) = s.eta_fit {
        println!("eta slope {:.3} (target {}, eta <= {:.3}, {} pts)", f.slope, s.eta_exponent, s.eta0, f.n);
    }
    if let Some(f) = s.eta_fit_all {
        println!("eta slope, all cells {:.3}", f.slope);
    }
    if let Some(f) = s.eps_fit {
        println!("eps fit against (-ln eps)^-{}: R^2 {:.4}", s.eps_power, f.r2);
    }
    println!("violations {} nonconverged {} l1 wins {}/{}", s.violations, s.nonconverged, s.l1_wins.0, s.l1_wins.1);
    Ok(())
}
