//! A-priori regularization parameters for both problems.
//!
//!     cargo run --release --example alpha_rules

use impulsive_tikhonov::solver::{choose_alpha_gradiometry, choose_alpha_heat};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:>8} {:>8} {:>14} {:>14}", "eps", "eta", "heat p=1", "grad p=1");
    for (eps, eta) in [(1e-2, 0.0), (1e-5, 0.0), (1e-8, 0.0), (0.0, 0.5), (0.0, 0.2), (0.0, 0.05), (1e-4, 0.1)] {
        println!(
            "{eps:>8.0e} {eta:>8} {:>14.4e} {:>14.4e}",
            choose_alpha_heat(eps, eta, 1.0, 1.0)?,
            choose_alpha_gradiometry(eps, eta, 1.0, 4.0)?
        );
    }
    Ok(())
}
