//! Fenchel conjugates of the weight functions and the rate function ψ.
//!
//!     cargo run --release --example fenchel_and_psi

use impulsive_tikhonov::analytic::{fenchel_conjugate, psi, IndexFunction, WeightFunction};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let heat = WeightFunction::heat(1.0)?;
    let grad = WeightFunction::gradiometry(4.0)?;
    println!("{:>6} {:>14} {:>14} {:>14} {:>14}", "s", "heat closed", "heat numeric", "grad closed", "grad numeric");
    for s in [0.5, 1.0, 2.0, 5.0, 10.0, 40.0] {
        println!(
            "{s:>6} {:>14.8} {:>14.8} {:>14.8} {:>14.8}",
            fenchel_conjugate(&heat, s),
            heat.conjugate_numeric(s),
            fenchel_conjugate(&grad, s),
            grad.conjugate_numeric(s)
        );
    }
    println!();
    for p in [1.0, 2.0] {
        let phi = IndexFunction::log(p);
        println!("p = {p}");
        for alpha in [1e-1, 1e-3, 1e-6, 1e-9] {
            println!("  psi({alpha:.0e}) = {:.6e}   phi(alpha) = {:.6e}", psi(alpha, &phi), phi.eval(alpha));
        }
    }
    Ok(())
}
