//! Parse an experiment config, run a small study and write the CSV.
//!
//!     cargo run --release --example config_file

use impulsive_tikhonov::harness::{emit_csv, read_csv, run_rate_study, ExperimentConfig};

const TEXT: &str = "
# small gradiometry study
problem = gradiometry
p = 1
bandwidth = 12
eta_grid = 0.3, 0.1, 0.04
eps_grid = 1e-3, 1e-5
seeds = 0, 1
method = interior_point
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = ExperimentConfig::parse(TEXT)?;
    println!("{}", cfg.to_text());
    let s = run_rate_study(&cfg)?;
    let path = std::env::temp_dir().join("impulsive_config_example.csv");
    emit_csv(&s.rows, &path)?;
    let back = read_csv(std::fs::File::open(&path)?)?;
    println!("wrote {} rows to {}", back.len(), path.display());
    print!("{}", std::fs::read_to_string(&path)?);
    Ok(())
}
