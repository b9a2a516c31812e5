//! Experiment driver: configuration, rate and interpolation studies, CSV.

mod config;
mod interp;
mod output;
mod single;
mod study;

pub use config::{AlphaRule, ExperimentConfig, Problem};
pub use interp::{default_delta_grid, run_interp_study, sample_ball_function, InterpReport};
pub use output::{emit_csv, read_csv, write_csv, HEADER};
pub use single::{cell_noise, run_cell, run_vsc, CellOutcome};
pub use study::{
    cell_seed, fit_line, rule_alpha, run_rate_study, sort_rows, study_source, vsc_index, CellReport, LineFit,
    RateRow, RateStudy, Sweep,
};
