use clap::{Parser, Subcommand, ValueEnum};
use impulsive_tikhonov::analytic::{InterpProfile, WeightFunction};
use impulsive_tikhonov::harness::{
    cell_noise, default_delta_grid, emit_csv, run_cell, run_interp_study, run_rate_study, run_vsc, ExperimentConfig,
    Problem,
};
use impulsive_tikhonov::solver::Fidelity;
use impulsive_tikhonov::spectral::{Manifold, ManifoldKind, SpectralFunction};
use impulsive_tikhonov::Error;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "impulsive", version, about = "L1 Tikhonov regularization under impulsive noise")]
struct Cli {
    /// experiment config file (key = value)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// output file; stdout when absent
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// base seed
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    problem: Option<Problem>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum FidelityArg {
    L1,
    L2,
}

#[derive(Subcommand)]
enum Cmd {
    /// Apply the forward operator to a file of coefficients (one per line)
    Apply { input: PathBuf },
    /// Emit one noise instance as CSV
    Noise {
        #[arg(long, default_value_t = 0.1)]
        eta: f64,
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
    },
    /// Solve a single cell
    Solve {
        #[arg(long, default_value_t = 0.1)]
        eta: f64,
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
        /// overrides the a-priori rule
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long, value_enum, default_value_t = FidelityArg::L1)]
        fidelity: FidelityArg,
    },
    /// Run the η- and ε-sweeps and write the rate CSV
    Rates,
    /// Sample the interpolation inequality
    InterpCheck {
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 20)]
        deltas: usize,
        #[arg(long, default_value_t = 64)]
        degree: usize,
    },
    /// Fit and re-check the variational source condition
    VscCheck {
        #[arg(long, default_value_t = 60)]
        samples: usize,
    },
}

enum Failure {
    Input(Error),
    Violation(String),
    NonConvergence(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e)
    }
}

type Run = std::result::Result<(), Failure>;

fn load_config(cli: &Cli) -> Result<ExperimentConfig, Error> {
    let cfg = match &cli.config {
        Some(path) => {
            let cfg = ExperimentConfig::from_file(path)?;
            if let Some(p) = cli.problem {
                if p != cfg.problem {
                    return Err(Error::InvalidInput(format!(
                        "--problem {} conflicts with config problem {}",
                        p.name(),
                        cfg.problem.name()
                    )));
                }
            }
            cfg
        }
        None => ExperimentConfig::default_for(cli.problem.unwrap_or(Problem::Heat)),
    };
    cfg.validate()?;
    Ok(cfg)
}

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>, Error> {
    Ok(match out {
        Some(p) => Box::new(std::io::BufWriter::new(std::fs::File::create(p)?)),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn read_coeffs(path: &Path) -> Result<Vec<f64>, Error> {
    let text = std::fs::read_to_string(path)?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| {
            l.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Error::InvalidInput(format!("line {}: bad coefficient `{}`", i + 1, l.trim())))
        })
        .collect()
}

fn apply(cli: &Cli, input: &Path) -> Run {
    let cfg = load_config(cli)?;
    let op = cfg.operator()?;
    let grid = op.standard_grid()?;
    let f = SpectralFunction::new(grid, read_coeffs(input)?)?;
    let g = op.apply(&f)?;
    let mut w = sink(&cli.out)?;
    for c in g.coeffs() {
        writeln!(w, "{c:.16e}").map_err(Error::from)?;
    }
    w.flush().map_err(Error::from)?;
    Ok(())
}

fn noise(cli: &Cli, eps: f64, eta: f64) -> Run {
    let cfg = load_config(cli)?;
    let op = cfg.operator()?;
    let grid = op.standard_grid()?;
    let n = cell_noise(&cfg, &op, &grid, eps, eta, cli.seed.unwrap_or(0))?;
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(sink(&cli.out)?);
    w.write_record(["node", "weight", "xi", "corrupt"]).map_err(Error::from)?;
    for (i, (x, c)) in n.xi.iter().zip(&n.corrupt_mask).enumerate() {
        w.write_record([i.to_string(), format!("{:.16e}", grid.weights()[i]), format!("{x:.16e}"), c.to_string()])
            .map_err(Error::from)?;
    }
    w.flush().map_err(Error::from)?;
    eprintln!("eps_measured {:.6e}  eta_measured {:.6e}", n.epsilon_measured, n.eta_measured);
    Ok(())
}

fn solve(cli: &Cli, eps: f64, eta: f64, alpha: Option<f64>, fidelity: FidelityArg) -> Run {
    let mut cfg = load_config(cli)?;
    cfg.solver.trace = cli.out.is_some();
    let fid = match fidelity {
        FidelityArg::L1 => Fidelity::L1,
        FidelityArg::L2 => Fidelity::L2,
    };
    let c = run_cell(&cfg, eps, eta, cli.seed.unwrap_or(0), alpha, fid)?;
    let r = &c.result;
    println!(
        "alpha {:.6e}  error {:.6e}  objective {:.10e}  gap {:.3e}  iterations {}  converged {}",
        c.alpha, c.bregman_error, r.objective, r.pd_gap, r.iterations, r.converged
    );
    if let Some(path) = &cli.out {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_path(path)
            .map_err(Error::from)?;
        w.write_record(["iteration", "objective", "gap"]).map_err(Error::from)?;
        for t in &r.trace {
            w.write_record([t.iteration.to_string(), format!("{:.16e}", t.objective), format!("{:.16e}", t.gap)])
                .map_err(Error::from)?;
        }
        w.flush().map_err(Error::from)?;
    }
    if !r.converged {
        return Err(Failure::NonConvergence(format!("no convergence after {} iterations", r.iterations)));
    }
    Ok(())
}

fn rates(cli: &Cli) -> Run {
    let mut cfg = load_config(cli)?;
    if let Some(s) = cli.seed {
        let n = cfg.seeds.len() as u64;
        cfg.seeds = (s..s + n).collect();
    }
    let study = run_rate_study(&cfg)?;
    match &cli.out {
        Some(p) => emit_csv(&study.rows, p)?,
        None => impulsive_tikhonov::harness::write_csv(&study.rows, std::io::stdout().lock())?,
    }
    let fmt = |f: Option<impulsive_tikhonov::harness::LineFit>| match f {
        Some(f) => format!("slope {:.3} r2 {:.3} n {}", f.slope, f.r2, f.n),
        None => "n/a".to_string(),
    };
    eprintln!("eta fit (eta <= {:.3}): {}  expected slope {}", study.eta0, fmt(study.eta_fit), study.eta_exponent);
    eprintln!("eps fit: {}", fmt(study.eps_fit));
    eprintln!("l1 wins {}/{}  nonconverged {}", study.l1_wins.0, study.l1_wins.1, study.nonconverged);
    if study.violations > 0 {
        let bad: Vec<String> = study
            .cells
            .iter()
            .filter(|c| c.violated())
            .map(|c| format!("(seed {}, eps {:e}, eta {:e})", c.row.seed, c.row.eps, c.row.eta))
            .collect();
        return Err(Failure::Violation(format!("{} bound violations: {}", study.violations, bad.join(" "))));
    }
    Ok(())
}

fn interp_check(cli: &Cli, samples: usize, deltas: usize, degree: usize) -> Run {
    let cfg = load_config(cli)?;
    let (kind, weight) = match cfg.problem {
        Problem::Heat => (ManifoldKind::Circle, WeightFunction::heat(cfg.t_bar)?),
        Problem::Gradiometry => (ManifoldKind::Sphere, WeightFunction::gradiometry(cfg.radius)?),
    };
    let profile = InterpProfile::new(Manifold::new(kind), weight.clone())?;
    let grid = default_delta_grid(&profile, deltas.max(1));
    let r = run_interp_study(kind, &weight, degree, samples, &grid, cli.seed.unwrap_or(0))?;
    println!("checks {}  violations {}  max ratio {:.6}  delta0 {:.6}", r.checks, r.violations.len(), r.max_ratio, r.delta0);
    if !r.violations.is_empty() {
        let bad: Vec<String> = r.violations.iter().map(|(s, d)| format!("(seed {s}, delta {d:e})")).collect();
        return Err(Failure::Violation(bad.join(" ")));
    }
    Ok(())
}

fn vsc_check(cli: &Cli, samples: usize) -> Run {
    let cfg = load_config(cli)?;
    let (b, r) = run_vsc(&cfg, cli.seed.unwrap_or(0), samples)?;
    println!("beta_prime {b:.6e}  samples {}  violations {}  margin {:.3e}", r.samples, r.violations, r.margin);
    if r.violations > 0 {
        return Err(Failure::Violation(format!("{} source-condition violations", r.violations)));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.cmd {
        Cmd::Apply { input } => apply(&cli, input),
        Cmd::Noise { eta, eps } => noise(&cli, *eps, *eta),
        Cmd::Solve { eta, eps, alpha, fidelity } => solve(&cli, *eps, *eta, *alpha, *fidelity),
        Cmd::Rates => rates(&cli),
        Cmd::InterpCheck { samples, deltas, degree } => interp_check(&cli, *samples, *deltas, *degree),
        Cmd::VscCheck { samples } => vsc_check(&cli, *samples),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violation(m)) => {
            eprintln!("violation: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::NonConvergence(m)) => {
            eprintln!("non-convergence: {m}");
            ExitCode::from(3)
        }
    }
}
