//! Line-based `key = value` experiment configuration.

use crate::error::{invalid, Error, Result};
use crate::noise::{MaskGeometry, SignPattern};
use crate::operators::{gradiometry_operator, heat_operator, DiagonalOperator, SourceProfile};
use crate::solver::{Method, SolveOptions};
use std::path::Path;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Problem {
    Heat,
    Gradiometry,
}

impl FromStr for Problem {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "heat" => Ok(Problem::Heat),
            "gradiometry" => Ok(Problem::Gradiometry),
            _ => Err(format!("unknown problem `{s}` (heat|gradiometry)")),
        }
    }
}

impl Problem {
    pub fn name(&self) -> &'static str {
        match self {
            Problem::Heat => "heat",
            Problem::Gradiometry => "gradiometry",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlphaRule {
    /// a-priori rule of the problem
    Paper,
    /// best α of `alpha_grid` per cell, measured against u†
    FixedGrid,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub problem: Problem,
    pub t_bar: f64,
    pub radius: f64,
    pub p: f64,
    /// circle bandwidth N (heat) or maximal degree L (gradiometry)
    pub bandwidth: usize,
    pub eps_grid: Vec<f64>,
    pub eta_grid: Vec<f64>,
    pub alpha_rule: AlphaRule,
    pub alpha_grid: Vec<f64>,
    pub seeds: Vec<u64>,
    pub solver: SolveOptions,
    /// ‖w‖ for u† = φ(T*T)w
    pub source_norm: f64,
    pub profile: SourceProfile,
    /// impulse amplitude as a multiple of max|g†|
    pub amplitude_factor: f64,
    pub geometry: MaskGeometry,
    pub signs: SignPattern,
    /// β of the source condition used in the bound checks
    pub beta: f64,
    pub vsc_samples: usize,
    /// multiplies γ in the bound checks (1 except for negative controls)
    pub gamma_scale: f64,
    pub zero_cell: bool,
    pub zero_alpha: f64,
    pub compare_l2: bool,
}

fn decades(hi: i32, lo: i32) -> Vec<f64> {
    (lo..=hi).rev().map(|k| 10f64.powi(k)).collect()
}

impl ExperimentConfig {
    pub fn heat() -> Self {
        ExperimentConfig {
            problem: Problem::Heat,
            t_bar: 1.0,
            radius: 4.0,
            p: 1.0,
            bandwidth: 128,
            eps_grid: decades(-2, -8),
            eta_grid: vec![0.78, 0.6, 0.5, 0.4, 0.33, 0.28, 0.24, 0.2, 0.175],
            alpha_rule: AlphaRule::Paper,
            alpha_grid: Vec::new(),
            seeds: (0..5).collect(),
            solver: SolveOptions::default(),
            source_norm: 3.5,
            profile: SourceProfile::Critical,
            amplitude_factor: 10.0,
            geometry: MaskGeometry::Contiguous,
            signs: SignPattern::Random,
            beta: 0.5,
            vsc_samples: 60,
            gamma_scale: 1.0,
            zero_cell: true,
            zero_alpha: 1e-4,
            compare_l2: true,
        }
    }

    pub fn gradiometry() -> Self {
        ExperimentConfig {
            problem: Problem::Gradiometry,
            bandwidth: 16,
            eta_grid: vec![0.5, 0.3, 0.17, 0.1, 0.06, 0.04, 0.025],
            ..Self::heat()
        }
    }

    pub fn default_for(problem: Problem) -> Self {
        match problem {
            Problem::Heat => Self::heat(),
            Problem::Gradiometry => Self::gradiometry(),
        }
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Parse `key = value` lines on top of the defaults for `problem`
    /// (heat when absent). `#` starts a comment; lists are comma separated.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries: Vec<(usize, &str, &str)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(cfg_err(i + 1, "expected `key = value`"));
            };
            let (k, v) = (k.trim(), v.trim());
            if entries.iter().any(|e| e.1 == k) {
                return Err(cfg_err(i + 1, format!("duplicate key `{k}`")));
            }
            entries.push((i + 1, k, v));
        }
        let problem = match entries.iter().find(|e| e.1 == "problem") {
            Some(&(line, _, v)) => v.parse().map_err(|m| cfg_err(line, m))?,
            None => Problem::Heat,
        };
        let mut cfg = Self::default_for(problem);
        for (line, k, v) in entries {
            cfg.set(k, v).map_err(|m| cfg_err(line, m))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn set(&mut self, key: &str, v: &str) -> std::result::Result<(), String> {
        match key {
            "problem" => {}
            "t_bar" => self.t_bar = num(v)?,
            "radius" => self.radius = num(v)?,
            "p" => self.p = num(v)?,
            "bandwidth" | "max_degree" => self.bandwidth = num(v)?,
            "eps_grid" => self.eps_grid = list(v)?,
            "eta_grid" => self.eta_grid = list(v)?,
            "alpha_rule" => {
                self.alpha_rule = match v {
                    "paper" => AlphaRule::Paper,
                    "fixed_grid" => AlphaRule::FixedGrid,
                    _ => return Err(format!("unknown alpha_rule `{v}` (paper|fixed_grid)")),
                }
            }
            "alpha_grid" => self.alpha_grid = list(v)?,
            "seeds" => self.seeds = list(v)?,
            "tol" => self.solver.tol = num(v)?,
            "max_iter" => self.solver.max_iter = num(v)?,
            "method" => {
                self.solver.method = match v {
                    "interior_point" => Method::InteriorPoint,
                    "primal_dual" => Method::PrimalDual,
                    _ => return Err(format!("unknown method `{v}` (interior_point|primal_dual)")),
                }
            }
            "source_norm" => self.source_norm = num(v)?,
            "profile" => {
                self.profile = match v {
                    "critical" => SourceProfile::Critical,
                    "flat" => SourceProfile::Flat,
                    _ => return Err(format!("unknown profile `{v}` (critical|flat)")),
                }
            }
            "amplitude_factor" => self.amplitude_factor = num(v)?,
            "mask" => {
                self.geometry = match v {
                    "contiguous" => MaskGeometry::Contiguous,
                    "scattered" => MaskGeometry::Scattered,
                    _ => return Err(format!("unknown mask `{v}` (contiguous|scattered)")),
                }
            }
            "signs" => {
                self.signs = match v {
                    "random" => SignPattern::Random,
                    "constant" => SignPattern::Constant,
                    _ => return Err(format!("unknown signs `{v}` (random|constant)")),
                }
            }
            "beta" => self.beta = num(v)?,
            "vsc_samples" => self.vsc_samples = num(v)?,
            "gamma_scale" => self.gamma_scale = num(v)?,
            "zero_cell" => self.zero_cell = num(v)?,
            "zero_alpha" => self.zero_alpha = num(v)?,
            "compare_l2" => self.compare_l2 = num(v)?,
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |name: &str, x: f64| {
            if x > 0.0 && x.is_finite() {
                Ok(())
            } else {
                Err(invalid(format!("{name} = {x} must be positive")))
            }
        };
        pos("p", self.p)?;
        pos("t_bar", self.t_bar)?;
        pos("source_norm", self.source_norm)?;
        pos("tol", self.solver.tol)?;
        pos("gamma_scale", self.gamma_scale)?;
        pos("zero_alpha", self.zero_alpha)?;
        if !(self.radius > 1.0) {
            return Err(invalid(format!("radius = {} must exceed 1", self.radius)));
        }
        if self.bandwidth == 0 || self.solver.max_iter == 0 {
            return Err(invalid("bandwidth and max_iter must be positive"));
        }
        if !(self.amplitude_factor >= 0.0 && self.amplitude_factor.is_finite()) {
            return Err(invalid("amplitude_factor must be non-negative"));
        }
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return Err(invalid(format!("beta = {} must lie in (0, 1)", self.beta)));
        }
        for (name, g) in [("eps_grid", &self.eps_grid), ("eta_grid", &self.eta_grid), ("alpha_grid", &self.alpha_grid)] {
            check_grid(name, g)?;
        }
        if self.eps_grid.iter().any(|&e| e >= 1.0) {
            return Err(invalid("eps_grid values must be below 1"));
        }
        if self.alpha_rule == AlphaRule::FixedGrid && self.alpha_grid.is_empty() {
            return Err(invalid("alpha_rule = fixed_grid needs alpha_grid"));
        }
        if self.seeds.is_empty() {
            return Err(invalid("seeds must not be empty"));
        }
        let mut s = self.seeds.clone();
        s.sort_unstable();
        s.dedup();
        if s.len() != self.seeds.len() {
            return Err(invalid("seeds must be distinct"));
        }
        Ok(())
    }

    pub fn operator(&self) -> Result<DiagonalOperator> {
        match self.problem {
            Problem::Heat => heat_operator(self.t_bar, self.bandwidth),
            Problem::Gradiometry => gradiometry_operator(self.radius, self.bandwidth),
        }
    }

    /// Exponent of η in the target rate for ‖f̂ − u†‖².
    pub fn eta_exponent(&self) -> f64 {
        match self.problem {
            Problem::Heat => 2.0 * self.p,
            Problem::Gradiometry => self.p,
        }
    }

    /// k in the target rate (−ln ε)^{−k}.
    pub fn eps_power(&self) -> f64 {
        match self.problem {
            Problem::Heat => self.p,
            Problem::Gradiometry => 2.0 * self.p,
        }
    }

    /// Render as a config file that parses back to the same value.
    pub fn to_text(&self) -> String {
        let join = |v: &[f64]| v.iter().map(|x| format!("{x:e}")).collect::<Vec<_>>().join(", ");
        let seeds = self.seeds.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(", ");
        let mut out = vec![
            format!("problem = {}", self.problem.name()),
            format!("t_bar = {:e}", self.t_bar),
            format!("radius = {:e}", self.radius),
            format!("p = {:e}", self.p),
            format!("bandwidth = {}", self.bandwidth),
            format!("eps_grid = {}", join(&self.eps_grid)),
            format!("eta_grid = {}", join(&self.eta_grid)),
            format!("alpha_rule = {}", if self.alpha_rule == AlphaRule::Paper { "paper" } else { "fixed_grid" }),
            format!("alpha_grid = {}", join(&self.alpha_grid)),
            format!("seeds = {seeds}"),
            format!("tol = {:e}", self.solver.tol),
            format!("max_iter = {}", self.solver.max_iter),
            format!(
                "method = {}",
                if self.solver.method == Method::InteriorPoint { "interior_point" } else { "primal_dual" }
            ),
            format!("source_norm = {:e}", self.source_norm),
            format!("profile = {}", if self.profile == SourceProfile::Critical { "critical" } else { "flat" }),
            format!("amplitude_factor = {:e}", self.amplitude_factor),
            format!("mask = {}", if self.geometry == MaskGeometry::Contiguous { "contiguous" } else { "scattered" }),
            format!("signs = {}", if self.signs == SignPattern::Random { "random" } else { "constant" }),
            format!("beta = {:e}", self.beta),
            format!("vsc_samples = {}", self.vsc_samples),
            format!("gamma_scale = {:e}", self.gamma_scale),
            format!("zero_cell = {}", self.zero_cell),
            format!("zero_alpha = {:e}", self.zero_alpha),
            format!("compare_l2 = {}", self.compare_l2),
        ];
        out.push(String::new());
        out.join("\n")
    }
}

fn cfg_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Config { line, msg: msg.into() }
}

fn num<T: FromStr>(v: &str) -> std::result::Result<T, String> {
    v.parse().map_err(|_| format!("cannot parse `{v}`"))
}

fn list<T: FromStr>(v: &str) -> std::result::Result<Vec<T>, String> {
    if v.is_empty() {
        return Ok(Vec::new());
    }
    v.split(',').map(|s| num(s.trim())).collect()
}

/// Positive, finite and strictly monotone (either direction).
fn check_grid(name: &str, g: &[f64]) -> Result<()> {
    if g.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
        return Err(invalid(format!("{name} must contain positive finite values")));
    }
    let up = g.windows(2).all(|w| w[1] > w[0]);
    let down = g.windows(2).all(|w| w[1] < w[0]);
    if !(up || down) {
        return Err(invalid(format!("{name} must be sorted without repeats")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_overrides_defaults() {
        let c = ExperimentConfig::parse(
            "# gradiometry run\nproblem = gradiometry\np = 2   # smoother\neta_grid = 0.2, 0.1\nseeds = 3,4\nmethod = primal_dual\n",
        )
        .unwrap();
        assert_eq!(c.problem, Problem::Gradiometry);
        assert_eq!(c.p, 2.0);
        assert_eq!(c.eta_grid, vec![0.2, 0.1]);
        assert_eq!(c.seeds, vec![3, 4]);
        assert_eq!(c.bandwidth, 16);
        assert_eq!(c.solver.method, Method::PrimalDual);
        assert_eq!(c.eta_exponent(), 2.0);
        assert_eq!(c.eps_power(), 4.0);
    }

    #[test]
    fn rejects_bad_input() {
        let line = |t: &str| match ExperimentConfig::parse(t) {
            Err(Error::Config { line, .. }) => line,
            other => panic!("{other:?}"),
        };
        assert_eq!(line("p = 1\nfoo = 2\n"), 2);
        assert_eq!(line("p = one\n"), 1);
        assert_eq!(line("\n\njust text\n"), 3);
        assert_eq!(line("p = 1\np = 2\n"), 2);
        assert_eq!(line("problem = wave\n"), 1);
        assert!(matches!(ExperimentConfig::parse("eta_grid = 0.1, 0.3, 0.2"), Err(Error::InvalidInput(_))));
        assert!(matches!(ExperimentConfig::parse("eps_grid = -1e-3"), Err(Error::InvalidInput(_))));
        assert!(matches!(ExperimentConfig::parse("beta = 1"), Err(Error::InvalidInput(_))));
        assert!(matches!(ExperimentConfig::parse("alpha_rule = fixed_grid"), Err(Error::InvalidInput(_))));
        assert!(matches!(ExperimentConfig::parse("seeds = 1, 1"), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn text_round_trip() {
        for mut c in [ExperimentConfig::heat(), ExperimentConfig::gradiometry()] {
            c.alpha_grid = vec![1e-3, 1e-4];
            c.signs = SignPattern::Constant;
            assert_eq!(ExperimentConfig::parse(&c.to_text()).unwrap(), c);
        }
    }
}
