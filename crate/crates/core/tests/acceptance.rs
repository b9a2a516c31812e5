//! Acceptance criteria 1–10. Every test prints one `criterion N: PASS|FAIL`
//! line with the measured numbers, then asserts.

use impulsive_tikhonov::analytic::{anorm, check_from_norms, InterpProfile, IndexFunction, WeightFunction};
use impulsive_tikhonov::harness::{
    default_delta_grid, run_cell, run_interp_study, run_rate_study, sample_ball_function, study_source,
    ExperimentConfig, Problem, RateStudy,
};
use impulsive_tikhonov::noise::SignPattern;
use impulsive_tikhonov::operators::heat_operator;
use impulsive_tikhonov::solver::{
    energy_bound_check, minimize_l1, operator_gamma, solve_l1, solve_l2, DenseMap, Fidelity, SolveOptions,
    TikhonovProblem,
};
use impulsive_tikhonov::spectral::{
    addition_formula_kernel, legendre::real_harmonics, legendre_eval, Grid, Manifold, ManifoldKind, SpectralFunction,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::sync::{Mutex, MutexGuard, OnceLock};
use std::time::{Duration, Instant};

/// Written to the stdout handle directly so the line is not swallowed by
/// the test harness's output capture for passing tests.
fn report(n: u32, pass: bool, detail: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "criterion {n}: {} ({detail})", if pass { "PASS" } else { "FAIL" });
}

/// Runtime criteria are measured one test at a time.
fn serial() -> MutexGuard<'static, ()> {
    static LOCK: Mutex<()> = Mutex::new(());
    LOCK.lock().unwrap_or_else(|e| e.into_inner())
}

// ---------------------------------------------------------------- 1

/// Forward matrix (row-major, nodes × coefficients) from unit coefficient
/// vectors pushed through the operator.
fn forward_matrix(op: &impulsive_tikhonov::operators::DiagonalOperator, grid: &std::sync::Arc<Grid>) -> Vec<Vec<f64>> {
    let n = grid.basis_dim();
    let cols: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let e = SpectralFunction::from_fn(grid.clone(), |_, i| if i == j { 1.0 } else { 0.0 }).unwrap();
            op.apply(&e).unwrap().synthesize()
        })
        .collect();
    (0..grid.len()).map(|i| cols.iter().map(|c| c[i]).collect()).collect()
}

fn l1_functional(k: &[Vec<f64>], w: &[f64], g: &[f64], alpha: f64, c: &[f64]) -> f64 {
    let fit: f64 = k
        .iter()
        .zip(w)
        .zip(g)
        .map(|((row, wi), gi)| wi * (row.iter().zip(c).map(|(a, b)| a * b).sum::<f64>() - gi).abs())
        .sum();
    fit / alpha + c.iter().map(|x| x * x).sum::<f64>()
}

/// Exact minimum of F over the lattice hℤ³ inside the cube of half-width
/// `hw` around `center`: every (c₀, c₁) lattice pair is visited and the
/// convex restriction to the c₂ line is minimized by discrete bisection.
fn lattice_min(f: &dyn Fn(&[f64]) -> f64, center: [f64; 3], hw: f64, h: f64) -> [f64; 3] {
    let n = (hw / h).ceil() as i64;
    let base = center.map(|x| (x / h).round());
    let at = |i: i64, j: i64, l: i64| [(base[0] + i as f64) * h, (base[1] + j as f64) * h, (base[2] + l as f64) * h];
    let mut best = (f64::INFINITY, center);
    for i in -n..=n {
        for j in -n..=n {
            let (mut lo, mut hi) = (-n, n);
            while lo < hi {
                let mid = (lo + hi).div_euclid(2);
                if f(&at(i, j, mid)) <= f(&at(i, j, mid + 1)) {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            let c = at(i, j, lo);
            let v = f(&c);
            if v < best.0 {
                best = (v, c);
            }
        }
    }
    best.1
}

/// Argmin of F on the lattice of step 1e-3. Since F(c) − F* ≥ ‖c − c*‖²
/// and F is L-Lipschitz, the lattice argmin at step h lies within
/// ρ(h) = √(L h √3/2) of c*; each level searches a cube that provably
/// contains the next one's argmin, starting from the ball ‖c‖² ≤ F(0).
fn grid_argmin(f: &dyn Fn(&[f64]) -> f64, lipschitz: f64) -> [f64; 3] {
    let rho = |h: f64| (lipschitz * h * 3f64.sqrt() / 2.0).sqrt();
    let r0 = f(&[0.0; 3]).sqrt();
    let c1 = lattice_min(f, [0.0; 3], r0, 1e-2);
    let c2 = lattice_min(f, c1, rho(1e-2) + rho(3e-3), 3e-3);
    lattice_min(f, c2, rho(3e-3) + rho(1e-3), 1e-3)
}

struct OracleCase {
    sup_dist: f64,
    excess: f64,
    certified: bool,
    l2_rel: f64,
    solve_time: Duration,
}

fn oracle_case(seed: u64) -> OracleCase {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t_bar = rng.gen_range(0.2..1.0);
    let alpha = rng.gen_range(0.1..1.0);
    // three modes: constant, cos x, sin x
    let op = heat_operator(t_bar, 1).unwrap();
    let grid = Grid::circle(1, 8).unwrap();
    let mut g: Vec<f64> = (0..8).map(|_| rng.gen_range(-0.5..0.5)).collect();
    g[rng.gen_range(0..8)] += if rng.gen_bool(0.5) { 3.0 } else { -3.0 };
    let k = forward_matrix(&op, &grid);
    let w = grid.weights().to_vec();
    let f = |c: &[f64]| l1_functional(&k, &w, &g, alpha, c);
    let r0 = f(&[0.0; 3]).sqrt();
    let lipschitz = k.iter().zip(&w).map(|(row, wi)| wi * row.iter().map(|x| x * x).sum::<f64>().sqrt()).sum::<f64>() / alpha
        + 2.0 * (r0 + 1.0);
    let oracle = grid_argmin(&f, lipschitz);
    let prob = TikhonovProblem::new(op, grid, g.clone(), alpha, Fidelity::L1).unwrap();
    let t = Instant::now();
    let r = solve_l1(&prob, &SolveOptions::default()).unwrap();
    let mut solve_time = t.elapsed();
    assert!(r.converged);
    let c = r.f_hat.coeffs();
    let sup_dist = c.iter().zip(&oracle).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let dist = c.iter().zip(&oracle).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    let excess = f(c) - f(&oracle);
    // ‖c_grid − c*‖² ≤ F(c_grid) − F* and ‖c − c*‖² ≤ gap
    let certified = excess <= 1e-12 * f(&oracle) && dist <= (-excess + r.pd_gap).max(0.0).sqrt() + r.pd_gap.sqrt() + 1e-12;

    // L2: gradient descent on (1/2α)Σw(Kc − g)² + ‖c‖² for a 9-mode problem
    let op = heat_operator(t_bar, 4).unwrap();
    let grid = Grid::circle(4, 20).unwrap();
    let g: Vec<f64> = (0..20).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let k = forward_matrix(&op, &grid);
    let w = grid.weights().to_vec();
    let n = grid.basis_dim();
    let trace: f64 = k.iter().zip(&w).map(|(row, wi)| wi * row.iter().map(|x| x * x).sum::<f64>()).sum();
    let lip = trace / alpha + 2.0;
    let mut cg = vec![0.0; n];
    for _ in 0..1_000_000 {
        let res: Vec<f64> = k.iter().zip(&g).map(|(row, gi)| row.iter().zip(&cg).map(|(a, b)| a * b).sum::<f64>() - gi).collect();
        let grad: Vec<f64> = (0..n)
            .map(|j| k.iter().zip(&w).zip(&res).map(|((row, wi), ri)| wi * row[j] * ri).sum::<f64>() / alpha + 2.0 * cg[j])
            .collect();
        let mut moved: f64 = 0.0;
        for j in 0..n {
            let s = grad[j] / lip;
            cg[j] -= s;
            moved = moved.max(s.abs());
        }
        if moved < 1e-16 {
            break;
        }
    }
    let prob = TikhonovProblem::new(op, grid, g, alpha, Fidelity::L2).unwrap();
    let t = Instant::now();
    let r = solve_l2(&prob).unwrap();
    solve_time += t.elapsed();
    let num: f64 = r.f_hat.coeffs().iter().zip(&cg).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    let den: f64 = cg.iter().map(|x| x * x).sum::<f64>().sqrt();
    OracleCase { sup_dist, excess, certified, l2_rel: num / den, solve_time }
}

#[test]
fn criterion_01_solver_oracles() {
    let _serial = serial();
    let t = Instant::now();
    let cases: Vec<OracleCase> = std::thread::scope(|s| {
        let hs: Vec<_> = (0..20u64).map(|seed| s.spawn(move || oracle_case(seed))).collect();
        hs.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let oracle_time = t.elapsed();
    let solve_time: Duration = cases.iter().map(|c| c.solve_time).sum();
    let certified = cases.iter().filter(|c| c.certified).count();
    let within = cases.iter().filter(|c| c.sup_dist <= 1e-3).count();
    let worst_sup = cases.iter().map(|c| c.sup_dist).fold(0.0, f64::max);
    let worst_excess = cases.iter().map(|c| c.excess).fold(f64::NEG_INFINITY, f64::max);
    let worst_l2 = cases.iter().map(|c| c.l2_rel).fold(0.0, f64::max);
    let pass = within == 20 && worst_l2 <= 1e-8 && solve_time < Duration::from_secs(10);
    report(
        1,
        pass,
        &format!(
            "L1: max |c - c_grid| {worst_sup:.2e} <= 1e-3 in {within}/20; F(c) - F(c_grid) max {worst_excess:.2e}, \
             strong-convexity consistent in {certified}/20; L2 rel. dev. {worst_l2:.2e} <= 1e-8; \
             solver time {solve_time:.1?} < 10 s (oracles {oracle_time:.1?})"
        ),
    );
    assert!(pass);
}

// ---------------------------------------------------------------- 2

#[test]
fn criterion_02_scalar_closed_form() {
    let _serial = serial();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let g: f64 = rng.gen_range(-5.0..5.0);
        let s: f64 = rng.gen_range(0.05..2.0);
        let a: f64 = rng.gen_range(1e-3..2.0);
        let want = (g / s).clamp(-s / (2.0 * a), s / (2.0 * a));
        let k = DenseMap::new(1, 1, vec![s], vec![1.0]);
        let (c, st) = minimize_l1(&k, &[g], a, &SolveOptions { tol: 1e-12, ..Default::default() }).unwrap();
        assert!(st.converged);
        worst = worst.max((c[0] - want).abs());
    }
    let pass = worst <= 1e-6;
    report(2, pass, &format!("max |c - clamp(g/s, +-s/(2a))| = {worst:.2e} <= 1e-6 over 100 triples"));
    assert!(pass);
}

// ---------------------------------------------------------------- 3

#[test]
fn criterion_03_interpolation_inequality() {
    let _serial = serial();
    let t = Instant::now();
    let cases = [
        ("circle/heat", ManifoldKind::Circle, WeightFunction::heat(1.0).unwrap(), 64),
        ("interval/gradiometry R=2", ManifoldKind::Interval, WeightFunction::gradiometry(2.0).unwrap(), 32),
        ("sphere/gradiometry R=2", ManifoldKind::Sphere, WeightFunction::gradiometry(2.0).unwrap(), 24),
    ];
    let mut parts = Vec::new();
    let mut violations = 0;
    for (name, kind, w, degree) in cases {
        let profile = InterpProfile::new(Manifold::new(kind), w.clone()).unwrap();
        let r = run_interp_study(kind, &w, degree, 100, &default_delta_grid(&profile, 20), 0).unwrap();
        violations += r.violations.len();
        parts.push(format!("{name}: {} checks, {} violations, max ratio {:.3}", r.checks, r.violations.len(), r.max_ratio));
    }
    let elapsed = t.elapsed();
    let pass = violations == 0 && elapsed < Duration::from_secs(60);
    report(3, pass, &format!("{}; {elapsed:.1?} < 60 s", parts.join("; ")));
    assert!(pass);
}

// ---------------------------------------------------------------- 4

/// Rounding allowance for sup-norm errors measured in double precision.
fn floor(g: &SpectralFunction) -> f64 {
    64.0 * f64::EPSILON * g.sup_l1().0
}

#[test]
fn criterion_04_decay_and_projection_bounds() {
    let _serial = serial();
    let mut checks = 0usize;
    let mut bad = Vec::new();
    let cases = [
        (ManifoldKind::Circle, WeightFunction::heat(1.0).unwrap(), 32, 40),
        (ManifoldKind::Circle, WeightFunction::gradiometry(3.0).unwrap(), 32, 40),
        (ManifoldKind::Interval, WeightFunction::gradiometry(2.0).unwrap(), 32, 40),
        (ManifoldKind::Sphere, WeightFunction::gradiometry(2.0).unwrap(), 16, 10),
    ];
    for (kind, w, degree, samples) in cases {
        let grid = Grid::standard(kind, degree).unwrap();
        let fine = grid.oversampled(4).unwrap();
        let profile = InterpProfile::new(Manifold::new(kind), w.clone()).unwrap();
        for s in 0..samples {
            let g = sample_ball_function(&grid, &w, 1000 + s).unwrap();
            let a = anorm(&g, &w).unwrap();
            match kind {
                ManifoldKind::Circle => {
                    for n in 0..=degree {
                        let c = g.fourier(n as i64).unwrap().norm();
                        checks += 1;
                        if c > (-profile.lambda_star(n)).exp() * a * (1.0 + 1e-9) + 1e-300 {
                            bad.push(format!("{kind:?} seed {s} fourier n={n}"));
                        }
                    }
                }
                ManifoldKind::Interval => {
                    for (n, c) in g.chebyshev().unwrap().iter().enumerate() {
                        checks += 1;
                        if c.abs() > 2.0 * (-profile.lambda_star(n)).exp() * a * (1.0 + 1e-9) + 1e-15 * a {
                            bad.push(format!("{kind:?} seed {s} chebyshev n={n}"));
                        }
                    }
                }
                ManifoldKind::Sphere => {}
            }
            for m in profile.m0()..=degree / 2 {
                let p = match kind {
                    ManifoldKind::Interval => g.project_chebyshev(m).unwrap(),
                    _ => g.project(m),
                };
                let err = g.sub(&p).unwrap().sup_l1_on(&fine).unwrap().0;
                checks += 1;
                if err > profile.projection_bound(m) * a * (1.0 + 1e-9) + floor(&g) {
                    bad.push(format!("{kind:?} {} seed {s} projection m={m}: {err:.3e}", w.name()));
                }
            }
        }
    }
    let pass = bad.is_empty();
    report(4, pass, &format!("{checks} checks, {} violations {:?}", bad.len(), bad.iter().take(5).collect::<Vec<_>>()));
    assert!(pass);
}

// ---------------------------------------------------------------- 5

#[test]
fn criterion_05_legendre_ellipse_and_addition_formula() {
    let _serial = serial();
    let mut worst_ratio: f64 = 0.0;
    let mut ellipse_bad = 0;
    for m in 0..=30usize {
        for r in [0.1, 0.5, 1.0] {
            for i in 0..720 {
                let th = 2.0 * PI * i as f64 / 720.0;
                let z = Complex64::new(r, th).cosh();
                let v = legendre_eval(m, z).norm();
                let ratio = v / (m as f64 * r).exp();
                worst_ratio = worst_ratio.max(ratio);
                if ratio > 1.0 + 1e-12 {
                    ellipse_bad += 1;
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst_add: f64 = 0.0;
    for _ in 0..50 {
        let (t1, p1, t2, p2) = (rng.gen_range(0.0..PI), rng.gen_range(0.0..2.0 * PI), rng.gen_range(0.0..PI), rng.gen_range(0.0..2.0 * PI));
        let unit = |t: f64, p: f64| [t.sin() * p.cos(), t.sin() * p.sin(), t.cos()];
        let (yx, yy) = (real_harmonics(10, t1, p1), real_harmonics(10, t2, p2));
        for m in 0..=10usize {
            let sum: f64 = (m * m..(m + 1) * (m + 1)).map(|i| yx[i] * yy[i]).sum();
            worst_add = worst_add.max((sum - addition_formula_kernel(m, unit(t1, p1), unit(t2, p2))).abs());
        }
    }
    let pass = ellipse_bad == 0 && worst_add <= 1e-8;
    report(
        5,
        pass,
        &format!("max |P_m|/e^(mr) on ellipses = {worst_ratio:.6} ({ellipse_bad} violations), addition formula max dev {worst_add:.2e} <= 1e-8"),
    );
    assert!(pass);
}

// ---------------------------------------------------------------- 6

fn gradiometry_exp_neg_conjugate(radius: f64, s: f64) -> f64 {
    ((4.0 + s) / (4.0 * radius)).powi(4) * ((4.0 + s) / (s * radius)).powf(s)
}

#[test]
fn criterion_06_fenchel_and_psi() {
    let _serial = serial();
    let mut worst_heat: f64 = 0.0;
    let mut worst_grad: f64 = 0.0;
    let mut worst_boundary: f64 = 0.0;
    for i in 0..=396 {
        let s = 1.0 + i as f64 * 0.25;
        for t_bar in [0.5, 1.0, 2.0] {
            let heat = WeightFunction::heat(t_bar).unwrap();
            let want = s * s * t_bar;
            worst_heat = worst_heat.max((heat.conjugate_numeric(s) - want).abs() / want);
        }
        for radius in [2.0, 4.0, 5.0, 8.0] {
            let w = WeightFunction::gradiometry(radius).unwrap();
            let got = (-w.conjugate_numeric(s)).exp();
            // below s = 4/(R − 1) the supremum sits at r = 0 and the closed form no longer applies
            if s * (radius - 1.0) >= 4.0 {
                let want = gradiometry_exp_neg_conjugate(radius, s);
                worst_grad = worst_grad.max((got - want).abs() / want);
            } else {
                let want = (radius - 1.0).powi(-4);
                worst_boundary = worst_boundary.max((got - want).abs() / want);
            }
        }
    }
    // ψ_p(α) against (ln 1/(αp))^{-p} on α = 10^{-k}, k = 4..300
    let mut worst_psi = (0.0f64, 0.0f64, 0.0f64);
    let mut threshold = [f64::NAN; 2];
    for (pi, p) in [1.0f64, 2.0].into_iter().enumerate() {
        let phi = IndexFunction::log(p);
        let mut holds_below = true;
        for k in (4..=300).rev() {
            let alpha = 10f64.powi(-k);
            let rel = phi.psi(alpha) / (1.0 / (alpha * p)).ln().powf(-p) - 1.0;
            if rel.abs() > worst_psi.0.abs() {
                worst_psi = (rel, p, alpha);
            }
            holds_below &= rel.abs() <= 0.1;
            if holds_below {
                threshold[pi] = alpha;
            }
        }
    }
    let conj_ok = worst_heat <= 1e-6 && worst_grad <= 1e-6 && worst_boundary <= 1e-6;
    let psi_ok = worst_psi.0.abs() <= 0.1;
    let pass = conj_ok && psi_ok;
    report(
        6,
        pass,
        &format!(
            "lambda* heat rel. dev {worst_heat:.1e}, gradiometry exp(-lambda*) rel. dev {worst_grad:.1e} \
             (boundary regime {worst_boundary:.1e}) (<= 1e-6); psi worst rel. dev {:+.3} at p={} alpha={:.0e} (<= 0.1); \
             within 10% only for alpha <= {:.0e} (p=1), {:.0e} (p=2)",
            worst_psi.0, worst_psi.1, worst_psi.2, threshold[0], threshold[1]
        ),
    );
    assert!(pass);
}

// ---------------------------------------------------------------- 7, 8, 9

struct Studies {
    runs: Vec<(String, RateStudy)>,
    elapsed: Duration,
}

fn study_configs() -> Vec<(String, ExperimentConfig)> {
    let mut out = Vec::new();
    for problem in [Problem::Heat, Problem::Gradiometry] {
        for p in [1.0, 2.0] {
            let mut cfg = ExperimentConfig::default_for(problem);
            cfg.p = p;
            out.push((format!("{} p={p}", problem.name()), cfg));
        }
    }
    out
}

fn run_all(gamma_scale: f64) -> Studies {
    let t = Instant::now();
    let handles: Vec<_> = study_configs()
        .into_iter()
        .map(|(name, mut cfg)| {
            cfg.gamma_scale = gamma_scale;
            std::thread::spawn(move || (name, run_rate_study(&cfg).unwrap()))
        })
        .collect();
    let runs = handles.into_iter().map(|h| h.join().unwrap()).collect();
    Studies { runs, elapsed: t.elapsed() }
}

fn studies() -> &'static Studies {
    static S: OnceLock<Studies> = OnceLock::new();
    S.get_or_init(|| run_all(1.0))
}

#[test]
fn criterion_07_rate_reproduction() {
    let _serial = serial();
    let s = studies();
    let mut pass = s.elapsed < Duration::from_secs(300);
    let mut parts = Vec::new();
    for (name, st) in &s.runs {
        let e = st.eta_exponent;
        let eta = st.eta_fit.unwrap();
        let eps = st.eps_fit.unwrap();
        let ok = st.eta_slope_ok() && st.eps_fit_ok();
        pass &= ok;
        parts.push(format!(
            "{name}: eta slope {:.3} in [{:.1}, {:.1}] {} (eta <= {:.3}, {} cells; all-cells slope {:.3}), eps R^2 {:.3} >= 0.9 {}",
            eta.slope,
            0.7 * e,
            1.3 * e,
            if st.eta_slope_ok() { "ok" } else { "MISS" },
            st.eta0,
            eta.n,
            st.eta_fit_all.unwrap().slope,
            eps.r2,
            if st.eps_fit_ok() { "ok" } else { "MISS" }
        ));
    }
    report(7, pass, &format!("{}; studies {:.1?} < 300 s", parts.join("; "), s.elapsed));
    assert!(pass);
}

/// Adversarial cell for the corrupted γ: gradiometry, η = δ₀/2 (largest
/// admissible), one-signed impulses, α = 1e-4. Returns (check with γ × 1e-3,
/// measured share of the γ term actually used).
fn adversarial_cell() -> (impulsive_tikhonov::solver::EnergyCheck, f64) {
    let mut cfg = ExperimentConfig::gradiometry();
    cfg.signs = SignPattern::Constant;
    let op = cfg.operator().unwrap();
    let grid = op.standard_grid().unwrap();
    let gamma = operator_gamma(&op).unwrap();
    let eta = gamma.delta0() / 2.0;
    let alpha = 1e-4;
    let cell = run_cell(&cfg, 0.0, eta, 0, Some(alpha), Fidelity::L1).unwrap();
    let src = study_source(&cfg, &op, &grid, 0).unwrap();
    let eta_m = cell.noise.eta_measured;
    let honest = energy_bound_check(&cell.result.f_hat, &src.udag, alpha, cell.noise.epsilon_measured, eta_m, &gamma).unwrap();
    let share = (honest.lhs - src.udag.l2_norm()) / (2.0 * eta_m * gamma.gamma(2.0 * eta_m).unwrap() / alpha);
    let bad = energy_bound_check(
        &cell.result.f_hat,
        &src.udag,
        alpha,
        cell.noise.epsilon_measured,
        eta_m,
        &gamma.scaled(1e-3),
    )
    .unwrap();
    (bad, share)
}

/// The same corrupted γ in the interpolation inequality itself: Fejér kernel
/// of degree 3 on the circle (heat weight) at δ = δ₀.
fn fejer_diagnostic() -> (bool, bool) {
    let w = WeightFunction::heat(1.0).unwrap();
    let profile = InterpProfile::new(Manifold::circle(), w.clone()).unwrap();
    let grid = Grid::standard(ManifoldKind::Circle, 3).unwrap();
    let g = SpectralFunction::from_fourier(grid.clone(), |k| Complex64::new(1.0 - k as f64 / 4.0, 0.0)).unwrap();
    let (sup, l1) = g.sup_l1_on(&grid.oversampled(8).unwrap()).unwrap();
    let a = anorm(&g, &w).unwrap();
    let d = profile.delta0();
    let gm = profile.gamma(d).unwrap();
    (check_from_norms(sup, l1, a, gm, d).holds, check_from_norms(sup, l1, a, 1e-3 * gm, d).holds)
}

#[test]
fn criterion_08_inequality_suites_and_negative_control() {
    let _serial = serial();
    let s = studies();
    let cells: usize = s.runs.iter().map(|(_, st)| st.cells.len()).sum();
    let violations: usize = s.runs.iter().map(|(_, st)| st.violations).sum();
    let applicable: usize = s.runs.iter().map(|(_, st)| st.cells.iter().filter(|c| c.bounds.applicable).count()).sum();

    let neg = run_all(1e-3);
    let caught_cells: usize = neg.runs.iter().map(|(_, st)| st.violations).sum();
    let (adv, share) = adversarial_cell();
    let caught = caught_cells > 0 || !adv.holds;
    let (fejer_honest, fejer_corrupt) = fejer_diagnostic();

    let pass = violations == 0 && caught;
    report(
        8,
        pass,
        &format!(
            "honest gamma: {violations} violations over {cells} cells ({applicable} with rate bounds applicable); \
             gamma x 1e-3: {caught_cells} study violations, adversarial cell energy {:.4e} <= {:.4e} holds={} \
             (observed share of the gamma term {share:.1e}); diagnostic: Fejer kernel interpolation check honest holds={fejer_honest}, corrupted holds={fejer_corrupt}",
            adv.lhs, adv.rhs, adv.holds
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_09_l1_dominance() {
    let _serial = serial();
    let s = studies();
    let (wins, total) = s.runs.iter().fold((0, 0), |acc, (_, st)| (acc.0 + st.l1_wins.0, acc.1 + st.l1_wins.1));
    let per: Vec<String> = s.runs.iter().map(|(n, st)| format!("{n} {}/{}", st.l1_wins.0, st.l1_wins.1)).collect();
    let frac = wins as f64 / total as f64;
    let pass = total > 0 && frac >= 0.9;
    report(9, pass, &format!("L1 beats L2 in {wins}/{total} = {:.1}% >= 90% ({})", 100.0 * frac, per.join(", ")));
    assert!(pass);
}

// ---------------------------------------------------------------- 10

#[test]
fn criterion_10_determinism() {
    let _serial = serial();
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for i in 0..2 {
        let out = dir.path().join(format!("run{i}.csv"));
        let st = std::process::Command::new(env!("CARGO_BIN_EXE_impulsive"))
            .args(["--problem", "gradiometry", "rates", "--out", out.to_str().unwrap()])
            .output()
            .unwrap();
        assert_eq!(st.status.code(), Some(0), "{}", String::from_utf8_lossy(&st.stderr));
        outputs.push(std::fs::read(&out).unwrap());
    }
    let pass = outputs[0] == outputs[1] && !outputs[0].is_empty();
    report(
        10,
        pass,
        &format!("two `rates` runs (gradiometry defaults): {} and {} bytes, identical = {}", outputs[0].len(), outputs[1].len(), outputs[0] == outputs[1]),
    );
    assert!(pass);
}
