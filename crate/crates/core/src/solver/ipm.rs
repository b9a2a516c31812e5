//! Primal–dual interior point method (Mehrotra predictor–corrector) for
//!
//!   min_c Σ w_i |(Kc)_i − g_i| + α‖c‖²
//!
//! written as a QP in (c, t) with −t ≤ Kc − g ≤ t.

use super::linear::LinearMap;
use super::{dual_objective, roundoff_floor, L1Output, SolveOptions, TraceRow};
use nalgebra::{DMatrix, DVector};

pub(crate) fn minimize(k: &dyn LinearMap, g: &[f64], alpha: f64, opts: &SolveOptions) -> L1Output {
    let m = k.n_rows();
    let n_full = k.n_cols();
    let w = k.weights().to_vec();
    let meas: f64 = w.iter().sum();

    // |c_j| ≤ √|𝕄| ‖K e_j‖_w / (2α) at the optimum: columns below the drop
    // tolerance are fixed at zero
    let keep: Vec<usize> = (0..n_full)
        .filter(|&j| meas.sqrt() * k.column_norm(j) / (2.0 * alpha) >= opts.drop_tol)
        .collect();
    let n = keep.len();
    let mut kd = DMatrix::<f64>::zeros(m, n);
    let mut col = vec![0.0; m];
    for (jj, &j) in keep.iter().enumerate() {
        k.column(j, &mut col);
        kd.column_mut(jj).copy_from_slice(&col);
    }
    let kt = kd.transpose();
    let gv = DVector::from_column_slice(g);
    let wv = DVector::from_column_slice(&w);

    let mut c = DVector::<f64>::zeros(n);
    let mut t = gv.map(|x| x.abs() + 1.0);
    let mut z1 = wv.scale(0.5);
    let mut z2 = wv.scale(0.5);

    let mut trace = Vec::new();
    let mut iterations = 0;
    let mut gap = f64::INFINITY;
    let mut converged = false;
    let mut y = DVector::<f64>::zeros(m);

    let floor = roundoff_floor(g, &w);
    let max_iter = opts.max_iter.min(500);
    for it in 0..=max_iter {
        let r = &kd * &c - &gv;
        let s1 = &t - &r;
        let s2 = &t + &r;

        // certificate from the clipped dual
        y = (&z1 - &z2).zip_map(&wv, |v, wi| v.clamp(-wi, wi));
        let primal = r.iter().zip(&w).map(|(ri, wi)| wi * ri.abs()).sum::<f64>() + alpha * c.norm_squared();
        let kty = &kt * &y;
        let dual = dual_objective(&y, &gv, kty.norm_squared(), alpha);
        gap = (primal - dual).max(0.0);
        iterations = it;
        if opts.trace {
            trace.push(TraceRow { iteration: it, objective: primal / alpha, gap: gap / alpha });
        }
        if gap <= opts.tol * alpha * (1.0 + c.norm_squared()) + floor {
            converged = true;
            break;
        }
        if it == max_iter {
            break;
        }

        let rc = c.scale(2.0 * alpha) + &kt * (&z1 - &z2);
        let rt = &wv - &z1 - &z2;
        let mu = (s1.dot(&z1) + s2.dot(&z2)) / (2.0 * m as f64);
        let d1 = z1.component_div(&s1);
        let d2 = z2.component_div(&s2);
        let dsum = &d1 + &d2;
        let ddiff = &d1 - &d2;
        // 4 d1 d2 / (d1 + d2) written to avoid overflow
        let dg = DVector::from_fn(m, |i, _| 4.0 / (s1[i] / z1[i] + s2[i] / z2[i]));

        let mut h = kt.clone();
        for i in 0..m {
            h.column_mut(i).scale_mut(dg[i]);
        }
        let mut hmat = &h * &kd;
        for j in 0..n {
            hmat[(j, j)] += 2.0 * alpha;
        }
        let chol = hmat.clone().cholesky();
        let lu = if chol.is_none() { Some(hmat.clone().lu()) } else { None };
        let solve_h = |b: DVector<f64>| -> DVector<f64> {
            match &chol {
                Some(ch) => ch.solve(&b),
                None => lu.as_ref().and_then(|l| l.solve(&b)).unwrap_or_else(|| DVector::zeros(b.len())),
            }
        };

        let direction = |rho1: &DVector<f64>, rho2: &DVector<f64>| {
            let a1 = rho1.component_div(&s1);
            let a2 = rho2.component_div(&s2);
            let q = &a1 + &a2 - &rt;
            let hvec = DVector::from_fn(m, |i, _| a1[i] - a2[i] - ddiff[i] / dsum[i] * q[i]);
            let dc = solve_h(-&rc - &kt * &hvec);
            let kdc = &kd * &dc;
            let dt = DVector::from_fn(m, |i, _| (q[i] + ddiff[i] * kdc[i]) / dsum[i]);
            let ds1 = &dt - &kdc;
            let ds2 = &dt + &kdc;
            let dz1 = &a1 - d1.component_mul(&ds1);
            let dz2 = &a2 - d2.component_mul(&ds2);
            (dc, dt, ds1, ds2, dz1, dz2)
        };
        let max_step = |x: &DVector<f64>, dx: &DVector<f64>| {
            x.iter().zip(dx.iter()).filter(|(_, d)| **d < 0.0).map(|(xi, di)| -xi / di).fold(f64::INFINITY, f64::min)
        };

        let rho1 = -s1.component_mul(&z1);
        let rho2 = -s2.component_mul(&z2);
        let (_, _, ds1a, ds2a, dz1a, dz2a) = direction(&rho1, &rho2);
        let a_aff = [max_step(&s1, &ds1a), max_step(&s2, &ds2a), max_step(&z1, &dz1a), max_step(&z2, &dz2a), 1.0]
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        let mu_aff = ((&s1 + ds1a.scale(a_aff)).dot(&(&z1 + dz1a.scale(a_aff)))
            + (&s2 + ds2a.scale(a_aff)).dot(&(&z2 + dz2a.scale(a_aff))))
            / (2.0 * m as f64);
        let centering = (mu_aff / mu).clamp(0.0, 1.0).powi(3);

        let rho1 = DVector::from_fn(m, |i, _| centering * mu - s1[i] * z1[i] - ds1a[i] * dz1a[i]);
        let rho2 = DVector::from_fn(m, |i, _| centering * mu - s2[i] * z2[i] - ds2a[i] * dz2a[i]);
        let (dc, dt, ds1, ds2, dz1, dz2) = direction(&rho1, &rho2);
        let step = 0.99
            * [max_step(&s1, &ds1), max_step(&s2, &ds2), max_step(&z1, &dz1), max_step(&z2, &dz2)]
                .into_iter()
                .fold(1.0 / 0.99, f64::min);
        if !(step > 1e-14) || !dc.iter().all(|v| v.is_finite()) {
            break;
        }
        c += dc.scale(step);
        t += dt.scale(step);
        z1 += dz1.scale(step);
        z2 += dz2.scale(step);
    }

    let mut c_full = vec![0.0; n_full];
    for (jj, &j) in keep.iter().enumerate() {
        c_full[j] = c[jj];
    }
    // the certificate lives in the full space
    let y_nodal: Vec<f64> = y.iter().zip(&w).map(|(yi, wi)| yi / wi).collect();
    L1Output { c: c_full, y_nodal, iterations, gap_scaled: gap, converged, trace }
}
