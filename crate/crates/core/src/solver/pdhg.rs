//! Accelerated primal–dual hybrid gradient (Chambolle–Pock) for
//!
//!   min_c Σ w_i |(Kc)_i − g_i| + α‖c‖²
//!
//! with the dual variable q ∈ [−1, 1]ᴹ in the weighted pairing.

use super::linear::LinearMap;
use super::{roundoff_floor, L1Output, SolveOptions, TraceRow};

pub(crate) fn minimize(k: &dyn LinearMap, g: &[f64], alpha: f64, opts: &SolveOptions) -> L1Output {
    let m = k.n_rows();
    let n = k.n_cols();
    let w = k.weights();
    let l = k.norm_bound().max(1e-300);
    let mut tau = 1.0 / l;
    let mut sig = 1.0 / l;

    let mut c = vec![0.0; n];
    let mut c_bar = c.clone();
    let mut q = vec![0.0; m];
    let mut kc = vec![0.0; m];
    let mut ktq = vec![0.0; n];

    let mut trace = Vec::new();
    let mut gap = f64::INFINITY;
    let mut converged = false;
    let mut iterations = 0;
    let floor = roundoff_floor(g, w);

    for it in 0..=opts.max_iter {
        iterations = it;
        if it % 10 == 0 || it == opts.max_iter {
            k.apply(&c, &mut kc);
            k.adjoint(&q, &mut ktq);
            let primal: f64 = kc.iter().zip(g).zip(w).map(|((a, b), wi)| wi * (a - b).abs()).sum::<f64>()
                + alpha * c.iter().map(|v| v * v).sum::<f64>();
            let dual = -q.iter().zip(g).zip(w).map(|((a, b), wi)| wi * a * b).sum::<f64>()
                - ktq.iter().map(|v| v * v).sum::<f64>() / (4.0 * alpha);
            gap = (primal - dual).max(0.0);
            if opts.trace {
                trace.push(TraceRow { iteration: it, objective: primal / alpha, gap: gap / alpha });
            }
            if gap <= opts.tol * alpha * (1.0 + c.iter().map(|v| v * v).sum::<f64>()) + floor {
                converged = true;
                break;
            }
            if it == opts.max_iter {
                break;
            }
        }
        k.apply(&c_bar, &mut kc);
        for i in 0..m {
            q[i] = (q[i] + sig * (kc[i] - g[i])).clamp(-1.0, 1.0);
        }
        k.adjoint(&q, &mut ktq);
        let theta = 1.0 / (1.0 + 4.0 * alpha * tau).sqrt();
        for j in 0..n {
            let new = (c[j] - tau * ktq[j]) / (1.0 + 2.0 * alpha * tau);
            c_bar[j] = new + theta * (new - c[j]);
            c[j] = new;
        }
        tau *= theta;
        sig /= theta;
    }
    L1Output { c, y_nodal: q, iterations, gap_scaled: gap, converged, trace }
}
