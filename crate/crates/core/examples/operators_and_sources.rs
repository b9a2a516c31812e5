//! Forward operators, their adjoints and source elements u† = φ(T*T)w.
//!
//!     cargo run --release --example operators_and_sources

use impulsive_tikhonov::operators::{gradiometry_operator, heat_operator, make_source, sobolev_norm};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for op in [heat_operator(1.0, 32)?, gradiometry_operator(4.0, 12)?] {
        let m = op.multipliers();
        println!(
            "{:?}: degree {}, |T| <= {:.4}, sigma_0 {:.3e}, sigma_N {:.3e}",
            op.kind(),
            op.degree(),
            op.norm_bound(),
            m[0],
            m[m.len() - 1]
        );
        let a = make_source(&op, 1.0, 1)?;
        let b = make_source(&op, 1.0, 2)?;
        let lhs = op.apply(&a.udag)?.dot(&b.w)?;
        let rhs = a.udag.dot(&op.adjoint_apply(&b.w)?)?;
        println!("  <Tu, w> - <u, T*w> = {:.2e}", lhs - rhs);
        for p in [0.5, 1.0, 2.0] {
            let s = make_source(&op, p, 3)?;
            println!(
                "  p {p}: |u| {:.4e}, |w| {:.4}, Sobolev-{p} norm {:.4e}",
                s.udag.l2_norm(),
                s.norm_w,
                sobolev_norm(&s.udag, p)?
            );
        }
    }
    Ok(())
}
