//! CSV rendering of rate rows: fixed header, 17 significant digits, LF
//! line endings, rows sorted by cell then seed.

use super::study::{sort_rows, RateRow};
use crate::error::{invalid, Result};
use std::io::{Read, Write};
use std::path::Path;

pub const HEADER: [&str; 8] = ["eps", "eta", "alpha", "bregman_error", "residual_l1", "iterations", "converged", "seed"];

fn real(x: f64) -> String {
    format!("{x:.16e}")
}

/// Write rows (sorted copy) to any writer.
pub fn write_csv<W: Write>(rows: &[RateRow], out: W) -> Result<()> {
    let mut rows = rows.to_vec();
    sort_rows(&mut rows);
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(HEADER)?;
    for r in &rows {
        w.write_record([
            real(r.eps),
            real(r.eta),
            real(r.alpha),
            real(r.bregman_error),
            real(r.residual_l1),
            r.iterations.to_string(),
            r.converged.to_string(),
            r.seed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_csv(rows: &[RateRow], path: &Path) -> Result<()> {
    let f = std::fs::File::create(path)?;
    write_csv(rows, std::io::BufWriter::new(f))
}

/// Parse a file written by [`write_csv`].
pub fn read_csv<R: Read>(input: R) -> Result<Vec<RateRow>> {
    let mut rd = csv::ReaderBuilder::new().from_reader(input);
    if rd.headers()?.iter().ne(HEADER) {
        return Err(invalid("unexpected CSV header"));
    }
    let mut rows = Vec::new();
    for rec in rd.records() {
        let rec = rec?;
        let f = |i: usize| -> Result<f64> { rec[i].parse().map_err(|_| invalid(format!("bad number `{}`", &rec[i]))) };
        let u = |i: usize| -> Result<u64> { rec[i].parse().map_err(|_| invalid(format!("bad integer `{}`", &rec[i]))) };
        rows.push(RateRow {
            eps: f(0)?,
            eta: f(1)?,
            alpha: f(2)?,
            bregman_error: f(3)?,
            residual_l1: f(4)?,
            iterations: u(5)? as usize,
            converged: rec[6].parse().map_err(|_| invalid(format!("bad flag `{}`", &rec[6])))?,
            seed: u(7)?,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn render(rows: &[RateRow]) -> String {
        let mut buf = Vec::new();
        write_csv(rows, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn empty_is_header_only() {
        assert_eq!(render(&[]), "eps,eta,alpha,bregman_error,residual_l1,iterations,converged,seed\n");
    }

    #[test]
    fn golden_row() {
        let r = RateRow {
            eps: 0.0,
            eta: 0.25,
            alpha: 5.1723e-5,
            bregman_error: 1.0 / 3.0,
            residual_l1: 2e-300,
            iterations: 17,
            converged: true,
            seed: 4,
        };
        assert_eq!(
            render(&[r]),
            "eps,eta,alpha,bregman_error,residual_l1,iterations,converged,seed\n\
             0.0000000000000000e0,2.5000000000000000e-1,5.1722999999999999e-5,3.3333333333333331e-1,\
             2.0000000000000001e-300,17,true,4\n"
        );
    }

    #[test]
    fn sorted_and_round_trips() {
        let mk = |eps: f64, eta: f64, seed: u64| RateRow {
            eps,
            eta,
            alpha: 0.1 + eps,
            bregman_error: std::f64::consts::PI * eta,
            residual_l1: 1e-17,
            iterations: 3,
            converged: seed.is_multiple_of(2),
            seed,
        };
        let rows = vec![mk(1e-3, 0.0, 1), mk(0.0, 0.2, 0), mk(0.0, 0.1, 2), mk(0.0, 0.1, 1)];
        let text = render(&rows);
        let back = read_csv(text.as_bytes()).unwrap();
        let mut sorted = rows.clone();
        sort_rows(&mut sorted);
        assert_eq!(back, sorted);
        assert_eq!((back[0].eta, back[0].seed), (0.1, 1));
        assert!(!text.contains('\r'));
    }
}
