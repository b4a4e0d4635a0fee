//! The compensated-determinant experiment: for geometrically spaced `s`,
//! `f(s) = s^rho (ln det(1 - K|[0,s]) - [-a s^{2 rho} + b s^rho + c ln s + ln C])`,
//! which tends to a constant as `s` grows.

use std::io::{Read, Write};

use rayon::prelude::*;

use crate::asymptotics::{compute_coeffs, truncated_log_expansion};
use crate::error::{Error, Result};
use crate::fredholm::{grid_for, log_gap_determinant};
use crate::kernel::{MeijerKernel, ProcessParams};

/// Contour truncation tolerance used for determinant work.
pub const DEFAULT_TOL: f64 = 1e-12;

/// CSV header of a convergence file.
pub const CSV_HEADER: [&str; 4] = ["s", "log_det", "asymptotic", "f"];

/// One row of the experiment. `log_det` and `f_of_s` are `None` when the
/// determinant could not be resolved in double precision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRecord {
    pub s: f64,
    pub log_det: Option<f64>,
    pub truncated_asymptotic: f64,
    pub f_of_s: Option<f64>,
}

/// Settings of a convergence run.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergeOptions {
    pub s_min: f64,
    pub s_max: f64,
    pub points: usize,
    pub nodes: usize,
    pub tol: f64,
}

impl Default for ConvergeOptions {
    fn default() -> Self {
        Self {
            s_min: 1.0,
            s_max: 16.0,
            points: 9,
            nodes: 100,
            tol: DEFAULT_TOL,
        }
    }
}

/// `n` points from `s_min` to `s_max` with a constant ratio.
pub fn geometric_points(s_min: f64, s_max: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::Domain(format!("need at least 2 points, got {n}")));
    }
    if !(s_min > 0.0) || !(s_max > s_min) || !s_max.is_finite() {
        return Err(Error::Domain(format!(
            "need 0 < s_min < s_max, got {s_min}, {s_max}"
        )));
    }
    let ratio = (s_max / s_min).ln() / (n - 1) as f64;
    let mut out: Vec<f64> = (0..n).map(|k| s_min * (ratio * k as f64).exp()).collect();
    out[n - 1] = s_max;
    Ok(out)
}

/// Meijer-G kernel whose contours are valid on `(0, s_max]`.
pub fn kernel_for(params: &ProcessParams, s_max: f64, tol: f64) -> Result<MeijerKernel> {
    MeijerKernel::new(params.clone(), (s_max.min(1e-6), s_max), tol)
}

/// `ln det(1 - K|[0,s])` with an `m`-node grid.
pub fn log_det_at(kernel: &MeijerKernel, s: f64, m: usize) -> Result<f64> {
    let grid = grid_for(kernel.params(), s, m)?;
    log_gap_determinant(&grid, kernel)
}

/// Runs the experiment. Rows whose determinant is numerically zero or
/// inaccurate come back with empty `log_det` and `f_of_s`; other errors abort.
pub fn run_convergence(
    params: &ProcessParams,
    opts: &ConvergeOptions,
) -> Result<Vec<ConvergenceRecord>> {
    let points = geometric_points(opts.s_min, opts.s_max, opts.points)?;
    if opts.nodes < 2 {
        return Err(Error::Domain(format!(
            "need at least 2 quadrature nodes, got {}",
            opts.nodes
        )));
    }
    let coeffs = compute_coeffs(params)?;
    let kernel = kernel_for(params, opts.s_max, opts.tol)?;
    points
        .par_iter()
        .map(|&s| {
            let asym = truncated_log_expansion(s, &coeffs);
            let log_det = match log_det_at(&kernel, s, opts.nodes) {
                Ok(v) => Some(v),
                Err(Error::Singularity(_) | Error::Accuracy(_)) => None,
                Err(e) => return Err(e),
            };
            Ok(ConvergenceRecord {
                s,
                log_det,
                truncated_asymptotic: asym,
                f_of_s: log_det.map(|l| s.powf(coeffs.rho) * (l - asym)),
            })
        })
        .collect()
}

/// Decimal rendering with 15 significant digits, in the style of `%.15g`.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.14e}");
    let (mant, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..15).contains(&exp) {
        let fixed = format!("{:.*}", (14 - exp).max(0) as usize, x);
        trim_fraction(&fixed).to_string()
    } else {
        format!("{}e{exp}", trim_fraction(mant))
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Writes records as CSV with a header row and `\n` line endings.
pub fn write_csv<W: Write>(out: W, records: &[ConvergenceRecord]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    let opt = |v: Option<f64>| v.map(format_sig).unwrap_or_default();
    for r in records {
        w.write_record([
            format_sig(r.s),
            opt(r.log_det),
            format_sig(r.truncated_asymptotic),
            opt(r.f_of_s),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Parses a file produced by [`write_csv`].
pub fn read_csv<R: Read>(input: R) -> Result<Vec<ConvergenceRecord>> {
    let mut rd = csv::Reader::from_reader(input);
    if rd.headers()?.iter().ne(CSV_HEADER) {
        return Err(Error::Io(format!(
            "unexpected CSV header {:?}",
            rd.headers()?
        )));
    }
    let num = |field: &str| -> Result<f64> {
        field
            .parse()
            .map_err(|_| Error::Io(format!("bad number {field:?}")))
    };
    let opt = |field: &str| -> Result<Option<f64>> {
        if field.is_empty() {
            Ok(None)
        } else {
            num(field).map(Some)
        }
    };
    rd.records()
        .map(|row| {
            let row = row?;
            if row.len() != 4 {
                return Err(Error::Io(format!("expected 4 fields, got {}", row.len())));
            }
            Ok(ConvergenceRecord {
                s: num(&row[0])?,
                log_det: opt(&row[1])?,
                truncated_asymptotic: num(&row[2])?,
                f_of_s: opt(&row[3])?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_spacing() {
        let p = geometric_points(1.0, 16.0, 5).unwrap();
        for (got, want) in p.iter().zip([1.0, 2.0, 4.0, 8.0, 16.0]) {
            assert!((got - want).abs() < 1e-14 * want);
        }
        assert!(geometric_points(1.0, 16.0, 1).is_err());
        assert!(geometric_points(2.0, 1.0, 3).is_err());
    }

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(1.0), "1");
        assert_eq!(format_sig(-2.9631382296637362), "-2.96313822966374");
        assert_eq!(format_sig(1e-8), "1e-8");
        assert_eq!(format_sig(123456.789), "123456.789");
        assert_eq!(format_sig(0.0), "0");
        assert_eq!(format_sig(1.5e20), "1.5e20");
        assert_eq!(format_sig(0.000123), "0.000123");
    }

    #[test]
    fn csv_round_trip_with_empty_fields() {
        let recs = vec![
            ConvergenceRecord {
                s: 1.0,
                log_det: Some(-0.5),
                truncated_asymptotic: 0.25,
                f_of_s: Some(-0.75),
            },
            ConvergenceRecord {
                s: 2.0,
                log_det: None,
                truncated_asymptotic: -1.0 / 3.0,
                f_of_s: None,
            },
        ];
        let mut buf = Vec::new();
        write_csv(&mut buf, &recs).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("s,log_det,asymptotic,f\n"));
        assert!(!text.contains('\r'));
        assert!(text.contains("2,,-0.333333333333333,\n"));
        let back = read_csv(buf.as_slice()).unwrap();
        assert_eq!(back[0], recs[0]);
        assert_eq!(back[1].log_det, None);
    }

    #[test]
    fn bessel_rows_match_exact_value() {
        // ln det = -s exactly for the nu = 0 Bessel process, so f(s) = 0
        let params = ProcessParams::bessel(0.0).unwrap();
        let opts = ConvergeOptions {
            s_min: 1.0,
            s_max: 4.0,
            points: 3,
            nodes: 40,
            tol: DEFAULT_TOL,
        };
        for rec in run_convergence(&params, &opts).unwrap() {
            assert!((rec.log_det.unwrap() + rec.s).abs() < 1e-10);
            assert!(rec.f_of_s.unwrap().abs() < 1e-9);
        }
    }
}
