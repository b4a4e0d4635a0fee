//! Self-verification suite: special-function identities, closed-form
//! consistency relations, kernel reductions and determinant sanity checks,
//! each reduced to a residual compared against a threshold.

use std::fmt;
use std::io::Write;

use rayon::prelude::*;

use crate::asymptotics::{
    compute_coeffs, log_constant_bessel, log_constant_kr, log_constant_mb, AsymptoticCoeffs,
};
use crate::converge::{format_sig, kernel_for, log_det_at, DEFAULT_TOL};
use crate::error::Result;
use crate::kernel::{bessel_kernel, kernel_eval_series, Kernel, MeijerKernel, ProcessParams};
use crate::specfun::{hurwitz_zeta_prime, log_barnes_g, log_gamma, zeta_prime_minus1, LN_2PI};
use crate::ComplexValue;

/// Which checks to run; `Full` adds the residue-series kernel comparisons.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Fast,
    Full,
}

type Residual = Box<dyn Fn() -> Result<f64> + Send + Sync>;

/// A named residual computation with its acceptance threshold.
pub struct CheckSpec {
    pub name: String,
    pub threshold: f64,
    residual: Residual,
}

impl CheckSpec {
    pub fn new(
        name: impl Into<String>,
        threshold: f64,
        residual: impl Fn() -> Result<f64> + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            threshold,
            residual: Box::new(residual),
        }
    }
}

/// Result of one check. An evaluation error counts as a failure.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: String,
    pub threshold: f64,
    pub residual: std::result::Result<f64, String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        matches!(self.residual, Ok(r) if r.is_finite() && r < self.threshold)
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        match &self.residual {
            Ok(r) => write!(
                f,
                "{verdict} {}: residual {} (threshold {})",
                self.name,
                format_sig(*r),
                format_sig(self.threshold)
            ),
            Err(e) => write!(f, "{verdict} {}: {e}", self.name),
        }
    }
}

/// Which coefficient a regression check compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Rho,
    A,
    B,
    C,
    LnC,
}

impl Field {
    fn get(self, c: &AsymptoticCoeffs) -> f64 {
        match self {
            Field::Rho => c.rho,
            Field::A => c.a,
            Field::B => c.b,
            Field::C => c.c,
            Field::LnC => c.ln_c,
        }
    }
}

/// Compares one coefficient of `params` against a reference value.
pub fn coefficient_check(
    name: impl Into<String>,
    params: ProcessParams,
    field: Field,
    expected: f64,
    tol: f64,
) -> CheckSpec {
    CheckSpec::new(name, tol, move || {
        Ok((field.get(&compute_coeffs(&params)?) - expected).abs())
    })
}

/// The two parameter sets of the published numerical experiment.
pub fn figure_two_left() -> ProcessParams {
    ProcessParams::new(vec![1.31, 2.15, 3.19], vec![1.87, 2.61]).expect("valid parameters")
}

pub fn figure_two_right() -> ProcessParams {
    ProcessParams::new(vec![1.31, 2.15, 2.61, 3.19], vec![1.87]).expect("valid parameters")
}

fn max_of(it: impl IntoIterator<Item = Result<f64>>) -> Result<f64> {
    it.into_iter().try_fold(0.0_f64, |m, r| Ok(m.max(r?)))
}

fn c(re: f64, im: f64) -> ComplexValue {
    ComplexValue::new(re, im)
}

/// Deterministic sample in the strip `Re z in (0.5, 20)`, `|Im z| < 20`.
fn strip_sample() -> Vec<ComplexValue> {
    (0..100)
        .map(|k| {
            let t = k as f64;
            c(
                0.5 + 19.4 * ((t * 0.618_033_988_75).fract()),
                19.8 * ((t * 0.414_213_562_37).fract() - 0.5) * 2.0,
            )
        })
        .collect()
}

fn specfun_checks() -> Vec<CheckSpec> {
    vec![
        CheckSpec::new("gamma recurrence", 1e-12, || {
            max_of(strip_sample().into_iter().map(|z| {
                let ratio = (log_gamma(z + 1.0)? - log_gamma(z)?).exp();
                Ok((ratio - z).norm())
            }))
        }),
        CheckSpec::new("Barnes recurrence", 1e-11, || {
            max_of(strip_sample().into_iter().map(|z| {
                let d = log_barnes_g(z + 1.0)? - log_gamma(z)? - log_barnes_g(z)?;
                let k = (d.im / (2.0 * std::f64::consts::PI)).round();
                Ok(c(d.re, d.im - 2.0 * std::f64::consts::PI * k).norm())
            }))
        }),
        CheckSpec::new("Barnes-Hurwitz identity", 1e-10, || {
            max_of((0..20).map(|k| {
                let z = 0.25 + 0.5 * k as f64;
                let lhs = log_barnes_g(c(z + 1.0, 0.0))?.re;
                let rhs = zeta_prime_minus1() - hurwitz_zeta_prime(z + 1.0)?
                    + z * log_gamma(c(z + 1.0, 0.0))?.re;
                Ok((lhs - rhs).abs())
            }))
        }),
        CheckSpec::new("Barnes large-z expansion", 1e-4, || {
            let z: f64 = 50.0;
            let expansion = z * z / 2.0 * z.ln() - 0.75 * z * z + z / 2.0 * LN_2PI - z.ln() / 12.0
                + zeta_prime_minus1();
            Ok((log_barnes_g(c(z + 1.0, 0.0))?.re - expansion).abs())
        }),
    ]
}

fn coefficient_checks() -> Vec<CheckSpec> {
    let mut out = vec![
        coefficient_check("left rho", figure_two_left(), Field::Rho, 0.5, 1e-15),
        coefficient_check("left a", figure_two_left(), Field::A, 1.0, 1e-15),
        coefficient_check("left b", figure_two_left(), Field::B, 4.34, 1e-12),
        coefficient_check("left c", figure_two_left(), Field::C, -1.551, 1e-3),
        coefficient_check("left lnC", figure_two_left(), Field::LnC, -2.963, 1e-3),
        coefficient_check("right rho", figure_two_right(), Field::Rho, 0.25, 1e-15),
        coefficient_check(
            "right a",
            figure_two_right(),
            Field::A,
            4.0 / 3f64.sqrt(),
            1e-12,
        ),
        coefficient_check("right b", figure_two_right(), Field::B, 12.97, 1e-2),
        coefficient_check("right c", figure_two_right(), Field::C, -2.437, 1e-3),
        coefficient_check("right lnC", figure_two_right(), Field::LnC, -10.097, 1e-3),
    ];
    for nu in [0.0, 0.3, 1.0, 2.5] {
        out.push(CheckSpec::new(
            format!("Bessel specialization nu={nu}"),
            1e-12,
            move || {
                let co = compute_coeffs(&ProcessParams::bessel(nu)?)?;
                let expect = [0.5, 1.0, 2.0 * nu, -nu * nu / 4.0, log_constant_bessel(nu)?];
                let got = [co.rho, co.a, co.b, co.c, co.ln_c];
                Ok(got
                    .iter()
                    .zip(expect)
                    .map(|(g, e)| (g - e).abs())
                    .fold(0.0, f64::max))
            },
        ));
    }
    for (nu, mu) in [
        (vec![0.4, 1.1], vec![]),
        (vec![-0.3, 0.9, 2.2], vec![0.6]),
        (vec![1.31, 2.15, 3.19], vec![1.87, 2.61]),
    ] {
        out.push(CheckSpec::new(
            format!("pole-zero coefficients {nu:?}/{mu:?}"),
            1e-11,
            move || {
                let p = ProcessParams::new(nu.clone(), mu.clone())?;
                let base = compute_coeffs(&p)?;
                max_of([-0.5, 0.0, 1.4, 3.0].map(|t| {
                    let ext = compute_coeffs(&p.with_cancelling_pair(t)?)?;
                    Ok([
                        ext.rho - base.rho,
                        ext.a - base.a,
                        ext.b - base.b,
                        ext.c - base.c,
                        ext.ln_c - base.ln_c,
                    ]
                    .iter()
                    .fold(0.0_f64, |m, d| m.max(d.abs())))
                }))
            },
        ));
    }
    for (r, alpha) in [
        (2u32, 0.5),
        (3, 0.0),
        (3, 1.2),
        (2, 0.0),
        (2, 1.2),
        (3, 0.5),
    ] {
        out.push(CheckSpec::new(
            format!("Muttalib-Borodin r={r} alpha={alpha}"),
            1e-10,
            move || {
                let nu = (0..r).map(|j| alpha + j as f64 / r as f64).collect();
                let co = compute_coeffs(&ProcessParams::new(nu, vec![])?)?;
                let rf = r as f64;
                Ok((rf * co.c * rf.ln() + log_constant_mb(r, alpha)? - co.ln_c).abs())
            },
        ));
    }
    for (d, nu) in [(1usize, 0.5), (2, 0.0), (3, 1.0)] {
        out.push(CheckSpec::new(
            format!("C_r endpoint r-q={d} nu={nu}"),
            1e-11,
            move || {
                let co = compute_coeffs(&ProcessParams::new(vec![nu; d + 1], vec![nu])?)?;
                Ok((co.ln_c - log_constant_kr(d as f64, nu)?).abs())
            },
        ));
    }
    out
}

fn grid_points(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
        .collect()
}

fn kernel_checks(level: Level) -> Vec<CheckSpec> {
    let mut out = Vec::new();
    for nu in [0.0, 0.5, 2.0] {
        out.push(CheckSpec::new(
            format!("Bessel reduction nu={nu}"),
            1e-7,
            move || {
                let k = MeijerKernel::new(ProcessParams::bessel(nu)?, (0.1, 5.0), DEFAULT_TOL)?;
                let g = grid_points(0.1, 4.9, 5);
                max_of(
                    g.iter()
                        .flat_map(|&x| g.iter().map(move |&y| (x, y)))
                        .map(|(x, y)| {
                            let reduced =
                                4.0 * (y / x).powf(nu / 2.0) * bessel_kernel(4.0 * x, 4.0 * y, nu)?;
                            Ok((k.eval(x, y)? - reduced).abs())
                        }),
                )
            },
        ));
    }
    out.push(CheckSpec::new("pole-zero kernel invariance", 1e-9, || {
        let p = ProcessParams::new(vec![0.3, 1.45], vec![0.8])?;
        let k0 = MeijerKernel::new(p.clone(), (0.05, 2.0), DEFAULT_TOL)?;
        let k1 = MeijerKernel::new(p.with_cancelling_pair(1.4)?, (0.05, 2.0), DEFAULT_TOL)?;
        let g = grid_points(0.05, 2.0, 4);
        max_of(
            g.iter()
                .flat_map(|&x| g.iter().map(move |&y| (x, y)))
                .map(|(x, y)| Ok((k0.eval(x, y)? - k1.eval(x, y)?).abs())),
        )
    }));
    if level == Level::Full {
        for (nu, mu) in [
            (vec![0.0], vec![]),
            (vec![0.0, 1.0], vec![]),
            (vec![0.3, 1.45], vec![0.8]),
            (vec![1.31, 2.15, 3.19], vec![1.87, 2.61]),
        ] {
            let name = format!("series oracle {nu:?}/{mu:?}");
            out.push(CheckSpec::new(name, 1e-8, move || {
                let p = ProcessParams::new(nu.clone(), mu.clone())?;
                let k = MeijerKernel::new(p.clone(), (0.05, 2.0), DEFAULT_TOL)?;
                max_of((0..10).map(|i| {
                    let t = i as f64;
                    let x = 0.05 + 1.95 * (t * 0.618_033_988_75 + 0.1).fract();
                    let y = 0.05 + 1.95 * (t * 0.754_877_666_25 + 0.3).fract();
                    Ok((k.eval(x, y)? - kernel_eval_series(x, y, &p, 60, 400)?).abs())
                }))
            }));
        }
    }
    out
}

fn fredholm_checks() -> Vec<CheckSpec> {
    vec![
        CheckSpec::new("empty interval", 1e-6, || {
            let k = kernel_for(&figure_two_left(), 1e-8, DEFAULT_TOL)?;
            Ok(log_det_at(&k, 1e-8, 4)?.exp_m1().abs())
        }),
        CheckSpec::new("Bessel nu=0 determinant e^-s", 1e-10, || {
            let k = kernel_for(&ProcessParams::bessel(0.0)?, 4.0, DEFAULT_TOL)?;
            Ok((log_det_at(&k, 4.0, 40)? + 4.0).abs())
        }),
    ]
}

/// The checks making up a verification level.
pub fn checks(level: Level) -> Vec<CheckSpec> {
    let mut out = specfun_checks();
    out.extend(coefficient_checks());
    out.extend(kernel_checks(level));
    out.extend(fredholm_checks());
    out
}

/// Evaluates checks in parallel, preserving order.
pub fn run_checks(specs: &[CheckSpec]) -> Vec<CheckOutcome> {
    specs
        .par_iter()
        .map(|s| CheckOutcome {
            name: s.name.clone(),
            threshold: s.threshold,
            residual: (s.residual)().map_err(|e| e.to_string()),
        })
        .collect()
}

/// Prints one line per outcome and a summary; returns whether all passed.
pub fn report<W: Write + ?Sized>(out: &mut W, outcomes: &[CheckOutcome]) -> std::io::Result<bool> {
    for o in outcomes {
        writeln!(out, "{o}")?;
    }
    let failed = outcomes.iter().filter(|o| !o.passed()).count();
    writeln!(out, "{} checks, {failed} failed", outcomes.len())?;
    Ok(failed == 0)
}
