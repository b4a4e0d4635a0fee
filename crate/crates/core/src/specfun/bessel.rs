use super::gamma::log_gamma;
use crate::error::{Error, Result};
use crate::ComplexValue;

/// Largest argument served by the ascending series.
pub const BESSEL_MAX_ARG: f64 = 30.0;

/// Neumaier-compensated accumulator.
#[derive(Default, Clone, Copy)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// `(J_nu(x), x J_nu'(x))` from the ascending power series.
pub fn bessel_j_with_derivative(nu: f64, x: f64) -> Result<(f64, f64)> {
    if !(nu > -1.0) {
        return Err(Error::Domain(format!(
            "bessel_j requires nu > -1, got {nu}"
        )));
    }
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("bessel_j requires x >= 0, got {x}")));
    }
    if x > BESSEL_MAX_ARG {
        return Err(Error::Range(format!(
            "bessel_j argument {x} exceeds {BESSEL_MAX_ARG}"
        )));
    }
    if x == 0.0 {
        return match nu {
            0.0 => Ok((1.0, 0.0)),
            n if n > 0.0 => Ok((0.0, 0.0)),
            _ => Err(Error::Range(format!("J_{nu}(0) is unbounded"))),
        };
    }
    let half = 0.5 * x;
    let lg = log_gamma(ComplexValue::new(nu + 1.0, 0.0))?.re;
    let mut term = (nu * half.ln() - lg).exp();
    let q = half * half;
    let mut j = CompensatedSum::default();
    let mut xdj = CompensatedSum::default();
    let mut k = 0usize;
    loop {
        j.add(term);
        xdj.add((2.0 * k as f64 + nu) * term);
        k += 1;
        term *= -q / (k as f64 * (k as f64 + nu));
        if k as f64 > half && term.abs() <= 1e-17 * j.value().abs().max(f64::MIN_POSITIVE) {
            break;
        }
        if k > 500 {
            return Err(Error::Convergence(format!(
                "bessel_j series at nu={nu}, x={x}"
            )));
        }
    }
    Ok((j.value(), xdj.value()))
}

/// Bessel function of the first kind `J_nu(x)` for `nu > -1`, `0 <= x <= 30`.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    bessel_j_with_derivative(nu, x).map(|(j, _)| j)
}
