use super::{check_not_pole, BERNOULLI_EVEN, LN_2PI};
use crate::error::Result;
use crate::ComplexValue;

/// Stirling series is applied once `Re z` reaches this threshold.
const STIRLING_MIN_RE: f64 = 10.0;

fn shift_count(z: ComplexValue) -> usize {
    if z.re >= STIRLING_MIN_RE {
        0
    } else {
        (STIRLING_MIN_RE - z.re).ceil() as usize
    }
}

fn stirling(z: ComplexValue) -> ComplexValue {
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut series = ComplexValue::new(0.0, 0.0);
    let mut pow = inv;
    for (k, b) in BERNOULLI_EVEN.iter().take(12).enumerate() {
        let n = 2.0 * (k as f64 + 1.0);
        let term = pow * (b / (n * (n - 1.0)));
        series += term;
        if term.norm() < 1e-18 * series.norm() {
            break;
        }
        pow *= inv2;
    }
    (z - 0.5) * z.ln() - z + 0.5 * LN_2PI + series
}

/// Principal branch of `ln Gamma(z)`.
///
/// Arguments left of `Re z = 10` are shifted up with
/// `ln Gamma(z) = ln Gamma(z + n) - sum ln(z + k)`; summing principal logs
/// reproduces the principal branch off the real axis, and on the negative
/// real axis it takes the limit from above.
pub fn log_gamma(z: ComplexValue) -> Result<ComplexValue> {
    check_not_pole(z, "log_gamma")?;
    let n = shift_count(z);
    let mut correction = ComplexValue::new(0.0, 0.0);
    for k in 0..n {
        correction += (z + k as f64).ln();
    }
    Ok(stirling(z + n as f64) - correction)
}

/// Digamma `psi(z) = d/dz ln Gamma(z)`.
pub fn digamma(z: ComplexValue) -> Result<ComplexValue> {
    check_not_pole(z, "digamma")?;
    let n = shift_count(z);
    let mut correction = ComplexValue::new(0.0, 0.0);
    for k in 0..n {
        correction += (z + k as f64).inv();
    }
    let w = z + n as f64;
    let inv2 = (w * w).inv();
    let mut pow = inv2;
    let mut series = ComplexValue::new(0.0, 0.0);
    for (k, b) in BERNOULLI_EVEN.iter().take(12).enumerate() {
        let n2 = 2.0 * (k as f64 + 1.0);
        let term = pow * (b / n2);
        series += term;
        if term.norm() < 1e-18 * series.norm() {
            break;
        }
        pow *= inv2;
    }
    Ok(w.ln() - 0.5 * w.inv() - series - correction)
}
