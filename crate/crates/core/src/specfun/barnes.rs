use super::gamma::log_gamma;
use super::{check_not_pole, BERNOULLI_EVEN, LN_2PI, ZETA_PRIME_MINUS1};
use crate::error::Result;
use crate::ComplexValue;

const ASYMPTOTIC_MIN_RE: f64 = 12.0;

/// Large-`w` expansion of `ln G(w + 1)`.
fn log_barnes_g_shifted_asymptotic(w: ComplexValue) -> ComplexValue {
    let ln_w = w.ln();
    let w2 = w * w;
    let inv2 = w2.inv();
    let mut pow = inv2;
    let mut series = ComplexValue::new(0.0, 0.0);
    for (k, b) in BERNOULLI_EVEN.iter().enumerate().skip(1) {
        let kf = k as f64;
        let term = pow * (b / (4.0 * kf * (kf + 1.0)));
        series += term;
        if term.norm() < 1e-18 * series.norm().max(1e-300) {
            break;
        }
        pow *= inv2;
    }
    0.5 * w2 * ln_w - 0.75 * w2 + 0.5 * LN_2PI * w - ln_w / 12.0 + ZETA_PRIME_MINUS1 + series
}

/// `ln G(z)` for Barnes' G-function, with `G(1) = 1` and `G(z+1) = Gamma(z) G(z)`.
///
/// The argument is pushed right with the recurrence until the asymptotic
/// expansion applies; the log-gamma terms of the shift are accumulated from
/// a single `ln Gamma(z)` so the branch stays continuous along the path.
pub fn log_barnes_g(z: ComplexValue) -> Result<ComplexValue> {
    check_not_pole(z, "log_barnes_g")?;
    if z.im == 0.0 && z.re.fract() == 0.0 && z.re < ASYMPTOTIC_MIN_RE + 1.0 {
        // G(n) = prod_{j=1}^{n-2} j^{n-1-j}; avoids shift round-off at integers
        let n = z.re as i64;
        let s: f64 = (1..n - 1)
            .map(|j| (n - 1 - j) as f64 * (j as f64).ln())
            .sum();
        return Ok(ComplexValue::new(s, 0.0));
    }
    let n = if z.re >= ASYMPTOTIC_MIN_RE + 1.0 {
        0
    } else {
        (ASYMPTOTIC_MIN_RE + 1.0 - z.re).ceil() as usize
    };
    let mut shift = ComplexValue::new(0.0, 0.0);
    if n > 0 {
        let mut lg = log_gamma(z)?;
        for k in 0..n {
            shift += lg;
            lg += (z + k as f64).ln();
        }
    }
    Ok(log_barnes_g_shifted_asymptotic(z + (n as f64 - 1.0)) - shift)
}

/// Closed form of `int_1^z ln Gamma(t) dt`:
/// `(z-1)/2 ln(2 pi) - z(z-1)/2 + (z-1) ln Gamma(z) - ln G(z)`.
pub fn integral_log_gamma(z: ComplexValue) -> Result<ComplexValue> {
    let zm1 = z - 1.0;
    Ok(0.5 * LN_2PI * zm1 - 0.5 * zm1 * z + zm1 * log_gamma(z)? - log_barnes_g(z)?)
}
