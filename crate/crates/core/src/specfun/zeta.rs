use super::BERNOULLI_EVEN;
use crate::error::{Error, Result};

/// Riemann `zeta'(-1)`.
pub const ZETA_PRIME_MINUS1: f64 = -0.165_421_143_700_450_93;

pub fn zeta_prime_minus1() -> f64 {
    ZETA_PRIME_MINUS1
}

/// Euler-Maclaurin expansion point: explicit terms are summed until `u + k`
/// reaches this value. Larger values only add cancellation.
const EXPANSION_POINT: f64 = 12.0;
const CORRECTION_TERMS: usize = 12;

/// `d/ds zeta(s, u)` at `s = -1`, by Euler-Maclaurin: explicit terms up to
/// `a = u + N >= 12`, then the tail expanded at `a` with Bernoulli corrections.
pub fn hurwitz_zeta_prime(u: f64) -> Result<f64> {
    if !(u > 0.0) || !u.is_finite() {
        return Err(Error::Domain(format!(
            "hurwitz_zeta_prime requires u > 0, got {u}"
        )));
    }
    let direct = (EXPANSION_POINT - u).ceil().max(0.0) as usize;
    let mut head = 0.0;
    for k in 0..direct {
        let t = u + k as f64;
        head -= t * t.ln();
    }
    let a = u + direct as f64;
    let ln_a = a.ln();
    let mut tail = a * a * (2.0 * ln_a - 1.0) / 4.0 - 0.5 * a * ln_a + (1.0 + ln_a) / 12.0;
    let inv2 = 1.0 / (a * a);
    let mut pow = inv2;
    for j in 2..(2 + CORRECTION_TERMS).min(BERNOULLI_EVEN.len() + 1) {
        let n = 2.0 * j as f64;
        tail -= BERNOULLI_EVEN[j - 1] * pow / (n * (n - 1.0) * (n - 2.0));
        pow *= inv2;
    }
    Ok(head + tail)
}
