//! Closed forms for the large-gap expansion
//! `ln det(1 - K|[0,s]) = -a s^{2 rho} + b s^rho + c ln s + ln C + O(s^{-rho})`.
//!
//! Everything is evaluated additively in log space; Barnes-G products are
//! never exponentiated.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::ProcessParams;
use crate::specfun::{log_barnes_g, LN_2PI, ZETA_PRIME_MINUS1};
use crate::ComplexValue;

/// Coefficients of the truncated large-gap expansion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticCoeffs {
    pub rho: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    #[serde(rename = "lnC")]
    pub ln_c: f64,
}

fn ln_g1p(x: f64) -> Result<f64> {
    if !(x > -1.0) {
        return Err(Error::Domain(format!("parameter must exceed -1, got {x}")));
    }
    Ok(log_barnes_g(ComplexValue::new(1.0 + x, 0.0))?.re)
}

fn pair_sum(v: &[f64]) -> f64 {
    let mut s = 0.0;
    for (i, a) in v.iter().enumerate() {
        for b in &v[i + 1..] {
            s += a * b;
        }
    }
    s
}

/// `rho, a, b, c` and `ln C` for a parameter set.
pub fn compute_coeffs(params: &ProcessParams) -> Result<AsymptoticCoeffs> {
    let (nu, mu) = (params.nu(), params.mu());
    let d = (params.r() - params.q()) as f64;
    let sum_nu: f64 = nu.iter().sum();
    let sum_mu: f64 = mu.iter().sum();
    let sq_mu: f64 = mu.iter().map(|m| m * m).sum();
    let sq_diff = nu.iter().map(|n| n * n).sum::<f64>() - sq_mu;

    let rho = 1.0 / (1.0 + d);
    let a = d.powf((1.0 - d) / (1.0 + d)) * (d + 1.0).powi(2) / 4.0;
    let b = (1.0 + d) * d.powf(-d / (1.0 + d)) * (sum_nu - sum_mu);
    let c = (d - 1.0) / (12.0 * (d + 1.0)) - sq_diff / (2.0 * (d + 1.0));

    // quadratic form shared (with opposite signs) by the ln(r-q) and ln(1+r-q) blocks
    let mixed = pair_sum(nu) + pair_sum(mu) - sum_nu * sum_mu + sq_mu;

    let mut ln_c = 0.5 * (sum_mu - sum_nu) * LN_2PI;
    for n in nu {
        ln_c += ln_g1p(*n)?;
    }
    for m in mu {
        ln_c -= ln_g1p(*m)?;
    }
    ln_c += (1.0 - d) * ZETA_PRIME_MINUS1;
    let ln_d = d.ln();
    if ln_d != 0.0 {
        let coef = (1.0 + d - d * d) / (2.0 * (1.0 + d)) * sq_diff
            + (-2.0 + d * d * (d - 1.0)) / (24.0 * (1.0 + d))
            + mixed;
        ln_c += coef * ln_d;
    }
    let coef = -(2.0 - d) / 2.0 * sq_diff - (d - 1.0).powi(2) / 24.0 - mixed;
    ln_c += coef * (1.0 + d).ln();

    Ok(AsymptoticCoeffs { rho, a, b, c, ln_c })
}

/// `ln C` for the Bessel process: `ln G(1+nu) - (nu/2) ln 2pi - (nu^2/2) ln 2`.
pub fn log_constant_bessel(nu: f64) -> Result<f64> {
    Ok(ln_g1p(nu)? - 0.5 * nu * LN_2PI - 0.5 * nu * nu * std::f64::consts::LN_2)
}

/// `ln C_r` for the kernel with all `r` parameters equal to `nu`; `r` may be
/// any real `>= 1`.
pub fn log_constant_kr(r: f64, nu: f64) -> Result<f64> {
    if !(r >= 1.0) {
        return Err(Error::Domain(format!(
            "log_constant_kr requires r >= 1, got {r}"
        )));
    }
    Ok(
        r * ln_g1p(nu)? - 0.5 * r * nu * LN_2PI - (r - 1.0) * ZETA_PRIME_MINUS1
            + (-2.0 + r * r * (r - 1.0 + 12.0 * nu * nu)) / (24.0 * (r + 1.0)) * r.ln()
            - ((r - 1.0).powi(2) + 12.0 * r * nu * nu) / 24.0 * (1.0 + r).ln(),
    )
}

/// Regularized sum `d(1/r, alpha)` expressed through `zeta'(-1)` and Barnes G.
fn muttalib_borodin_d(r: u32, alpha: f64) -> Result<f64> {
    let rf = r as f64;
    let mut d = rf * ZETA_PRIME_MINUS1 + (1.0 + (1.0 + 2.0 * alpha) * rf) / 4.0 * LN_2PI
        - (3.0 + 1.0 / rf + rf + 6.0 * alpha * (1.0 + rf + alpha * rf)) / 12.0 * rf.ln();
    for k in 1..=r {
        d -= ln_g1p(alpha + k as f64 / rf)?;
    }
    Ok(d)
}

/// `ln C^MB(1/r, alpha)` for the Muttalib-Borodin ensemble with `theta = 1/r`.
pub fn log_constant_mb(r: u32, alpha: f64) -> Result<f64> {
    if r < 1 {
        return Err(Error::Domain("log_constant_mb requires r >= 1".into()));
    }
    let theta = 1.0 / r as f64;
    Ok(
        ln_g1p(alpha)? - 0.5 * alpha * LN_2PI + muttalib_borodin_d(1, alpha)?
            - muttalib_borodin_d(r, alpha)?
            + (24.0 * alpha * (alpha + 2.0) + 15.0 + 3.0 * theta + 4.0 * theta * theta)
                / (24.0 * (1.0 + theta))
                * theta.ln()
            + (6.0 * alpha * theta - 6.0 * alpha * (1.0 + alpha) - (theta - 1.0).powi(2))
                / (12.0 * theta)
                * (1.0 + theta).ln(),
    )
}

/// `-a s^{2 rho} + b s^rho + c ln s + ln C`.
pub fn truncated_log_expansion(s: f64, coeffs: &AsymptoticCoeffs) -> f64 {
    let sr = s.powf(coeffs.rho);
    -coeffs.a * sr * sr + coeffs.b * sr + coeffs.c * s.ln() + coeffs.ln_c
}
