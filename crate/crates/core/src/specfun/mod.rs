//! Complex-plane special functions: log-gamma, digamma, Barnes log-G,
//! the Hurwitz zeta derivative at -1 and Bessel J of real order.
//!
//! Every function is pure. Branches are principal, with `ln Gamma` and
//! `ln G` analytic on the plane cut along `(-inf, 0]`.

mod barnes;
mod bessel;
mod gamma;
mod zeta;

pub use barnes::{integral_log_gamma, log_barnes_g};
pub use bessel::{bessel_j, bessel_j_with_derivative};
pub use gamma::{digamma, log_gamma};
pub use zeta::{hurwitz_zeta_prime, zeta_prime_minus1, ZETA_PRIME_MINUS1};

use crate::error::{Error, Result};
use crate::ComplexValue;

/// `B_2, B_4, ..., B_30`.
pub(crate) const BERNOULLI_EVEN: [f64; 15] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
];

pub(crate) const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// Rejects non-finite input and points within rounding of `0, -1, -2, ...`.
pub(crate) fn check_not_pole(z: ComplexValue, what: &str) -> Result<()> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain(format!("{what}: non-finite argument {z}")));
    }
    if z.re <= 0.5 {
        let k = z.re.round();
        if k <= 0.0 && (z - ComplexValue::new(k, 0.0)).norm() <= 1e-14 * k.abs().max(1.0) {
            return Err(Error::Pole(format!("{what} at {z}")));
        }
    }
    Ok(())
}
