use super::Kernel;
use crate::error::{Error, Result};
use crate::specfun::bessel_j_with_derivative;

/// Below this separation the diagonal expansion replaces the quotient.
const DIAGONAL_SWITCH: f64 = 1e-6;

/// `J_nu(sqrt x)` and `sqrt x J_nu'(sqrt x)`.
fn fg(nu: f64, x: f64) -> Result<(f64, f64)> {
    bessel_j_with_derivative(nu, x.sqrt())
}

/// Bessel kernel
/// `(J(sqrt x) sqrt y J'(sqrt y) - sqrt x J'(sqrt x) J(sqrt y)) / (2 (x - y))`.
///
/// Near the diagonal the numerator is expanded about the midpoint `m`, giving
/// `(g^2 + (m - nu^2) f^2) / (4 m)` with `f = J(sqrt m)`, `g = sqrt m J'(sqrt m)`
/// and an `O((x - y)^2)` remainder.
pub fn bessel_kernel(x: f64, y: f64, nu: f64) -> Result<f64> {
    if !(x >= 0.0) || !(y >= 0.0) {
        return Err(Error::Domain(format!(
            "bessel_kernel needs x, y >= 0, got ({x}, {y})"
        )));
    }
    if (x - y).abs() < DIAGONAL_SWITCH {
        let m = 0.5 * (x + y);
        if m == 0.0 {
            return match nu {
                0.0 => Ok(0.25),
                n if n > 0.0 => Ok(0.0),
                _ => Err(Error::Range(format!(
                    "K_Be(0, 0) is unbounded for nu = {nu}"
                ))),
            };
        }
        let (f, g) = fg(nu, m)?;
        return Ok((g * g + (m - nu * nu) * f * f) / (4.0 * m));
    }
    let (fx, gx) = fg(nu, x)?;
    let (fy, gy) = fg(nu, y)?;
    Ok((fx * gy - gx * fy) / (2.0 * (x - y)))
}

/// Bessel-type kernels usable in Fredholm determinants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BesselKernel {
    /// `K_Be(x, y)` itself.
    HardEdge { nu: f64 },
    /// `4 (y/x)^{nu/2} K_Be(4x, 4y)`: the Meijer-G kernel at `r = 1, q = 0`.
    MeijerScaled { nu: f64 },
}

impl Kernel for BesselKernel {
    fn eval(&self, x: f64, y: f64) -> Result<f64> {
        match *self {
            BesselKernel::HardEdge { nu } => bessel_kernel(x, y, nu),
            BesselKernel::MeijerScaled { nu } => {
                Ok(4.0 * (y / x).powf(0.5 * nu) * bessel_kernel(4.0 * x, 4.0 * y, nu)?)
            }
        }
    }
}
