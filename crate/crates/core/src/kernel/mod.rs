//! The Meijer-G kernel and its Bessel specialization.
//!
//! `K(x, y)` is evaluated from the double contour integral
//! `int_gamma du/(2 pi i) int_gammatilde dv/(2 pi i) F(u)/F(v) x^{-u} y^{v-1} / (v - u)`
//! with `F(z) = Gamma(z) prod Gamma(1 + mu_k - z) / prod Gamma(1 + nu_j - z)`.
//! The residue-series form in [`series`] is an independent route to the
//! same values and is used as an oracle.

mod bessel;
mod contour;
pub mod series;

pub use bessel::{bessel_kernel, BesselKernel};
pub use contour::{
    build_contours, kernel_eval, ContourNode, ContourOptions, ContourQuadrature, MeijerKernel,
};
pub use series::kernel_eval_series;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::log_gamma;
use crate::ComplexValue;

/// Model parameters `(r, q, nu_1..nu_r, mu_1..mu_q)` with `r > q >= 0` and
/// every parameter `> -1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProcessParams {
    nu: Vec<f64>,
    mu: Vec<f64>,
}

impl ProcessParams {
    pub fn new(nu: Vec<f64>, mu: Vec<f64>) -> Result<Self> {
        if nu.len() <= mu.len() {
            return Err(Error::InvalidParams(format!(
                "requires r > q (got r={}, q={})",
                nu.len(),
                mu.len()
            )));
        }
        for (name, list) in [("nu", &nu), ("mu", &mu)] {
            if let Some(v) = list.iter().find(|v| !(**v > -1.0) || !v.is_finite()) {
                return Err(Error::InvalidParams(format!(
                    "requires every {name} > -1 (got {v})"
                )));
            }
        }
        Ok(Self { nu, mu })
    }

    /// Like [`ProcessParams::new`], also checking the declared counts.
    pub fn with_counts(r: usize, q: usize, nu: Vec<f64>, mu: Vec<f64>) -> Result<Self> {
        if r <= q {
            return Err(Error::InvalidParams(format!(
                "requires r > q (got r={r}, q={q})"
            )));
        }
        if nu.len() != r || mu.len() != q {
            return Err(Error::InvalidParams(format!(
                "expected {r} nu and {q} mu values, got {} and {}",
                nu.len(),
                mu.len()
            )));
        }
        Self::new(nu, mu)
    }

    /// Bessel point process: `r = 1, q = 0`.
    pub fn bessel(nu: f64) -> Result<Self> {
        Self::new(vec![nu], Vec::new())
    }

    pub fn r(&self) -> usize {
        self.nu.len()
    }

    pub fn q(&self) -> usize {
        self.mu.len()
    }

    pub fn nu(&self) -> &[f64] {
        &self.nu
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    /// `min{nu_1..nu_r, mu_1..mu_q}`.
    pub fn nu_min(&self) -> f64 {
        self.nu
            .iter()
            .chain(&self.mu)
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Appends an equal pair `nu_{r+1} = mu_{q+1} = t`, which leaves `F` unchanged.
    pub fn with_cancelling_pair(&self, t: f64) -> Result<Self> {
        let mut nu = self.nu.clone();
        let mut mu = self.mu.clone();
        nu.push(t);
        mu.push(t);
        Self::new(nu, mu)
    }
}

/// `ln F(z)` as a sum of principal-branch log-gammas.
pub fn log_big_f(z: ComplexValue, params: &ProcessParams) -> Result<ComplexValue> {
    let one = ComplexValue::new(1.0, 0.0);
    let mut acc = log_gamma(z)?;
    for mu in &params.mu {
        acc += log_gamma(one + *mu - z)?;
    }
    for nu in &params.nu {
        // zeros of F are fine in principle but never sit on the contours
        acc -= log_gamma(one + *nu - z)?;
    }
    Ok(acc)
}

/// A real kernel `K(x, y)` on `(0, inf)^2`.
pub trait Kernel: Sync {
    fn eval(&self, x: f64, y: f64) -> Result<f64>;

    /// `K(x_i, x_j)` for every pair of points, rows filled in parallel.
    fn matrix(&self, xs: &[f64]) -> Result<DMatrix<f64>> {
        let n = xs.len();
        let rows: Vec<Vec<f64>> = xs
            .par_iter()
            .map(|&x| {
                xs.iter()
                    .map(|&y| self.eval(x, y))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }
}

impl<F> Kernel for F
where
    F: Fn(f64, f64) -> Result<f64> + Sync,
{
    fn eval(&self, x: f64, y: f64) -> Result<f64> {
        self(x, y)
    }
}
