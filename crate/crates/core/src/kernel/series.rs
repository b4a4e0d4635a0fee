//! Residue-series route to the kernel:
//! `K(x, y) = int_0^1 G^{1,q}_{q,r+1}(tx) G^{r,0}_{q,r+1}(ty) dt`,
//! with both Meijer-G functions summed as power series over the poles of
//! `Gamma(b_j - t)`. Independent of the contour quadrature.

use statrs::function::gamma::gamma;

use super::ProcessParams;
use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre_on;

const TAIL_TOL: f64 = 1e-14;

fn recip_gamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.round() {
        0.0
    } else {
        1.0 / gamma(x)
    }
}

fn finish(sum: f64, last: f64, what: &str) -> Result<f64> {
    if last.abs() > TAIL_TOL * sum.abs().max(1e-300) {
        return Err(Error::Convergence(format!(
            "{what}: last term {last:e} vs partial sum {sum:e}"
        )));
    }
    Ok(sum)
}

fn sum_series(mut term: f64, mut next: impl FnMut(usize) -> f64, n_terms: usize) -> (f64, f64) {
    let mut sum = 0.0;
    let mut last = term;
    for l in 0..n_terms {
        sum += term;
        last = term;
        if term == 0.0 || (l > 4 && term.abs() < 1e-18 * sum.abs()) {
            return (sum, 0.0);
        }
        term *= next(l);
    }
    (sum, last)
}

/// `G^{1,q}_{q,r+1}(z | -mu ; 0, -nu)`, an entire power series in `z`.
pub fn meijer_g_1q(z: f64, nu: &[f64], mu: &[f64], n_terms: usize) -> Result<f64> {
    let c0 = mu.iter().map(|m| gamma(1.0 + m)).product::<f64>()
        * nu.iter().map(|n| recip_gamma(1.0 + n)).product::<f64>();
    let (sum, last) = sum_series(
        c0,
        |l| {
            let lf = l as f64;
            let num: f64 = mu.iter().map(|m| 1.0 + m + lf).product();
            let den: f64 = nu.iter().map(|n| 1.0 + n + lf).product();
            -z / (lf + 1.0) * num / den
        },
        n_terms,
    );
    finish(sum, last, "G^{1,q} series")
}

/// `G^{r,0}_{q,r+1}(z | mu ; nu, 0)` for `z > 0`, assuming simple poles
/// (no two `nu_j` differ by an integer).
pub fn meijer_g_r0(z: f64, nu: &[f64], mu: &[f64], n_terms: usize) -> Result<f64> {
    let mut total = 0.0;
    for (j, &nj) in nu.iter().enumerate() {
        let mut c0 = recip_gamma(1.0 + nj);
        for (i, &ni) in nu.iter().enumerate() {
            if i != j {
                c0 *= gamma(ni - nj);
            }
        }
        for &mk in mu {
            c0 *= recip_gamma(mk - nj);
        }
        let (sum, last) = sum_series(
            c0,
            |l| {
                let lf = l as f64;
                let mut f = -z / ((lf + 1.0) * (1.0 + nj + lf));
                for (i, &ni) in nu.iter().enumerate() {
                    if i != j {
                        f /= ni - nj - lf - 1.0;
                    }
                }
                for &mk in mu {
                    f *= mk - nj - lf - 1.0;
                }
                f
            },
            n_terms,
        );
        total += z.powf(nj) * finish(sum, last, "G^{r,0} series")?;
    }
    Ok(total)
}

fn has_coincident_poles(nu: &[f64]) -> bool {
    nu.iter().enumerate().any(|(i, a)| {
        nu.iter()
            .skip(i + 1)
            .any(|b| ((a - b) - (a - b).round()).abs() < 1e-4)
    })
}

fn series_kernel(
    x: f64,
    y: f64,
    nu: &[f64],
    mu: &[f64],
    n_t: usize,
    n_terms: usize,
) -> Result<f64> {
    let nu_min = nu.iter().copied().fold(f64::INFINITY, f64::min);
    // t = tau^p turns the t^{nu_j} endpoint behaviour into tau^{p(1+nu_j)-1}
    let p = (4.0 / (1.0 + nu_min)).ceil().max(1.0) as i32;
    let (taus, ws) = gauss_legendre_on(n_t, 0.0, 1.0);
    let mut acc = 0.0;
    for (tau, w) in taus.iter().zip(&ws) {
        let t = tau.powi(p);
        let jac = p as f64 * tau.powi(p - 1);
        acc +=
            w * jac * meijer_g_1q(t * x, nu, mu, n_terms)? * meijer_g_r0(t * y, nu, mu, n_terms)?;
    }
    Ok(acc)
}

/// Kernel value from the residue series with an `n_t`-point Gauss-Legendre
/// rule in `t`.
///
/// When two `nu_j` differ by an integer the poles of the second Meijer-G
/// function merge; the value is then obtained from the analytic dependence
/// on the parameters, perturbing `nu_j -> nu_j + j eps` and extrapolating
/// `eps -> 0` from `+/- eps, +/- 2 eps` (error `O(eps^4)`).
pub fn kernel_eval_series(
    x: f64,
    y: f64,
    params: &ProcessParams,
    n_t: usize,
    n_terms: usize,
) -> Result<f64> {
    if !(x > 0.0) || !(y > 0.0) {
        return Err(Error::Domain(format!(
            "series kernel needs x, y > 0, got ({x}, {y})"
        )));
    }
    let (nu, mu) = (params.nu(), params.mu());
    if !has_coincident_poles(nu) {
        return series_kernel(x, y, nu, mu, n_t, n_terms);
    }
    let eps = 2e-3;
    let at = |e: f64| {
        let shifted: Vec<f64> = nu
            .iter()
            .enumerate()
            .map(|(j, v)| v + j as f64 * e)
            .collect();
        series_kernel(x, y, &shifted, mu, n_t, n_terms)
    };
    let near = at(eps)? + at(-eps)?;
    let far = at(2.0 * eps)? + at(-2.0 * eps)?;
    Ok((4.0 * near - far) / 6.0)
}
