#![allow(dead_code)]

use meijer_gap::asymptotics::{compute_coeffs, truncated_log_expansion};
use meijer_gap::converge::{kernel_for, log_det_at, DEFAULT_TOL};
use meijer_gap::kernel::bessel_kernel;
use meijer_gap::quadrature::gauss_legendre_on;
use meijer_gap::ProcessParams;
use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn left() -> ProcessParams {
    ProcessParams::new(vec![1.31, 2.15, 3.19], vec![1.87, 2.61]).unwrap()
}

pub fn right() -> ProcessParams {
    ProcessParams::new(vec![1.31, 2.15, 2.61, 3.19], vec![1.87]).unwrap()
}

/// Random `r > q >= 0` with parameters in `(-0.9, 4)`.
pub fn random_params(rng: &mut ChaCha8Rng) -> ProcessParams {
    let r = rng.gen_range(1..=4);
    let q = rng.gen_range(0..r);
    let mut draw = |n: usize| {
        (0..n)
            .map(|_| rng.gen_range(-0.9..4.0))
            .collect::<Vec<f64>>()
    };
    let nu = draw(r);
    let mu = draw(q);
    ProcessParams::new(nu, mu).unwrap()
}

/// `4 (y/x)^{nu/2} K_Be(4x, 4y)`: the `r = 1, q = 0` kernel in closed form.
pub fn bessel_reduced(x: f64, y: f64, nu: f64) -> f64 {
    4.0 * (y / x).powf(nu / 2.0) * bessel_kernel(4.0 * x, 4.0 * y, nu).unwrap()
}

/// `det(1 - K)` on `[0, s]` from the trace expansion through third order,
/// `1 - T1 + (T1^2 - T2)/2 - (T1^3 - 3 T1 T2 + 2 T3)/6`, with the traces of
/// `K^k` computed by `n`-point product Gauss-Legendre quadrature.
pub fn trace_series_det(kernel: impl Fn(f64, f64) -> f64, s: f64, n: usize) -> f64 {
    let (x, w) = gauss_legendre_on(n, 0.0, s);
    let b = DMatrix::from_fn(n, n, |i, j| w[i].sqrt() * kernel(x[i], x[j]) * w[j].sqrt());
    let b2 = &b * &b;
    let t1 = b.trace();
    let t2 = b2.trace();
    let t3 = (&b2 * &b).trace();
    1.0 - t1 + (t1 * t1 - t2) / 2.0 - (t1.powi(3) - 3.0 * t1 * t2 + 2.0 * t3) / 6.0
}

/// Compensated `f(s)` at each `s` with an `m`-node grid.
pub fn compensated(params: &ProcessParams, s: &[f64], m: usize) -> Vec<f64> {
    let s_max = s.iter().cloned().fold(0.0, f64::max);
    let kernel = kernel_for(params, s_max, DEFAULT_TOL).unwrap();
    let co = compute_coeffs(params).unwrap();
    s.iter()
        .map(|&s| {
            let l = log_det_at(&kernel, s, m).unwrap();
            s.powf(co.rho) * (l - truncated_log_expansion(s, &co))
        })
        .collect()
}

/// `|f(2s) - f(s)|` for consecutive entries.
pub fn successive_gaps(f: &[f64]) -> Vec<f64> {
    f.windows(2).map(|p| (p[1] - p[0]).abs()).collect()
}
