use std::f64::consts::PI;

use approx::assert_abs_diff_eq;
use meijer_gap::specfun::{
    digamma, hurwitz_zeta_prime, integral_log_gamma, log_barnes_g, log_gamma, zeta_prime_minus1,
};
use meijer_gap::ComplexValue;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> ComplexValue {
    ComplexValue::new(re, im)
}

/// Distance modulo `2 pi i`.
fn dist_mod_2pi_i(d: ComplexValue) -> f64 {
    let k = (d.im / (2.0 * PI)).round();
    c(d.re, d.im - 2.0 * PI * k).norm()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn gamma_recurrence(re in 0.5f64..20.0, im in -20.0f64..20.0) {
        let z = c(re, im);
        let ratio = (log_gamma(z + 1.0).unwrap() - log_gamma(z).unwrap()).exp();
        prop_assert!((ratio - z).norm() < 1e-12);
    }

    #[test]
    fn barnes_recurrence(re in 0.5f64..20.0, im in -20.0f64..20.0) {
        let z = c(re, im);
        let d = log_barnes_g(z + 1.0).unwrap() - log_gamma(z).unwrap() - log_barnes_g(z).unwrap();
        prop_assert!(dist_mod_2pi_i(d) < 1e-11);
    }

    #[test]
    fn digamma_recurrence(re in 0.5f64..20.0, im in -20.0f64..20.0) {
        let z = c(re, im);
        let d = digamma(z + 1.0).unwrap() - digamma(z).unwrap() - z.inv();
        prop_assert!(d.norm() < 1e-12);
    }

    #[test]
    fn conjugation_symmetry(re in -8.5f64..20.0, im in 0.1f64..20.0) {
        let z = c(re, im);
        for f in [log_gamma, digamma, log_barnes_g] {
            let a = f(z.conj()).unwrap();
            let b = f(z).unwrap().conj();
            prop_assert!((a - b).norm() <= 1e-13 * (1.0 + a.norm()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn barnes_hurwitz_identity(z in 0.001f64..10.0) {
        let lhs = log_barnes_g(c(z + 1.0, 0.0)).unwrap().re;
        let rhs = zeta_prime_minus1() - hurwitz_zeta_prime(z + 1.0).unwrap()
            + z * log_gamma(c(z + 1.0, 0.0)).unwrap().re;
        prop_assert!((lhs - rhs).abs() < 1e-10);
    }
}

#[test]
fn barnes_large_argument_expansion() {
    let z: f64 = 50.0;
    let expansion = z * z / 2.0 * z.ln() - 0.75 * z * z + z / 2.0 * (2.0 * PI).ln() - z.ln() / 12.0
        + zeta_prime_minus1();
    let residual = log_barnes_g(c(z + 1.0, 0.0)).unwrap().re - expansion;
    assert!(residual.abs() < 1e-4);
    // the O(z^-2) remainder is B_4 / (8 z^2) = -1/(240 z^2)
    assert_abs_diff_eq!(residual, -1.0 / (240.0 * z * z), epsilon = 1e-9);
}

#[test]
fn digamma_large_argument() {
    let z = 10.0_f64;
    let approx = z.ln() - 1.0 / (2.0 * z) - 1.0 / (12.0 * z * z);
    assert_abs_diff_eq!(digamma(c(z, 0.0)).unwrap().re, approx, epsilon = 1e-6);
}

#[test]
fn barnes_values_at_integers() {
    // G(n + 1) = (n - 1)! G(n), G(1) = 1
    let (mut log_g, mut log_fact) = (0.0_f64, 0.0_f64);
    for n in 1..30 {
        let got = log_barnes_g(c(n as f64, 0.0)).unwrap().re;
        assert_abs_diff_eq!(got, log_g, epsilon = 1e-12 * (1.0 + log_g.abs()));
        log_g += log_fact;
        log_fact += (n as f64).ln();
    }
}

#[test]
fn integral_identity_matches_quadrature() {
    // int_1^z ln Gamma by composite Simpson on a fine grid
    for z in [1.5, 3.0, 6.5] {
        let n = 2000;
        let h = (z - 1.0) / n as f64;
        let f = |t: f64| log_gamma(c(t, 0.0)).unwrap().re;
        let mut acc = f(1.0) + f(z);
        for k in 1..n {
            acc += f(1.0 + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
        }
        let simpson = acc * h / 3.0;
        assert_abs_diff_eq!(
            integral_log_gamma(c(z, 0.0)).unwrap().re,
            simpson,
            epsilon = 1e-11
        );
    }
}

#[test]
fn riemann_and_hurwitz_agree() {
    assert_abs_diff_eq!(
        hurwitz_zeta_prime(1.0).unwrap(),
        zeta_prime_minus1(),
        epsilon = 1e-13
    );
    assert_abs_diff_eq!(
        hurwitz_zeta_prime(2.0).unwrap(),
        zeta_prime_minus1(),
        epsilon = 1e-13
    );
}
