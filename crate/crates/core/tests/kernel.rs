mod common;

use approx::assert_abs_diff_eq;
use meijer_gap::kernel::{
    build_contours, kernel_eval, kernel_eval_series, log_big_f, ContourOptions, ContourQuadrature,
    Kernel, MeijerKernel,
};
use meijer_gap::specfun::log_gamma;
use meijer_gap::{ComplexValue, Error, ProcessParams};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{bessel_reduced, left, right};

const TOL: f64 = 1e-12;

fn grid5() -> Vec<f64> {
    (0..5).map(|k| 0.1 + 1.2 * k as f64).collect()
}

#[test]
fn log_f_at_symmetric_points() {
    let half = ComplexValue::new(0.5, 0.0);
    let bessel = ProcessParams::bessel(0.0).unwrap();
    assert!(log_big_f(half, &bessel).unwrap().norm() < 1e-15);
    let two = ProcessParams::new(vec![0.0, 0.0], vec![]).unwrap();
    let sqrt_pi_ln = 0.5 * std::f64::consts::PI.ln();
    assert_abs_diff_eq!(
        log_big_f(half, &two).unwrap().re,
        -sqrt_pi_ln,
        epsilon = 1e-14
    );
}

#[test]
fn log_f_is_sum_of_log_gammas() {
    let p = left();
    let z = ComplexValue::new(0.5, 2.0);
    let one = ComplexValue::new(1.0, 0.0);
    let mut expect = log_gamma(z).unwrap();
    for m in p.mu() {
        expect += log_gamma(one + *m - z).unwrap();
    }
    for n in p.nu() {
        expect -= log_gamma(one + *n - z).unwrap();
    }
    assert!((log_big_f(z, &p).unwrap() - expect).norm() < 1e-12);
}

#[test]
fn contour_geometry() {
    let cq = build_contours(&ProcessParams::bessel(0.0).unwrap(), (0.1, 10.0), TOL).unwrap();
    let (xg, xgt) = cq.crossing_points();
    assert_abs_diff_eq!(xg, 1.0 / 3.0, epsilon = 1e-15);
    assert_abs_diff_eq!(xgt, 2.0 / 3.0, epsilon = 1e-15);
    for u in cq.gamma_nodes() {
        for v in cq.gammatilde_nodes() {
            assert!((v.point - u.point).norm() > 0.1);
        }
    }
    assert!(cq.truncation_bound() < TOL);
    assert!(cq
        .separable_coeffs()
        .iter()
        .all(|a| a.re.is_finite() && a.im.is_finite()));
}

#[test]
fn node_count_grows_with_accuracy() {
    for p in [ProcessParams::bessel(0.0).unwrap(), left(), right()] {
        let loose = build_contours(&p, (0.1, 10.0), 1e-8).unwrap().node_count();
        let tight = build_contours(&p, (0.1, 10.0), 1e-12).unwrap().node_count();
        assert!(loose <= tight, "{loose} > {tight}");
    }
}

#[test]
fn panel_refinement_changes_little() {
    for p in [ProcessParams::bessel(0.0).unwrap(), left()] {
        let coarse = build_contours(&p, (0.1, 10.0), TOL).unwrap();
        let fine = ContourQuadrature::build_with(
            &p,
            (0.1, 10.0),
            TOL,
            &ContourOptions::default().refined(),
        )
        .unwrap();
        let d = kernel_eval(1.0, 1.0, &coarse).unwrap() - kernel_eval(1.0, 1.0, &fine).unwrap();
        assert!(d.abs() < 10.0 * TOL, "{d:e}");
    }
}

#[test]
fn reduces_to_bessel() {
    for nu in [0.0, 0.5, 2.0] {
        let k = MeijerKernel::new(ProcessParams::bessel(nu).unwrap(), (0.1, 5.0), TOL).unwrap();
        for &x in &grid5() {
            for &y in &grid5() {
                let d = k.eval(x, y).unwrap() - bessel_reduced(x, y, nu);
                assert!(d.abs() < 1e-7, "nu={nu} ({x},{y}): {d:e}");
            }
        }
    }
}

#[test]
fn matches_residue_series() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let cases = [
        ProcessParams::bessel(0.5).unwrap(),
        ProcessParams::new(vec![0.0, 1.0], vec![]).unwrap(),
        ProcessParams::new(vec![0.0, 0.0], vec![]).unwrap(),
        ProcessParams::new(vec![0.3, 1.45], vec![0.8]).unwrap(),
        left(),
    ];
    for p in cases {
        let k = MeijerKernel::new(p.clone(), (0.05, 2.0), TOL).unwrap();
        for _ in 0..10 {
            let (x, y) = (rng.gen_range(0.05..2.0), rng.gen_range(0.05..2.0));
            let d = k.eval(x, y).unwrap() - kernel_eval_series(x, y, &p, 60, 400).unwrap();
            assert!(d.abs() < 1e-8, "{p:?} ({x},{y}): {d:e}");
        }
    }
}

#[test]
fn parameters_near_minus_one_stay_accurate() {
    // contour gap (1 + nu_min)/3 is only 0.05 here
    for p in [
        ProcessParams::bessel(-0.85).unwrap(),
        ProcessParams::new(vec![-0.85, 0.4], vec![1.2]).unwrap(),
    ] {
        let k = MeijerKernel::new(p.clone(), (1e-6, 2.0), TOL).unwrap();
        for (x, y) in [(1e-8, 1e-8), (1e-8, 0.5), (0.5, 1e-8), (0.3, 1.7)] {
            let exact = kernel_eval_series(x, y, &p, 200, 200).unwrap();
            let got = k.eval(x, y).unwrap();
            assert!(
                (got - exact).abs() < 1e-11 * exact.abs().max(1.0),
                "{p:?} ({x},{y}): {got} vs {exact}"
            );
        }
    }
}

#[test]
fn pole_zero_pair_leaves_kernel_unchanged() {
    for p in [ProcessParams::bessel(0.7).unwrap(), left(), right()] {
        let base = MeijerKernel::new(p.clone(), (0.05, 4.0), TOL).unwrap();
        let ext =
            MeijerKernel::new(p.with_cancelling_pair(1.4).unwrap(), (0.05, 4.0), TOL).unwrap();
        for &x in &[0.05, 0.7, 2.2, 4.0] {
            for &y in &[0.05, 1.3, 4.0] {
                let d = base.eval(x, y).unwrap() - ext.eval(x, y).unwrap();
                assert!(d.abs() < 1e-9, "({x},{y}): {d:e}");
            }
        }
    }
}

#[test]
fn matrix_agrees_with_pointwise_evaluation() {
    let k = MeijerKernel::new(right(), (0.01, 6.0), TOL).unwrap();
    let xs = [0.01, 0.4, 2.5, 6.0];
    let m = k.matrix(&xs).unwrap();
    for (i, &x) in xs.iter().enumerate() {
        for (j, &y) in xs.iter().enumerate() {
            assert_abs_diff_eq!(m[(i, j)], k.eval(x, y).unwrap(), epsilon = 1e-14);
        }
    }
}

#[test]
fn arguments_outside_range_are_rejected() {
    let k = MeijerKernel::new(left(), (0.1, 2.0), TOL).unwrap();
    assert!(matches!(k.eval(3.0, 1.0), Err(Error::Domain(_))));
    assert!(matches!(k.eval(0.0, 1.0), Err(Error::Domain(_))));
}

#[test]
fn model_kernels_have_nonnegative_density() {
    for p in [
        left(),
        right(),
        ProcessParams::new(vec![0.3, 1.45], vec![0.8]).unwrap(),
    ] {
        let k = MeijerKernel::new(p, (0.01, 16.0), TOL).unwrap();
        for x in [0.01, 0.1, 1.0, 4.0, 9.0, 16.0] {
            assert!(k.eval(x, x).unwrap() >= 0.0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    // products of Ginibre matrices: q = 0 and any nu_j > -1
    #[test]
    fn ginibre_product_density_nonnegative(
        nu in proptest::collection::vec(-0.6f64..3.0, 1..4),
        x in 0.01f64..8.0,
    ) {
        let k = MeijerKernel::new(ProcessParams::new(nu, vec![]).unwrap(), (0.01, 8.0), TOL).unwrap();
        prop_assert!(k.eval(x, x).unwrap() >= 0.0);
    }
}
