//! Gap probabilities of the Meijer-G point process at the hard edge.
//!
//! The crate evaluates the Meijer-G kernel through a discretized double
//! contour integral, computes `det(1 - K|[0,s])` with a Nyström
//! discretization, and evaluates the closed-form large-gap coefficients
//! `rho, a, b, c` and the multiplicative constant `ln C`.
//!
//! ```
//! use meijer_gap::{asymptotics::compute_coeffs, ProcessParams};
//!
//! let params = ProcessParams::new(vec![1.31, 2.15, 3.19], vec![1.87, 2.61]).unwrap();
//! let coeffs = compute_coeffs(&params).unwrap();
//! assert!((coeffs.ln_c + 2.963).abs() < 1e-3);
//! ```

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod cli;
pub mod converge;
pub mod error;
pub mod fredholm;
pub mod kernel;
pub mod quadrature;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
pub use kernel::ProcessParams;

/// Complex scalar used throughout the special-function and contour code.
pub type ComplexValue = num_complex::Complex64;
