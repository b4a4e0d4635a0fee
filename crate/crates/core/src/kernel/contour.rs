use std::f64::consts::PI;

use nalgebra::DMatrix;

use super::{log_big_f, Kernel, ProcessParams};
use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;
use crate::ComplexValue;

/// A quadrature node on an oriented contour; `weight` already carries `dz`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourNode {
    pub point: ComplexValue,
    pub weight: ComplexValue,
}

/// Discretization controls for [`build_contours_with`](ContourQuadrature::build_with).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourOptions {
    /// Length of one Gauss-Legendre panel along the contour.
    pub panel_length: f64,
    /// Panels are also at most this multiple of the local distance between
    /// the two contours, which keeps the `1/(v - u)` near-singularity resolved
    /// when `1 + nu_min` is small.
    pub separation_ratio: f64,
    pub panel_nodes: usize,
    /// Half-height of the vertical piece through the crossing point.
    pub vertical_half_height: f64,
    /// Hard cap on the node count of either contour.
    pub max_nodes: usize,
}

impl Default for ContourOptions {
    fn default() -> Self {
        Self {
            panel_length: 0.5,
            separation_ratio: 1.5,
            panel_nodes: 16,
            vertical_half_height: 1.0,
            max_nodes: 4096,
        }
    }
}

impl ContourOptions {
    /// Same geometry with twice as many panels per unit length.
    pub fn refined(&self) -> Self {
        Self {
            panel_length: 0.5 * self.panel_length,
            separation_ratio: 0.5 * self.separation_ratio,
            ..*self
        }
    }
}

/// Discretized contours `gamma` (left) and `gammatilde` (right) with the
/// precomputed coefficients
/// `A_ij = w_i wt_j F(u_i) / (F(v_j) (v_j - u_i) (2 pi i)^2)`,
/// so that `K(x, y) = Re sum_ij A_ij x^{-u_i} y^{v_j - 1}`.
#[derive(Debug, Clone)]
pub struct ContourQuadrature {
    gamma_nodes: Vec<ContourNode>,
    gammatilde_nodes: Vec<ContourNode>,
    crossing_points: (f64, f64),
    x_range: (f64, f64),
    tol: f64,
    truncation_bound: f64,
    separable_coeffs: DMatrix<ComplexValue>,
}

/// Builds the contours for `params`, valid for kernel arguments in `x_range`.
pub fn build_contours(
    params: &ProcessParams,
    x_range: (f64, f64),
    tol: f64,
) -> Result<ContourQuadrature> {
    ContourQuadrature::build_with(params, x_range, tol, &ContourOptions::default())
}

impl ContourQuadrature {
    pub fn build_with(
        params: &ProcessParams,
        x_range: (f64, f64),
        tol: f64,
        opts: &ContourOptions,
    ) -> Result<Self> {
        let (lo, hi) = x_range;
        if !(lo > 0.0) || !(hi >= lo) || !hi.is_finite() {
            return Err(Error::Domain(format!("invalid x_range ({lo}, {hi})")));
        }
        if !(tol > 0.0) {
            return Err(Error::Domain(format!(
                "tolerance must be positive, got {tol}"
            )));
        }
        let edge = 1.0 + params.nu_min();
        let crossing_points = (edge / 3.0, 2.0 * edge / 3.0);
        let (ln_lo, ln_hi) = (lo.ln(), hi.ln());

        // |x^{-u} F(u)| maximized over the x-range (monotone in x, so endpoints suffice)
        let gamma_bound = |u: ComplexValue| -> Result<f64> {
            let lf = log_big_f(u, params)?.re;
            Ok((lf - u.re * ln_lo).max(lf - u.re * ln_hi).exp())
        };
        let gammatilde_bound = |v: ComplexValue| -> Result<f64> {
            let lf = log_big_f(v, params)?.re;
            Ok(((v.re - 1.0) * ln_lo - lf)
                .max((v.re - 1.0) * ln_hi - lf)
                .exp())
        };

        let (gamma_nodes, gb) = contour_nodes(
            crossing_points.0,
            ComplexValue::from_polar(1.0, 2.0 * PI / 3.0),
            &gamma_bound,
            crossing_points.1 - crossing_points.0,
            tol,
            opts,
        )?;
        let (gammatilde_nodes, gtb) = contour_nodes(
            crossing_points.1,
            ComplexValue::from_polar(1.0, PI / 3.0),
            &gammatilde_bound,
            crossing_points.1 - crossing_points.0,
            tol,
            opts,
        )?;

        let pref = -1.0 / (4.0 * PI * PI);
        let a: Vec<ComplexValue> = gamma_nodes
            .iter()
            .map(|n| Ok(n.weight * log_big_f(n.point, params)?.exp()))
            .collect::<Result<_>>()?;
        let b: Vec<ComplexValue> = gammatilde_nodes
            .iter()
            .map(|n| Ok(n.weight * (-log_big_f(n.point, params)?).exp()))
            .collect::<Result<_>>()?;
        let separable_coeffs =
            DMatrix::from_fn(gamma_nodes.len(), gammatilde_nodes.len(), |i, j| {
                pref * a[i] * b[j] / (gammatilde_nodes[j].point - gamma_nodes[i].point)
            });
        if separable_coeffs
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::Accuracy("non-finite contour coefficient".into()));
        }
        Ok(Self {
            gamma_nodes,
            gammatilde_nodes,
            crossing_points,
            x_range,
            tol,
            truncation_bound: gb.max(gtb),
            separable_coeffs,
        })
    }

    pub fn gamma_nodes(&self) -> &[ContourNode] {
        &self.gamma_nodes
    }

    pub fn gammatilde_nodes(&self) -> &[ContourNode] {
        &self.gammatilde_nodes
    }

    pub fn crossing_points(&self) -> (f64, f64) {
        self.crossing_points
    }

    pub fn x_range(&self) -> (f64, f64) {
        self.x_range
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Largest integrand magnitude bound at the truncation points.
    pub fn truncation_bound(&self) -> f64 {
        self.truncation_bound
    }

    pub fn separable_coeffs(&self) -> &DMatrix<ComplexValue> {
        &self.separable_coeffs
    }

    pub fn node_count(&self) -> usize {
        self.gamma_nodes.len() + self.gammatilde_nodes.len()
    }

    fn check_arg(&self, x: f64) -> Result<()> {
        if !(x > 0.0) || x > self.x_range.1 * (1.0 + 1e-9) {
            return Err(Error::Domain(format!(
                "kernel argument {x} outside (0, {}]",
                self.x_range.1
            )));
        }
        Ok(())
    }

    fn accept(&self, value: ComplexValue, x: f64, y: f64) -> Result<f64> {
        // relative once |K| > 1: near x = 0 with nu_min < 0 the kernel is large
        // and round-off alone exceeds any absolute threshold
        if !value.re.is_finite() || value.im.abs() >= 100.0 * self.tol * value.re.abs().max(1.0) {
            return Err(Error::Accuracy(format!(
                "imaginary residual {:e} at ({x}, {y})",
                value.im
            )));
        }
        Ok(value.re)
    }

    /// `K(x, y)` as a bilinear form in the separable coefficients.
    pub fn kernel_eval(&self, x: f64, y: f64) -> Result<f64> {
        self.check_arg(x)?;
        self.check_arg(y)?;
        let (lx, ly) = (x.ln(), y.ln());
        let yv: Vec<ComplexValue> = self
            .gammatilde_nodes
            .iter()
            .map(|n| ((n.point - 1.0) * ly).exp())
            .collect();
        let mut acc = ComplexValue::new(0.0, 0.0);
        for (i, u) in self.gamma_nodes.iter().enumerate() {
            let row = self.separable_coeffs.row(i);
            let inner: ComplexValue = row.iter().zip(&yv).map(|(a, w)| a * w).sum();
            acc += (-u.point * lx).exp() * inner;
        }
        self.accept(acc, x, y)
    }

    /// `K(x_k, x_l)` for all pairs as `X A Y^T`.
    pub fn kernel_matrix(&self, xs: &[f64]) -> Result<DMatrix<f64>> {
        for &x in xs {
            self.check_arg(x)?;
        }
        let m = xs.len();
        let xu = DMatrix::from_fn(m, self.gamma_nodes.len(), |k, i| {
            (-self.gamma_nodes[i].point * xs[k].ln()).exp()
        });
        let yv = DMatrix::from_fn(m, self.gammatilde_nodes.len(), |l, j| {
            ((self.gammatilde_nodes[j].point - 1.0) * xs[l].ln()).exp()
        });
        let full = xu * &self.separable_coeffs * yv.transpose();
        let mut out = DMatrix::zeros(m, m);
        for k in 0..m {
            for l in 0..m {
                out[(k, l)] = self.accept(full[(k, l)], xs[k], xs[l])?;
            }
        }
        Ok(out)
    }
}

/// Nodes of an upward contour: a vertical piece through `crossing`, then
/// rays leaving `crossing +/- i h` in directions `dir` and `conj(dir)`,
/// truncated once `bound` drops below `tol` past its peak. `gap` is the
/// horizontal distance to the other contour; at ray parameter `tau` the two
/// contours are `gap + tau` apart.
fn contour_nodes(
    crossing: f64,
    dir: ComplexValue,
    bound: &dyn Fn(ComplexValue) -> Result<f64>,
    gap: f64,
    tol: f64,
    opts: &ContourOptions,
) -> Result<(Vec<ContourNode>, f64)> {
    let (gx, gw) = gauss_legendre(opts.panel_nodes);
    let h = opts.vertical_half_height;
    let i = ComplexValue::new(0.0, 1.0);
    let mut nodes = Vec::new();

    let panel_at = |tau: f64| opts.panel_length.min(opts.separation_ratio * (gap + tau));

    let panels = ((2.0 * h) / panel_at(0.0)).ceil().max(1.0) as usize;
    let step = 2.0 * h / panels as f64;
    for p in 0..panels {
        let a = -h + p as f64 * step;
        for (t, w) in gx.iter().zip(&gw) {
            let tau = a + 0.5 * step * (t + 1.0);
            nodes.push(ContourNode {
                point: ComplexValue::new(crossing, tau),
                weight: i * (0.5 * step * w),
            });
        }
    }

    let start = ComplexValue::new(crossing, h);
    let mut upper = Vec::new();
    let mut prev = bound(start)?;
    let mut tau0 = 0.0;
    let last = loop {
        let len = panel_at(tau0);
        let tau1 = tau0 + len;
        for (t, w) in gx.iter().zip(&gw) {
            let tau = tau0 + 0.5 * len * (t + 1.0);
            upper.push(ContourNode {
                point: start + dir * tau,
                weight: dir * (0.5 * len * w),
            });
        }
        if nodes.len() + 2 * upper.len() > opts.max_nodes {
            return Err(Error::Convergence(format!(
                "contour truncation bound {prev:e} above {tol:e} after {} nodes",
                opts.max_nodes
            )));
        }
        let b = bound(start + dir * tau1)?;
        if b < tol && b <= prev {
            break b;
        }
        prev = b;
        tau0 = tau1;
    };
    // lower ray is the mirror image, traversed upward: (conj z, -conj dz)
    let mut all: Vec<ContourNode> = upper
        .iter()
        .rev()
        .map(|n| ContourNode {
            point: n.point.conj(),
            weight: -n.weight.conj(),
        })
        .collect();
    all.append(&mut nodes);
    all.extend(upper);
    Ok((all, last))
}

/// `K(x, y)` from a prebuilt [`ContourQuadrature`].
pub fn kernel_eval(x: f64, y: f64, contours: &ContourQuadrature) -> Result<f64> {
    contours.kernel_eval(x, y)
}

/// The Meijer-G kernel backed by a prebuilt contour quadrature.
#[derive(Debug, Clone)]
pub struct MeijerKernel {
    params: ProcessParams,
    contours: ContourQuadrature,
}

impl MeijerKernel {
    pub fn new(params: ProcessParams, x_range: (f64, f64), tol: f64) -> Result<Self> {
        let contours = build_contours(&params, x_range, tol)?;
        Ok(Self { params, contours })
    }

    pub fn from_contours(params: ProcessParams, contours: ContourQuadrature) -> Self {
        Self { params, contours }
    }

    pub fn params(&self) -> &ProcessParams {
        &self.params
    }

    pub fn contours(&self) -> &ContourQuadrature {
        &self.contours
    }
}

impl Kernel for MeijerKernel {
    fn eval(&self, x: f64, y: f64) -> Result<f64> {
        self.contours.kernel_eval(x, y)
    }

    fn matrix(&self, xs: &[f64]) -> Result<DMatrix<f64>> {
        self.contours.kernel_matrix(xs)
    }
}
