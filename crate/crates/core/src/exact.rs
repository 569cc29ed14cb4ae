//! Closed-form Davis-Wielandt radii of the block operators
//! `[[I, X], [O, O]]` and `[[O, X], [O, O]]` under `diag(A, A)`.
//!
//! Both reduce to a one-dimensional problem in `b = ‖X‖_A`. For the first
//! block the optimal angle is the root of a cubic in `tan θ`, solved by
//! Cardano's formula; the result is always compared with a direct
//! maximization of
//! `φ(θ) = (cos θ + b sin θ)² (cos² θ + (cos θ + b sin θ)²)` on `[0, π/2]`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI, SQRT_2};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::CVec;
use crate::metric::{semi_norm_vec, Metric};
use crate::operator::Operator;
use crate::radii::{op_seminorm, Method, RadiusEstimate};
use crate::semiop::{block2, doubled_metric};
use crate::sweep;

/// Grid size for the direct maximization of `φ`.
pub const PHI_GRID: usize = 10_000;
/// Relative disagreement between formula and grid that raises the warning flag.
pub const AGREEMENT_TOL: f64 = 1e-6;

/// How the angle was obtained from the cubic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CubicPath {
    Cardano,
    Trigonometric,
}

/// Intermediate quantities of the closed form for `[[I, X], [O, O]]`.
/// `tan θ₀` is a root of `u³ + p u² + q u + r`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CardanoData {
    pub b: f64,
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub s: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub theta0: f64,
    pub path: CubicPath,
}

/// `φ(θ)` for the block `[[I, X], [O, O]]` with `‖X‖_A = b`.
pub fn phi(b: f64, theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    let u = c + b * s;
    u * u * (c * c + u * u)
}

/// Central difference of `φ` in `θ`.
pub fn phi_derivative(b: f64, theta: f64, h: f64) -> f64 {
    (phi(b, theta + h) - phi(b, theta - h)) / (2.0 * h)
}

/// Direct maximization of `φ` on `[0, π/2]`: returns `(θ, φ(θ))`.
pub fn phi_grid_max(b: f64) -> (f64, f64) {
    let r = sweep::maximize(|t| phi(b, t), 0.0, FRAC_PI_2, PHI_GRID, 1e-12, 2, false);
    (r.arg, r.value)
}

pub fn cardano_theta0(b: f64) -> Result<CardanoData> {
    if b.is_nan() || b <= 0.0 || !b.is_finite() {
        return Err(Error::NonpositiveB(b));
    }
    let b2 = b * b;
    let p = -(2.0 * b2 - 5.0) / (2.0 * b);
    let q = -(2.0 * b2 - 2.0) / b2;
    let r = -3.0 / (2.0 * b);
    let s = (8.0 * b2.powi(4) + 20.0 * b2.powi(3) + 45.0 * b2 * b2 + 61.0 * b2 + 28.0) / (16.0 * 27.0 * b2.powi(3));
    let alpha = (2.0 * p.powi(3) - 9.0 * p * q + 27.0 * r) / 27.0;

    if s >= 0.0 {
        let beta = (-alpha / 2.0 + s.sqrt()).cbrt();
        let gamma = (-alpha / 2.0 - s.sqrt()).cbrt();
        let theta0 = (beta + gamma - p / 3.0).atan();
        return Ok(CardanoData { b, p, q, r, s, alpha, beta, gamma, theta0, path: CubicPath::Cardano });
    }

    // Three real roots: y_k = 2√(−P/3) cos(ψ/3 − 2πk/3) for y³ + Py + α = 0.
    let pp = q - p * p / 3.0;
    let m = 2.0 * (-pp / 3.0).sqrt();
    let psi = ((3.0 * alpha / (2.0 * pp)) * (-3.0 / pp).sqrt()).clamp(-1.0, 1.0).acos();
    let theta0 = (0..3)
        .map(|k| (m * (psi / 3.0 - 2.0 * PI * k as f64 / 3.0).cos() - p / 3.0).atan())
        .filter(|t| (0.0..=FRAC_PI_2).contains(t))
        .max_by(|x, y| phi(b, *x).total_cmp(&phi(b, *y)))
        .unwrap_or_else(|| phi_grid_max(b).0);
    Ok(CardanoData { b, p, q, r, s, alpha, beta: f64::NAN, gamma: f64::NAN, theta0, path: CubicPath::Trigonometric })
}

/// Closed-form `dw` of `[[I, X], [O, O]]` as a function of `b`.
pub fn dw_ix_value(b: f64) -> Result<f64> {
    if b == 0.0 {
        return Ok(SQRT_2);
    }
    let d = cardano_theta0(b)?;
    let (s, c) = d.theta0.sin_cos();
    let u = c + b * s;
    Ok(u * (c * c + u * u).sqrt())
}

/// Relative slack on the `1/√2` branch point.
pub const BOUNDARY_SLACK: f64 = 1e-12;

fn below_boundary(b: f64) -> bool {
    b < FRAC_1_SQRT_2 * (1.0 - BOUNDARY_SLACK)
}

/// Closed-form `dw` of `[[O, X], [O, O]]` as a function of `b`.
/// The boundary `b = 1/√2` belongs to the saturated branch; a relative
/// slack of [`BOUNDARY_SLACK`] absorbs rounding in a computed `b`.
pub fn dw_0x_value(b: f64) -> f64 {
    if b == 0.0 {
        0.0
    } else if below_boundary(b) {
        b / (2.0 * (1.0 - b * b).sqrt())
    } else {
        b * b
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `‖X‖_A = 0`.
    Degenerate,
    /// Cardano angle, or the interior optimum of the nilpotent block.
    Interior,
    /// Nilpotent block with `‖X‖_A ≥ 1/√2`.
    Saturated,
}

/// A closed-form value with its provenance and cross-check.
#[derive(Debug, Clone, Serialize)]
pub struct ExactDw {
    pub estimate: RadiusEstimate,
    pub b: f64,
    pub branch: Branch,
    pub formula_value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cardano: Option<CardanoData>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_value: Option<f64>,
    /// Set when formula and grid disagree beyond [`AGREEMENT_TOL`]; the
    /// estimate then carries the grid value.
    pub warning: bool,
}

/// A-unit `v` with `‖Xv‖_A = b` and A-unit `u` with `Xv = b u`.
fn singular_pair(m: &Metric, x: &Operator) -> Result<(f64, CVec, CVec)> {
    let top = op_seminorm(m, x)?;
    let b = top.value;
    let v = top.witness;
    let u = if b > 0.0 {
        (x.matrix() * &v).unscale(b)
    } else {
        v.clone()
    };
    Ok((b, u, v))
}

fn stack(m: &Metric, x1: &CVec, x2: &CVec) -> Result<(Metric, CVec)> {
    let m2 = doubled_metric(m)?;
    let mut z = CVec::zeros(2 * x1.len());
    z.rows_mut(0, x1.len()).copy_from(x1);
    z.rows_mut(x1.len(), x2.len()).copy_from(x2);
    Ok((m2, z))
}

fn estimate(m: &Metric, value: f64, x1: &CVec, x2: &CVec, residual: f64) -> Result<RadiusEstimate> {
    let (m2, z) = stack(m, x1, x2)?;
    let norm = semi_norm_vec(&m2, &z)?;
    let z = if norm > 0.0 { z.unscale(norm) } else { z };
    Ok(RadiusEstimate { value, maximizer: m2.coords(&z), witness: z, method: Method::ClosedForm, iterations: 1, residual })
}

/// `dw` of `[[I, X], [O, O]]` under `diag(A, A)`.
pub fn dw_exact_ix(m: &Metric, x: &Operator) -> Result<ExactDw> {
    let (b, u, v) = singular_pair(m, x)?;
    if b == 0.0 {
        let est = estimate(m, SQRT_2, &u, &CVec::zeros(u.len()), 0.0)?;
        return Ok(ExactDw { estimate: est, b, branch: Branch::Degenerate, formula_value: SQRT_2, cardano: None, grid_value: None, warning: false });
    }
    let d = cardano_theta0(b)?;
    let formula = dw_ix_value(b)?;
    let (theta_grid, phi_grid) = phi_grid_max(b);
    let grid = phi_grid.sqrt();
    let warning = (formula - grid).abs() > AGREEMENT_TOL * grid;
    let (value, theta) = if warning { (grid, theta_grid) } else { (formula, d.theta0) };
    let (s, c) = theta.sin_cos();
    let est = estimate(m, value, &u.scale(c), &v.scale(s), (formula - grid).abs())?;
    Ok(ExactDw { estimate: est, b, branch: Branch::Interior, formula_value: formula, cardano: Some(d), grid_value: Some(grid), warning })
}

/// `dw` of `[[O, X], [O, O]]` under `diag(A, A)`.
pub fn dw_exact_0x(m: &Metric, x: &Operator) -> Result<ExactDw> {
    let (b, u, v) = singular_pair(m, x)?;
    let value = dw_0x_value(b);
    let (branch, t) = if b == 0.0 {
        (Branch::Degenerate, 0.5)
    } else if below_boundary(b) {
        (Branch::Interior, 1.0 / (2.0 * (1.0 - b * b)))
    } else {
        (Branch::Saturated, 1.0)
    };
    // Weight t = sin²θ on the input slot.
    let (s, c) = (t.sqrt(), (1.0 - t).max(0.0).sqrt());
    let est = estimate(m, value, &u.scale(c), &v.scale(s), 0.0)?;
    Ok(ExactDw { estimate: est, b, branch, formula_value: value, cardano: None, grid_value: None, warning: false })
}

/// `[[I, X], [O, O]]` as a block operator under `diag(A, A)`.
pub fn ix_block(m: &Metric, x: &Operator) -> Result<crate::semiop::BlockOperator> {
    let n = x.dim();
    block2(m, &Operator::identity(n), x, &Operator::zeros(n), &Operator::zeros(n))
}

/// `[[O, X], [O, O]]` as a block operator under `diag(A, A)`.
pub fn zx_block(m: &Metric, x: &Operator) -> Result<crate::semiop::BlockOperator> {
    let n = x.dim();
    block2(m, &Operator::zeros(n), x, &Operator::zeros(n), &Operator::zeros(n))
}
