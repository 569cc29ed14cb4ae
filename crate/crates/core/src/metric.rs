//! The positive-semidefinite metric `A` and the compression that turns every
//! A-quantity into an ordinary Euclidean one.
//!
//! For an A-bounded `T`, the map `x ↦ A^{1/2}x` identifies A-unit vectors
//! (modulo `N(A)`) with unit vectors of `range(A)`. Writing `u = basis·c`,
//!
//! ```text
//! ⟨Tx, x⟩_A = c* N c,   ‖Tx‖_A = ‖W c‖,
//! N = basis* A^{1/2} T A^{†1/2} basis,   W = A^{1/2} T A^{†1/2} basis.
//! ```
//!
//! The identification is lossless: every unit `c` comes from the A-unit
//! vector `x = A^{†1/2}·basis·c` (the canonical representative with no
//! `N(A)` component) and every A-unit `x` produces some unit `c`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, CVec, C64};
use crate::operator::Operator;

pub const DEFAULT_RANK_TOL: f64 = 1e-10;
const HERMITIAN_TOL: f64 = 1e-12;

/// A validated PSD metric together with its spectral data.
#[derive(Debug, Clone)]
pub struct Metric {
    a: CMat,
    eigvals: Vec<f64>,
    eigvecs: CMat,
    rank: usize,
    sqrt_a: CMat,
    pinv_sqrt_a: CMat,
    pinv_a: CMat,
    proj: CMat,
    basis: CMat,
    rank_tol: f64,
}

/// Builds the metric workspace from a Hermitian PSD matrix.
///
/// Eigenvalues with modulus below `rank_tol·λ_max` are clamped to zero; an
/// eigenvalue below `-rank_tol·λ_max` is rejected.
pub fn build_metric(a: CMat, rank_tol: f64) -> Result<Metric> {
    let (rows, cols) = a.shape();
    if rows == 0 || cols == 0 {
        return Err(Error::EmptyMatrix);
    }
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    let scale = a.norm();
    let asym = (&a - a.adjoint()).norm();
    if asym > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian { residual: asym / scale });
    }
    let a = linalg::herm_part(&a);
    let (mut eigvals, eigvecs) = linalg::eigh(&a);
    let lmax = eigvals[0];
    if lmax <= 0.0 {
        if lmax < 0.0 {
            return Err(Error::NotPositiveSemidefinite { eigenvalue: lmax });
        }
        return Err(Error::ZeroMetric);
    }
    let cutoff = rank_tol * lmax;
    for v in eigvals.iter_mut() {
        if *v < -cutoff {
            return Err(Error::NotPositiveSemidefinite { eigenvalue: *v });
        }
        if *v < cutoff {
            *v = 0.0;
        }
    }
    let rank = eigvals.iter().filter(|&&v| v > 0.0).count();

    let spectral = |f: &dyn Fn(f64) -> f64| -> CMat {
        let d = CVec::from_iterator(rows, eigvals.iter().map(|&v| linalg::c64(f(v), 0.0)));
        &eigvecs * CMat::from_diagonal(&d) * eigvecs.adjoint()
    };
    let pos = |v: f64| v > 0.0;
    let sqrt_a = spectral(&|v| v.sqrt());
    let pinv_sqrt_a = spectral(&|v| if pos(v) { 1.0 / v.sqrt() } else { 0.0 });
    let pinv_a = spectral(&|v| if pos(v) { 1.0 / v } else { 0.0 });
    let basis = eigvecs.columns(0, rank).into_owned();
    let proj = &basis * basis.adjoint();

    Ok(Metric { a, eigvals, eigvecs, rank, sqrt_a, pinv_sqrt_a, pinv_a, proj, basis, rank_tol })
}

/// The compressed pair `(N, W)` of an A-bounded operator.
#[derive(Debug, Clone)]
pub struct Compressed {
    /// `r×r`; `c*Nc = ⟨Tx,x⟩_A`.
    pub n: CMat,
    /// `n×r`; `‖Wc‖ = ‖Tx‖_A`.
    pub w: CMat,
}

impl Compressed {
    /// `W*W`, the Hermitian form of `‖Tx‖_A²`.
    pub fn gram(&self) -> CMat {
        self.w.adjoint() * &self.w
    }

    pub fn rank(&self) -> usize {
        self.n.nrows()
    }
}

impl Metric {
    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn a(&self) -> &CMat {
        &self.a
    }

    pub fn eigvals(&self) -> &[f64] {
        &self.eigvals
    }

    pub fn eigvecs(&self) -> &CMat {
        &self.eigvecs
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn sqrt_a(&self) -> &CMat {
        &self.sqrt_a
    }

    pub fn pinv_sqrt_a(&self) -> &CMat {
        &self.pinv_sqrt_a
    }

    pub fn pinv_a(&self) -> &CMat {
        &self.pinv_a
    }

    pub fn proj(&self) -> &CMat {
        &self.proj
    }

    pub fn basis(&self) -> &CMat {
        &self.basis
    }

    pub fn rank_tol(&self) -> f64 {
        self.rank_tol
    }

    pub fn is_invertible(&self) -> bool {
        self.rank == self.dim()
    }

    /// `I − P_A`, the projection onto `N(A)`.
    pub fn null_proj(&self) -> CMat {
        CMat::identity(self.dim(), self.dim()) - &self.proj
    }

    pub(crate) fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got });
        }
        Ok(())
    }

    /// Relative residual `‖A^{1/2}T(I−P_A)‖_F / (1+‖A^{1/2}T‖_F)`.
    pub fn a_bounded_residual(&self, t: &Operator) -> Result<f64> {
        self.check_dim(t.dim())?;
        let st = &self.sqrt_a * t.matrix();
        Ok((&st * self.null_proj()).norm() / (1.0 + st.norm()))
    }

    /// Relative residual `‖(I−P_A)T*A‖_F / (1+‖T*A‖_F)`.
    pub fn in_ba_residual(&self, t: &Operator) -> Result<f64> {
        self.check_dim(t.dim())?;
        let ta = t.matrix().adjoint() * &self.a;
        Ok((self.null_proj() * &ta).norm() / (1.0 + ta.norm()))
    }

    /// Canonical A-unit ambient vector `A^{†1/2}·basis·c` for a coordinate `c`.
    pub fn witness(&self, c: &CVec) -> CVec {
        &self.pinv_sqrt_a * (&self.basis * c)
    }

    /// Coordinates of an ambient vector: `basis*·A^{1/2}·x`.
    pub fn coords(&self, x: &CVec) -> CVec {
        self.basis.adjoint() * (&self.sqrt_a * x)
    }

    /// An ambient operator whose compression is `n` and which acts as `on_null`
    /// on `N(A)` (pass `None` for zero there). The result is always in `B_A`.
    pub fn lift(&self, n: &CMat, on_null: Option<&CMat>) -> Operator {
        assert_eq!(n.nrows(), self.rank, "compressed matrix must be r×r");
        let core = &self.pinv_sqrt_a * &self.basis * n * self.basis.adjoint() * &self.sqrt_a;
        let m = match on_null {
            Some(r) => {
                let q = self.null_proj();
                core + &q * r * &q
            }
            None => core,
        };
        Operator::wrap(m)
    }

    /// Projects an arbitrary operator onto the A-bounded operators by
    /// keeping `T·P_A` and the `N(A)→N(A)` corner.
    pub fn project_bounded(&self, t: &Operator) -> Operator {
        let q = self.null_proj();
        Operator::wrap(t.matrix() * &self.proj + &q * t.matrix() * &q)
    }
}

/// `⟨x, y⟩_A = ⟨Ax, y⟩ = y* A x`; linear in `x`, conjugate-linear in `y`.
pub fn semi_inner(m: &Metric, x: &CVec, y: &CVec) -> Result<C64> {
    m.check_dim(x.len())?;
    m.check_dim(y.len())?;
    Ok(y.dotc(&(&m.a * x)))
}

/// `‖x‖_A = √⟨x,x⟩_A`, evaluated as `‖A^{1/2}x‖` so it is never negative.
pub fn semi_norm_vec(m: &Metric, x: &CVec) -> Result<f64> {
    m.check_dim(x.len())?;
    Ok((&m.sqrt_a * x).norm())
}

/// Compresses an A-bounded operator to its `(N, W)` pair.
pub fn compress(m: &Metric, t: &Operator) -> Result<Compressed> {
    compress_with_tol(m, t, crate::semiop::DEFAULT_TOL)
}

pub fn compress_with_tol(m: &Metric, t: &Operator, tol: f64) -> Result<Compressed> {
    let residual = m.a_bounded_residual(t)?;
    if residual > tol {
        return Err(Error::NotABounded { residual });
    }
    Ok(compress_unchecked(m, t.matrix()))
}

pub(crate) fn compress_unchecked(m: &Metric, t: &CMat) -> Compressed {
    let w = &m.sqrt_a * t * &m.pinv_sqrt_a * &m.basis;
    let n = m.basis.adjoint() * &w;
    Compressed { n, w }
}

/// Summary of a metric for reports.
#[derive(Debug, Clone, Serialize)]
pub struct MetricSummary {
    pub dim: usize,
    pub rank: usize,
    pub eigvals: Vec<f64>,
}

impl From<&Metric> for MetricSummary {
    fn from(m: &Metric) -> Self {
        Self { dim: m.dim(), rank: m.rank, eigvals: m.eigvals.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c64, from_real_rows, real_diag};

    fn close(a: &CMat, b: &CMat, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn identity_metric() {
        let m = build_metric(CMat::identity(2, 2), 1e-10).unwrap();
        assert_eq!(m.rank(), 2);
        assert!(close(m.sqrt_a(), &CMat::identity(2, 2), 1e-14));
        assert!(close(m.proj(), &CMat::identity(2, 2), 1e-14));
    }

    #[test]
    fn diag_one_two() {
        let m = build_metric(real_diag(&[1.0, 2.0]), 1e-10).unwrap();
        assert_eq!(m.rank(), 2);
        assert!(close(m.sqrt_a(), &real_diag(&[1.0, 2f64.sqrt()]), 1e-14));
        assert!(close(m.pinv_a(), &real_diag(&[1.0, 0.5]), 1e-14));
        assert_eq!(m.eigvals(), &[2.0, 1.0]);
    }

    #[test]
    fn singular_diag() {
        let a = real_diag(&[1.0, 0.0]);
        let m = build_metric(a.clone(), 1e-10).unwrap();
        assert_eq!(m.rank(), 1);
        assert!(close(m.proj(), &a, 1e-14));
        assert!(close(m.pinv_sqrt_a(), &a, 1e-14));
        assert!(close(&(&a * m.pinv_a() * &a), &a, 1e-14));
        assert_eq!(m.basis().shape(), (2, 1));
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(build_metric(CMat::zeros(0, 0), 1e-10), Err(Error::EmptyMatrix)));
        let skew = from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]);
        assert!(matches!(build_metric(skew, 1e-10), Err(Error::NotHermitian { .. })));
        let neg = real_diag(&[1.0, -0.5]);
        assert!(matches!(build_metric(neg, 1e-10), Err(Error::NotPositiveSemidefinite { .. })));
        assert!(matches!(build_metric(CMat::zeros(2, 2), 1e-10), Err(Error::ZeroMetric)));
        assert!(matches!(build_metric(CMat::zeros(2, 3), 1e-10), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn tiny_negative_eigenvalue_is_clamped() {
        let m = build_metric(real_diag(&[1.0, -1e-13]), 1e-10).unwrap();
        assert_eq!(m.rank(), 1);
        assert_eq!(m.eigvals()[1], 0.0);
    }

    #[test]
    fn inner_products() {
        let id = build_metric(CMat::identity(2, 2), 1e-10).unwrap();
        let d12 = build_metric(real_diag(&[1.0, 2.0]), 1e-10).unwrap();
        let d10 = build_metric(real_diag(&[1.0, 0.0]), 1e-10).unwrap();
        let v = |a: f64, b: f64| CVec::from_vec(vec![c64(a, 0.0), c64(b, 0.0)]);
        assert_eq!(semi_inner(&id, &v(1.0, 0.0), &v(0.0, 1.0)).unwrap(), c64(0.0, 0.0));
        assert!((semi_inner(&d12, &v(0.0, 1.0), &v(0.0, 1.0)).unwrap() - c64(2.0, 0.0)).norm() < 1e-14);
        assert_eq!(semi_inner(&d10, &v(0.0, 1.0), &v(0.0, 1.0)).unwrap(), c64(0.0, 0.0));
        assert!((semi_norm_vec(&d12, &v(1.0, 1.0)).unwrap() - 3f64.sqrt()).abs() < 1e-14);
        assert!((semi_norm_vec(&id, &v(3.0, 4.0)).unwrap() - 5.0).abs() < 1e-14);
        assert_eq!(semi_norm_vec(&d10, &v(0.0, 5.0)).unwrap(), 0.0);
        let short = CVec::from_vec(vec![c64(1.0, 0.0)]);
        assert!(matches!(semi_norm_vec(&id, &short), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn inner_product_is_linear_in_first_slot() {
        let m = build_metric(real_diag(&[1.0, 2.0]), 1e-10).unwrap();
        let x = CVec::from_vec(vec![c64(1.0, 0.0), c64(0.0, 1.0)]);
        let y = CVec::from_vec(vec![c64(0.5, 0.0), c64(1.0, 0.0)]);
        let i = c64(0.0, 1.0);
        let lhs = semi_inner(&m, &(&x * i), &y).unwrap();
        assert!((lhs - semi_inner(&m, &x, &y).unwrap() * i).norm() < 1e-14);
        let rhs = semi_inner(&m, &x, &(&y * i)).unwrap();
        assert!((rhs - semi_inner(&m, &x, &y).unwrap() * i.conj()).norm() < 1e-14);
    }

    #[test]
    fn compress_examples() {
        let id = build_metric(CMat::identity(2, 2), 1e-10).unwrap();
        let t = Operator::new(CMat::from_fn(2, 2, |i, j| c64(i as f64 + 1.0, j as f64))).unwrap();
        let c = compress(&id, &t).unwrap();
        assert!(close(&c.n, t.matrix(), 1e-14) && close(&c.w, t.matrix(), 1e-14));

        let d12 = build_metric(real_diag(&[1.0, 2.0]), 1e-10).unwrap();
        let x = Operator::from_real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let c = compress(&d12, &x).unwrap();
        // Basis columns are eigenvectors ordered by eigenvalue (2 then 1), so
        // compare invariants rather than raw coordinates.
        let expect = from_real_rows(&[&[0.0, 1.0 / 2f64.sqrt()], &[0.0, 0.0]]);
        let ambient = d12.basis() * &c.n * d12.basis().adjoint();
        assert!(close(&ambient, &expect, 1e-14));
        assert!(close(&(d12.basis() * &c.n), &c.w, 1e-14));

        let d10 = build_metric(real_diag(&[1.0, 0.0]), 1e-10).unwrap();
        let t = Operator::from_real(&[&[0.0, 0.0], &[0.0, 1.0]]);
        let c = compress(&d10, &t).unwrap();
        assert_eq!(c.n.shape(), (1, 1));
        assert!(c.n.norm() < 1e-14 && c.w.norm() < 1e-14);

        let bad = Operator::from_real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(compress(&d10, &bad), Err(Error::NotABounded { .. })));
    }

    #[test]
    fn lift_inverts_compress() {
        let m = build_metric(real_diag(&[3.0, 0.0, 1.0]), 1e-10).unwrap();
        let n = CMat::from_fn(2, 2, |i, j| c64(i as f64 - 0.5, j as f64 + 0.25));
        let r = CMat::from_fn(3, 3, |i, j| c64((i * j) as f64, 1.0));
        let t = m.lift(&n, Some(&r));
        assert!(m.a_bounded_residual(&t).unwrap() < 1e-14);
        assert!(m.in_ba_residual(&t).unwrap() < 1e-14);
        assert!(close(&compress(&m, &t).unwrap().n, &n, 1e-13));
    }

    #[test]
    fn witness_is_a_unit() {
        let m = build_metric(real_diag(&[4.0, 0.0]), 1e-10).unwrap();
        let c = CVec::from_vec(vec![c64(0.0, 1.0)]);
        let x = m.witness(&c);
        assert!((semi_norm_vec(&m, &x).unwrap() - 1.0).abs() < 1e-14);
        assert!((m.coords(&x) - c).norm() < 1e-14);
    }
}
