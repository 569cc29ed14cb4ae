//! A-adjoint calculus.
//!
//! `T^{♯_A} = A†T*A` exists as the reduced solution of `AX = T*A` exactly
//! when `range(T*A) ⊆ range(A)`. Membership tests are relative, so they do
//! not depend on the scale of `A` or `T`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, c64};
use crate::metric::{build_metric, Metric};
use crate::operator::Operator;

/// Default relative tolerance for membership in `B_A` / `B_{A^{1/2}}`.
pub const DEFAULT_TOL: f64 = 1e-9;

pub fn in_ba(m: &Metric, t: &Operator, tol: f64) -> Result<bool> {
    Ok(m.in_ba_residual(t)? <= tol)
}

pub fn is_a_bounded(m: &Metric, t: &Operator, tol: f64) -> Result<bool> {
    Ok(m.a_bounded_residual(t)? <= tol)
}

pub(crate) fn require_ba(m: &Metric, t: &Operator) -> Result<()> {
    let residual = m.in_ba_residual(t)?;
    if residual > DEFAULT_TOL {
        return Err(Error::NotInBA { residual });
    }
    Ok(())
}

pub(crate) fn require_bounded(m: &Metric, t: &Operator) -> Result<()> {
    let residual = m.a_bounded_residual(t)?;
    if residual > DEFAULT_TOL {
        return Err(Error::NotABounded { residual });
    }
    Ok(())
}

/// `A†T*A`. Errors instead of projecting when `T ∉ B_A`.
pub fn sharp(m: &Metric, t: &Operator) -> Result<Operator> {
    require_ba(m, t)?;
    Ok(sharp_unchecked(m, t))
}

pub(crate) fn sharp_unchecked(m: &Metric, t: &Operator) -> Operator {
    Operator::wrap(m.pinv_a() * t.matrix().adjoint() * m.a())
}

/// `(T + T^♯)/2`.
pub fn re_a(m: &Metric, t: &Operator) -> Result<Operator> {
    let s = sharp(m, t)?;
    Ok((t + &s).scale_real(0.5))
}

/// `(T − T^♯)/(2i)`.
pub fn im_a(m: &Metric, t: &Operator) -> Result<Operator> {
    let s = sharp(m, t)?;
    Ok((t - &s).scale(c64(0.0, -0.5)))
}

/// `|T|²_A = T^♯ T`.
pub fn abs_sq(m: &Metric, t: &Operator) -> Result<Operator> {
    Ok(&sharp(m, t)? * t)
}

/// `‖AT − T*A‖_F`.
pub fn selfadjoint_residual(m: &Metric, t: &Operator) -> Result<f64> {
    m.check_dim(t.dim())?;
    let at = m.a() * t.matrix();
    Ok((&at - at.adjoint()).norm())
}

/// `‖T T^♯ − T^♯ T‖_F`.
pub fn normal_residual(m: &Metric, t: &Operator) -> Result<f64> {
    let s = sharp(m, t)?;
    Ok(((t * &s) - (&s * t)).fro())
}

/// `max(‖U^♯U − P_A‖_F, ‖(U^♯)^♯U^♯ − P_A‖_F)`.
pub fn unitary_residual(m: &Metric, u: &Operator) -> Result<f64> {
    let s = sharp(m, u)?;
    let ss = sharp(m, &s)?;
    let r1 = ((&s * u).matrix() - m.proj()).norm();
    let r2 = ((&ss * &s).matrix() - m.proj()).norm();
    Ok(r1.max(r2))
}

pub fn is_a_selfadjoint(m: &Metric, t: &Operator, tol: f64) -> Result<bool> {
    Ok(selfadjoint_residual(m, t)? <= tol)
}

pub fn is_a_normal(m: &Metric, t: &Operator, tol: f64) -> Result<bool> {
    Ok(normal_residual(m, t)? <= tol)
}

pub fn is_a_unitary(m: &Metric, u: &Operator, tol: f64) -> Result<bool> {
    Ok(unitary_residual(m, u)? <= tol)
}

/// Residuals behind every predicate, for reports.
#[derive(Debug, Clone, Serialize)]
pub struct Membership {
    pub a_bounded_residual: f64,
    pub in_ba_residual: f64,
    pub selfadjoint_residual: f64,
    pub normal_residual: Option<f64>,
    pub unitary_residual: Option<f64>,
}

pub fn membership(m: &Metric, t: &Operator) -> Result<Membership> {
    let in_ba_residual = m.in_ba_residual(t)?;
    let ok = in_ba_residual <= DEFAULT_TOL;
    Ok(Membership {
        a_bounded_residual: m.a_bounded_residual(t)?,
        in_ba_residual,
        selfadjoint_residual: selfadjoint_residual(m, t)?,
        normal_residual: if ok { Some(normal_residual(m, t)?) } else { None },
        unitary_residual: if ok { Some(unitary_residual(m, t)?) } else { None },
    })
}

/// A 2×2 operator matrix on `H ⊕ H` with the metric `diag(A, A)`.
#[derive(Debug, Clone)]
pub struct BlockOperator {
    blocks: [Operator; 4],
    assembled: Operator,
    metric2: Metric,
}

impl BlockOperator {
    /// Blocks in row-major order `(T11, T12, T21, T22)`.
    pub fn blocks(&self) -> &[Operator; 4] {
        &self.blocks
    }

    pub fn block(&self, i: usize, j: usize) -> &Operator {
        &self.blocks[2 * i + j]
    }

    pub fn assembled(&self) -> &Operator {
        &self.assembled
    }

    pub fn metric2(&self) -> &Metric {
        &self.metric2
    }
}

/// `diag(A, A)` as a metric.
pub fn doubled_metric(m: &Metric) -> Result<Metric> {
    build_metric(linalg::block_diag(m.a(), m.a()), m.rank_tol())
}

pub fn block2(m: &Metric, t11: &Operator, t12: &Operator, t21: &Operator, t22: &Operator) -> Result<BlockOperator> {
    let metric2 = doubled_metric(m)?;
    block2_with(m, metric2, t11, t12, t21, t22)
}

fn block2_with(
    m: &Metric,
    metric2: Metric,
    t11: &Operator,
    t12: &Operator,
    t21: &Operator,
    t22: &Operator,
) -> Result<BlockOperator> {
    for t in [t11, t12, t21, t22] {
        require_ba(m, t)?;
    }
    let assembled = Operator::wrap(linalg::assemble2(t11.matrix(), t12.matrix(), t21.matrix(), t22.matrix()));
    Ok(BlockOperator { blocks: [t11.clone(), t12.clone(), t21.clone(), t22.clone()], assembled, metric2 })
}

/// Block A-adjoint: sharps every block and swaps the off-diagonal ones.
pub fn block_sharp(m: &Metric, b: &BlockOperator) -> Result<BlockOperator> {
    let [t11, t12, t21, t22] = &b.blocks;
    let s11 = sharp(m, t11)?;
    let s12 = sharp(m, t21)?;
    let s21 = sharp(m, t12)?;
    let s22 = sharp(m, t22)?;
    block2_with(m, b.metric2.clone(), &s11, &s12, &s21, &s22)
}

/// `‖block_sharp(b) − sharp(diag(A,A), assembled)‖_F`.
pub fn assembled_sharp_residual(b: &BlockOperator, m: &Metric) -> Result<f64> {
    let blockwise = block_sharp(m, b)?;
    let direct = sharp(&b.metric2, &b.assembled)?;
    Ok((blockwise.assembled.matrix() - direct.matrix()).norm())
}
