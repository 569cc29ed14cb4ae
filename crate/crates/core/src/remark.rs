//! The built-in regression instance `A = diag(1, 2)`, `X = [[0,1],[0,0]]`,
//! `Y = [[1,0],[0,0]]`: four upper bounds on `dw_A(X + Y)` compared with
//! their published values.

use serde::Serialize;

use crate::bounds::{BoundRecord, PairContext, ProductContext, Sign};
use crate::error::Result;
use crate::exact;
use crate::linalg::real_diag;
use crate::metric::{build_metric, Metric, DEFAULT_RANK_TOL};
use crate::operator::Operator;
use crate::radii::{oracle_extremum, Objective, DEFAULT_SEED};

/// Absolute tolerance against the published values.
pub const REMARK_TOL: f64 = 5e-4;

pub const EXPECTED_FEKI: f64 = 4.2994;
pub const EXPECTED_SUM: f64 = 2.621320;
pub const EXPECTED_COR_B: f64 = 3.240466;
pub const EXPECTED_COR_C: f64 = 3.26928;

pub fn instance() -> (Metric, Operator, Operator) {
    let m = build_metric(real_diag(&[1.0, 2.0]), DEFAULT_RANK_TOL).expect("diag(1, 2) is positive");
    let x = Operator::from_real(&[&[0.0, 1.0], &[0.0, 0.0]]);
    let y = Operator::from_real(&[&[1.0, 0.0], &[0.0, 0.0]]);
    (m, x, y)
}

#[derive(Debug, Clone, Serialize)]
pub struct RemarkRow {
    pub name: String,
    pub computed: f64,
    pub expected: f64,
    pub diff: f64,
    pub pass: bool,
    pub record: BoundRecord,
}

impl RemarkRow {
    fn new(name: &str, record: BoundRecord, expected: f64) -> Self {
        let computed = record.v();
        let diff = computed - expected;
        Self { name: name.into(), computed, expected, diff, pass: diff.abs() <= REMARK_TOL, record }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RemarkTable {
    /// In the order feki, sum, product bound b, product bound c.
    pub rows: Vec<RemarkRow>,
    /// Multistart value of `dw_A(X + Y)`.
    pub dw: f64,
    pub dw_oracle: f64,
    /// The same quantity as `dw` of `[[I, Z], [O, O]]` with `‖Z‖_A = 1/√2`.
    pub dw_closed_form: f64,
    /// `sum < product b < product c < feki`.
    pub ordering: bool,
    /// `dw ≤ every bound`.
    pub dw_below_bounds: bool,
    pub pass: bool,
}

pub fn remark_table(samples: usize, seed: u64) -> Result<RemarkTable> {
    let (m, x, y) = instance();
    let pair = PairContext::new(&m, &x, &y, seed)?;
    let prod = ProductContext::new(&m, &Operator::identity(2), &Operator::identity(2), &x, &y, Sign::Plus, seed)?;
    let rows = vec![
        RemarkRow::new("feki_sum_upper", pair.feki_sum_upper(), EXPECTED_FEKI),
        RemarkRow::new("sum_upper", pair.sum_upper().0, EXPECTED_SUM),
        RemarkRow::new("product_sum_upper_b", prod.upper_b()?, EXPECTED_COR_B),
        RemarkRow::new("product_sum_upper_c", prod.upper_c()?, EXPECTED_COR_C),
    ];
    let v = |i: usize| rows[i].computed;
    let ordering = v(1) < v(2) && v(2) < v(3) && v(3) < v(0);
    let dw = pair.dw_sum;
    let dw_oracle = oracle_extremum(&m, &(&x + &y), Objective::Dw, samples, seed)?.value;
    let z = Operator::from_real(&[&[0.0, 1.0], &[0.0, 0.0]]);
    let dw_closed_form = exact::dw_exact_ix(&m, &z)?.estimate.value;
    let top = dw.max(dw_oracle);
    let dw_below_bounds = rows.iter().all(|r| top <= r.computed + REMARK_TOL);
    let pass = rows.iter().all(|r| r.pass) && ordering && dw_below_bounds;
    Ok(RemarkTable { rows, dw, dw_oracle, dw_closed_form, ordering, dw_below_bounds, pass })
}

pub fn default_remark_table() -> Result<RemarkTable> {
    remark_table(crate::bounds::DEFAULT_SAMPLES, DEFAULT_SEED)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_matches_published_values() {
        let t = remark_table(20_000, DEFAULT_SEED).unwrap();
        assert!(t.pass, "{t:#?}");
        assert!((t.dw - t.dw_oracle).abs() < 1e-6);
        assert!((t.dw - t.dw_closed_form).abs() < 1e-6);
    }
}
