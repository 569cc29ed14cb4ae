//! Randomized property suites over seeded instances.
//!
//! Each suite is a list of independent checks. A failed check carries a
//! [`Replay`] holding everything needed to rerun it in isolation.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};
use std::time::Instant;

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, BoundContext, VerifyOptions};
use crate::error::{Error, Result};
use crate::exact;
use crate::gen::{self, Instance};
use crate::linalg::{self, CMat};
use crate::metric::{compress, semi_inner, Metric};
use crate::operator::Operator;
use crate::radii::{self, compressed, oracle_compressed, DwOptions, Objective};
use crate::remark;
use crate::rng;
use crate::semiop::{doubled_metric, sharp};

/// `|a − b| ≤ rel·max(|a|, |b|)`, with a floor for values that are both tiny.
pub fn rel_close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()) + 1e-12
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteName {
    Remark,
    Inequality,
    OracleConsistency,
    Exact,
    Cardano,
    Equality,
    Invariance,
}

impl SuiteName {
    pub const ALL: [SuiteName; 7] = [
        SuiteName::Remark,
        SuiteName::Inequality,
        SuiteName::OracleConsistency,
        SuiteName::Exact,
        SuiteName::Cardano,
        SuiteName::Equality,
        SuiteName::Invariance,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::Remark => "remark",
            SuiteName::Inequality => "inequality",
            SuiteName::OracleConsistency => "oracle-consistency",
            SuiteName::Exact => "exact",
            SuiteName::Cardano => "cardano",
            SuiteName::Equality => "equality",
            SuiteName::Invariance => "invariance",
        }
    }
}

impl std::str::FromStr for SuiteName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|n| n.as_str() == s).ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

/// Which per-instance check a replay refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Remark,
    Inequality,
    OracleConsistency,
    ExactIx,
    Exact0x,
    Cardano,
    Normaloid,
    Annihilated,
    Nilpotent,
    UnitaryInvariance,
    BlockInvariance,
}

/// Input needed to rerun one check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Replay {
    pub check: Check,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance: Option<Instance>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, f64>,
    pub seed: u64,
    pub samples: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub check: Check,
    pub index: u64,
    pub passed: bool,
    pub values: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub violations: Vec<String>,
}

impl CheckOutcome {
    fn new(check: Check, index: u64) -> Self {
        Self { check, index, passed: true, values: BTreeMap::new(), violations: Vec::new() }
    }

    fn value(&mut self, key: &str, v: f64) -> &mut Self {
        self.values.insert(key.into(), v);
        self
    }

    fn require(&mut self, ok: bool, what: impl Into<String>) -> &mut Self {
        if !ok {
            self.passed = false;
            self.violations.push(what.into());
        }
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    pub outcome: CheckOutcome,
    pub replay: Replay,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteOutcome {
    pub name: SuiteName,
    pub total: usize,
    pub passed: usize,
    pub failures: Vec<Failure>,
    /// Wall time; kept out of JSON so reports stay byte-identical.
    #[serde(skip)]
    pub elapsed_secs: f64,
}

impl SuiteOutcome {
    pub fn pass(&self) -> bool {
        self.passed == self.total
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub samples: usize,
    pub suites: Vec<SuiteOutcome>,
    pub pass: bool,
}

/// Instance counts and shared settings.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub seed: u64,
    pub samples: usize,
    pub max_dim: usize,
    pub inequality: usize,
    pub exact_per_formula: usize,
    pub cardano: usize,
    pub selfadjoint: usize,
    pub annihilated: usize,
    pub nilpotent: usize,
    pub invariance: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: radii::DEFAULT_SEED,
            samples: bounds::DEFAULT_SAMPLES,
            max_dim: 4,
            inequality: 200,
            exact_per_formula: 50,
            cardano: 100,
            selfadjoint: 50,
            annihilated: 50,
            nilpotent: 20,
            invariance: 50,
        }
    }
}

// Stream offsets keep the instance families independent of each other.
const EXACT_STREAM: u64 = 100_000;
const SELFADJOINT_STREAM: u64 = 200_000;
const ANNIHILATED_STREAM: u64 = 300_000;
const NILPOTENT_STREAM: u64 = 400_000;
const UNITARY_STREAM: u64 = 500_000;
const BLOCK_STREAM: u64 = 600_000;

fn replay_for(check: Check, cfg: &SuiteConfig, instance: Option<Instance>, params: BTreeMap<String, f64>) -> Replay {
    Replay { check, instance, params, seed: cfg.seed, samples: cfg.samples }
}

/// Runs `f` on every index (in parallel) and keeps the results in index order.
fn collect<F>(name: SuiteName, count: usize, f: F) -> SuiteOutcome
where
    F: Fn(u64) -> (CheckOutcome, Replay) + Sync,
{
    let start = Instant::now();
    let results: Vec<_> = (0..count as u64).into_par_iter().map(&f).collect();
    let passed = results.iter().filter(|(o, _)| o.passed).count();
    let failures = results.into_iter().filter(|(o, _)| !o.passed).map(|(outcome, replay)| Failure { outcome, replay }).collect();
    SuiteOutcome { name, total: count, passed, failures, elapsed_secs: start.elapsed().as_secs_f64() }
}

fn internal_error(check: Check, index: u64, e: &Error) -> CheckOutcome {
    let mut o = CheckOutcome::new(check, index);
    o.require(false, format!("error: {e}"));
    o
}

// ---------------------------------------------------------------- checks

pub fn check_remark(samples: usize, seed: u64) -> CheckOutcome {
    let mut o = CheckOutcome::new(Check::Remark, 0);
    match remark::remark_table(samples, seed) {
        Ok(t) => {
            for r in &t.rows {
                o.value(&r.name, r.computed);
                o.require(r.pass, format!("{} = {} differs from {}", r.name, r.computed, r.expected));
            }
            o.value("dw", t.dw);
            o.require(t.ordering, "ordering");
            o.require(t.dw_below_bounds, "dw exceeds a bound");
        }
        Err(e) => o = internal_error(Check::Remark, 0, &e),
    }
    o
}

/// Every single-operator and pair record holds, and the Crawford-type lower
/// bounds dominate the sandwich lower bound.
pub fn check_inequality(m: &Metric, t: &Operator, y: &Operator, samples: usize, seed: u64, index: u64) -> CheckOutcome {
    let mut o = CheckOutcome::new(Check::Inequality, index);
    let opts = VerifyOptions { seed, samples, ..VerifyOptions::default() };
    let rep = match bounds::verify_all_with(m, t, &opts) {
        Ok(r) => r,
        Err(e) => return internal_error(Check::Inequality, index, &e),
    };
    let tol = rep.tol_verify;
    for r in rep.violations() {
        o.require(false, format!("{} gap {:e}", r.name, r.gap.unwrap_or(f64::NAN)));
    }
    for e in &rep.errors {
        o.require(false, e.clone());
    }
    let get = |n: &str| rep.record(n).and_then(|r| r.value).unwrap_or(f64::NAN);
    let lower = get("sandwich_lower");
    let (l1a, l1b) = (get("lower_crawford_1a"), get("lower_crawford_1b"));
    o.require(l1a.max(l1b) >= lower - tol, "crawford lower bounds below sandwich lower bound");
    o.value("dw", rep.reference_dw).value("records", rep.records.len() as f64);
    let min_gap = rep.records.iter().filter_map(|r| r.gap).fold(f64::INFINITY, f64::min);
    o.value("min_gap", min_gap);

    match bounds::verify_pair(m, t, y, &opts) {
        Ok(pair) => {
            for r in pair.violations() {
                o.require(false, format!("{} gap {:e}", r.name, r.gap.unwrap_or(f64::NAN)));
            }
            o.value("pair_records", pair.records.len() as f64);
        }
        Err(e) => {
            o.require(false, format!("pair: {e}"));
        }
    }
    o
}

/// Dominance of the Crawford-type lower bounds over `w` and `‖T‖²`.
pub fn lower_crawford_dominance(ctx: &BoundContext) -> bool {
    let [a, b, ..] = ctx.lower_crawford();
    let tol = ctx.tol();
    a.v() >= ctx.w - tol && b.v() >= ctx.norm * ctx.norm - tol
}

/// Multistart `dw` against the oracle, and the defining identity of `T^♯`.
pub fn check_oracle_consistency(m: &Metric, ops: &[&Operator], samples: usize, seed: u64, index: u64) -> CheckOutcome {
    let mut o = CheckOutcome::new(Check::OracleConsistency, index);
    for (k, t) in ops.iter().enumerate() {
        let comp = match compress(m, t) {
            Ok(c) => c,
            Err(e) => return internal_error(Check::OracleConsistency, index, &e),
        };
        let ms = compressed::dw(&comp.n, &comp.w, &DwOptions { seed, ..DwOptions::default() }).value;
        let or = match oracle_compressed(&comp, Objective::Dw, samples, seed) {
            Ok(e) => e.value,
            Err(e) => return internal_error(Check::OracleConsistency, index, &e),
        };
        o.value(&format!("dw_multistart_{k}"), ms).value(&format!("dw_oracle_{k}"), or);
        o.require(rel_close(ms, or, 1e-4), format!("operator {k}: multistart {ms} vs oracle {or}"));
        o.require(ms >= or - 1e-6, format!("operator {k}: oracle exceeds multistart by {:e}", or - ms));
        match sharp(m, t) {
            Ok(s) => {
                let res = (m.a() * s.matrix() - t.matrix().adjoint() * m.a()).norm();
                let scale = 1e-10 * (1.0 + linalg::spectral_norm(m.a()) * linalg::spectral_norm(t.matrix()));
                o.value(&format!("sharp_residual_{k}"), res);
                o.require(res <= scale, format!("operator {k}: sharp residual {res:e}"));
            }
            Err(e) => {
                o.require(false, format!("operator {k}: {e}"));
            }
        }
    }
    o
}

pub fn exact_instance(seed: u64, index: u64, zero_x: bool) -> (Metric, Operator, f64) {
    let mut rng = rng::stream(seed, EXACT_STREAM + 2 * index + zero_x as u64);
    let (n, rank) = gen::random_shape(&mut rng, 3);
    let m = gen::random_metric(&mut rng, n, rank);
    let x = gen::random_bounded(&mut rng, &m);
    // Cycle through every branch, the boundary included.
    let target = match index % 4 {
        0 => 0.0,
        1 => rng.random_range(0.05..0.7),
        2 => FRAC_1_SQRT_2,
        _ => rng.random_range(0.72..2.5),
    };
    let b = radii::op_seminorm(&m, &x).expect("generated operator is A-bounded").value;
    let x = if target == 0.0 { Operator::zeros(n) } else { x.scale_real(target / b) };
    (m, x, target)
}

/// Closed form against the oracle on the assembled block.
pub fn check_exact(m: &Metric, x: &Operator, zero_x: bool, samples: usize, seed: u64, index: u64) -> CheckOutcome {
    let check = if zero_x { Check::Exact0x } else { Check::ExactIx };
    let mut o = CheckOutcome::new(check, index);
    let run = || -> Result<(exact::ExactDw, f64, f64)> {
        let (ex, block) = if zero_x {
            (exact::dw_exact_0x(m, x)?, exact::zx_block(m, x)?)
        } else {
            (exact::dw_exact_ix(m, x)?, exact::ix_block(m, x)?)
        };
        let comp = compress(block.metric2(), block.assembled())?;
        let oracle = oracle_compressed(&comp, Objective::Dw, samples, seed)?.value;
        // Objective at the closed-form witness.
        let c = block.metric2().coords(&ex.estimate.witness);
        let at_witness = compressed::dw_objective(&comp.n, &comp.gram(), &c).sqrt();
        Ok((ex, oracle, at_witness))
    };
    match run() {
        Ok((ex, oracle, at_witness)) => {
            let v = ex.estimate.value;
            o.value("b", ex.b).value("closed_form", v).value("oracle", oracle).value("at_witness", at_witness);
            o.require(rel_close(v, oracle, 1e-3), format!("closed form {v} vs oracle {oracle}"));
            o.require((at_witness - v).abs() <= 1e-8 * (1.0 + v), format!("witness gives {at_witness}, value {v}"));
            o.require(!ex.warning, "formula and grid disagree");
        }
        Err(e) => o = internal_error(check, index, &e),
    }
    o
}

/// Stationarity of `θ₀` and agreement with the dense grid maximum.
pub fn check_cardano(b: f64, index: u64) -> CheckOutcome {
    let mut o = CheckOutcome::new(Check::Cardano, index);
    match exact::cardano_theta0(b) {
        Ok(d) => {
            let f = exact::phi(b, d.theta0);
            let df = exact::phi_derivative(b, d.theta0, 1e-6);
            let (_, grid) = exact::phi_grid_max(b);
            o.value("b", b).value("theta0", d.theta0).value("phi", f).value("dphi", df).value("grid_max", grid);
            o.require((0.0..=FRAC_PI_2).contains(&d.theta0), "theta0 outside [0, pi/2]");
            o.require(df.abs() <= 1e-6 * (1.0 + f), format!("|phi'| = {:e}", df.abs()));
            o.require(rel_close(f, grid, 1e-6), format!("phi {f} vs grid {grid}"));
        }
        Err(e) => o = internal_error(Check::Cardano, index, &e),
    }
    o
}

pub fn cardano_b(index: u64, count: usize) -> f64 {
    5.0 * (index + 1) as f64 / count as f64
}

/// `dw = √(w² + ‖T‖⁴)` for A-selfadjoint `T`, plus the full normaloid diagnostic.
pub fn check_normaloid(m: &Metric, t: &Operator, seed: u64, index: u64) -> CheckOutcome {
    let mut o = CheckOutcome::new(Check::Normaloid, index);
    match BoundContext::with_seed(m, t, seed) {
        Ok(ctx) => {
            let upper = (ctx.w * ctx.w + ctx.norm.powi(4)).sqrt();
            o.value("dw", ctx.dw).value("sandwich_upper", upper).value("w", ctx.w).value("norm", ctx.norm);
            o.require(rel_close(ctx.dw, upper, 1e-6), format!("dw {} vs {}", ctx.dw, upper));
            o.require(rel_close(ctx.w, ctx.norm, 1e-6), "w differs from the seminorm");
            o.require(ctx.normaloid_equality_check().consistent, "normaloid diagnostic inconsistent");
        }
        Err(e) => o = internal_error(Check::Normaloid, index, &e),
    }
    o
}

/// `A·T = 0` forces `dw = w = 0`.
pub fn check_annihilated(m: &Metric, t: &Operator, index: u64) -> CheckOutcome {
    let mut o = CheckOutcome::new(Check::Annihilated, index);
    let run = || -> Result<(f64, f64, bool)> {
        let dw = radii::dw_radius(m, t)?.value;
        let w = radii::numerical_radius(m, t)?.value;
        let d = bounds::zero_equality_check(m, t)?;
        Ok((dw, w, d.consistent))
    };
    match run() {
        Ok((dw, w, consistent)) => {
            o.value("dw", dw).value("w", w).value("a_times_t", (m.a() * t.matrix()).norm());
            o.require(dw <= 1e-10 && w <= 1e-10, format!("dw {dw:e}, w {w:e}"));
            o.require(consistent, "zero diagnostic inconsistent");
        }
        Err(e) => o = internal_error(Check::Annihilated, index, &e),
    }
    o
}

/// When `dw = ‖T‖²`, seminorm maximizers annihilate the form.
pub fn check_nilpotent(m: &Metric, t: &Operator, index: u64) -> CheckOutcome {
    let mut o = CheckOutcome::new(Check::Nilpotent, index);
    let run = || -> Result<(bounds::Diagnostic, f64)> {
        let d = bounds::norm_sq_equality_check(m, t)?;
        let top = radii::op_seminorm(m, t)?;
        let x = top.witness;
        let form = semi_inner(m, &(t.matrix() * &x), &x)?.norm();
        Ok((d, form))
    };
    match run() {
        Ok((d, form)) => {
            o.value("dw", d.values["dw"]).value("norm_sq", d.values["norm_sq"]).value("witness_form", form);
            o.value("max_form_on_maximizers", d.values["max_form_on_maximizers"]);
            o.require(d.applicable, "dw differs from the squared seminorm");
            o.require(d.consistent, "a maximizer does not annihilate the form");
            o.require(form <= 1e-8, format!("|<Tx,x>_A| = {form:e}"));
        }
        Err(e) => o = internal_error(Check::Nilpotent, index, &e),
    }
    o
}

pub fn check_unitary_invariance(m: &Metric, t: &Operator, u: &Operator, seed: u64, index: u64) -> CheckOutcome {
    let mut o = CheckOutcome::new(Check::UnitaryInvariance, index);
    let opts = DwOptions { seed, ..DwOptions::default() };
    let run = || -> Result<(f64, f64)> {
        let conj = &(&sharp(m, u)? * t) * u;
        Ok((radii::dw_radius_with(m, t, &opts)?.value, radii::dw_radius_with(m, &conj, &opts)?.value))
    };
    match run() {
        Ok((a, b)) => {
            o.value("dw", a).value("dw_conjugated", b);
            o.require((a - b).abs() <= 1e-6 * (1.0 + a), format!("{a} vs {b}"));
        }
        Err(e) => o = internal_error(Check::UnitaryInvariance, index, &e),
    }
    o
}

/// `[[O, X], [e^{iθ}Y, O]]`, `[[O, X], [Y, O]]` and `[[O, Y], [X, O]]` share `dw`.
pub fn check_block_invariance(m: &Metric, x: &Operator, y: &Operator, theta: f64, seed: u64, index: u64) -> CheckOutcome {
    let mut o = CheckOutcome::new(Check::BlockInvariance, index);
    let opts = DwOptions { seed, ..DwOptions::default() };
    let run = || -> Result<[f64; 3]> {
        let m2 = doubled_metric(m)?;
        let z = CMat::zeros(x.dim(), x.dim());
        let dw = |a: &CMat, b: &CMat| -> Result<f64> {
            let op = Operator::new(linalg::assemble2(&z, a, b, &z))?;
            Ok(radii::dw_radius_with(&m2, &op, &opts)?.value)
        };
        let rotated = y.matrix() * linalg::cis(theta);
        Ok([dw(x.matrix(), y.matrix())?, dw(x.matrix(), &rotated)?, dw(y.matrix(), x.matrix())?])
    };
    match run() {
        Ok([base, phase, swap]) => {
            o.value("dw", base).value("dw_phase", phase).value("dw_swap", swap).value("theta", theta);
            let tol = 1e-6 * (1.0 + base);
            o.require((phase - base).abs() <= tol, format!("phase: {phase} vs {base}"));
            o.require((swap - base).abs() <= tol, format!("swap: {swap} vs {base}"));
        }
        Err(e) => o = internal_error(Check::BlockInvariance, index, &e),
    }
    o
}

// ---------------------------------------------------------------- suites

pub fn run_remark(cfg: &SuiteConfig) -> SuiteOutcome {
    collect(SuiteName::Remark, 1, |_| (check_remark(cfg.samples, cfg.seed), replay_for(Check::Remark, cfg, None, BTreeMap::new())))
}

pub fn run_inequality(cfg: &SuiteConfig) -> SuiteOutcome {
    collect(SuiteName::Inequality, cfg.inequality, |k| {
        let (m, t, y) = gen::suite_instance(cfg.seed, k, cfg.max_dim);
        let o = check_inequality(&m, &t, &y, cfg.samples, cfg.seed, k);
        (o, replay_for(Check::Inequality, cfg, Some(Instance::new(cfg.seed, k, &m, &t, Some(&y))), BTreeMap::new()))
    })
}

pub fn run_oracle_consistency(cfg: &SuiteConfig) -> SuiteOutcome {
    collect(SuiteName::OracleConsistency, cfg.inequality, |k| {
        let (m, t, y) = gen::suite_instance(cfg.seed, k, cfg.max_dim);
        let o = check_oracle_consistency(&m, &[&t, &y], cfg.samples, cfg.seed, k);
        (o, replay_for(Check::OracleConsistency, cfg, Some(Instance::new(cfg.seed, k, &m, &t, Some(&y))), BTreeMap::new()))
    })
}

pub fn run_exact(cfg: &SuiteConfig) -> SuiteOutcome {
    let per = cfg.exact_per_formula as u64;
    collect(SuiteName::Exact, 2 * cfg.exact_per_formula, |k| {
        let (zero_x, index) = (k >= per, k % per.max(1));
        let (m, x, target) = exact_instance(cfg.seed, index, zero_x);
        let o = check_exact(&m, &x, zero_x, cfg.samples, cfg.seed, index);
        let check = if zero_x { Check::Exact0x } else { Check::ExactIx };
        let params = BTreeMap::from([("target_b".to_string(), target)]);
        (o, replay_for(check, cfg, Some(Instance::new(cfg.seed, index, &m, &x, None)), params))
    })
}

pub fn run_cardano(cfg: &SuiteConfig) -> SuiteOutcome {
    collect(SuiteName::Cardano, cfg.cardano, |k| {
        let b = cardano_b(k, cfg.cardano);
        (check_cardano(b, k), replay_for(Check::Cardano, cfg, None, BTreeMap::from([("b".to_string(), b)])))
    })
}

fn equality_instance(seed: u64, family: Check, index: u64) -> (Metric, Operator) {
    match family {
        Check::Normaloid => {
            let mut rng = rng::stream(seed, SELFADJOINT_STREAM + index);
            let (n, rank) = gen::random_shape(&mut rng, 4);
            let m = gen::random_metric(&mut rng, n, rank);
            let t = gen::random_selfadjoint(&mut rng, &m);
            (m, t)
        }
        Check::Annihilated => {
            let mut rng = rng::stream(seed, ANNIHILATED_STREAM + index);
            let n = rng.random_range(2..=4);
            let rank = rng.random_range(1..n);
            let m = gen::random_metric(&mut rng, n, rank);
            let t = gen::random_annihilated(&mut rng, &m);
            (m, t)
        }
        Check::Nilpotent => {
            let mut rng = rng::stream(seed, NILPOTENT_STREAM + index);
            let n = rng.random_range(2..=4);
            let rank = rng.random_range(2..=n);
            let m = gen::random_metric(&mut rng, n, rank);
            let norm = rng.random_range(0.75..1.5);
            let t = gen::random_nilpotent(&mut rng, &m, norm);
            (m, t)
        }
        _ => unreachable!("not an equality family"),
    }
}

pub fn run_equality(cfg: &SuiteConfig) -> SuiteOutcome {
    let (a, b, c) = (cfg.selfadjoint as u64, cfg.annihilated as u64, cfg.nilpotent as u64);
    collect(SuiteName::Equality, (a + b + c) as usize, |k| {
        let (family, index) = if k < a {
            (Check::Normaloid, k)
        } else if k < a + b {
            (Check::Annihilated, k - a)
        } else {
            (Check::Nilpotent, k - a - b)
        };
        let (m, t) = equality_instance(cfg.seed, family, index);
        let o = match family {
            Check::Normaloid => check_normaloid(&m, &t, cfg.seed, index),
            Check::Annihilated => check_annihilated(&m, &t, index),
            _ => check_nilpotent(&m, &t, index),
        };
        (o, replay_for(family, cfg, Some(Instance::new(cfg.seed, index, &m, &t, None)), BTreeMap::new()))
    })
}

pub fn run_invariance(cfg: &SuiteConfig) -> SuiteOutcome {
    let n = cfg.invariance as u64;
    collect(SuiteName::Invariance, 2 * cfg.invariance, |k| {
        if k < n {
            let mut rng = rng::stream(cfg.seed, UNITARY_STREAM + k);
            let (d, rank) = gen::random_shape(&mut rng, cfg.max_dim);
            let m = gen::random_metric(&mut rng, d, rank);
            let t = gen::random_bounded(&mut rng, &m);
            let u = gen::diagonal_phase_unitary(&mut rng, &m);
            let o = check_unitary_invariance(&m, &t, &u, cfg.seed, k);
            (o, replay_for(Check::UnitaryInvariance, cfg, Some(Instance::new(cfg.seed, k, &m, &t, Some(&u))), BTreeMap::new()))
        } else {
            let index = k - n;
            let mut rng = rng::stream(cfg.seed, BLOCK_STREAM + index);
            let (d, rank) = gen::random_shape(&mut rng, cfg.max_dim);
            let m = gen::random_metric(&mut rng, d, rank);
            let x = gen::random_bounded(&mut rng, &m);
            let y = gen::random_bounded(&mut rng, &m);
            let theta = rng.random_range(0.0..std::f64::consts::TAU);
            let o = check_block_invariance(&m, &x, &y, theta, cfg.seed, index);
            let params = BTreeMap::from([("theta".to_string(), theta)]);
            (o, replay_for(Check::BlockInvariance, cfg, Some(Instance::new(cfg.seed, index, &m, &x, Some(&y))), params))
        }
    })
}

pub fn run_suite(name: SuiteName, cfg: &SuiteConfig) -> SuiteOutcome {
    match name {
        SuiteName::Remark => run_remark(cfg),
        SuiteName::Inequality => run_inequality(cfg),
        SuiteName::OracleConsistency => run_oracle_consistency(cfg),
        SuiteName::Exact => run_exact(cfg),
        SuiteName::Cardano => run_cardano(cfg),
        SuiteName::Equality => run_equality(cfg),
        SuiteName::Invariance => run_invariance(cfg),
    }
}

pub fn run_suites(names: &[SuiteName], cfg: &SuiteConfig) -> SuiteReport {
    let suites: Vec<_> = names.iter().map(|&n| run_suite(n, cfg)).collect();
    let pass = suites.iter().all(SuiteOutcome::pass);
    SuiteReport { seed: cfg.seed, samples: cfg.samples, suites, pass }
}

/// Reruns the check a replay describes.
pub fn replay(r: &Replay) -> Result<CheckOutcome> {
    let load = || -> Result<(Metric, Operator, Option<Operator>, u64)> {
        let inst = r.instance.as_ref().ok_or_else(|| Error::Parse("replay needs an instance".into()))?;
        let (m, t, t2) = inst.load()?;
        Ok((m, t, t2, inst.index))
    };
    let second = |t2: Option<Operator>| t2.ok_or_else(|| Error::Parse("replay needs a second operator".into()));
    let param = |k: &str| r.params.get(k).copied().ok_or_else(|| Error::Parse(format!("replay needs parameter {k:?}")));
    Ok(match r.check {
        Check::Remark => check_remark(r.samples, r.seed),
        Check::Cardano => check_cardano(param("b")?, 0),
        Check::Inequality => {
            let (m, t, y, k) = load()?;
            check_inequality(&m, &t, &second(y)?, r.samples, r.seed, k)
        }
        Check::OracleConsistency => {
            let (m, t, y, k) = load()?;
            let y = second(y)?;
            check_oracle_consistency(&m, &[&t, &y], r.samples, r.seed, k)
        }
        Check::ExactIx | Check::Exact0x => {
            let (m, x, _, k) = load()?;
            check_exact(&m, &x, r.check == Check::Exact0x, r.samples, r.seed, k)
        }
        Check::Normaloid => {
            let (m, t, _, k) = load()?;
            check_normaloid(&m, &t, r.seed, k)
        }
        Check::Annihilated => {
            let (m, t, _, k) = load()?;
            check_annihilated(&m, &t, k)
        }
        Check::Nilpotent => {
            let (m, t, _, k) = load()?;
            check_nilpotent(&m, &t, k)
        }
        Check::UnitaryInvariance => {
            let (m, t, u, k) = load()?;
            check_unitary_invariance(&m, &t, &second(u)?, r.seed, k)
        }
        Check::BlockInvariance => {
            let (m, x, y, k) = load()?;
            check_block_invariance(&m, &x, &second(y)?, param("theta")?, r.seed, k)
        }
    })
}
