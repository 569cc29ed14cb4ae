//! Command-line front end.
//!
//! Exit codes: 0 success, 1 internal failure, 2 unreadable input,
//! 3 failed precondition, 4 property or bound violation.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bounds::{self, BoundRecord, VerificationReport, VerifyOptions};
use crate::error::{Error, Result};
use crate::exact::{self, ExactDw};
use crate::io::read_matrix;
use crate::metric::{build_metric, Metric, MetricSummary, DEFAULT_RANK_TOL};
use crate::operator::Operator;
use crate::radii::{self, oracle_extremum, Objective, RadiusEstimate, ORACLE_MAX_RANK};
use crate::remark::{self, RemarkTable};
use crate::semiop::{membership, Membership, DEFAULT_TOL};
use crate::suite::{self, Replay, SuiteConfig, SuiteName, SuiteReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_VIOLATION: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "semidw", version, about = "Davis-Wielandt radius and related bounds on semi-Hilbertian spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Seminorm, minimum modulus, numerical radius, Crawford number and dw.
    Compute(InputArgs),
    /// Evaluate every bound on dw for one operator (and pair bounds with --operator2).
    Bounds(InputArgs),
    /// Like `bounds`, exiting with 4 when any bound is violated.
    Verify(InputArgs),
    /// Reproduce the four published bounds for the built-in diag(1, 2) instance.
    RemarkRepro(CommonArgs),
    /// Closed-form dw of [[I, X], [O, O]] and [[O, X], [O, O]] with X = --operator.
    Exact(InputArgs),
    /// Randomized property suites.
    Suite(SuiteArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[arg(long, default_value_t = radii::DEFAULT_SEED)]
    pub seed: u64,
    /// Oracle sample count; 0 disables the oracle.
    #[arg(long, default_value_t = bounds::DEFAULT_SAMPLES)]
    pub samples: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Residual tolerance for the A-boundedness and B_A preconditions.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Matrix JSON for the metric A.
    #[arg(long)]
    pub metric: PathBuf,
    /// Matrix JSON for the operator T.
    #[arg(long)]
    pub operator: PathBuf,
    /// Second operator for the pair and product bounds.
    #[arg(long)]
    pub operator2: Option<PathBuf>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SuiteArgs {
    /// Suites to run (repeatable); all of them by default.
    #[arg(long = "suite", value_parser = parse_suite)]
    pub suites: Vec<SuiteName>,
    /// Rerun a single check from a replay file written by a failing run.
    #[arg(long)]
    pub replay: Option<PathBuf>,
    /// Instance count for the inequality and oracle-consistency suites.
    #[arg(long, default_value_t = 200)]
    pub instances: usize,
    #[arg(long, default_value_t = 4)]
    pub max_dim: usize,
    /// Directory for replay files of failing checks.
    #[arg(long, default_value = "suite-failures")]
    pub failures_dir: PathBuf,
    #[command(flatten)]
    pub common: CommonArgs,
}

fn parse_suite(s: &str) -> std::result::Result<SuiteName, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::Io(_) | Error::EmptyMatrix | Error::NotSquare { .. } | Error::NonFinite | Error::DimensionMismatch { .. } => EXIT_PARSE,
        Error::NotHermitian { .. }
        | Error::NotPositiveSemidefinite { .. }
        | Error::ZeroMetric
        | Error::NotABounded { .. }
        | Error::NotInBA { .. }
        | Error::RankTooLarge { .. }
        | Error::ZeroT
        | Error::DegenerateNorm { .. }
        | Error::NonpositiveB(_) => EXIT_PRECONDITION,
    }
}

/// `%g`-style formatting with 6 significant digits.
pub fn sig6(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = || {
        let s = format!("{x:.5e}");
        let (mant, e) = s.split_once('e').expect("exponent form");
        let mant = if mant.contains('.') { mant.trim_end_matches('0').trim_end_matches('.') } else { mant };
        format!("{mant}e{e}")
    };
    let mut exp = x.abs().log10().floor() as i32;
    let fixed = |exp: i32| format!("{:.*}", (5 - exp).max(0) as usize, x);
    let mut s = fixed(exp);
    // Rounding can carry into a seventh digit, e.g. 0.9999999 or 999999.7.
    if s.trim_start_matches('-').replace('.', "").trim_start_matches('0').len() > 6 {
        exp += 1;
        s = fixed(exp);
    }
    if !(-4..6).contains(&exp) {
        return sci();
    }
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn opt6(x: Option<f64>) -> String {
    x.map_or_else(|| "-".into(), sig6)
}

/// Output of a command before formatting.
enum Output {
    Json(String),
    Text(String),
    Csv(Vec<u8>),
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn load_metric(path: &Path) -> Result<Metric> {
    build_metric(read_matrix(path)?, DEFAULT_RANK_TOL)
}

/// Loads an operator and enforces `T ∈ B_A` at the given tolerance. When the
/// residual is within `tol` but above the library default, the operator is
/// replaced by its projection onto the A-bounded operators.
fn load_operator(path: &Path, m: &Metric, tol: f64, need_ba: bool) -> Result<Operator> {
    let t = Operator::new(read_matrix(path)?)?;
    m.check_dim(t.dim())?;
    let bounded = m.a_bounded_residual(&t)?;
    if bounded > tol {
        return Err(Error::NotABounded { residual: bounded });
    }
    let in_ba = m.in_ba_residual(&t)?;
    if need_ba && in_ba > tol {
        return Err(Error::NotInBA { residual: in_ba });
    }
    if bounded > DEFAULT_TOL || in_ba > DEFAULT_TOL {
        return Ok(m.project_bounded(&t));
    }
    Ok(t)
}

#[derive(Serialize)]
struct ComputeReport {
    metric: MetricSummary,
    membership: Membership,
    seminorm: RadiusEstimate,
    min_modulus: RadiusEstimate,
    numerical_radius: RadiusEstimate,
    crawford: RadiusEstimate,
    dw: RadiusEstimate,
    #[serde(skip_serializing_if = "Option::is_none")]
    dw_oracle: Option<RadiusEstimate>,
}

fn estimate_rows(rows: &[(&str, &RadiusEstimate)]) -> Vec<(String, f64, String)> {
    rows.iter().map(|(n, e)| (n.to_string(), e.value, method_name(e.method))).collect()
}

fn method_name(m: radii::Method) -> String {
    serde_json::to_value(m).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
}

fn cmd_compute(a: &InputArgs) -> Result<Output> {
    let m = load_metric(&a.metric)?;
    let t = load_operator(&a.operator, &m, a.common.tol, false)?;
    let dw_oracle = (a.common.samples > 0 && m.rank() <= ORACLE_MAX_RANK)
        .then(|| oracle_extremum(&m, &t, Objective::Dw, a.common.samples, a.common.seed))
        .transpose()?;
    let rep = ComputeReport {
        metric: (&m).into(),
        membership: membership(&m, &t)?,
        seminorm: radii::op_seminorm(&m, &t)?,
        min_modulus: radii::min_modulus(&m, &t)?,
        numerical_radius: radii::numerical_radius(&m, &t)?,
        crawford: radii::crawford(&m, &t)?,
        dw: radii::dw_radius_with(&m, &t, &radii::DwOptions { seed: a.common.seed, ..Default::default() })?,
        dw_oracle,
    };
    let mut rows = vec![
        ("norm", &rep.seminorm),
        ("min_modulus", &rep.min_modulus),
        ("w", &rep.numerical_radius),
        ("crawford", &rep.crawford),
        ("dw", &rep.dw),
    ];
    if let Some(o) = &rep.dw_oracle {
        rows.push(("dw_oracle", o));
    }
    let rows = estimate_rows(&rows);
    Ok(match a.common.format {
        Format::Json => Output::Json(json(&rep)?),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["name", "value", "method"]).map_err(csv_err)?;
            for (n, v, meth) in &rows {
                w.write_record([n.as_str(), &v.to_string(), meth]).map_err(csv_err)?;
            }
            Output::Csv(w.into_inner().map_err(|e| Error::Io(e.into_error()))?)
        }
        Format::Text => {
            let mut s = format!("metric: dim {} rank {}\n", rep.metric.dim, rep.metric.rank);
            for (n, v, meth) in &rows {
                writeln!(s, "{n:<12} {:>12}  ({meth})", sig6(*v)).unwrap();
            }
            let x = &rep.dw.witness;
            let parts: Vec<String> = x.iter().map(|z| format!("{}{}{}i", sig6(z.re), if z.im < 0.0 { "-" } else { "+" }, sig6(z.im.abs()))).collect();
            writeln!(s, "dw witness   [{}]", parts.join(", ")).unwrap();
            Output::Text(s)
        }
    })
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

fn reports_text(reports: &[VerificationReport]) -> String {
    let mut s = String::new();
    for rep in reports {
        writeln!(s, "instance: dim {} rank {}  dw {}  (multistart {}, oracle {})", rep.instance.dim, rep.instance.rank, sig6(rep.reference_dw), sig6(rep.dw_multistart), opt6(rep.dw_oracle)).unwrap();
        writeln!(s, "{:<28} {:<6} {:>12} {:>12}  ok", "record", "kind", "value", "gap").unwrap();
        for r in &rep.records {
            writeln!(s, "{:<28} {:<6} {:>12} {:>12}  {}", r.name, kind_str(r), opt6(r.value), opt6(r.gap), status_str(r)).unwrap();
        }
        for d in &rep.diagnostics {
            let state = if !d.applicable { "n/a" } else if d.consistent { "consistent" } else { "INCONSISTENT" };
            writeln!(s, "diagnostic {:<17} {state}", d.name).unwrap();
        }
        for e in &rep.errors {
            writeln!(s, "error: {e}").unwrap();
        }
        writeln!(s, "pass: {}", rep.pass).unwrap();
    }
    s
}

fn kind_str(r: &BoundRecord) -> &'static str {
    match r.kind {
        bounds::Kind::Lower => "lower",
        bounds::Kind::Upper => "upper",
        bounds::Kind::Exact => "exact",
    }
}

fn status_str(r: &BoundRecord) -> &'static str {
    match r.status {
        bounds::Status::Satisfied => "yes",
        bounds::Status::Violated => "NO",
        bounds::Status::NotApplicable => "n/a",
    }
}

fn bound_reports(a: &InputArgs) -> Result<Vec<VerificationReport>> {
    let m = load_metric(&a.metric)?;
    let t = load_operator(&a.operator, &m, a.common.tol, false)?;
    let opts = VerifyOptions { seed: a.common.seed, samples: a.common.samples, ..VerifyOptions::default() };
    let mut reports = vec![bounds::verify_all_with(&m, &t, &opts)?];
    if let Some(p) = &a.operator2 {
        let t = load_operator(&a.operator, &m, a.common.tol, true)?;
        let y = load_operator(p, &m, a.common.tol, true)?;
        reports.push(bounds::verify_pair(&m, &t, &y, &opts)?);
    }
    Ok(reports)
}

fn render_reports(reports: &[VerificationReport], format: Format) -> Result<Output> {
    Ok(match format {
        Format::Json => Output::Json(json(&reports)?),
        Format::Csv => {
            let mut buf = Vec::new();
            bounds::write_csv(reports, &mut buf)?;
            Output::Csv(buf)
        }
        Format::Text => Output::Text(reports_text(reports)),
    })
}

fn remark_text(t: &RemarkTable) -> String {
    let mut s = String::from("A = diag(1, 2), X = [[0, 1], [0, 0]], Y = [[1, 0], [0, 0]]\n");
    writeln!(s, "{:<22} {:>10} {:>10} {:>11}  ok", "bound on dw(X + Y)", "computed", "expected", "diff").unwrap();
    for r in &t.rows {
        writeln!(s, "{:<22} {:>10} {:>10} {:>11}  {}", r.name, sig6(r.computed), sig6(r.expected), sig6(r.diff), if r.pass { "yes" } else { "NO" }).unwrap();
    }
    writeln!(s, "dw(X + Y)              {:>10}  (oracle {}, closed form {})", sig6(t.dw), sig6(t.dw_oracle), sig6(t.dw_closed_form)).unwrap();
    writeln!(s, "ordering sum < b < c < feki: {}", t.ordering).unwrap();
    writeln!(s, "pass: {}", t.pass).unwrap();
    s
}

fn cmd_remark(c: &CommonArgs) -> Result<(Output, bool)> {
    let t = remark::remark_table(c.samples, c.seed)?;
    let out = match c.format {
        Format::Json => Output::Json(json(&t)?),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["name", "computed", "expected", "diff", "pass"]).map_err(csv_err)?;
            for r in &t.rows {
                w.write_record([r.name.clone(), r.computed.to_string(), r.expected.to_string(), r.diff.to_string(), r.pass.to_string()]).map_err(csv_err)?;
            }
            Output::Csv(w.into_inner().map_err(|e| Error::Io(e.into_error()))?)
        }
        Format::Text => Output::Text(remark_text(&t)),
    };
    Ok((out, t.pass))
}

#[derive(Serialize)]
struct ExactReport {
    b: f64,
    ix: ExactDw,
    zero_x: ExactDw,
    #[serde(skip_serializing_if = "Option::is_none")]
    ix_oracle: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    zero_x_oracle: Option<f64>,
}

fn cmd_exact(a: &InputArgs) -> Result<Output> {
    let m = load_metric(&a.metric)?;
    let x = load_operator(&a.operator, &m, a.common.tol, true)?;
    let ix = exact::dw_exact_ix(&m, &x)?;
    let zero_x = exact::dw_exact_0x(&m, &x)?;
    let oracle = |b: crate::semiop::BlockOperator| -> Result<Option<f64>> {
        if a.common.samples == 0 || b.metric2().rank() > ORACLE_MAX_RANK {
            return Ok(None);
        }
        Ok(Some(oracle_extremum(b.metric2(), b.assembled(), Objective::Dw, a.common.samples, a.common.seed)?.value))
    };
    let rep = ExactReport {
        b: ix.b,
        ix_oracle: oracle(exact::ix_block(&m, &x)?)?,
        zero_x_oracle: oracle(exact::zx_block(&m, &x)?)?,
        ix,
        zero_x,
    };
    Ok(match a.common.format {
        Format::Json => Output::Json(json(&rep)?),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["block", "b", "branch", "value", "oracle", "warning"]).map_err(csv_err)?;
            for (name, e, o) in [("ix", &rep.ix, rep.ix_oracle), ("0x", &rep.zero_x, rep.zero_x_oracle)] {
                w.write_record([name.to_string(), e.b.to_string(), format!("{:?}", e.branch).to_lowercase(), e.estimate.value.to_string(), o.map_or(String::new(), |v| v.to_string()), e.warning.to_string()])
                    .map_err(csv_err)?;
            }
            Output::Csv(w.into_inner().map_err(|e| Error::Io(e.into_error()))?)
        }
        Format::Text => {
            let mut s = format!("b = ||X||_A = {}\n", sig6(rep.b));
            for (name, e, o) in [("[[I, X], [O, O]]", &rep.ix, rep.ix_oracle), ("[[O, X], [O, O]]", &rep.zero_x, rep.zero_x_oracle)] {
                writeln!(s, "{name}  dw {:>10}  branch {:<10} oracle {}", sig6(e.estimate.value), format!("{:?}", e.branch).to_lowercase(), opt6(o)).unwrap();
                if let Some(d) = &e.cardano {
                    writeln!(s, "  theta0 {}  p {}  q {}  r {}  s {}", sig6(d.theta0), sig6(d.p), sig6(d.q), sig6(d.r), sig6(d.s)).unwrap();
                }
                if e.warning {
                    writeln!(s, "  warning: formula and grid disagree; reporting the grid value").unwrap();
                }
            }
            Output::Text(s)
        }
    })
}

fn suite_text(rep: &SuiteReport) -> String {
    let mut s = String::new();
    for o in &rep.suites {
        writeln!(s, "{:<20} {:>4}/{:<4} {}  ({:.1} s)", o.name.as_str(), o.passed, o.total, if o.pass() { "pass" } else { "FAIL" }, o.elapsed_secs).unwrap();
        for f in &o.failures {
            writeln!(s, "  {:?} #{}: {}", f.outcome.check, f.outcome.index, f.outcome.violations.join("; ")).unwrap();
        }
    }
    writeln!(s, "pass: {}", rep.pass).unwrap();
    s
}

fn write_failures(rep: &SuiteReport, dir: &Path) -> Result<Vec<PathBuf>> {
    let mut paths = Vec::new();
    for o in &rep.suites {
        for f in &o.failures {
            std::fs::create_dir_all(dir)?;
            let p = dir.join(format!("{}-{:?}-{}.json", o.name.as_str(), f.outcome.check, f.outcome.index).to_lowercase());
            std::fs::write(&p, json(&f.replay)?)?;
            paths.push(p);
        }
    }
    Ok(paths)
}

fn cmd_suite(a: &SuiteArgs) -> Result<(Output, bool)> {
    if let Some(path) = &a.replay {
        let r: Replay = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        let outcome = suite::replay(&r)?;
        let out = match a.common.format {
            Format::Text => {
                let mut s = format!("{:?} #{}: {}\n", outcome.check, outcome.index, if outcome.passed { "pass" } else { "FAIL" });
                for (k, v) in &outcome.values {
                    writeln!(s, "  {k:<28} {}", sig6(*v)).unwrap();
                }
                for v in &outcome.violations {
                    writeln!(s, "  violation: {v}").unwrap();
                }
                Output::Text(s)
            }
            _ => Output::Json(json(&outcome)?),
        };
        return Ok((out, outcome.passed));
    }
    let cfg = SuiteConfig { seed: a.common.seed, samples: a.common.samples, max_dim: a.max_dim.max(2), inequality: a.instances, ..SuiteConfig::default() };
    let names = if a.suites.is_empty() { SuiteName::ALL.to_vec() } else { a.suites.clone() };
    let rep = suite::run_suites(&names, &cfg);
    let written = write_failures(&rep, &a.failures_dir)?;
    for p in &written {
        eprintln!("replay written to {}", p.display());
    }
    let out = match a.common.format {
        Format::Text => Output::Text(suite_text(&rep)),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["suite", "total", "passed", "pass"]).map_err(csv_err)?;
            for o in &rep.suites {
                w.write_record([o.name.as_str().to_string(), o.total.to_string(), o.passed.to_string(), o.pass().to_string()]).map_err(csv_err)?;
            }
            Output::Csv(w.into_inner().map_err(|e| Error::Io(e.into_error()))?)
        }
        Format::Json => Output::Json(json(&rep)?),
    };
    Ok((out, rep.pass))
}

fn emit(out: Output, path: Option<&Path>, stdout: &mut dyn Write) -> Result<()> {
    let bytes = match out {
        Output::Json(s) | Output::Text(s) => s.into_bytes(),
        Output::Csv(b) => b,
    };
    match path {
        Some(p) => std::fs::write(p, bytes)?,
        None => stdout.write_all(&bytes)?,
    }
    Ok(())
}

/// Runs a parsed command, writing the report to `stdout` (or `--out`) and
/// errors to `stderr`. Returns the exit code.
pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let (common, result): (&CommonArgs, Result<(Output, bool)>) = match &cli.command {
        Command::Compute(a) => (&a.common, cmd_compute(a).map(|o| (o, true))),
        Command::Bounds(a) => (&a.common, bound_reports(a).and_then(|r| render_reports(&r, a.common.format)).map(|o| (o, true))),
        Command::Verify(a) => (
            &a.common,
            bound_reports(a).and_then(|r| {
                let pass = r.iter().all(|x| x.pass);
                Ok((render_reports(&r, a.common.format)?, pass))
            }),
        ),
        Command::RemarkRepro(c) => (c, cmd_remark(c)),
        Command::Exact(a) => (&a.common, cmd_exact(a).map(|o| (o, true))),
        Command::Suite(a) => (&a.common, cmd_suite(a)),
    };
    match result {
        Ok((out, pass)) => {
            if let Err(e) = emit(out, common.out.as_deref(), stdout) {
                let _ = writeln!(stderr, "error: {e}");
                return EXIT_INTERNAL;
            }
            if pass {
                EXIT_OK
            } else {
                let _ = writeln!(stderr, "violation detected");
                EXIT_VIOLATION
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Parses `args` (program name first) and runs. Argument errors exit with 2.
pub fn run_from<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli, stdout, stderr),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let _ = if code == EXIT_OK { write!(stdout, "{}", e.render()) } else { write!(stderr, "{}", e.render()) };
            code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig6_formats_like_percent_g() {
        assert_eq!(sig6(std::f64::consts::FRAC_1_SQRT_2), "0.707107");
        assert_eq!(sig6(0.5), "0.5");
        assert_eq!(sig6(2.6213203435596424), "2.62132");
        assert_eq!(sig6(1414213.56), "1.41421e6");
        assert_eq!(sig6(1.234e-7), "1.234e-7");
        assert_eq!(sig6(0.0), "0");
        assert_eq!(sig6(-3.0), "-3");
        assert_eq!(sig6(999999.7), "1e6");
        assert_eq!(sig6(0.99999999999), "1");
        assert_eq!(sig6(5.12876e-5), "5.12876e-5");
        assert_eq!(sig6(0.000123), "0.000123");
    }

    #[test]
    fn error_codes() {
        assert_eq!(exit_code(&Error::Parse("x".into())), EXIT_PARSE);
        assert_eq!(exit_code(&Error::NotABounded { residual: 1.0 }), EXIT_PRECONDITION);
    }
}
