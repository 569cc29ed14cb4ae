//! Acceptance criteria. Runs without the libtest harness so every criterion
//! prints one line, and runs sequentially so the wall-clock budgets are
//! measured without contention.

use std::f64::consts::FRAC_1_SQRT_2;
use std::process::ExitCode;
use std::time::Instant;

use semidw::remark::{self, REMARK_TOL};
use semidw::suite::{self, SuiteConfig, SuiteOutcome};
use semidw::{gen, radii};

struct Line {
    name: &'static str,
    pass: bool,
    detail: String,
    secs: f64,
    budget: Option<f64>,
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64())
}

fn counts(o: &SuiteOutcome) -> String {
    let mut s = format!("{}/{} checks", o.passed, o.total);
    for f in o.failures.iter().take(3) {
        s.push_str(&format!("; #{} {:?}: {}", f.outcome.index, f.outcome.check, f.outcome.violations.join(", ")));
    }
    s
}

fn within(secs: f64, budget: Option<f64>) -> bool {
    budget.is_none_or(|b| secs < b)
}

fn remark_regression() -> Line {
    let (table, secs) = timed(remark::default_remark_table);
    let budget = Some(5.0);
    match table {
        Ok(t) => {
            let values_ok = t.rows.iter().all(|r| (r.computed - r.expected).abs() <= REMARK_TOL);
            let vals: Vec<String> = t.rows.iter().map(|r| format!("{}={:.6}", r.name, r.computed)).collect();
            Line {
                name: "remark regression",
                pass: values_ok && t.ordering && t.dw_below_bounds && within(secs, budget),
                detail: format!("{}; ordering={}; dw={:.6}", vals.join(" "), t.ordering, t.dw),
                secs,
                budget,
            }
        }
        Err(e) => Line { name: "remark regression", pass: false, detail: e.to_string(), secs, budget },
    }
}

fn exact_agreement(cfg: &SuiteConfig) -> Line {
    // Every branch of b, the 1/sqrt(2) boundary included, must be exercised.
    let mut covered = [[false; 4]; 2];
    for (z, row) in covered.iter_mut().enumerate() {
        for k in 0..cfg.exact_per_formula as u64 {
            let (m, x, _) = suite::exact_instance(cfg.seed, k, z == 1);
            let b = radii::op_seminorm(&m, &x).map(|e| e.value).unwrap_or(f64::NAN);
            let branch = if b < 1e-12 {
                0
            } else if (b - FRAC_1_SQRT_2).abs() < 1e-9 {
                2
            } else if b < FRAC_1_SQRT_2 {
                1
            } else {
                3
            };
            row[branch] = true;
            assert!((2..=3).contains(&m.dim()), "exact instances are 2x2 or 3x3");
        }
    }
    let all_branches = covered.iter().all(|r| r.iter().all(|&c| c));
    let (o, secs) = timed(|| suite::run_exact(cfg));
    let budget = Some(60.0);
    Line {
        name: "exact-formula agreement",
        pass: o.pass() && o.total == 2 * cfg.exact_per_formula && all_branches && within(secs, budget),
        detail: format!("{}; all b branches covered={all_branches}", counts(&o)),
        secs,
        budget,
    }
}

fn cardano(cfg: &SuiteConfig) -> Line {
    let (o, secs) = timed(|| suite::run_cardano(cfg));
    let budget = Some(10.0);
    Line {
        name: "cardano stationarity",
        pass: o.pass() && o.total == 100 && within(secs, budget),
        detail: counts(&o),
        secs,
        budget,
    }
}

fn inequality(cfg: &SuiteConfig) -> Line {
    let deficient = (0..cfg.inequality as u64)
        .filter(|&k| {
            let (m, _, _) = gen::suite_instance(cfg.seed, k, cfg.max_dim);
            m.rank() < m.dim()
        })
        .count();
    let (o, secs) = timed(|| suite::run_inequality(cfg));
    let budget = Some(120.0);
    Line {
        name: "inequality suite",
        pass: o.pass() && o.total == 200 && deficient > 0 && within(secs, budget),
        detail: format!("{}; rank-deficient metrics={deficient}", counts(&o)),
        secs,
        budget,
    }
}

fn equality(cfg: &SuiteConfig) -> Line {
    let (o, secs) = timed(|| suite::run_equality(cfg));
    Line {
        name: "equality characterizations",
        pass: o.pass() && o.total == 50 + 50 + 20,
        detail: counts(&o),
        secs,
        budget: None,
    }
}

fn invariance(cfg: &SuiteConfig) -> Line {
    let (o, secs) = timed(|| suite::run_invariance(cfg));
    Line { name: "invariance", pass: o.pass() && o.total == 100, detail: counts(&o), secs, budget: None }
}

fn oracle_consistency(cfg: &SuiteConfig) -> Line {
    let (o, secs) = timed(|| suite::run_oracle_consistency(cfg));
    Line {
        name: "oracle self-consistency",
        pass: o.pass() && o.total == cfg.inequality,
        detail: counts(&o),
        secs,
        budget: None,
    }
}

fn main() -> ExitCode {
    // Pinned acceptance settings.
    let cfg = SuiteConfig {
        seed: 42,
        samples: 200_000,
        max_dim: 4,
        inequality: 200,
        exact_per_formula: 50,
        cardano: 100,
        selfadjoint: 50,
        annihilated: 50,
        nilpotent: 20,
        invariance: 50,
    };
    let criteria: [&dyn Fn() -> Line; 7] = [
        &remark_regression,
        &|| exact_agreement(&cfg),
        &|| cardano(&cfg),
        &|| inequality(&cfg),
        &|| equality(&cfg),
        &|| invariance(&cfg),
        &|| oracle_consistency(&cfg),
    ];
    let mut failed = 0;
    for c in criteria {
        let l = c();
        let budget = l.budget.map(|b| format!(" budget {b:.0}s")).unwrap_or_default();
        println!("{} {}: {} [{:.2}s{budget}]", if l.pass { "PASS" } else { "FAIL" }, l.name, l.detail, l.secs);
        failed += usize::from(!l.pass);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
