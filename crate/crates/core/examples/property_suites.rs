//! Runs reduced versions of every randomized suite and replays one check
//! from its serialized form.

use semidw::suite::{self, SuiteConfig, SuiteName};

fn main() {
    let cfg = SuiteConfig {
        samples: 20_000,
        inequality: 10,
        exact_per_formula: 8,
        cardano: 20,
        selfadjoint: 5,
        annihilated: 5,
        nilpotent: 5,
        invariance: 5,
        ..SuiteConfig::default()
    };
    let rep = suite::run_suites(&SuiteName::ALL, &cfg);
    for s in &rep.suites {
        println!("{:<20} {:>3}/{:<3} {:.2} s", s.name.as_str(), s.passed, s.total, s.elapsed_secs);
    }
    println!("all passed: {}", rep.pass);

    let (m, t, y) = semidw::gen::suite_instance(cfg.seed, 3, cfg.max_dim);
    let replay = suite::Replay {
        check: suite::Check::Inequality,
        instance: Some(semidw::gen::Instance::new(cfg.seed, 3, &m, &t, Some(&y))),
        params: Default::default(),
        seed: cfg.seed,
        samples: cfg.samples,
    };
    let text = serde_json::to_string(&replay).expect("serializable");
    let back: suite::Replay = serde_json::from_str(&text).expect("round trip");
    let outcome = suite::replay(&back).expect("replay runs");
    println!("replayed inequality check #3: passed {} ({} bytes of JSON)", outcome.passed, text.len());
}
