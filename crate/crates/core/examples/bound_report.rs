//! Every single-operator bound on dw for a random operator with a singular
//! metric, as a verification report in text and CSV.

use semidw::bounds::{verify_all_with, write_csv, VerifyOptions};
use semidw::{gen, rng};

fn main() -> semidw::Result<()> {
    let mut r = rng::stream(2024, 0);
    let m = gen::random_metric(&mut r, 4, 3);
    let t = gen::random_bounded(&mut r, &m);

    let rep = verify_all_with(&m, &t, &VerifyOptions { samples: 100_000, ..Default::default() })?;
    println!("dw: multistart {:.10}, oracle {:?}", rep.dw_multistart, rep.dw_oracle);
    for rec in &rep.records {
        let value = rec.value.map_or("-".into(), |v| format!("{v:.6}"));
        println!("{:<28} {:?}  {value:>10}  gap {:>10.3e}", rec.name, rec.kind, rec.gap.unwrap_or(f64::NAN));
    }
    for d in &rep.diagnostics {
        println!("{:<20} applicable {} consistent {}", d.name, d.applicable, d.consistent);
    }
    println!("pass: {}\n", rep.pass);

    write_csv(&[rep], std::io::stdout().lock())
}
