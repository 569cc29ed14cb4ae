//! Bounds for sums, off-diagonal blocks and the product family
//! `PXQ^# ± QYP^#` with a free parameter t.

use semidw::bounds::{verify_pair, PairContext, ProductContext, Sign, VerifyOptions};
use semidw::{gen, rng, Operator};

fn main() -> semidw::Result<()> {
    let mut r = rng::stream(5, 0);
    let m = gen::random_metric(&mut r, 3, 3);
    let x = gen::random_bounded(&mut r, &m);
    let y = gen::random_bounded(&mut r, &m);
    let p = gen::random_a_unitary(&mut r, &m);
    let q = Operator::identity(3);

    let pair = PairContext::new(&m, &x, &y, 42)?;
    let (sum, _) = pair.sum_upper();
    println!("dw(X + Y) = {:.6}", pair.dw_sum);
    println!("sum bound {:.6}, coarser sum bound {:.6}", sum.v(), pair.feki_sum_upper().v());
    let off = pair.offdiag_upper();
    println!("off-diagonal block: dw {:.6} <= {:.6}", off.reference_dw, off.v());

    let prod = ProductContext::new(&m, &p, &q, &x, &y, Sign::Minus, 42)?;
    println!("dw(PXQ^# - QYP^#) = {:.6}", prod.dw);
    for t in [0.5, 0.8, 1.0, 1.25, 2.0] {
        println!("  t = {t:<5} bound {:.6}", prod.upper(t)?.v());
    }
    println!("  at the two prescribed t: {:.6}, {:.6}", prod.upper_b()?.v(), prod.upper_c()?.v());

    let rep = verify_pair(&m, &x, &y, &VerifyOptions::default())?;
    println!("all pair records hold: {}", rep.pass);
    Ok(())
}
