//! When the sandwich bounds are attained: A-normaloid operators, operators
//! annihilated by A, and square-zero operators with large seminorm.

use semidw::bounds::{norm_sq_equality_check, normaloid_equality_check, zero_equality_check};
use semidw::{gen, rng};

fn main() -> semidw::Result<()> {
    let mut r = rng::stream(9, 0);
    let m = gen::random_metric(&mut r, 4, 3);

    let s = gen::random_selfadjoint(&mut r, &m);
    let d = normaloid_equality_check(&m, &s)?;
    println!("A-selfadjoint: {:?}", d.conditions);

    let z = gen::random_annihilated(&mut r, &m);
    let d = zero_equality_check(&m, &z)?;
    println!("A T = 0:       {:?} dw - w = {:.1e}", d.conditions, d.values["dw_minus_w"]);

    let n = gen::random_nilpotent(&mut r, &m, 1.2);
    let d = norm_sq_equality_check(&m, &n)?;
    println!("square-zero:   {:?} max |<Tx,x>_A| on maximizers {:.1e}", d.conditions, d.values["max_form_on_maximizers"]);

    let t = gen::random_bounded(&mut r, &m);
    let d = normaloid_equality_check(&m, &t)?;
    println!("generic:       {:?}", d.conditions);
    Ok(())
}
