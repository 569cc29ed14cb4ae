//! Closed forms for dw of [[I, X], [O, O]] and [[O, X], [O, O]] under
//! diag(A, A), the cubic behind the first one, and oracle cross-checks.

use semidw::exact::{self, cardano_theta0, phi, phi_derivative, phi_grid_max};
use semidw::linalg::real_diag;
use semidw::radii::{oracle_extremum, Objective};
use semidw::{build_metric, Operator};

fn main() -> semidw::Result<()> {
    for b in [0.25, 1.0, 3.0] {
        let d = cardano_theta0(b)?;
        let (_, grid) = phi_grid_max(b);
        println!(
            "b = {b}: theta0 {:.6} ({:?}), phi {:.8}, grid max {:.8}, phi' {:.1e}",
            d.theta0,
            d.path,
            phi(b, d.theta0),
            grid,
            phi_derivative(b, d.theta0, 1e-6)
        );
    }

    let m = build_metric(real_diag(&[1.0, 2.0]), 1e-10)?;
    for scale in [0.5, 1.0, 2.0] {
        let x = Operator::from_real(&[&[0.0, scale], &[0.0, 0.0]]);
        let ix = exact::dw_exact_ix(&m, &x)?;
        let zx = exact::dw_exact_0x(&m, &x)?;
        let ob = exact::ix_block(&m, &x)?;
        let zb = exact::zx_block(&m, &x)?;
        let o_ix = oracle_extremum(ob.metric2(), ob.assembled(), Objective::Dw, 50_000, 1)?.value;
        let o_zx = oracle_extremum(zb.metric2(), zb.assembled(), Objective::Dw, 50_000, 1)?.value;
        println!("||X||_A = {:.6}", ix.b);
        println!("  [[I,X],[O,O]]: {:.8} ({:?}), oracle {:.8}", ix.estimate.value, ix.branch, o_ix);
        println!("  [[O,X],[O,O]]: {:.8} ({:?}), oracle {:.8}", zx.estimate.value, zx.branch, o_zx);
    }
    Ok(())
}
