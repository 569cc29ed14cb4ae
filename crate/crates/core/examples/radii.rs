//! The five scalar functionals of an operator on a semi-Hilbertian space,
//! each cross-checked against the sampling oracle.

use semidw::linalg::real_diag;
use semidw::radii::{self, oracle_extremum, Objective};
use semidw::{build_metric, Operator};

fn main() -> semidw::Result<()> {
    let m = build_metric(real_diag(&[1.0, 2.0]), 1e-10)?;
    let x = Operator::from_real(&[&[0.0, 1.0], &[0.0, 0.0]]);

    let norm = radii::op_seminorm(&m, &x)?;
    let mm = radii::min_modulus(&m, &x)?;
    let w = radii::numerical_radius(&m, &x)?;
    let c = radii::crawford(&m, &x)?;
    let dw = radii::dw_radius(&m, &x)?;
    for (name, e) in [("||X||_A", &norm), ("m_A(X)", &mm), ("w_A(X)", &w), ("c_A(X)", &c), ("dw_A(X)", &dw)] {
        println!("{name:<8} {:.6}  method {:?}, witness {:.4}", e.value, e.method, e.witness.transpose());
    }

    let o_dw = oracle_extremum(&m, &x, Objective::Dw, 50_000, 7)?;
    let o_w = oracle_extremum(&m, &x, Objective::Numrad, 50_000, 7)?;
    let o_c = oracle_extremum(&m, &x, Objective::Crawford, 50_000, 7)?;
    println!("oracle: dw {:.8}, w {:.8}, c {:.8}", o_dw.value, o_w.value, o_c.value);

    // Estimates serialize with value, method, iterations, residual and vectors.
    println!("{}", serde_json::to_string_pretty(&dw).expect("serializable"));
    Ok(())
}
