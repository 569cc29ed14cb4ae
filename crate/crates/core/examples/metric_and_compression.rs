//! Builds a singular metric, checks operator classes and shows how the
//! compression turns A-quantities into ordinary matrix computations.

use semidw::linalg::{c64, from_real_rows};
use semidw::metric::{build_metric, compress, semi_norm_vec, DEFAULT_RANK_TOL};
use semidw::semiop::{self, DEFAULT_TOL};
use semidw::Operator;

fn main() -> semidw::Result<()> {
    // A = diag(2, 1, 0): rank 2, so N(A) is the third axis.
    let m = build_metric(from_real_rows(&[&[2.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 0.0]]), DEFAULT_RANK_TOL)?;
    println!("dim {} rank {} eigenvalues {:?}", m.dim(), m.rank(), m.eigvals());

    let t = Operator::from_real(&[&[0.0, 1.0, 0.0], &[3.0, 0.0, 0.0], &[1.0, 2.0, 5.0]]);
    let ms = semiop::membership(&m, &t)?;
    println!("A-bounded residual {:.2e}, B_A residual {:.2e}", ms.a_bounded_residual, ms.in_ba_residual);
    println!("A-bounded: {}, in B_A: {}", semiop::is_a_bounded(&m, &t, DEFAULT_TOL)?, semiop::in_ba(&m, &t, DEFAULT_TOL)?);

    // The A-adjoint satisfies A·T^# = T*·A.
    let s = semiop::sharp(&m, &t)?;
    let res = (m.a() * s.matrix() - t.matrix().adjoint() * m.a()).norm();
    println!("||A T^# - T* A||_F = {res:.2e}");

    // Re_A(T) is A-selfadjoint.
    let re = semiop::re_a(&m, &t)?;
    println!("Re_A(T) selfadjoint residual {:.2e}", semiop::selfadjoint_residual(&m, &re)?);

    // Everything below lives on the 2x2 compression N.
    let c = compress(&m, &t)?;
    println!("compressed N =\n{:.4}", c.n);

    // A unit coordinate vector maps to an A-unit ambient witness.
    let coords = semidw::linalg::normalize(&semidw::linalg::CVec::from_vec(vec![c64(1.0, 0.0), c64(0.0, 1.0)]));
    let x = m.witness(&coords);
    println!("witness {:.4}  ||x||_A = {:.12}", x.transpose(), semi_norm_vec(&m, &x)?);
    Ok(())
}
