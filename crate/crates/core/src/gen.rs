//! Seeded random instances for property tests and the suite runner.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::io::MatrixJson;
use crate::linalg::{self, CMat};
use crate::metric::{build_metric, Metric, DEFAULT_RANK_TOL};
use crate::operator::Operator;
use crate::rng::{self, Rng};

/// Haar-like unitary from the QR factorization of a Gaussian matrix.
pub fn random_unitary(rng: &mut Rng, n: usize) -> CMat {
    let g = rng::complex_gaussian_mat(rng, n, n);
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    // Fix the column phases so the distribution does not depend on QR sign conventions.
    let d = CMat::from_fn(n, n, |i, j| if i == j { linalg::fix_unit_phase(r[(i, i)]) } else { linalg::ZERO });
    q * d
}

/// `A = U diag(λ) U*` with `rank` eigenvalues in `[0.5, 2]` and the rest zero.
pub fn random_metric(rng: &mut Rng, n: usize, rank: usize) -> Metric {
    assert!((1..=n).contains(&rank));
    let u = random_unitary(rng, n);
    let lam: Vec<f64> = (0..n).map(|k| if k < rank { rng.random_range(0.5..2.0) } else { 0.0 }).collect();
    let a = &u * linalg::real_diag(&lam) * u.adjoint();
    build_metric(a, DEFAULT_RANK_TOL).expect("generated metric is PSD")
}

/// Gaussian operator projected onto the A-bounded operators, scaled to
/// roughly unit size.
pub fn random_bounded(rng: &mut Rng, m: &Metric) -> Operator {
    let n = m.dim();
    let g = rng::complex_gaussian_mat(rng, n, n).unscale((n as f64).sqrt());
    m.project_bounded(&Operator::wrap(g))
}

/// A-selfadjoint operator: the lift of a random Hermitian compression.
pub fn random_selfadjoint(rng: &mut Rng, m: &Metric) -> Operator {
    let r = m.rank();
    let g = rng::complex_gaussian_mat(rng, r, r);
    let h = linalg::herm_part(&g).unscale((r as f64).sqrt());
    m.lift(&h, None)
}

/// Operator with `A·T = 0` (columns in `N(A)`). Zero when `A` is invertible.
pub fn random_annihilated(rng: &mut Rng, m: &Metric) -> Operator {
    let n = m.dim();
    let g = rng::complex_gaussian_mat(rng, n, n);
    Operator::wrap(m.null_proj() * g)
}

/// Operator whose compression `N` satisfies `N² = 0` and `‖N‖ = norm`.
/// Needs rank at least 2.
pub fn random_nilpotent(rng: &mut Rng, m: &Metric, norm: f64) -> Operator {
    let r = m.rank();
    assert!(r >= 2, "square-zero compressions need rank ≥ 2");
    let k = r / 2;
    let x = rng::complex_gaussian_mat(rng, k, r - k);
    let x = x.scale(norm / linalg::spectral_norm(&x));
    let mut core = CMat::zeros(r, r);
    core.view_mut((0, k), (k, r - k)).copy_from(&x);
    let q = random_unitary(rng, r);
    let n = &q * core * q.adjoint();
    let on_null = rng::complex_gaussian_mat(rng, m.dim(), m.dim());
    m.lift(&n, Some(&on_null))
}

/// A-unitary that is diagonal in the eigenbasis of `A`, with random phases.
pub fn diagonal_phase_unitary(rng: &mut Rng, m: &Metric) -> Operator {
    let n = m.dim();
    let phases: Vec<_> = (0..n).map(|_| linalg::cis(rng.random_range(0.0..std::f64::consts::TAU))).collect();
    let d = CMat::from_diagonal(&crate::linalg::CVec::from_vec(phases));
    Operator::wrap(m.eigvecs() * d * m.eigvecs().adjoint())
}

/// A-unitary acting as a random unitary on `range(A)` coordinates.
pub fn random_a_unitary(rng: &mut Rng, m: &Metric) -> Operator {
    let q = random_unitary(rng, m.rank());
    let on_null = m.null_proj();
    m.lift(&q, Some(&on_null))
}

/// A serializable `(A, T)` instance, enough to replay a suite failure.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Instance {
    pub seed: u64,
    pub index: u64,
    pub a: MatrixJson,
    pub t: MatrixJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t2: Option<MatrixJson>,
}

impl Instance {
    pub fn new(seed: u64, index: u64, m: &Metric, t: &Operator, t2: Option<&Operator>) -> Self {
        Self {
            seed,
            index,
            a: MatrixJson::from_matrix(m.a()),
            t: MatrixJson::from_matrix(t.matrix()),
            t2: t2.map(|o| MatrixJson::from_matrix(o.matrix())),
        }
    }

    pub fn load(&self) -> Result<(Metric, Operator, Option<Operator>)> {
        let m = build_metric(self.a.to_matrix()?, DEFAULT_RANK_TOL)?;
        let t = Operator::new(self.t.to_matrix()?)?;
        let t2 = self.t2.as_ref().map(|j| Operator::new(j.to_matrix()?)).transpose()?;
        Ok((m, t, t2))
    }
}

/// Draws dimension in `2..=max_dim` and rank in `1..=n`.
pub fn random_shape(rng: &mut Rng, max_dim: usize) -> (usize, usize) {
    let n = rng.random_range(2..=max_dim.max(2));
    let rank = rng.random_range(1..=n);
    (n, rank)
}

/// The `index`-th instance of the general suite: random metric (possibly
/// singular), A-bounded `T` and a second A-bounded operator for pair bounds.
pub fn suite_instance(seed: u64, index: u64, max_dim: usize) -> (Metric, Operator, Operator) {
    let mut rng = rng::stream(seed, index);
    let (n, rank) = random_shape(&mut rng, max_dim);
    let m = random_metric(&mut rng, n, rank);
    let t = random_bounded(&mut rng, &m);
    let y = random_bounded(&mut rng, &m);
    (m, t, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::compress;
    use crate::semiop::{in_ba, is_a_bounded, is_a_selfadjoint, is_a_unitary, DEFAULT_TOL};

    #[test]
    fn unitary_is_unitary() {
        let mut r = rng::stream(1, 0);
        let u = random_unitary(&mut r, 4);
        assert!((u.adjoint() * &u - CMat::identity(4, 4)).norm() < 1e-12);
    }

    #[test]
    fn generators_meet_their_contracts() {
        for k in 0..20 {
            let mut r = rng::stream(7, k);
            let (n, rank) = random_shape(&mut r, 4);
            let m = random_metric(&mut r, n, rank);
            assert_eq!(m.rank(), rank);
            let t = random_bounded(&mut r, &m);
            assert!(is_a_bounded(&m, &t, DEFAULT_TOL).unwrap());
            assert!(in_ba(&m, &t, DEFAULT_TOL).unwrap());
            let s = random_selfadjoint(&mut r, &m);
            assert!(is_a_selfadjoint(&m, &s, 1e-9).unwrap());
            let z = random_annihilated(&mut r, &m);
            assert!((m.a() * z.matrix()).norm() < 1e-10);
            assert!(is_a_bounded(&m, &z, DEFAULT_TOL).unwrap());
            for u in [diagonal_phase_unitary(&mut r, &m), random_a_unitary(&mut r, &m)] {
                assert!(is_a_unitary(&m, &u, 1e-9).unwrap());
            }
            if rank >= 2 {
                let t = random_nilpotent(&mut r, &m, 0.9);
                let c = compress(&m, &t).unwrap();
                assert!((&c.n * &c.n).norm() < 1e-10);
                assert!((linalg::spectral_norm(&c.n) - 0.9).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn instance_round_trips() {
        let (m, t, y) = suite_instance(42, 3, 4);
        let inst = Instance::new(42, 3, &m, &t, Some(&y));
        let text = serde_json::to_string(&inst).unwrap();
        let back: Instance = serde_json::from_str(&text).unwrap();
        let (m2, t2, y2) = back.load().unwrap();
        assert_eq!(m2.rank(), m.rank());
        assert_eq!(t2.matrix(), t.matrix());
        assert_eq!(y2.unwrap().matrix(), y.matrix());
    }

    #[test]
    fn suite_instances_are_deterministic() {
        let (_, t1, _) = suite_instance(5, 9, 4);
        let (_, t2, _) = suite_instance(5, 9, 4);
        assert_eq!(t1.matrix(), t2.matrix());
    }
}
