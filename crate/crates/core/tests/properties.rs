//! Structural invariants checked on seeded random instances.

use proptest::prelude::*;

use semidw::bounds::{self, BoundContext, ProductContext, Sign};
use semidw::linalg::{c64, fro, quad, CVec};
use semidw::metric::{build_metric, semi_inner, semi_norm_vec, Metric};
use semidw::radii::{self, Objective};
use semidw::rng::{self, Rng};
use semidw::{compress, exact, gen, semiop, Operator};

fn instance(seed: u64) -> (Rng, Metric, Operator) {
    let mut r = rng::stream(seed, 7);
    let (n, rank) = gen::random_shape(&mut r, 4);
    let m = gen::random_metric(&mut r, n, rank);
    let t = gen::random_bounded(&mut r, &m);
    (r, m, t)
}

fn slack(x: f64) -> f64 {
    1e-6 * (1.0 + x)
}

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(cfg(64))]

    #[test]
    fn metric_reconstruction(seed in any::<u64>()) {
        let (_, m, _) = instance(seed);
        let a = m.a();
        let scale = 1.0 + fro(a);
        prop_assert!(fro(&(m.sqrt_a() * m.sqrt_a() - a)) <= 1e-10 * scale);
        prop_assert!(fro(&(a * m.pinv_a() * a - a)) <= 1e-10 * scale);
    }

    #[test]
    fn compression_is_faithful(seed in any::<u64>()) {
        let (mut r, m, t) = instance(seed);
        let comp = compress(&m, &t).unwrap();
        for _ in 0..50 {
            let c = rng::complex_gaussian_vec(&mut r, m.rank()).normalize();
            let x = m.witness(&c);
            let tx = t.matrix() * &x;
            let form = semi_inner(&m, &tx, &x).unwrap();
            prop_assert!((quad(&comp.n, &c) - form).norm() <= 1e-9);
            prop_assert!(((&comp.w * &c).norm() - semi_norm_vec(&m, &tx).unwrap()).abs() <= 1e-9);
        }
    }

    #[test]
    fn rank_is_monotone_in_tolerance(seed in any::<u64>()) {
        let (_, m, _) = instance(seed);
        let mut last = usize::MAX;
        for tol in [1e-12, 1e-10, 1e-6, 0.3, 0.6, 0.9] {
            let rank = build_metric(m.a().clone(), tol).unwrap().rank();
            prop_assert!(rank <= last);
            last = rank;
        }
    }

    #[test]
    fn sharp_identities(seed in any::<u64>()) {
        let (mut r, m, t) = instance(seed);
        let s = gen::random_bounded(&mut r, &m);
        let a = m.a();
        let ts = semiop::sharp(&m, &t).unwrap();
        prop_assert!(fro(&(a * ts.matrix() - t.matrix().adjoint() * a)) <= 1e-10 * (1.0 + fro(a) * t.fro()));
        let tss = semiop::sharp(&m, &ts).unwrap();
        prop_assert!(fro(&(tss.matrix() - m.proj() * t.matrix() * m.proj())) <= 1e-9);
        let lhs = semiop::sharp(&m, &(&t * &s)).unwrap();
        let rhs = &semiop::sharp(&m, &s).unwrap() * &ts;
        prop_assert!(fro(&(a * (lhs.matrix() - rhs.matrix()))) <= 1e-9 * (1.0 + fro(a)));
    }

    #[test]
    fn numerical_radius_is_equivalent_to_seminorm(seed in any::<u64>()) {
        let (_, m, t) = instance(seed);
        let w = radii::numerical_radius(&m, &t).unwrap().value;
        let norm = radii::op_seminorm(&m, &t).unwrap().value;
        prop_assert!(0.5 * norm <= w + 1e-9);
        prop_assert!(w <= norm + 1e-9);
    }

    #[test]
    fn sharp_product_norm(seed in any::<u64>()) {
        let (_, m, t) = instance(seed);
        let tt = &semiop::sharp(&m, &t).unwrap() * &t;
        let norm = radii::op_seminorm(&m, &t).unwrap().value;
        let norm_tt = radii::op_seminorm(&m, &tt).unwrap().value;
        prop_assert!((norm_tt - norm * norm).abs() <= 1e-9 * (1.0 + norm * norm));
    }

    #[test]
    fn selfadjoint_is_normaloid(seed in any::<u64>()) {
        let (mut r, m, _) = instance(seed);
        let t = gen::random_selfadjoint(&mut r, &m);
        let w = radii::numerical_radius(&m, &t).unwrap().value;
        let norm = radii::op_seminorm(&m, &t).unwrap().value;
        prop_assert!((w - norm).abs() <= 1e-8 * (1.0 + norm));
    }

    #[test]
    fn annihilated_operator_has_zero_radii(seed in any::<u64>()) {
        let (mut r, m, _) = instance(seed);
        let t = gen::random_annihilated(&mut r, &m);
        prop_assert!(radii::dw_radius(&m, &t).unwrap().value <= 1e-10);
        prop_assert!(radii::numerical_radius(&m, &t).unwrap().value <= 1e-10);
        let d = bounds::zero_equality_check(&m, &t).unwrap();
        prop_assert!(d.consistent);
    }

    #[test]
    fn exact_zero_block_is_monotone(b1 in 0.0..5.0f64, b2 in 0.0..5.0f64) {
        let (lo, hi) = if b1 <= b2 { (b1, b2) } else { (b2, b1) };
        let (vlo, vhi) = (exact::dw_0x_value(lo), exact::dw_0x_value(hi));
        prop_assert!(vlo <= vhi + 1e-12);
        // The block [[0, X], [0, 0]] has w = b/2 and seminorm b.
        prop_assert!(vhi + 1e-12 >= (0.5 * hi).max(hi * hi));
        prop_assert!((exact::dw_0x_value(hi + 1e-7) - vhi).abs() <= 1e-5);
    }
}

proptest! {
    #![proptest_config(cfg(24))]

    #[test]
    fn bounds_sandwich_dw(seed in any::<u64>()) {
        let (_, m, t) = instance(seed);
        let ctx = BoundContext::with_seed(&m, &t, seed).unwrap();
        let (lo, hi) = ctx.sandwich();
        prop_assert!(lo.v() <= ctx.dw + slack(ctx.dw));
        prop_assert!(hi.v() + slack(ctx.dw) >= ctx.dw);
        for rec in ctx.catalog() {
            prop_assert!(rec.satisfied, "{rec:?}");
        }
    }

    #[test]
    fn lambda_zero_complex_bound_is_sandwich_upper(seed in any::<u64>()) {
        let (_, m, t) = instance(seed);
        let ctx = BoundContext::with_seed(&m, &t, seed).unwrap();
        let (_, zero) = ctx.upper_lambda_complex(&[c64(0.0, 0.0)]);
        prop_assert!((zero.v() - ctx.sandwich().1.v()).abs() <= 1e-9);
    }

    #[test]
    fn product_bounds_are_members_of_the_family(seed in any::<u64>()) {
        let (mut r, m, x) = instance(seed);
        let (p, q, y) = (gen::random_bounded(&mut r, &m), gen::random_bounded(&mut r, &m), gen::random_bounded(&mut r, &m));
        let sign = if seed % 2 == 0 { Sign::Plus } else { Sign::Minus };
        let ctx = ProductContext::new(&m, &p, &q, &x, &y, sign, seed).unwrap();
        for rec in [ctx.upper_b(), ctx.upper_c()].into_iter().flatten() {
            if let Some(v) = rec.value {
                prop_assert!((ctx.bound_at(rec.params["t"]) - v).abs() <= 1e-9 * (1.0 + v));
                prop_assert!(v + slack(ctx.dw) >= ctx.dw);
            }
        }
    }

    #[test]
    fn dw_is_a_unitary_invariant(seed in any::<u64>()) {
        let (mut r, m, t) = instance(seed);
        let u = gen::random_a_unitary(&mut r, &m);
        let conj = &(&semiop::sharp(&m, &u).unwrap() * &t) * &u;
        let d0 = radii::dw_radius(&m, &t).unwrap().value;
        let d1 = radii::dw_radius(&m, &conj).unwrap().value;
        prop_assert!((d0 - d1).abs() <= slack(d0));
    }

    #[test]
    fn block_swap_and_phase_invariance(seed in any::<u64>(), theta in 0.0..std::f64::consts::TAU) {
        let (mut r, m, x) = instance(seed);
        let y = gen::random_bounded(&mut r, &m);
        let z = Operator::zeros(m.dim());
        let dw_block = |t12: &Operator, t21: &Operator| {
            let b = semiop::block2(&m, &z, t12, t21, &z).unwrap();
            radii::dw_radius(b.metric2(), b.assembled()).unwrap().value
        };
        let base = dw_block(&x, &y);
        prop_assert!((dw_block(&y, &x) - base).abs() <= slack(base));
        let phase = c64(theta.cos(), theta.sin());
        prop_assert!((dw_block(&x.scale(phase), &y.scale(phase.conj())) - base).abs() <= slack(base));
    }

    #[test]
    fn estimates_carry_consistent_witnesses(seed in any::<u64>()) {
        let (_, m, t) = instance(seed);
        let comp = compress(&m, &t).unwrap();
        for (objective, est) in [
            (Objective::Dw, radii::dw_radius(&m, &t).unwrap()),
            (Objective::Numrad, radii::numerical_radius(&m, &t).unwrap()),
        ] {
            prop_assert!((est.maximizer.norm() - 1.0).abs() <= 1e-12);
            prop_assert!((semi_norm_vec(&m, &est.witness).unwrap() - 1.0).abs() <= 1e-9);
            let c: &CVec = &est.maximizer;
            let form = quad(&comp.n, c).norm();
            let at = match objective {
                Objective::Dw => (form * form + (&comp.w * c).norm().powi(4)).sqrt(),
                _ => form,
            };
            prop_assert!((at - est.value).abs() <= 1e-8 * (1.0 + est.value), "{objective:?}");
        }
    }
}

proptest! {
    #![proptest_config(cfg(100))]

    #[test]
    fn crawford_matches_oracle_on_3x3(seed in any::<u64>()) {
        let mut r = rng::stream(seed, 11);
        let m = gen::random_metric(&mut r, 3, 3);
        let t = gen::random_bounded(&mut r, &m);
        let fast = radii::crawford(&m, &t).unwrap().value;
        let slow = radii::oracle_extremum(&m, &t, Objective::Crawford, 20_000, seed).unwrap().value;
        prop_assert!((fast - slow).abs() <= 1e-5, "fast {fast} oracle {slow}");
    }
}
