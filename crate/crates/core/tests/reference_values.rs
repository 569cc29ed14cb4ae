//! Known values checked against brute-force maximization written here from
//! scratch, independent of the library's compression and optimizers.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use semidw::bounds::{self, BoundContext};
use semidw::exact;
use semidw::linalg::{c64, real_diag, C64};
use semidw::metric::{build_metric, DEFAULT_RANK_TOL};
use semidw::radii::{self, Objective};
use semidw::remark;
use semidw::Operator;

type M2 = [[C64; 2]; 2];

fn real2(rows: [[f64; 2]; 2]) -> M2 {
    rows.map(|r| r.map(|v| c64(v, 0.0)))
}

fn apply(t: &M2, x: [C64; 2]) -> [C64; 2] {
    [t[0][0] * x[0] + t[0][1] * x[1], t[1][0] * x[0] + t[1][1] * x[1]]
}

/// `⟨u, v⟩_A` for `A = diag(a0, a1)`.
fn inner(a: [f64; 2], u: [C64; 2], v: [C64; 2]) -> C64 {
    u[0] * v[0].conj() * a[0] + u[1] * v[1].conj() * a[1]
}

/// Grid maximum of `f` over A-unit vectors of a 2-dimensional space with
/// `A = diag(a0, a1)`, both positive, followed by a shrinking local search.
fn sphere_max(a: [f64; 2], f: impl Fn([C64; 2]) -> f64) -> f64 {
    let point = |t: f64, p: f64| [c64(t.cos() / a[0].sqrt(), 0.0), c64(p.cos(), p.sin()) * (t.sin() / a[1].sqrt())];
    let (nt, np) = (400, 800);
    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    for i in 0..=nt {
        let t = 0.5 * PI * i as f64 / nt as f64;
        for j in 0..np {
            let p = 2.0 * PI * j as f64 / np as f64;
            let v = f(point(t, p));
            if v > best.0 {
                best = (v, t, p);
            }
        }
    }
    let mut h = PI / nt as f64;
    while h > 1e-10 {
        let mut moved = false;
        for (dt, dp) in [(h, 0.0), (-h, 0.0), (0.0, h), (0.0, -h)] {
            let (t, p) = (best.1 + dt, best.2 + dp);
            let v = f(point(t, p));
            if v > best.0 {
                best = (v, t, p);
                moved = true;
            }
        }
        if !moved {
            h *= 0.5;
        }
    }
    best.0
}

fn brute_dw(a: [f64; 2], t: &M2) -> f64 {
    sphere_max(a, |x| {
        let tx = apply(t, x);
        let form = inner(a, tx, x).norm();
        let norm_sq = inner(a, tx, tx).re;
        (form * form + norm_sq * norm_sq).sqrt()
    })
}

fn brute_w(a: [f64; 2], t: &M2) -> f64 {
    sphere_max(a, |x| inner(a, apply(t, x), x).norm())
}

fn close(got: f64, want: f64, tol: f64) {
    assert!((got - want).abs() <= tol, "got {got}, want {want} (tol {tol})");
}

#[test]
fn nilpotent_under_diagonal_metric() {
    let m = build_metric(real_diag(&[1.0, 2.0]), DEFAULT_RANK_TOL).unwrap();
    let x = Operator::from_real(&[&[0.0, 1.0], &[0.0, 0.0]]);
    let tm = real2([[0.0, 1.0], [0.0, 0.0]]);
    let a = [1.0, 2.0];
    close(radii::op_seminorm(&m, &x).unwrap().value, FRAC_1_SQRT_2, 1e-12);
    close(radii::numerical_radius(&m, &x).unwrap().value, brute_w(a, &tm), 1e-7);
    close(radii::dw_radius(&m, &x).unwrap().value, brute_dw(a, &tm), 1e-7);
    close(radii::dw_radius(&m, &x).unwrap().value, 0.5, 1e-9);
}

#[test]
fn remark_sum_against_brute_force() {
    let (m, x, y) = remark::instance();
    let s = &x + &y;
    let want = brute_dw([1.0, 2.0], &real2([[1.0, 1.0], [0.0, 0.0]]));
    close(radii::dw_radius(&m, &s).unwrap().value, want, 1e-7);
    close(radii::oracle_extremum(&m, &s, Objective::Dw, 50_000, 1).unwrap().value, want, 1e-6);
}

#[test]
fn nilpotent_bound_values() {
    let m = build_metric(real_diag(&[1.0, 2.0]), DEFAULT_RANK_TOL).unwrap();
    let x = Operator::from_real(&[&[0.0, 1.0], &[0.0, 0.0]]);
    let ctx = BoundContext::new(&m, &x).unwrap();
    let (lo, hi) = ctx.sandwich();
    assert!(lo.v() <= 0.5 + 1e-9 && 0.5 <= hi.v() + 1e-9);
    // w = 1/(2√2) and ‖X‖ = 1/√2, so the upper end is √(1/8 + 1/4).
    close(hi.v(), 0.375f64.sqrt(), 1e-9);
    let (_, buzano_ii) = bounds::upper_buzano(&m, &x).unwrap();
    close(buzano_ii.v(), FRAC_1_SQRT_2, 1e-9);
    let (complex, _) = bounds::upper_lambda_complex(&m, &x, None).unwrap();
    assert!(complex.v() >= 0.5 - 1e-9 && complex.v() <= 0.612372 + 1e-6, "{}", complex.v());
}

#[test]
fn identity_is_tight_everywhere() {
    let m = build_metric(real_diag(&[1.0, 1.0]), DEFAULT_RANK_TOL).unwrap();
    let ctx = BoundContext::new(&m, &Operator::identity(2)).unwrap();
    close(ctx.dw, SQRT_2, 1e-12);
    let tight = ["sandwich_upper", "upper_buzano_i", "upper_buzano_ii", "upper_triple", "upper_lambda_theta", "upper_lambda_complex"];
    for rec in ctx.catalog().into_iter().filter(|r| tight.contains(&r.name.as_str())) {
        close(rec.v(), SQRT_2, 1e-9);
    }
}

#[test]
fn closed_forms_against_brute_force() {
    for b in [0.1, 0.4, FRAC_1_SQRT_2, 0.9, 1.5, 3.0] {
        let ix = brute_dw([1.0, 1.0], &real2([[1.0, b], [0.0, 0.0]]));
        close(exact::dw_ix_value(b).unwrap(), ix, 1e-7);
        let zx = brute_dw([1.0, 1.0], &real2([[0.0, b], [0.0, 0.0]]));
        close(exact::dw_0x_value(b), zx, 1e-7);
    }
}

#[test]
fn cardano_angle_maximizes_phi() {
    for b in [0.05, 0.5, 1.0, 2.0, 5.0] {
        let d = exact::cardano_theta0(b).unwrap();
        let grid = (0..=200_000).map(|k| exact::phi(b, PI * k as f64 / 200_000.0)).fold(f64::NEG_INFINITY, f64::max);
        let at = exact::phi(b, d.theta0);
        assert!((at - grid).abs() <= 1e-8 * (1.0 + grid), "b={b}: {at} vs {grid}");
    }
}
