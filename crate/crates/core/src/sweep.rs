//! One-dimensional maximization: uniform grid, then golden-section
//! refinement around the best local maxima.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy)]
pub struct SweepMax {
    pub arg: f64,
    pub value: f64,
    pub evals: usize,
}

/// Golden-section search for a maximum of `f` on `[a, b]`, stopping once the
/// bracket is narrower than `width`.
pub fn golden_max(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, width: f64) -> SweepMax {
    let mut evals = 2;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while (b - a).abs() > width {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        }
        evals += 1;
    }
    if f1 >= f2 {
        SweepMax { arg: x1, value: f1, evals }
    } else {
        SweepMax { arg: x2, value: f2, evals }
    }
}

/// Maximizes `f` over `[lo, hi)` (periodic) or `[lo, hi]`.
///
/// `grid` points are evaluated, the `refine` best local maxima are polished
/// by golden section down to bracket `width`, and the best value seen is
/// returned. Refinement can only raise the grid value.
pub fn maximize(f: impl Fn(f64) -> f64, lo: f64, hi: f64, grid: usize, width: f64, refine: usize, periodic: bool) -> SweepMax {
    assert!(grid >= 3);
    let pts = if periodic { grid } else { grid + 1 };
    let h = (hi - lo) / grid as f64;
    let vals: Vec<f64> = (0..pts).map(|k| f(lo + k as f64 * h)).collect();
    let mut evals = pts;

    let at = |k: isize| -> f64 {
        if periodic {
            vals[k.rem_euclid(pts as isize) as usize]
        } else if k < 0 || k >= pts as isize {
            f64::NEG_INFINITY
        } else {
            vals[k as usize]
        }
    };
    let mut peaks: Vec<usize> = (0..pts)
        .filter(|&k| {
            let k = k as isize;
            at(k) >= at(k - 1) && at(k) >= at(k + 1)
        })
        .collect();
    peaks.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]).then(a.cmp(&b)));
    peaks.truncate(refine.max(1));

    let (mut best_arg, mut best) = (lo, f64::NEG_INFINITY);
    for (k, &v) in vals.iter().enumerate() {
        if v > best {
            best = v;
            best_arg = lo + k as f64 * h;
        }
    }
    for &k in &peaks {
        let centre = lo + k as f64 * h;
        let (mut a, mut b) = (centre - h, centre + h);
        if !periodic {
            a = a.max(lo);
            b = b.min(hi);
        }
        let r = golden_max(&f, a, b, width);
        evals += r.evals;
        if r.value > best {
            best = r.value;
            best_arg = r.arg;
        }
    }
    SweepMax { arg: best_arg, value: best, evals }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn finds_smooth_periodic_max() {
        let r = maximize(|t| (t - 1.0).cos(), 0.0, 2.0 * PI, 50, 1e-12, 2, true);
        assert!((r.arg - 1.0).abs() < 1e-6);
        assert!((r.value - 1.0).abs() < 1e-14);
    }

    #[test]
    fn wraps_across_period_end() {
        let r = maximize(|t| (t + 0.01).cos(), 0.0, 2.0 * PI, 40, 1e-12, 2, true);
        assert!((r.value - 1.0).abs() < 1e-14);
    }

    #[test]
    fn respects_closed_interval_endpoints() {
        let r = maximize(|t| t, 0.0, 1.0, 10, 1e-12, 1, false);
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn golden_on_parabola() {
        let r = golden_max(&|x: f64| -(x - 0.3) * (x - 0.3), 0.0, 1.0, 1e-12);
        assert!((r.arg - 0.3).abs() < 1e-9);
    }
}
