//! The scalar functionals `‖T‖_A`, `m_A(T)`, `w_A(T)`, `c_A(T)` and
//! `dw_A(T)`, all evaluated on the compressed pair `(N, W)`.
//!
//! Witnesses are returned twice: as the unit coordinate vector `c` of
//! `range(A)` and as the canonical ambient A-unit vector
//! `x = A^{†1/2}·basis·c`. Any `x + k` with `k ∈ N(A)` attains the same value.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::VecJson;
use crate::linalg::{self, CMat, CVec};
use crate::metric::{compress, Compressed, Metric};
use crate::operator::Operator;
use crate::rng;
use crate::sweep;

/// Grid size for θ-sweeps over `[0, 2π)`.
pub const THETA_GRID: usize = 1440;
/// Golden-section bracket width after the grid.
pub const THETA_WIDTH: f64 = 1e-12;
/// Seeded random starts for the dw ascent, on top of the two structured ones.
pub const DW_RANDOM_STARTS: usize = 32;
/// Default seed for internal randomized searches.
pub const DEFAULT_SEED: u64 = 42;
/// Largest compressed rank the sampling oracle accepts.
pub const ORACLE_MAX_RANK: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ExactSvd,
    ThetaSweep,
    Multistart,
    Oracle,
    ClosedForm,
}

/// A computed radius with its attaining vector and convergence metadata.
#[derive(Debug, Clone)]
pub struct RadiusEstimate {
    pub value: f64,
    /// Unit coordinate vector in `C^r`.
    pub maximizer: CVec,
    /// Ambient A-unit vector with no `N(A)` component.
    pub witness: CVec,
    pub method: Method,
    pub iterations: usize,
    pub residual: f64,
}

#[derive(Serialize)]
struct EstimateJson<'a> {
    value: f64,
    method: Method,
    iterations: usize,
    residual: f64,
    maximizer: VecJson,
    witness: VecJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<&'a str>,
}

impl Serialize for RadiusEstimate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        EstimateJson {
            value: self.value,
            method: self.method,
            iterations: self.iterations,
            residual: self.residual,
            maximizer: (&self.maximizer).into(),
            witness: (&self.witness).into(),
            note: None,
        }
        .serialize(s)
    }
}

/// Result of an extremal search on compressed coordinates.
#[derive(Debug, Clone)]
pub struct Extremum {
    pub value: f64,
    pub coords: CVec,
    pub iterations: usize,
    pub residual: f64,
    pub method: Method,
}

impl Extremum {
    fn into_estimate(self, m: &Metric) -> RadiusEstimate {
        RadiusEstimate {
            value: self.value,
            witness: m.witness(&self.coords),
            maximizer: self.coords,
            method: self.method,
            iterations: self.iterations,
            residual: self.residual,
        }
    }
}

/// Options for the multistart dw ascent.
#[derive(Debug, Clone, Copy)]
pub struct DwOptions {
    pub seed: u64,
    pub random_starts: usize,
    pub grad_tol: f64,
}

impl Default for DwOptions {
    fn default() -> Self {
        Self { seed: DEFAULT_SEED, random_starts: DW_RANDOM_STARTS, grad_tol: 1e-10 }
    }
}

/// Pure computations on compressed matrices. `n` is the `r×r` matrix of
/// the form `⟨Tx,x⟩_A`; `w` is the `·×r` matrix of `‖Tx‖_A`.
pub mod compressed {
    use super::*;

    /// `σ_max(W)` with its right singular vector.
    pub fn seminorm(w: &CMat) -> Extremum {
        let (sv, v) = linalg::svd_right(w);
        let c = linalg::fix_phase(&v.column(0).into_owned());
        let residual = ((w * &c).norm() - sv[0]).abs();
        Extremum { value: sv[0], coords: c, iterations: 1, residual, method: Method::ExactSvd }
    }

    /// Smallest of the `r` singular values of `W`.
    pub fn min_modulus(w: &CMat) -> Extremum {
        let (sv, v) = linalg::svd_right(w);
        let k = w.ncols() - 1;
        let c = linalg::fix_phase(&v.column(k).into_owned());
        let residual = ((w * &c).norm() - sv[k]).abs();
        Extremum { value: sv[k], coords: c, iterations: 1, residual, method: Method::ExactSvd }
    }

    /// `max_θ λ_max(Re(e^{iθ}N))` over `[0, 2π)`.
    pub fn numerical_radius(n: &CMat) -> Extremum {
        let s = sweep::maximize(
            |t| linalg::lambda_max(&linalg::rotated_herm(n, t)),
            0.0,
            2.0 * PI,
            THETA_GRID,
            THETA_WIDTH,
            3,
            true,
        );
        let (vals, vecs) = linalg::eigh(&linalg::rotated_herm(n, s.arg));
        let c = linalg::fix_phase(&vecs.column(0).into_owned());
        let value = vals[0].max(0.0);
        let residual = (linalg::quad(n, &c).norm() - value).abs();
        Extremum { value, coords: c, iterations: s.evals, residual, method: Method::ThetaSweep }
    }

    /// `w` alone, with a caller-chosen grid (refined to [`THETA_WIDTH`]).
    pub fn numerical_radius_value(n: &CMat, grid: usize) -> f64 {
        let s = sweep::maximize(|t| linalg::lambda_max(&linalg::rotated_herm(n, t)), 0.0, 2.0 * PI, grid, THETA_WIDTH, 3, true);
        s.value.max(0.0)
    }

    /// Crawford number alone, without constructing a witness.
    pub fn crawford_value(n: &CMat) -> f64 {
        let s = sweep::maximize(
            |t| linalg::eig_extremes(&linalg::rotated_herm(n, t)).1,
            0.0,
            2.0 * PI,
            THETA_GRID,
            THETA_WIDTH,
            3,
            true,
        );
        s.value.max(0.0)
    }

    /// Distance from 0 to the numerical range of `N`.
    ///
    /// The numerical range is convex, so the distance is
    /// `max(0, max_θ λ_min(Re(e^{iθ}N)))`. The witness comes from the
    /// supporting face when the nearest point is on the boundary, and from a
    /// Newton solve of `c*Nc = 0` when 0 is interior.
    pub fn crawford(n: &CMat) -> Extremum {
        let s = sweep::maximize(
            |t| linalg::eig_extremes(&linalg::rotated_herm(n, t)).1,
            0.0,
            2.0 * PI,
            THETA_GRID,
            THETA_WIDTH,
            3,
            true,
        );
        let scale = 1.0 + n.norm();
        let value = s.value.max(0.0);
        let mut iterations = s.evals;
        let face_ok = s.value >= -1e-12 * scale;
        let coords = if face_ok { Some(face_witness(n, s.arg)) } else { None };
        let coords = match coords {
            Some(c) if (linalg::quad(n, &c).norm() - value).abs() <= 1e-9 * scale => c,
            _ => {
                let (c, it) = zero_witness(n).unwrap_or_else(|| descend_abs(n));
                iterations += it;
                c
            }
        };
        let residual = (linalg::quad(n, &coords).norm() - value).abs();
        Extremum { value, coords: linalg::fix_phase(&coords), iterations, residual, method: Method::ThetaSweep }
    }

    /// Unit vector on the supporting face at angle `theta` whose image under
    /// the form is real after rotation (the nearest point to 0 on that line).
    fn face_witness(n: &CMat, theta: f64) -> CVec {
        let (vals, vecs) = linalg::eigh(&linalg::rotated_herm(n, theta));
        let r = vals.len();
        let lmin = vals[r - 1];
        let spread = vals[0] - lmin;
        let cluster: Vec<usize> = (0..r).filter(|&k| vals[k] <= lmin + 1e-9 * (1.0 + spread)).collect();
        let v = CMat::from_fn(r, cluster.len(), |i, j| vecs[(i, cluster[j])]);
        if cluster.len() == 1 {
            return v.column(0).into_owned();
        }
        // Imaginary part after rotation, restricted to the face.
        let im = linalg::rotated_herm(n, theta - PI / 2.0);
        let (mu, u) = linalg::eigh(&(v.adjoint() * im * &v));
        let k = mu.len() - 1;
        let (mu_max, mu_min) = (mu[0], mu[k]);
        let (u_max, u_min) = (u.column(0).into_owned(), u.column(k).into_owned());
        let local = if mu_min >= 0.0 {
            u_min
        } else if mu_max <= 0.0 {
            u_max
        } else {
            let span = mu_max - mu_min;
            let (cs, sn) = ((mu_max / span).sqrt(), (-mu_min / span).sqrt());
            u_min.scale(cs) + u_max.scale(sn)
        };
        linalg::normalize(&(v * local))
    }

    /// Damped minimum-norm Newton on `(Re c*Nc, Im c*Nc, ‖c‖²−1) = 0`.
    fn zero_witness(n: &CMat) -> Option<(CVec, usize)> {
        let r = n.nrows();
        if r < 2 {
            return None;
        }
        let h1 = linalg::herm_part(n);
        let h2 = linalg::skew_part(n);
        let scale = 1.0 + n.norm();
        let residual = |c: &CVec| {
            let z = linalg::quad(n, c);
            nalgebra::Vector3::new(z.re, z.im, c.norm_squared() - 1.0)
        };
        let mut total = 0;
        for start in 0..64u64 {
            let mut c = rng::unit_vector(&mut rng::stream(0x0c4a_f0bd, start), r);
            let mut g = residual(&c);
            for _ in 0..100 {
                total += 1;
                if g.norm() <= 1e-15 * scale {
                    break;
                }
                let grads = [(&h1 * &c).scale(2.0), (&h2 * &c).scale(2.0), c.scale(2.0)];
                let gram = nalgebra::Matrix3::from_fn(|i, j| grads[i].dotc(&grads[j]).re);
                let Some(a) = gram.lu().solve(&(-g)) else { break };
                let dc = grads.iter().zip(a.iter()).fold(CVec::zeros(r), |acc, (gk, &ak)| acc + gk.scale(ak));
                let mut step = 1.0;
                let mut moved = false;
                while step > 1e-10 {
                    let cand = &c + dc.scale(step);
                    let gc = residual(&cand);
                    if gc.norm() < g.norm() {
                        c = cand;
                        g = gc;
                        moved = true;
                        break;
                    }
                    step *= 0.5;
                }
                if !moved {
                    break;
                }
            }
            let c = linalg::normalize(&c);
            if linalg::quad(n, &c).norm() <= 1e-12 * scale {
                return Some((c, total));
            }
        }
        None
    }

    /// Projected gradient descent on `|c*Nc|²`; last resort for the witness.
    fn descend_abs(n: &CMat) -> (CVec, usize) {
        let r = n.nrows();
        let f = |c: &CVec| linalg::quad(n, c).norm_sqr();
        let mut best = (f64::INFINITY, CVec::zeros(r), 0);
        for start in 0..16u64 {
            let mut c = rng::unit_vector(&mut rng::stream(0xd35c, start), r);
            let mut fc = f(&c);
            let mut step = 1.0 / (1.0 + n.norm_squared());
            let mut it = 0;
            while it < 5000 && step > 1e-18 {
                it += 1;
                let z = linalg::quad(n, &c);
                let g = (n * &c) * z.conj() + (n.adjoint() * &c) * z;
                let g = (&g - c.scale(c.dotc(&g).re)).scale(2.0);
                let cand = linalg::normalize(&(&c - g.scale(step)));
                let fcand = f(&cand);
                if fcand < fc {
                    c = cand;
                    fc = fcand;
                    step *= 1.5;
                } else {
                    step *= 0.5;
                }
            }
            if fc < best.0 {
                best = (fc, c, best.2 + it);
            } else {
                best.2 += it;
            }
        }
        (best.1, best.2)
    }

    /// `f(c) = |c*Nc|² + (c*Mc)²`, `M = W*W`.
    pub(crate) fn dw_objective(n: &CMat, gram: &CMat, c: &CVec) -> f64 {
        let z = linalg::quad(n, c);
        let m = linalg::quad(gram, c).re;
        z.norm_sqr() + m * m
    }

    /// Hermitian linearization `G(c) = z̄N + zN* + 2mM` of the dw objective;
    /// `∂f/∂c̄ = G(c)c`.
    fn dw_linearization(n: &CMat, gram: &CMat, c: &CVec) -> CMat {
        let z = linalg::quad(n, c);
        let m = linalg::quad(gram, c).re;
        n * z.conj() + n.adjoint() * z + gram.scale(2.0 * m)
    }

    fn dw_grad_residual(n: &CMat, gram: &CMat, c: &CVec) -> f64 {
        let g = dw_linearization(n, gram, c) * c;
        let along = c.dotc(&g).re;
        (g - c.scale(along)).norm() * 2.0
    }

    /// Monotone phase of the local ascent from `c0`. The objective is convex
    /// in `X = cc*`, so replacing `c` by the top eigenvector of `G(c)` never
    /// decreases it.
    fn dw_power(n: &CMat, gram: &CMat, c0: &CVec) -> (f64, CVec, usize) {
        let mut c = linalg::normalize(c0);
        let mut f = dw_objective(n, gram, &c);
        let mut iters = 0;
        for _ in 0..2000 {
            iters += 1;
            let (_, vecs) = linalg::eigh(&dw_linearization(n, gram, &c));
            let next = vecs.column(0).into_owned();
            let fnext = dw_objective(n, gram, &next);
            if fnext <= f * (1.0 + 1e-15) {
                if fnext >= f {
                    c = next;
                    f = fnext;
                }
                break;
            }
            c = next;
            f = fnext;
        }
        (f, c, iters)
    }

    /// Backtracking Riemannian gradient ascent down to `grad_tol`.
    fn dw_polish(n: &CMat, gram: &CMat, mut f: f64, mut c: CVec, grad_tol: f64) -> (f64, CVec, usize, f64) {
        let mut resid = dw_grad_residual(n, gram, &c);
        let mut step = 1.0 / (1.0 + f);
        let mut polish = 0;
        while resid > grad_tol * (1.0 + f) && polish < 2000 && step > 1e-20 {
            polish += 1;
            let g = dw_linearization(n, gram, &c) * &c;
            let g = (&g - c.scale(c.dotc(&g).re)).scale(2.0);
            let gn2 = g.norm_squared();
            let mut accepted = false;
            while step > 1e-20 {
                let cand = linalg::normalize(&(&c + g.scale(step)));
                let fc = dw_objective(n, gram, &cand);
                if fc >= f + 1e-4 * step * gn2 {
                    c = cand;
                    f = fc;
                    step *= 2.0;
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if !accepted {
                break;
            }
            resid = dw_grad_residual(n, gram, &c);
        }
        (f, c, polish, resid)
    }

    /// Starts whose monotone phase ends this far (relatively) below the best
    /// are not polished; polishing a near-stationary point moves `f` far less.
    const POLISH_WINDOW: f64 = 1e-4;

    /// `sup_c √(|c*Nc|² + ‖Wc‖⁴)` by multistart ascent. Starts are the top
    /// right singular vector of `W`, the numerical-radius witness, then
    /// seeded random unit vectors; ties go to the earlier start.
    pub fn dw(n: &CMat, w: &CMat, opts: &DwOptions) -> Extremum {
        let r = n.nrows();
        let gram = w.adjoint() * w;
        let mut starts = vec![seminorm(w).coords, numerical_radius(n).coords];
        starts.extend((0..opts.random_starts).map(|k| rng::unit_vector(&mut rng::stream(opts.seed, k as u64), r)));
        let phase1: Vec<_> = starts.iter().map(|s| dw_power(n, &gram, s)).collect();
        let mut iterations: usize = phase1.iter().map(|p| p.2).sum();
        let top = phase1.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
        let mut best: Option<(f64, CVec, f64)> = None;
        for (f, c, _) in phase1 {
            if f < top - POLISH_WINDOW * (1.0 + top.abs()) {
                continue;
            }
            let (f, c, it, resid) = dw_polish(n, &gram, f, c, opts.grad_tol);
            iterations += it;
            if best.as_ref().is_none_or(|b| f > b.0) {
                best = Some((f, c, resid));
            }
        }
        let (f, c, residual) = best.expect("the best start is always polished");
        Extremum { value: f.max(0.0).sqrt(), coords: linalg::fix_phase(&c), iterations, residual, method: Method::Multistart }
    }
}

pub fn op_seminorm(m: &Metric, t: &Operator) -> Result<RadiusEstimate> {
    let c = compress(m, t)?;
    Ok(compressed::seminorm(&c.w).into_estimate(m))
}

pub fn min_modulus(m: &Metric, t: &Operator) -> Result<RadiusEstimate> {
    let c = compress(m, t)?;
    Ok(compressed::min_modulus(&c.w).into_estimate(m))
}

pub fn numerical_radius(m: &Metric, t: &Operator) -> Result<RadiusEstimate> {
    let c = compress(m, t)?;
    Ok(compressed::numerical_radius(&c.n).into_estimate(m))
}

pub fn crawford(m: &Metric, t: &Operator) -> Result<RadiusEstimate> {
    let c = compress(m, t)?;
    Ok(compressed::crawford(&c.n).into_estimate(m))
}

pub fn dw_radius(m: &Metric, t: &Operator) -> Result<RadiusEstimate> {
    dw_radius_with(m, t, &DwOptions::default())
}

pub fn dw_radius_with(m: &Metric, t: &Operator, opts: &DwOptions) -> Result<RadiusEstimate> {
    let c = compress(m, t)?;
    Ok(compressed::dw(&c.n, &c.w, opts).into_estimate(m))
}

/// Objective evaluated by the sampling oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    Dw,
    Crawford,
    Numrad,
}

impl Objective {
    fn value(self, comp: &Compressed, gram: &CMat, c: &CVec) -> f64 {
        match self {
            Objective::Dw => compressed::dw_objective(&comp.n, gram, c).sqrt(),
            Objective::Crawford | Objective::Numrad => linalg::quad(&comp.n, c).norm(),
        }
    }

    /// Larger is better.
    fn score(self, v: f64) -> f64 {
        match self {
            Objective::Crawford => -v,
            _ => v,
        }
    }
}

/// Ground-truth estimator: uniform samples on the unit sphere of `C^r`
/// followed by derivative-free hill climbing from the 10 best samples.
///
/// It shares no search code with the optimizers above, so agreement between
/// the two is meaningful evidence.
pub fn oracle_extremum(m: &Metric, t: &Operator, objective: Objective, samples: usize, seed: u64) -> Result<RadiusEstimate> {
    let comp = compress(m, t)?;
    Ok(oracle_compressed(&comp, objective, samples, seed)?.into_estimate(m))
}

pub fn oracle_compressed(comp: &Compressed, objective: Objective, samples: usize, seed: u64) -> Result<Extremum> {
    let r = comp.rank();
    if r > ORACLE_MAX_RANK {
        return Err(Error::RankTooLarge { rank: r, limit: ORACLE_MAX_RANK });
    }
    let gram = comp.gram();
    let eval = |c: &CVec| objective.value(comp, &gram, c);

    const KEEP: usize = 10;
    let mut rng = rng::stream(seed, 0);
    let mut pool: Vec<(f64, CVec)> = Vec::with_capacity(KEEP + 1);
    for _ in 0..samples.max(1) {
        let c = rng::unit_vector(&mut rng, r);
        let s = objective.score(eval(&c));
        if pool.len() < KEEP || s > pool[pool.len() - 1].0 {
            let at = pool.partition_point(|(ps, _)| *ps >= s);
            pool.insert(at, (s, c));
            pool.truncate(KEEP);
        }
    }

    let mut best: Option<(f64, CVec)> = None;
    let mut evals = samples;
    for (k, (s0, c0)) in pool.into_iter().enumerate() {
        let mut rng = rng::stream(seed, 1 + k as u64);
        let (mut s, mut c) = (s0, c0);
        let mut rho = 0.25;
        let mut fails = 0;
        let mut budget = 60_000;
        while rho > 1e-11 && budget > 0 {
            budget -= 1;
            let step = rng::complex_gaussian_vec(&mut rng, r).scale(rho / (2.0 * r as f64).sqrt());
            let cand = linalg::normalize(&(&c + step));
            let sc = objective.score(eval(&cand));
            if sc > s {
                s = sc;
                c = cand;
                fails = 0;
                rho = (rho * 1.5).min(0.5);
            } else {
                fails += 1;
                if fails >= 8 + 2 * r {
                    rho *= 0.5;
                    fails = 0;
                }
            }
        }
        evals += 60_000 - budget;
        if best.as_ref().is_none_or(|b| s > b.0) {
            best = Some((s, c));
        }
    }
    let (s, c) = best.expect("pool is non-empty");
    let value = objective.score(s);
    let c = linalg::fix_phase(&c);
    let residual = (eval(&c) - value).abs();
    Ok(Extremum { value, coords: c, iterations: evals, residual, method: Method::Oracle })
}
