//! Dense complex helpers shared by the metric, the radii and the bounds.
//!
//! Everything here works on `nalgebra` dynamic matrices with `Complex<f64>`
//! entries. Eigen- and singular-value routines return their spectra sorted,
//! which `nalgebra` does not promise.

use nalgebra::{Complex, DMatrix, DVector};

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const ZERO: C64 = Complex { re: 0.0, im: 0.0 };
pub const ONE: C64 = Complex { re: 1.0, im: 0.0 };
pub const I: C64 = Complex { re: 0.0, im: 1.0 };

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

#[inline]
pub fn cis(theta: f64) -> C64 {
    Complex::from_polar(1.0, theta)
}

/// Real matrix lifted to complex entries, row-major input.
pub fn from_real_rows(rows: &[&[f64]]) -> CMat {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    CMat::from_fn(n, m, |i, j| c64(rows[i][j], 0.0))
}

pub fn real_diag(d: &[f64]) -> CMat {
    CMat::from_diagonal(&CVec::from_iterator(d.len(), d.iter().map(|&x| c64(x, 0.0))))
}

pub fn fro(m: &CMat) -> f64 {
    m.norm()
}

/// (M + M*)/2.
pub fn herm_part(m: &CMat) -> CMat {
    (m + m.adjoint()).scale(0.5)
}

/// (M − M*)/(2i), the Hermitian "imaginary part".
pub fn skew_part(m: &CMat) -> CMat {
    (m - m.adjoint()) * c64(0.0, -0.5)
}

/// Re(e^{iθ} M) = (e^{iθ}M + e^{-iθ}M*)/2.
pub fn rotated_herm(m: &CMat, theta: f64) -> CMat {
    let e = cis(theta);
    (m * e + m.adjoint() * e.conj()).scale(0.5)
}

/// Hermitian eigendecomposition with eigenvalues sorted descending and
/// eigenvectors permuted to match.
pub fn eigh(h: &CMat) -> (Vec<f64>, CMat) {
    let n = h.nrows();
    if n == 0 {
        return (Vec::new(), CMat::zeros(0, 0));
    }
    let sym = herm_part(h);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let vals = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vecs = CMat::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    (vals, vecs)
}

/// Extreme eigenvalues (λ_max, λ_min) of a Hermitian matrix.
pub fn eig_extremes(h: &CMat) -> (f64, f64) {
    if h.nrows() == 0 {
        return (0.0, 0.0);
    }
    let sym = herm_part(h);
    let vals = sym.symmetric_eigenvalues();
    let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
    (max, min)
}

pub fn lambda_max(h: &CMat) -> f64 {
    eig_extremes(h).0
}

/// Singular values (descending) and the matching right singular vectors as
/// columns of an `ncols × k` matrix, `k = min(nrows, ncols)`.
pub fn svd_right(m: &CMat) -> (Vec<f64>, CMat) {
    let (r, c) = m.shape();
    if r == 0 || c == 0 {
        return (Vec::new(), CMat::zeros(c, 0));
    }
    if r < c {
        // A thin SVD would drop part of the domain; the Gram matrix keeps a
        // full basis of right singular vectors.
        let (vals, vecs) = eigh(&(m.adjoint() * m));
        return (vals.iter().map(|&v| v.max(0.0).sqrt()).collect(), vecs);
    }
    let svd = m.clone().svd(false, true);
    let vt = svd.v_t.expect("requested right singular vectors");
    let mut order: Vec<usize> = (0..c).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let sv = order.iter().map(|&k| svd.singular_values[k]).collect();
    let v = CMat::from_fn(c, c, |i, j| vt[(order[j], i)].conj());
    (sv, v)
}

/// Largest singular value.
pub fn spectral_norm(m: &CMat) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    m.singular_values().iter().copied().fold(0.0, f64::max)
}

/// Spectral norm of a Hermitian matrix (largest |eigenvalue|).
pub fn herm_norm(h: &CMat) -> f64 {
    let (max, min) = eig_extremes(h);
    max.abs().max(min.abs())
}

/// c* M c.
pub fn quad(m: &CMat, c: &CVec) -> C64 {
    c.dotc(&(m * c))
}

pub fn normalize(c: &CVec) -> CVec {
    let n = c.norm();
    if n == 0.0 {
        c.clone()
    } else {
        c.unscale(n)
    }
}

/// Rotates `c` so its first coordinate of non-negligible modulus is real
/// and nonnegative.
pub fn fix_phase(c: &CVec) -> CVec {
    let scale = c.camax();
    match c.iter().find(|z| z.norm() > 1e-8 * scale.max(f64::MIN_POSITIVE)) {
        Some(z) => {
            let ph = z.conj() / z.norm();
            c * ph
        }
        None => c.clone(),
    }
}

/// `z/|z|`, or 1 when `z = 0`.
pub fn fix_unit_phase(z: C64) -> C64 {
    let r = z.norm();
    if r > 0.0 {
        z / r
    } else {
        ONE
    }
}

/// Block-diagonal `diag(a, b)`.
pub fn block_diag(a: &CMat, b: &CMat) -> CMat {
    let (n, m) = (a.nrows(), b.nrows());
    let mut out = CMat::zeros(n + m, n + m);
    out.view_mut((0, 0), (n, n)).copy_from(a);
    out.view_mut((n, n), (m, m)).copy_from(b);
    out
}

/// Assembles a 2×2 block matrix from equal-size square blocks.
pub fn assemble2(t11: &CMat, t12: &CMat, t21: &CMat, t22: &CMat) -> CMat {
    let n = t11.nrows();
    let mut out = CMat::zeros(2 * n, 2 * n);
    out.view_mut((0, 0), (n, n)).copy_from(t11);
    out.view_mut((0, n), (n, n)).copy_from(t12);
    out.view_mut((n, 0), (n, n)).copy_from(t21);
    out.view_mut((n, n), (n, n)).copy_from(t22);
    out
}

pub fn block(m: &CMat, i: usize, j: usize) -> CMat {
    let n = m.nrows() / 2;
    m.view((i * n, j * n), (n, n)).into_owned()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigh_sorts_descending() {
        let h = real_diag(&[1.0, 3.0, 2.0]);
        let (vals, vecs) = eigh(&h);
        assert_eq!(vals, vec![3.0, 2.0, 1.0]);
        assert!((vecs[(1, 0)].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn svd_right_handles_wide_and_tall() {
        let tall = from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0], &[2.0, 0.0]]);
        let (sv, v) = svd_right(&tall);
        assert!((sv[0] - 2.0).abs() < 1e-14 && (sv[1] - 1.0).abs() < 1e-14);
        assert_eq!(v.shape(), (2, 2));
        let wide = from_real_rows(&[&[0.0, 3.0, 0.0]]);
        let (sv, v) = svd_right(&wide);
        assert_eq!(sv.len(), 3);
        assert!((sv[0] - 3.0).abs() < 1e-14 && sv[2].abs() < 1e-14);
        assert!((v[(1, 0)].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rotated_herm_is_real_part_at_zero() {
        let m = CMat::from_fn(2, 2, |i, j| c64(i as f64, j as f64 + 1.0));
        assert!((rotated_herm(&m, 0.0) - herm_part(&m)).norm() < 1e-15);
        let recon = herm_part(&m) + skew_part(&m) * I;
        assert!((recon - m).norm() < 1e-14);
    }

    #[test]
    fn fix_phase_makes_leading_entry_real() {
        let c = CVec::from_vec(vec![c64(0.0, 2.0), c64(1.0, 1.0)]);
        let f = fix_phase(&c);
        assert!(f[0].im.abs() < 1e-15 && f[0].re > 0.0);
        assert!((f.norm() - c.norm()).abs() < 1e-14);
    }
}
