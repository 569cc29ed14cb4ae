//! Seeded, splittable randomness.
//!
//! Every consumer derives its own ChaCha stream from `(seed, stream)`, so
//! results do not depend on evaluation order or thread scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::{c64, CMat, CVec};

pub type Rng = ChaCha8Rng;

pub fn stream(seed: u64, stream: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn gaussian(rng: &mut Rng) -> f64 {
    StandardNormal.sample(rng)
}

/// Standard complex Gaussian vector (independent real and imaginary parts).
pub fn complex_gaussian_vec(rng: &mut Rng, n: usize) -> CVec {
    CVec::from_fn(n, |_, _| c64(gaussian(rng), gaussian(rng)))
}

pub fn complex_gaussian_mat(rng: &mut Rng, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| c64(gaussian(rng), gaussian(rng)))
}

/// Uniformly distributed unit vector of `C^n`.
pub fn unit_vector(rng: &mut Rng, n: usize) -> CVec {
    loop {
        let v = complex_gaussian_vec(rng, n);
        let norm = v.norm();
        if norm > 1e-12 {
            return v.unscale(norm);
        }
    }
}
