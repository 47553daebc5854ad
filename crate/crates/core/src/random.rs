//! Seeded random operators and vectors.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::operator::{Basis, OperatorMatrix};
use crate::C64;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<C64> {
    (0..dim).map(|_| complex_gaussian(rng)).collect()
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the
/// phases of `diag(R)` moved into `Q`. Certified to `1e-10`.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize, basis: Basis) -> Result<OperatorMatrix> {
    if dim == 0 {
        return Err(Error::invalid("operator dimension must be positive"));
    }
    let g = DMatrix::from_fn(dim, dim, |_, _| complex_gaussian(rng));
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    let phases: Vec<C64> = (0..dim)
        .map(|k| {
            let d = r[(k, k)];
            if d.norm() == 0.0 { C64::new(1.0, 0.0) } else { d / d.norm() }
        })
        .collect();
    OperatorMatrix::from_fn(dim, basis, |i, j| q[(i, j)] * phases[j])?.certify_unitary(1e-10)
}

/// Uniform point on the unit circle.
pub fn unimodular<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
}
