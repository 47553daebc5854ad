use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::operator::{Basis, OperatorMatrix};
use crate::transformations::permutation::IntervalPermutation;
use crate::transformations::quadrature::integrate;
use crate::transformations::rotation::{fourier_index, fourier_modes};
use crate::C64;

/// Absolute tolerance of the quadrature used for generic columns.
pub const FOLDING_QUAD_TOL: f64 = 1e-11;

/// The folding map `Sx = x` on `[0, ½)`, `Sx = 3/2 − x` on `(½, 1]`,
/// truncated to Fourier modes `−N..N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FoldingMapSpec {
    modes: usize,
}

impl FoldingMapSpec {
    pub fn new(modes: usize) -> Result<Self> {
        if modes < 2 {
            return Err(Error::invalid("folding truncation needs N >= 2"));
        }
        Ok(FoldingMapSpec { modes })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }
}

fn i2pi() -> C64 {
    C64::new(0.0, 2.0 * PI)
}

fn e_pi(t: f64) -> C64 {
    C64::from_polar(1.0, PI * t)
}

/// Closed form of `⟨S f_1, f_j⟩`.
pub fn closed_form_f1(j: i64) -> C64 {
    match j {
        1 => C64::new(0.5, 0.0),
        -1 => C64::new(-0.5, 0.0),
        _ => {
            let jf = j as f64;
            2.0 * jf * (1.0 + e_pi(-jf)) / (i2pi() * (jf * jf - 1.0))
        }
    }
}

/// Closed form of `⟨S f_2, f_j⟩`.
pub fn closed_form_f2(j: i64) -> C64 {
    match j {
        2 | -2 => C64::new(0.5, 0.0),
        _ => {
            let jf = j as f64;
            4.0 * (1.0 - e_pi(-jf)) / (i2pi() * (jf * jf - 4.0))
        }
    }
}

/// `⟨S f_k, f_j⟩` by adaptive quadrature of
/// `∫_0^½ e^{2πi(k−j)x} dx + e^{3πik} ∫_½^1 e^{−2πi(k+j)x} dx`.
pub fn quadrature_coefficient(k: i64, j: i64) -> C64 {
    let (kf, jf) = (k as f64, j as f64);
    let left = integrate(|x| C64::from_polar(1.0, 2.0 * PI * (kf - jf) * x), 0.0, 0.5, FOLDING_QUAD_TOL / 2.0);
    let right = integrate(|x| C64::from_polar(1.0, -2.0 * PI * (kf + jf) * x), 0.5, 1.0, FOLDING_QUAD_TOL / 2.0);
    left + e_pi(3.0 * kf) * right
}

/// `⟨S f_k, f_j⟩`: closed forms for `k ∈ {±1, ±2}` (negative `k` by
/// conjugation, since `S` is a real point map), quadrature otherwise.
pub fn folding_coefficient(k: i64, j: i64) -> C64 {
    match k {
        1 => closed_form_f1(j),
        -1 => closed_form_f1(-j).conj(),
        2 => closed_form_f2(j),
        -2 => closed_form_f2(-j).conj(),
        _ => quadrature_coefficient(k, j),
    }
}

/// All `j ∈ [−bound, bound]` with `|⟨S f_k, f_j⟩| > threshold`.
pub fn nonzero_indices(k: i64, bound: i64, threshold: f64) -> Vec<i64> {
    (-bound..=bound).filter(|&j| folding_coefficient(k, j).norm() > threshold).collect()
}

/// Koopman matrix `M[j][k] = ⟨S f_k, f_j⟩` in the Fourier basis.
///
/// This is a compression of an infinite matrix, so it is not an involution
/// at finite `N`; see [`folding_indicator_koopman`] for an exact model.
pub fn folding_koopman(spec: &FoldingMapSpec) -> OperatorMatrix {
    let modes = fourier_modes(spec.modes);
    let dim = modes.len();
    let mut entries = vec![C64::new(0.0, 0.0); dim * dim];
    for &k in &modes {
        let col = fourier_index(k);
        for &j in &modes {
            entries[fourier_index(j) * dim + col] = folding_coefficient(k, j);
        }
    }
    OperatorMatrix::new(dim, entries, Basis::Fourier).expect("finite coefficients")
}

/// The folding map on `k` equal intervals as a permutation: intervals in the
/// left half are fixed, interval `i` of the right half goes to `3k/2 − 1 − i`.
pub fn folding_interval_permutation(k: usize) -> Result<IntervalPermutation> {
    if k < 2 || !k.is_multiple_of(2) {
        return Err(Error::invalid("folding partition needs an even number of intervals"));
    }
    let perm = (0..k).map(|i| if i < k / 2 { i } else { 3 * k / 2 - 1 - i }).collect();
    IntervalPermutation::uniform(perm)
}

/// Koopman matrix of [`folding_interval_permutation`] in the indicator basis.
pub fn folding_indicator_koopman(k: usize) -> Result<OperatorMatrix> {
    Ok(folding_interval_permutation(k)?.koopman()?.with_basis(Basis::Indicator))
}
