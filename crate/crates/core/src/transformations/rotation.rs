use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::operator::{Basis, OperatorMatrix};
use crate::C64;

/// Position of Fourier mode `k` in a truncated Fourier basis.
///
/// Modes are ordered by frequency, `0, 1, -1, 2, -2, …`, so that the first
/// `J` basis vectors are the lowest modes.
pub fn fourier_index(k: i64) -> usize {
    match k {
        0 => 0,
        k if k > 0 => (2 * k - 1) as usize,
        k => (-2 * k) as usize,
    }
}

pub fn fourier_mode(index: usize) -> i64 {
    if index == 0 {
        0
    } else if index % 2 == 1 {
        index.div_ceil(2) as i64
    } else {
        -((index / 2) as i64)
    }
}

/// Modes `−N..N` in basis order.
pub fn fourier_modes(n: usize) -> Vec<i64> {
    (0..2 * n + 1).map(fourier_mode).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationSpec {
    alpha: f64,
    modes: usize,
}

impl RotationSpec {
    /// Rotation `x ↦ x + alpha (mod 1)` truncated to modes `−modes..modes`.
    pub fn new(alpha: f64, modes: usize) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::invalid("rotation angle must be finite"));
        }
        if modes == 0 {
            return Err(Error::invalid("rotation truncation must be positive"));
        }
        Ok(RotationSpec { alpha: alpha.rem_euclid(1.0), modes })
    }

    /// `alpha = (√5 − 1)/2`.
    pub fn golden(modes: usize) -> Result<Self> {
        Self::new((5f64.sqrt() - 1.0) / 2.0, modes)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn dim(&self) -> usize {
        2 * self.modes + 1
    }
}

/// Diagonal Koopman matrix `f_k ↦ e^{2πikα} f_k` on the Fourier basis.
pub fn rotation_koopman(spec: &RotationSpec) -> OperatorMatrix {
    let values: Vec<C64> = fourier_modes(spec.modes)
        .into_iter()
        .map(|k| rotation_eigenvalue(spec.alpha, k, 1))
        .collect();
    OperatorMatrix::diagonal(&values, Basis::Fourier)
        .expect("nonempty finite diagonal")
        .assume_unitary()
}

/// `e^{2πiknα}` with the phase reduced mod 1 before exponentiating.
pub fn rotation_eigenvalue(alpha: f64, k: i64, n: i64) -> C64 {
    let phase = ((k as f64 * alpha).rem_euclid(1.0) * n as f64).rem_euclid(1.0);
    C64::from_polar(1.0, TAU * phase)
}
