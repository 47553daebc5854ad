use num_rational::Rational64;
use num_traits::{CheckedMul, ToPrimitive};

use crate::error::{Error, Result};
use crate::lp::NonsingularMapSpec;
use crate::C64;

/// `x^{1/p}`, exact branches for `p ∈ {1, 2}`.
pub fn root_p(x: f64, p: f64) -> f64 {
    if p == 1.0 {
        x
    } else if p == 2.0 {
        x.sqrt()
    } else {
        x.powf(1.0 / p)
    }
}

/// `x^p`, exact branches for `p ∈ {1, 2}`.
pub fn pow_p(x: f64, p: f64) -> f64 {
    if p == 1.0 {
        x
    } else if p == 2.0 {
        x * x
    } else {
        x.powf(p)
    }
}

/// `(Σ m_i |f_i|^p)^{1/p}`.
pub fn p_norm(masses: &[f64], f: &[C64], p: f64) -> f64 {
    let s: f64 = masses.iter().zip(f).map(|(m, z)| m * pow_p(z.norm(), p)).sum();
    root_p(s, p)
}

/// `T f = h · (f ∘ τ)` with `h = ω^{1/p}` on `L^p` of an atomic space.
#[derive(Debug, Clone, PartialEq)]
pub struct LampertiOperator {
    p: f64,
    map: NonsingularMapSpec,
    h: Vec<f64>,
}

impl LampertiOperator {
    pub fn new(p: f64, map: NonsingularMapSpec) -> Result<Self> {
        if !(p >= 1.0) || !p.is_finite() {
            return Err(Error::invalid("p must be a finite real >= 1"));
        }
        let h = map.omega().iter().map(|w| root_p(w.to_f64().unwrap_or(f64::NAN), p)).collect();
        Ok(LampertiOperator { p, map, h })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn map(&self) -> &NonsingularMapSpec {
        &self.map
    }

    pub fn h(&self) -> &[f64] {
        &self.h
    }

    pub fn dim(&self) -> usize {
        self.map.atom_count()
    }

    /// `‖T 1_j‖_p^p = m(j)` checked in exact rationals: the only atom
    /// mapped onto `j` contributes `m(i)·ω(i)`.
    pub fn indicator_isometry_exact(&self, j: usize) -> Result<bool> {
        let i = self.map.perm().iter().position(|&t| t == j).ok_or_else(|| Error::invalid("atom out of range"))?;
        let lhs = self.map.masses()[i].checked_mul(&self.map.omega()[i]).ok_or(Error::Overflow)?;
        Ok(lhs == self.map.masses()[j])
    }

    pub fn mass_of(&self, atoms: &[usize]) -> Rational64 {
        atoms.iter().map(|&i| self.map.masses()[i]).sum()
    }
}

/// `(T f)(i) = h(i) · f(τ(i))`.
pub fn lamperti_apply(op: &LampertiOperator, f: &[C64]) -> Result<Vec<C64>> {
    if f.len() != op.dim() {
        return Err(Error::DimensionMismatch { expected: op.dim(), found: f.len() });
    }
    Ok(op.map.perm().iter().zip(&op.h).map(|(&t, &h)| h * f[t]).collect())
}
