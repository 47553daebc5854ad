use std::fmt;

use crate::error::{Error, Result};
use crate::C64;

/// Power-iteration steps used by [`OperatorMatrix::operator_norm`].
pub const NORM_ITERATIONS: usize = 200;

/// Semantics of the basis an [`OperatorMatrix`] is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    /// Exponentials `e^{2πikx}`, ordered `k = 0, 1, -1, 2, -2, …`.
    Fourier,
    /// Normalized indicators of the levels of a cutting-and-stacking tower.
    Indicator,
    /// Normalized indicators `1_i / √m_i` of the atoms of a finite measure space.
    Atom,
    /// Flattened symmetric-tensor grading of a Fock truncation.
    FockGraded,
}

impl Basis {
    pub fn name(&self) -> &'static str {
        match self {
            Basis::Fourier => "fourier",
            Basis::Indicator => "indicator",
            Basis::Atom => "atom",
            Basis::FockGraded => "fock-graded",
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Dense complex square matrix, stored row-major.
///
/// Entries are always finite. The `unitary` flag is a certificate: it is only
/// set by constructors that are unitary by construction (permutations,
/// unimodular diagonals) or after [`OperatorMatrix::certify_unitary`] checked
/// `‖M*M − I‖_max` numerically. Certified matrices may be raised to negative
/// powers.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    dim: usize,
    entries: Vec<C64>,
    basis: Basis,
    unitary: bool,
}

/// Equality of dimension, basis and entries; the unitary certificate is
/// metadata and does not take part.
impl PartialEq for OperatorMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.basis == other.basis && self.entries == other.entries
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlgebraKind {
    Compose,
    Add,
    Scale(C64),
    Adjoint,
}

/// Single entry point for the binary and unary matrix operations.
///
/// `other` is required for [`AlgebraKind::Compose`] and [`AlgebraKind::Add`]
/// and ignored otherwise.
pub fn operator_algebra(
    op: &OperatorMatrix,
    other: Option<&OperatorMatrix>,
    kind: AlgebraKind,
) -> Result<OperatorMatrix> {
    let need = || other.ok_or_else(|| Error::invalid("binary operation needs a second operand"));
    match kind {
        AlgebraKind::Compose => op.compose(need()?),
        AlgebraKind::Add => op.add(need()?),
        AlgebraKind::Scale(c) => Ok(op.scale(c)),
        AlgebraKind::Adjoint => Ok(op.adjoint()),
    }
}

impl OperatorMatrix {
    pub fn new(dim: usize, entries: Vec<C64>, basis: Basis) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("operator dimension must be positive"));
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: entries.len() });
        }
        if let Some(pos) = entries.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { row: pos / dim, col: pos % dim });
        }
        Ok(OperatorMatrix { dim, entries, basis, unitary: false })
    }

    pub fn from_fn(dim: usize, basis: Basis, mut f: impl FnMut(usize, usize) -> C64) -> Result<Self> {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        Self::new(dim, entries, basis)
    }

    pub fn zeros(dim: usize, basis: Basis) -> Self {
        assert!(dim > 0, "operator dimension must be positive");
        OperatorMatrix { dim, entries: vec![C64::new(0.0, 0.0); dim * dim], basis, unitary: false }
    }

    pub fn identity(dim: usize, basis: Basis) -> Self {
        let mut m = Self::zeros(dim, basis);
        for i in 0..dim {
            m.entries[i * dim + i] = C64::new(1.0, 0.0);
        }
        m.unitary = true;
        m
    }

    /// Diagonal matrix; certified unitary when every entry has modulus one
    /// to within `1e-12`.
    pub fn diagonal(values: &[C64], basis: Basis) -> Result<Self> {
        let dim = values.len();
        if dim == 0 {
            return Err(Error::invalid("operator dimension must be positive"));
        }
        let mut m = Self::zeros(dim, basis);
        for (i, v) in values.iter().enumerate() {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::NonFinite { row: i, col: i });
            }
            m.entries[i * dim + i] = *v;
        }
        m.unitary = values.iter().all(|v| (v.norm() - 1.0).abs() <= 1e-12);
        Ok(m)
    }

    /// Matrix with `M[targets[j]][j] = 1`, i.e. `M e_j = e_{targets[j]}`.
    /// `targets` must be a bijection.
    pub fn permutation(targets: &[usize], basis: Basis) -> Result<Self> {
        let dim = targets.len();
        if dim == 0 {
            return Err(Error::invalid("operator dimension must be positive"));
        }
        let mut seen = vec![false; dim];
        for &t in targets {
            if t >= dim || seen[t] {
                return Err(Error::invalid("permutation targets are not a bijection"));
            }
            seen[t] = true;
        }
        let mut m = Self::zeros(dim, basis);
        for (j, &t) in targets.iter().enumerate() {
            m.entries[t * dim + j] = C64::new(1.0, 0.0);
        }
        m.unitary = true;
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[row * self.dim + col]
    }

    pub fn row(&self, row: usize) -> &[C64] {
        &self.entries[row * self.dim..(row + 1) * self.dim]
    }

    pub fn column(&self, col: usize) -> Vec<C64> {
        (0..self.dim).map(|i| self.get(i, col)).collect()
    }

    pub fn with_basis(mut self, basis: Basis) -> Self {
        self.basis = basis;
        self
    }

    pub fn is_unitary_certified(&self) -> bool {
        self.unitary
    }

    /// `‖M*M − I‖_max`.
    pub fn unitary_defect(&self) -> f64 {
        let gram = self.adjoint().compose_unchecked(self);
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((gram.entries[i * n + j] - C64::new(target, 0.0)).norm());
            }
        }
        worst
    }

    /// Checks `‖M*M − I‖_max ≤ tol` and sets the unitary certificate.
    pub fn certify_unitary(mut self, tol: f64) -> Result<Self> {
        let defect = self.unitary_defect();
        if defect > tol {
            return Err(Error::invalid(format!(
                "unitary defect {defect:.3e} exceeds tolerance {tol:.1e}"
            )));
        }
        self.unitary = true;
        Ok(self)
    }

    pub(crate) fn assume_unitary(mut self) -> Self {
        self.unitary = true;
        self
    }

    fn check_dim(&self, other: &OperatorMatrix) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(())
    }

    /// `self · other`.
    pub fn compose(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.check_dim(other)?;
        Ok(self.compose_unchecked(other))
    }

    fn compose_unchecked(&self, other: &OperatorMatrix) -> OperatorMatrix {
        let n = self.dim;
        let mut out = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..n {
            let out_row = &mut out[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let other_row = &other.entries[k * n..(k + 1) * n];
                for (o, b) in out_row.iter_mut().zip(other_row) {
                    *o += a * b;
                }
            }
        }
        OperatorMatrix { dim: n, entries: out, basis: self.basis, unitary: self.unitary && other.unitary }
    }

    pub fn add(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.check_dim(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Ok(OperatorMatrix { dim: self.dim, entries, basis: self.basis, unitary: false })
    }

    pub fn sub(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.check_dim(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        Ok(OperatorMatrix { dim: self.dim, entries, basis: self.basis, unitary: false })
    }

    pub fn scale(&self, c: C64) -> OperatorMatrix {
        let entries = self.entries.iter().map(|a| a * c).collect();
        let unitary = self.unitary && (c.norm() - 1.0).abs() <= 1e-15;
        OperatorMatrix { dim: self.dim, entries, basis: self.basis, unitary }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> OperatorMatrix {
        let n = self.dim;
        let mut entries = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                entries[j * n + i] = self.entries[i * n + j].conj();
            }
        }
        OperatorMatrix { dim: n, entries, basis: self.basis, unitary: self.unitary }
    }

    /// `M^n` by binary exponentiation. Negative `n` is accepted only for
    /// unitary-certified matrices, where `M^{-1} = M*`.
    pub fn power(&self, n: i64) -> Result<OperatorMatrix> {
        if n < 0 {
            if !self.unitary {
                return Err(Error::NotInvertible(n));
            }
            return self.adjoint().power(-n);
        }
        let mut result = OperatorMatrix::identity(self.dim, self.basis);
        result.unitary = self.unitary || n == 0;
        let mut base = self.clone();
        let mut e = n as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = result.compose_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.compose_unchecked(&base);
            }
        }
        Ok(result)
    }

    pub fn matvec(&self, x: &[C64]) -> Result<Vec<C64>> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: x.len() });
        }
        Ok(self.matvec_unchecked(x))
    }

    pub(crate) fn matvec_unchecked(&self, x: &[C64]) -> Vec<C64> {
        let n = self.dim;
        (0..n)
            .map(|i| {
                self.entries[i * n..(i + 1) * n]
                    .iter()
                    .zip(x)
                    .fold(C64::new(0.0, 0.0), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub(crate) fn adjoint_matvec_unchecked(&self, x: &[C64]) -> Vec<C64> {
        let n = self.dim;
        let mut out = vec![C64::new(0.0, 0.0); n];
        for (i, xi) in x.iter().enumerate() {
            if xi.re == 0.0 && xi.im == 0.0 {
                continue;
            }
            for (o, a) in out.iter_mut().zip(&self.entries[i * n..(i + 1) * n]) {
                *o += a.conj() * xi;
            }
        }
        out
    }

    /// `max_{ij} |M_ij − N_ij|`.
    pub fn max_abs_diff(&self, other: &OperatorMatrix) -> Result<f64> {
        self.check_dim(other)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Spectral norm estimate from [`NORM_ITERATIONS`] steps of power
    /// iteration on `M*M`, stopping early once the estimate moves by less
    /// than `1e-14` relative. The estimate never exceeds the true norm by
    /// more than rounding.
    pub fn operator_norm(&self) -> f64 {
        let n = self.dim;
        let mut v: Vec<C64> = (0..n)
            .map(|i| C64::new(1.0 + 0.37 * (i as f64).sin(), 0.21 * (i as f64 + 1.0).cos()))
            .collect();
        normalize(&mut v);
        let mut estimate = 0.0f64;
        for _ in 0..NORM_ITERATIONS {
            let mv = self.matvec_unchecked(&v);
            let mut w = self.adjoint_matvec_unchecked(&mv);
            let rayleigh: f64 = mv.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let nw = normalize(&mut w);
            if nw == 0.0 {
                return rayleigh.max(estimate);
            }
            let change = (rayleigh - estimate).abs();
            estimate = rayleigh;
            v = w;
            if change <= 1e-14 * estimate.max(1e-300) {
                break;
            }
        }
        estimate
    }
}

fn normalize(v: &mut [C64]) -> f64 {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        for z in v.iter_mut() {
            *z /= norm;
        }
    }
    norm
}
