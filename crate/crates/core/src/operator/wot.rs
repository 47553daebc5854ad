use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::operator::map::{check_len, LinearMap};
use crate::operator::OperatorMatrix;
use crate::C64;

/// Number of vectors used when no sequence is given explicitly.
pub const DEFAULT_TERMS: usize = 32;

/// `⟨u, v⟩ = Σ u_i conj(v_i)`.
pub fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).fold(C64::new(0.0, 0.0), |acc, (a, b)| acc + a * b.conj())
}

pub fn norm2(u: &[C64]) -> f64 {
    u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Unit vectors `x_1, …, x_J` with weights `2^{-j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedVectorSequence {
    dim: usize,
    vectors: Vec<Vec<C64>>,
    label: String,
}

impl WeightedVectorSequence {
    /// First `min(terms, dim)` canonical basis vectors.
    pub fn canonical(dim: usize, terms: usize) -> Result<Self> {
        let j = terms.min(dim);
        if j == 0 {
            return Err(Error::invalid("weighted sequence needs at least one vector"));
        }
        let vectors = (0..j)
            .map(|k| {
                let mut v = vec![C64::new(0.0, 0.0); dim];
                v[k] = C64::new(1.0, 0.0);
                v
            })
            .collect();
        Ok(WeightedVectorSequence { dim, vectors, label: format!("canonical-{j}") })
    }

    /// Normalizes each vector. Zero vectors are rejected.
    pub fn from_vectors(vectors: Vec<Vec<C64>>, label: impl Into<String>) -> Result<Self> {
        let dim = vectors.first().map(|v| v.len()).ok_or_else(|| Error::invalid("empty vector sequence"))?;
        let mut out = Vec::with_capacity(vectors.len());
        for v in vectors {
            check_len(dim, &v)?;
            let n = norm2(&v);
            if n == 0.0 || !n.is_finite() {
                return Err(Error::invalid("sequence vectors must be nonzero and finite"));
            }
            out.push(v.into_iter().map(|z| z / n).collect());
        }
        Ok(WeightedVectorSequence { dim, vectors: out, label: label.into() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<C64>] {
        &self.vectors
    }

    pub fn vector(&self, j: usize) -> &[C64] {
        &self.vectors[j]
    }

    /// Weight of the zero-based vector `j`, namely `2^{-(j+1)}`.
    pub fn weight(&self, j: usize) -> f64 {
        0.5f64.powi(j as i32 + 1)
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

/// The `J × J` block `⟨A x_j, x_l⟩`, stored as `entries[l * J + j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Compression {
    terms: usize,
    entries: Vec<C64>,
}

impl Compression {
    pub fn zeros(terms: usize) -> Self {
        Compression { terms, entries: vec![C64::new(0.0, 0.0); terms * terms] }
    }

    pub fn terms(&self) -> usize {
        self.terms
    }

    /// `entries[l * terms + j] = ⟨A x_j, x_l⟩`.
    pub fn from_entries(terms: usize, entries: Vec<C64>) -> Result<Self> {
        if entries.len() != terms * terms {
            return Err(Error::DimensionMismatch { expected: terms * terms, found: entries.len() });
        }
        Ok(Compression { terms, entries })
    }

    pub fn get(&self, l: usize, j: usize) -> C64 {
        self.entries[l * self.terms + j]
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, c: C64, other: &Compression) {
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            *a += c * b;
        }
    }

    /// Truncated WOT distance between the two operators behind the blocks.
    pub fn distance(&self, other: &Compression) -> f64 {
        let j = self.terms.min(other.terms);
        let mut total = 0.0;
        for l in 0..j {
            for k in 0..j {
                let w = 0.5f64.powi((k + l) as i32 + 2);
                total += w * (self.get(l, k) - other.get(l, k)).norm();
            }
        }
        total
    }
}

/// Compression of `A` from the images `A x_j`.
pub fn compress_images(images: &[Vec<C64>], seq: &WeightedVectorSequence) -> Result<Compression> {
    if images.len() != seq.len() {
        return Err(Error::DimensionMismatch { expected: seq.len(), found: images.len() });
    }
    let j = seq.len();
    let mut c = Compression::zeros(j);
    for (k, img) in images.iter().enumerate() {
        check_len(seq.dim(), img)?;
        for l in 0..j {
            c.entries[l * j + k] = inner(img, seq.vector(l));
        }
    }
    Ok(c)
}

pub fn compress<M: LinearMap + ?Sized>(op: &M, seq: &WeightedVectorSequence) -> Result<Compression> {
    if op.dim() != seq.dim() {
        return Err(Error::DimensionMismatch { expected: seq.dim(), found: op.dim() });
    }
    let images: Vec<Vec<C64>> = seq.vectors().iter().map(|x| op.apply(x)).collect();
    compress_images(&images, seq)
}

/// `Σ_{j,l} |⟨(A−B)x_j, x_l⟩| / 2^{j+l}` over the sequence.
pub fn wot_distance(a: &OperatorMatrix, b: &OperatorMatrix, seq: &WeightedVectorSequence) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    let diff = a.sub(b)?;
    let zero = OperatorMatrix::zeros(a.dim(), a.basis());
    Ok(compress(&diff, seq)?.distance(&compress(&zero, seq)?))
}

pub fn wot_distance_maps<A: LinearMap + ?Sized, B: LinearMap + ?Sized>(
    a: &A,
    b: &B,
    seq: &WeightedVectorSequence,
) -> Result<f64> {
    Ok(compress(a, seq)?.distance(&compress(b, seq)?))
}

/// A constant `L` with `d(TA, TB) ≤ L·d(A, B)` for all `A, B`.
///
/// Exists when every `T* x_l` lies in the span of the sequence. With
/// `T* x_l = Σ_m c_lm x_m` the bound is `max_m Σ_l |c_lm| 2^{m−l}`.
/// Returns `None` when some `T* x_l` leaves the span.
pub fn left_composition_lipschitz(t: &OperatorMatrix, seq: &WeightedVectorSequence) -> Option<f64> {
    if t.dim() != seq.dim() {
        return None;
    }
    let dim = seq.dim();
    let j = seq.len();
    let x = DMatrix::from_fn(dim, j, |r, c| seq.vector(c)[r]);
    let svd = x.clone().svd(true, true);
    let adj = t.adjoint();
    let mut coeffs = vec![vec![C64::new(0.0, 0.0); j]; j];
    for (l, row) in coeffs.iter_mut().enumerate() {
        let b = DVector::from_vec(adj.matvec_unchecked(seq.vector(l)));
        let c = svd.solve(&b, 1e-12).ok()?;
        let resid = (&x * &c - &b).norm();
        if resid > 1e-9 * b.norm().max(1.0) {
            return None;
        }
        for m in 0..j {
            row[m] = c[m];
        }
    }
    let mut best = 0.0f64;
    for m in 0..j {
        let s: f64 = (0..j).map(|l| coeffs[l][m].norm() * 2f64.powi(m as i32 - l as i32)).sum();
        best = best.max(s);
    }
    Some(best)
}
