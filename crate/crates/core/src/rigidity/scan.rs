use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::operator::{inner, LinearMap, OperatorMatrix, WeightedVectorSequence};
use crate::C64;

/// Steps between re-orthogonalizations of the tracked vectors.
pub const REORTHO_INTERVAL: u64 = 512;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidityEntry {
    pub n: u64,
    pub distance: f64,
}

/// Distances `d(T^n, λI)` for `n = 1..n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct RigidityReport {
    pub lambda: C64,
    pub entries: Vec<RigidityEntry>,
    pub best: RigidityEntry,
    pub seq_label: String,
    pub seq_terms: usize,
}

impl RigidityReport {
    fn from_entries(lambda: C64, entries: Vec<RigidityEntry>, seq: &WeightedVectorSequence) -> Self {
        let mut best = entries[0];
        for e in &entries[1..] {
            if e.distance < best.distance {
                best = *e;
            }
        }
        RigidityReport { lambda, entries, best, seq_label: seq.label().to_string(), seq_terms: seq.len() }
    }

    pub fn distance_at(&self, n: u64) -> Option<f64> {
        let first = self.entries.first()?.n;
        self.entries.get(n.checked_sub(first)? as usize).map(|e| e.distance)
    }

    /// Entries strictly below every earlier distance.
    pub fn record_minima(&self) -> Vec<RigidityEntry> {
        let mut out = Vec::new();
        let mut current = f64::INFINITY;
        for e in &self.entries {
            if e.distance < current {
                current = e.distance;
                out.push(*e);
            }
        }
        out
    }
}

fn gram(seq: &WeightedVectorSequence) -> Vec<C64> {
    let j = seq.len();
    let mut g = vec![C64::new(0.0, 0.0); j * j];
    for l in 0..j {
        for k in 0..j {
            g[l * j + k] = inner(seq.vector(k), seq.vector(l));
        }
    }
    g
}

fn is_orthonormal(g: &[C64], j: usize) -> bool {
    (0..j).all(|l| (0..j).all(|k| (g[l * j + k] - C64::new(if l == k { 1.0 } else { 0.0 }, 0.0)).norm() <= 1e-12))
}

fn distance_to_multiple(images: &[Vec<C64>], seq: &WeightedVectorSequence, g: &[C64], lambda: C64) -> f64 {
    let j = seq.len();
    let mut total = 0.0;
    for (k, y) in images.iter().enumerate() {
        for l in 0..j {
            let w = seq.weight(k) * seq.weight(l);
            total += w * (inner(y, seq.vector(l)) - lambda * g[l * j + k]).norm();
        }
    }
    total
}

/// Modified Gram–Schmidt on the tracked images.
fn reorthonormalize(images: &mut [Vec<C64>]) {
    for k in 0..images.len() {
        let (done, rest) = images.split_at_mut(k);
        let y = &mut rest[0];
        for q in done.iter() {
            let c = inner(y, q);
            for (a, b) in y.iter_mut().zip(q) {
                *a -= c * b;
            }
        }
        let n = crate::operator::norm2(y);
        if n > 0.0 {
            for a in y.iter_mut() {
                *a /= n;
            }
        }
    }
}

fn check_scan_input<M: LinearMap + ?Sized>(t: &M, lambda: C64, n_max: u64, seq: &WeightedVectorSequence) -> Result<()> {
    if lambda.norm() > 1.0 + 1e-12 {
        return Err(Error::invalid("lambda must satisfy |lambda| <= 1"));
    }
    if n_max == 0 {
        return Err(Error::invalid("n_max must be at least 1"));
    }
    if t.dim() != seq.dim() {
        return Err(Error::DimensionMismatch { expected: seq.dim(), found: t.dim() });
    }
    Ok(())
}

/// Scans `n = start..=end`, beginning from the given images of `T^{start-1}`.
fn scan_segment<M: LinearMap + ?Sized>(
    t: &M,
    unitary: bool,
    lambda: C64,
    seq: &WeightedVectorSequence,
    g: &[C64],
    mut images: Vec<Vec<C64>>,
    start: u64,
    end: u64,
) -> Vec<RigidityEntry> {
    let reortho = unitary && is_orthonormal(g, seq.len());
    let mut out = Vec::with_capacity((end + 1 - start) as usize);
    for n in start..=end {
        for y in images.iter_mut() {
            *y = t.apply(y);
        }
        if reortho && n % REORTHO_INTERVAL == 0 {
            reorthonormalize(&mut images);
        }
        out.push(RigidityEntry { n, distance: distance_to_multiple(&images, seq, g, lambda) });
    }
    out
}

/// `d(T^n, λI)` for `n = 1..=n_max` by incremental multiplication.
pub fn lambda_rigidity_scan(
    t: &OperatorMatrix,
    lambda: C64,
    n_max: u64,
    seq: &WeightedVectorSequence,
) -> Result<RigidityReport> {
    lambda_rigidity_scan_map(t, t.is_unitary_certified(), lambda, n_max, seq)
}

/// [`lambda_rigidity_scan`] for matrix-free maps. `unitary` enables
/// periodic re-orthonormalization when the sequence is orthonormal.
pub fn lambda_rigidity_scan_map<M: LinearMap + ?Sized>(
    t: &M,
    unitary: bool,
    lambda: C64,
    n_max: u64,
    seq: &WeightedVectorSequence,
) -> Result<RigidityReport> {
    check_scan_input(t, lambda, n_max, seq)?;
    let g = gram(seq);
    let entries = scan_segment(t, unitary, lambda, seq, &g, seq.vectors().to_vec(), 1, n_max);
    Ok(RigidityReport::from_entries(lambda, entries, seq))
}

/// Splits `1..=n_max` into `chunks` contiguous ranges scanned in parallel.
/// Each range starts from `T^{start-1} x_j` computed directly. The result
/// depends on `chunks` only through rounding.
pub fn lambda_rigidity_scan_parallel<M: LinearMap + ?Sized>(
    t: &M,
    unitary: bool,
    lambda: C64,
    n_max: u64,
    seq: &WeightedVectorSequence,
    chunks: usize,
) -> Result<RigidityReport> {
    check_scan_input(t, lambda, n_max, seq)?;
    let chunks = (chunks.max(1) as u64).min(n_max);
    let g = gram(seq);
    let size = n_max.div_ceil(chunks);
    let ranges: Vec<(u64, u64)> = (0..chunks)
        .map(|c| (c * size + 1, ((c + 1) * size).min(n_max)))
        .filter(|(a, b)| a <= b)
        .collect();
    let parts: Vec<Result<Vec<RigidityEntry>>> = ranges
        .par_iter()
        .map(|&(a, b)| {
            let images = seq
                .vectors()
                .iter()
                .map(|x| t.apply_power(a as i64 - 1, x))
                .collect::<Result<Vec<_>>>()?;
            Ok(scan_segment(t, unitary, lambda, seq, &g, images, a, b))
        })
        .collect();
    let mut entries = Vec::with_capacity(n_max as usize);
    for p in parts {
        entries.extend(p?);
    }
    Ok(RigidityReport::from_entries(lambda, entries, seq))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::Basis;
    use crate::transformations::{mean_zero_restrict, rotation_koopman, RotationSpec};

    #[test]
    fn identity_is_rigid_everywhere() {
        let t = OperatorMatrix::identity(6, Basis::Atom);
        let seq = WeightedVectorSequence::canonical(6, 6).unwrap();
        let r = lambda_rigidity_scan(&t, C64::new(1.0, 0.0), 20, &seq).unwrap();
        assert!(r.entries.iter().all(|e| e.distance == 0.0));
        assert_eq!(r.best.n, 1);
    }

    #[test]
    fn nilpotent_shift_reaches_zero() {
        let n = 5;
        let t = OperatorMatrix::from_fn(n, Basis::Atom, |i, j| C64::new(if i == j + 1 { 1.0 } else { 0.0 }, 0.0)).unwrap();
        let seq = WeightedVectorSequence::canonical(n, 32).unwrap();
        let r = lambda_rigidity_scan(&t, C64::new(0.0, 0.0), 12, &seq).unwrap();
        for e in &r.entries {
            assert_eq!(e.distance == 0.0, e.n >= n as u64, "n={}", e.n);
        }
    }

    #[test]
    fn golden_rotation_minima_at_fibonacci() {
        let t = mean_zero_restrict(&rotation_koopman(&RotationSpec::golden(64).unwrap())).unwrap();
        let seq = WeightedVectorSequence::canonical(t.dim(), 32).unwrap();
        let r = lambda_rigidity_scan(&t, C64::new(1.0, 0.0), 1000, &seq).unwrap();
        let records: Vec<u64> = r.record_minima().iter().map(|e| e.n).collect();
        assert_eq!(records, vec![1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233, 377, 610, 987]);
        assert!(r.best.distance < 1e-2);
    }

    #[test]
    fn parallel_scan_agrees() {
        let t = mean_zero_restrict(&rotation_koopman(&RotationSpec::golden(16).unwrap())).unwrap();
        let seq = WeightedVectorSequence::canonical(t.dim(), 8).unwrap();
        let a = lambda_rigidity_scan(&t, C64::new(1.0, 0.0), 300, &seq).unwrap();
        let b = lambda_rigidity_scan_parallel(&t, true, C64::new(1.0, 0.0), 300, &seq, 4).unwrap();
        assert_eq!(a.entries.len(), b.entries.len());
        for (x, y) in a.entries.iter().zip(&b.entries) {
            assert_eq!(x.n, y.n);
            assert!((x.distance - y.distance).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_large_lambda() {
        let t = OperatorMatrix::identity(2, Basis::Atom);
        let seq = WeightedVectorSequence::canonical(2, 2).unwrap();
        assert!(lambda_rigidity_scan(&t, C64::new(1.5, 0.0), 3, &seq).is_err());
    }
}
