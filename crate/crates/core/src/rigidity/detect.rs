use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::operator::{compress, compress_images, Compression, LinearMap, PolynomialInT, WeightedVectorSequence};
use crate::C64;

/// Distances from `T^n` to each candidate `p(T)` at each scanned time.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitCandidateReport {
    pub candidates: Vec<PolynomialInT>,
    pub times: Vec<i64>,
    /// `table[t][c]` is `d(T^{times[t]}, candidates[c](T))`.
    pub table: Vec<Vec<f64>>,
    /// Candidate index minimizing the distance at each time, lowest index on ties.
    pub argmin: Vec<usize>,
    /// `(time, candidate)` pairs within `tol`.
    pub hits: Vec<(i64, usize)>,
    pub tol: f64,
}

impl LimitCandidateReport {
    pub fn min_distance(&self, time_index: usize) -> f64 {
        self.table[time_index][self.argmin[time_index]]
    }

    /// Global minimum, ties broken by smallest time then lowest candidate.
    pub fn best(&self) -> (i64, usize, f64) {
        let mut order: Vec<usize> = (0..self.times.len()).collect();
        order.sort_by_key(|&t| self.times[t]);
        let mut best: Option<(i64, usize, f64)> = None;
        for t in order {
            let c = self.argmin[t];
            let d = self.table[t][c];
            if best.is_none_or(|(_, _, bd)| d < bd) {
                best = Some((self.times[t], c, d));
            }
        }
        best.expect("nonempty report")
    }
}

/// All `Σ a_j T^j` with `j ∈ [min_exp, max_exp]`, `a_j ∈ {0, ½, 1}` and
/// `Σ a_j = 1`: monomials in increasing exponent, then `½(T^i + T^j)` for
/// `i < j` in lexicographic order.
pub fn convex_half_candidates(min_exp: i64, max_exp: i64) -> Vec<PolynomialInT> {
    let mut out: Vec<PolynomialInT> = (min_exp..=max_exp).map(PolynomialInT::monomial).collect();
    for i in min_exp..=max_exp {
        for j in i + 1..=max_exp {
            out.push(PolynomialInT::half_sum(i, j));
        }
    }
    out
}

pub(crate) fn candidate_compressions(
    powers: &BTreeMap<i64, Compression>,
    candidates: &[PolynomialInT],
    terms: usize,
) -> Vec<Compression> {
    candidates
        .iter()
        .map(|p| {
            let mut c = Compression::zeros(terms);
            for (n, a) in p.terms() {
                c.add_scaled(*a, &powers[n]);
            }
            c
        })
        .collect()
}

fn power_compression<M: LinearMap + ?Sized>(t: &M, n: i64, seq: &WeightedVectorSequence) -> Result<Compression> {
    let images = seq.vectors().iter().map(|x| t.apply_power(n, x)).collect::<Result<Vec<_>>>()?;
    compress_images(&images, seq)
}

/// Distance table between `T^n` for `n ∈ times` and each candidate.
pub fn weak_limit_detect<M: LinearMap + ?Sized>(
    t: &M,
    candidates: &[PolynomialInT],
    times: &[i64],
    tol: f64,
    seq: &WeightedVectorSequence,
) -> Result<LimitCandidateReport> {
    if candidates.is_empty() {
        return Err(Error::invalid("at least one candidate is required"));
    }
    if times.is_empty() {
        return Err(Error::invalid("at least one time is required"));
    }
    if t.dim() != seq.dim() {
        return Err(Error::DimensionMismatch { expected: seq.dim(), found: t.dim() });
    }
    let exponents: Vec<i64> = {
        let mut e: Vec<i64> = candidates.iter().flat_map(|p| p.terms().keys().copied()).collect();
        e.sort_unstable();
        e.dedup();
        e
    };
    let powers: BTreeMap<i64, Compression> = exponents
        .par_iter()
        .map(|&n| Ok((n, power_compression(t, n, seq)?)))
        .collect::<Result<_>>()?;
    let cand = candidate_compressions(&powers, candidates, seq.len());
    // walk the times in increasing order, advancing the images by the gaps
    let mut order: Vec<usize> = (0..times.len()).collect();
    order.sort_by_key(|&i| times[i]);
    let mut rows: Vec<Vec<f64>> = vec![Vec::new(); times.len()];
    let mut images: Vec<Vec<C64>> = Vec::new();
    let mut current: Option<i64> = None;
    for &ti in &order {
        let n = times[ti];
        images = match current {
            None => seq.vectors().iter().map(|x| t.apply_power(n, x)).collect::<Result<_>>()?,
            Some(prev) if prev == n => images,
            Some(prev) => images.iter().map(|y| t.apply_power(n - prev, y)).collect::<Result<_>>()?,
        };
        current = Some(n);
        let c = compress_images(&images, seq)?;
        rows[ti] = cand.iter().map(|p| c.distance(p)).collect();
    }
    Ok(finish_report(candidates, times, rows, tol))
}

/// Fills in argmins and hits for a finished distance table.
pub(crate) fn finish_report(
    candidates: &[PolynomialInT],
    times: &[i64],
    rows: Vec<Vec<f64>>,
    tol: f64,
) -> LimitCandidateReport {
    let argmin: Vec<usize> = rows
        .iter()
        .map(|row| {
            let mut best = 0;
            for (i, d) in row.iter().enumerate() {
                if *d < row[best] {
                    best = i;
                }
            }
            best
        })
        .collect();
    let mut hits = Vec::new();
    for (ti, row) in rows.iter().enumerate() {
        for (ci, d) in row.iter().enumerate() {
            if *d <= tol {
                hits.push((times[ti], ci));
            }
        }
    }
    LimitCandidateReport { candidates: candidates.to_vec(), times: times.to_vec(), table: rows, argmin, hits, tol }
}

/// `d(T^n, V)` in compressed form for a candidate `V = p(T)`; exposed for
/// experiments that reuse compressions.
pub fn distance_to_polynomial<M: LinearMap + ?Sized>(
    t: &M,
    n: i64,
    p: &PolynomialInT,
    seq: &WeightedVectorSequence,
) -> Result<f64> {
    let here = power_compression(t, n, seq)?;
    let mut target = Compression::zeros(seq.len());
    for (k, a) in p.terms() {
        target.add_scaled(*a, &power_compression(t, *k, seq)?);
    }
    Ok(here.distance(&target))
}

/// `d(A, λI)` helper for arbitrary maps.
pub fn distance_to_scalar<M: LinearMap + ?Sized>(a: &M, lambda: C64, seq: &WeightedVectorSequence) -> Result<f64> {
    let ca = compress(a, seq)?;
    let mut target = Compression::zeros(seq.len());
    let id = power_compression(a, 0, seq)?;
    target.add_scaled(lambda, &id);
    Ok(ca.distance(&target))
}
