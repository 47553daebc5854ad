use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kronecker::AtomicSpectralMeasure;
use crate::C64;

/// Slack allowed when checking `|f| ≤ 1` and `|target| = 1`.
const MODULUS_TOL: f64 = 1e-12;

/// Per-atom values of a multiplier `f`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplicationData {
    values: Vec<C64>,
    sup_norm: f64,
}

impl MultiplicationData {
    pub fn new(values: Vec<C64>) -> Result<Self> {
        if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::invalid("multiplier values must be finite"));
        }
        let sup_norm = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
        Ok(MultiplicationData { values, sup_norm })
    }

    /// Unimodular values `e^{2πiφ}` from phases in turns.
    pub fn from_phases(phases: &[f64]) -> Result<Self> {
        Self::new(phases.iter().map(|p| C64::from_polar(1.0, std::f64::consts::TAU * p)).collect())
    }

    /// `f(z) = z` on the atoms of `measure`.
    pub fn identity_character(measure: &AtomicSpectralMeasure) -> Self {
        Self::new(measure.points()).expect("finite")
    }

    pub fn constant(c: C64, len: usize) -> Result<Self> {
        Self::new(vec![c; len])
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn sup_norm(&self) -> f64 {
        self.sup_norm
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Disjoint nonempty cells covering the atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellPartition {
    cells: Vec<Vec<usize>>,
}

impl CellPartition {
    pub fn new(cells: Vec<Vec<usize>>, atom_count: usize) -> Result<Self> {
        let mut seen = vec![false; atom_count];
        for cell in &cells {
            if cell.is_empty() {
                return Err(Error::invalid("partition cells must be nonempty"));
            }
            for &i in cell {
                if i >= atom_count || seen[i] {
                    return Err(Error::invalid("partition cells must be disjoint atom sets"));
                }
                seen[i] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::invalid("partition cells must cover every atom"));
        }
        Ok(CellPartition { cells })
    }

    /// Atom `i` goes to cell `labels[i]`; cells are ordered by first appearance.
    pub fn from_labels<T: PartialEq + Clone>(labels: &[T]) -> Self {
        let mut keys: Vec<T> = Vec::new();
        let mut cells: Vec<Vec<usize>> = Vec::new();
        for (i, l) in labels.iter().enumerate() {
            match keys.iter().position(|k| k == l) {
                Some(c) => cells[c].push(i),
                None => {
                    keys.push(l.clone());
                    cells.push(vec![i]);
                }
            }
        }
        CellPartition { cells }
    }

    pub fn singletons(atom_count: usize) -> Self {
        CellPartition { cells: (0..atom_count).map(|i| vec![i]).collect() }
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }
}

/// `max_i |z_i^n − targets_i|`.
pub fn character_residual(measure: &AtomicSpectralMeasure, targets: &[C64], n: i64) -> f64 {
    measure
        .angles()
        .iter()
        .zip(targets)
        .map(|(a, t)| (a.power(n) - t).norm())
        .fold(0.0, f64::max)
}

/// Order of the exponent scan: `0, 1, −1, 2, −2, …`.
fn scan_exponent(k: u64) -> i64 {
    if k == 0 {
        0
    } else if k % 2 == 1 {
        k.div_ceil(2) as i64
    } else {
        -((k / 2) as i64)
    }
}

const SCAN_BLOCK: u64 = 1 << 14;

/// Smallest `|n| ≤ n_max` (positive first on ties) with
/// `max_i |z_i^n − targets_i| < eps`.
pub fn character_match(
    measure: &AtomicSpectralMeasure,
    targets: &[C64],
    eps: f64,
    n_max: u64,
) -> Result<Option<i64>> {
    if targets.len() != measure.len() {
        return Err(Error::DimensionMismatch { expected: measure.len(), found: targets.len() });
    }
    if targets.iter().any(|t| (t.norm() - 1.0).abs() > MODULUS_TOL) {
        return Err(Error::invalid("character targets must be unimodular"));
    }
    if eps <= 0.0 {
        return Err(Error::invalid("eps must be positive"));
    }
    let last = 2 * n_max;
    let blocks = last / SCAN_BLOCK + 1;
    Ok((0..blocks).into_par_iter().find_map_first(|b| {
        let lo = b * SCAN_BLOCK;
        let hi = ((b + 1) * SCAN_BLOCK).min(last + 1);
        (lo..hi).map(scan_exponent).find(|&n| character_residual(measure, targets, n) < eps)
    }))
}

/// Unimodular replacement of a multiplier on each cell.
#[derive(Debug, Clone, PartialEq)]
pub struct LyapunovMatch {
    /// Phases of `h` in turns, so `|h| = 1` holds by construction.
    pub phases: Vec<f64>,
    pub h: MultiplicationData,
    /// `|∫_{A_s} (f − h) dμ|` per cell.
    pub cell_errors: Vec<f64>,
    /// `3·max_{i∈A_s} w_i` per cell.
    pub cell_bounds: Vec<f64>,
}

fn phase_of(z: C64) -> f64 {
    (z.arg() / std::f64::consts::TAU).rem_euclid(1.0)
}

/// Replaces `f` (with `|f| ≤ 1`) by a unimodular `h` whose integral over each
/// cell is close to that of `f`.
///
/// On a cell with `α = ∫ f`, atoms are taken in decreasing weight: first a
/// set of mass close to `|α|` receives `α/|α|`, then the rest is split into
/// `+1` and `−1` groups of nearly equal mass. Cells on which `f` is already
/// unimodular keep `h = f`.
pub fn lyapunov_match(
    measure: &AtomicSpectralMeasure,
    partition: &CellPartition,
    f: &MultiplicationData,
) -> Result<LyapunovMatch> {
    let n = measure.len();
    if f.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: f.len() });
    }
    if f.sup_norm() > 1.0 + MODULUS_TOL {
        return Err(Error::invalid(format!("multiplier sup norm {} exceeds 1", f.sup_norm())));
    }
    let mut covered = vec![false; n];
    for cell in partition.cells() {
        for &i in cell {
            if i >= n {
                return Err(Error::invalid("partition refers to atoms outside the measure"));
            }
            covered[i] = true;
        }
    }
    if covered.iter().any(|c| !c) {
        return Err(Error::invalid("partition does not cover the measure"));
    }
    let w = measure.weights_f64();
    let vals = f.values();
    let mut phases = vec![0.0; n];
    let mut hv = vec![C64::new(1.0, 0.0); n];
    let mut cell_errors = Vec::with_capacity(partition.cells().len());
    let mut cell_bounds = Vec::with_capacity(partition.cells().len());
    for cell in partition.cells() {
        let w_max = cell.iter().map(|&i| w[i]).fold(0.0, f64::max);
        cell_bounds.push(3.0 * w_max);
        let alpha: C64 = cell.iter().map(|&i| w[i] * vals[i]).sum();
        if cell.iter().all(|&i| (vals[i].norm() - 1.0).abs() <= MODULUS_TOL) {
            for &i in cell {
                phases[i] = phase_of(vals[i]);
                hv[i] = vals[i];
            }
            cell_errors.push(0.0);
            continue;
        }
        let delta = alpha.norm();
        let (k_phase, k_val) = if delta == 0.0 { (0.0, C64::new(1.0, 0.0)) } else { (phase_of(alpha), alpha / delta) };
        let mut order = cell.clone();
        order.sort_by(|&a, &b| w[b].total_cmp(&w[a]).then(a.cmp(&b)));
        let mut selected = 0.0;
        let mut rest = Vec::with_capacity(order.len());
        for &i in &order {
            if (selected + w[i] - delta).abs() < (selected - delta).abs() {
                selected += w[i];
                phases[i] = k_phase;
                hv[i] = k_val;
            } else {
                rest.push(i);
            }
        }
        let (mut plus, mut minus) = (0.0, 0.0);
        for &i in &rest {
            if plus <= minus {
                plus += w[i];
                phases[i] = 0.0;
                hv[i] = C64::new(1.0, 0.0);
            } else {
                minus += w[i];
                phases[i] = 0.5;
                hv[i] = C64::new(-1.0, 0.0);
            }
        }
        let h_int: C64 = cell.iter().map(|&i| w[i] * hv[i]).sum();
        cell_errors.push((alpha - h_int).norm());
    }
    let h = MultiplicationData::new(hv)?;
    Ok(LyapunovMatch { phases, h, cell_errors, cell_bounds })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn equal_measure(k: usize) -> AtomicSpectralMeasure {
        let angles: Vec<f64> = (0..k).map(|i| (i as f64 * 0.754877666).fract()).collect();
        AtomicSpectralMeasure::uniform(&angles).unwrap()
    }

    #[test]
    fn trivial_targets_match_at_zero() {
        let m = equal_measure(3);
        assert_eq!(character_match(&m, &[C64::new(1.0, 0.0); 3], 1e-3, 10).unwrap(), Some(0));
    }

    #[test]
    fn irrational_atom_reaches_minus_one() {
        let m = AtomicSpectralMeasure::uniform(&[2f64.sqrt() - 1.0]).unwrap();
        let n = character_match(&m, &[C64::new(-1.0, 0.0)], 1e-2, 100_000).unwrap().unwrap();
        assert!(character_residual(&m, &[C64::new(-1.0, 0.0)], n) < 1e-2);
    }

    #[test]
    fn rational_orbit_misses_target() {
        let m = AtomicSpectralMeasure::uniform(&[0.25]).unwrap();
        let t = C64::from_polar(1.0, 1.0);
        assert_eq!(character_match(&m, &[t], 1e-3, 1000).unwrap(), None);
    }

    #[test]
    fn positive_exponent_wins_ties() {
        let m = AtomicSpectralMeasure::uniform(&[0.25]).unwrap();
        // i^1 = i and i^{-3} = i: the scan meets 1 first
        assert_eq!(character_match(&m, &[C64::new(0.0, 1.0)], 1e-9, 10).unwrap(), Some(1));
        assert_eq!(character_match(&m, &[C64::new(0.0, -1.0)], 1e-9, 10).unwrap(), Some(-1));
    }

    #[test]
    fn unimodular_input_is_kept() {
        let m = equal_measure(4);
        let f = MultiplicationData::identity_character(&m);
        let r = lyapunov_match(&m, &CellPartition::singletons(4), &f).unwrap();
        assert_eq!(r.h, f);
        assert!(r.cell_errors.iter().all(|e| *e == 0.0));
    }

    #[test]
    fn zero_cell_balances_exactly() {
        let m = equal_measure(8);
        let f = MultiplicationData::constant(C64::new(0.0, 0.0), 8).unwrap();
        let p = CellPartition::new(vec![(0..8).collect()], 8).unwrap();
        let r = lyapunov_match(&m, &p, &f).unwrap();
        let plus = r.h.values().iter().filter(|z| **z == C64::new(1.0, 0.0)).count();
        let minus = r.h.values().iter().filter(|z| **z == C64::new(-1.0, 0.0)).count();
        assert_eq!((plus, minus), (4, 4));
        assert!(r.cell_errors[0] < 1e-15);
    }

    #[test]
    fn half_constant_is_within_bound() {
        let m = equal_measure(64);
        let f = MultiplicationData::constant(C64::new(0.5, 0.0), 64).unwrap();
        let p = CellPartition::new(vec![(0..64).collect()], 64).unwrap();
        let r = lyapunov_match(&m, &p, &f).unwrap();
        assert!(r.cell_errors[0] <= 3.0 / 64.0);
        assert!(r.h.values().iter().all(|z| (z.norm() - 1.0).abs() <= 1e-15));
    }

    #[test]
    fn rejects_large_multiplier() {
        let m = equal_measure(2);
        let f = MultiplicationData::constant(C64::new(1.5, 0.0), 2).unwrap();
        assert!(lyapunov_match(&m, &CellPartition::singletons(2), &f).is_err());
        assert!(CellPartition::new(vec![vec![0], vec![0, 1]], 2).is_err());
        assert!(CellPartition::new(vec![vec![0]], 2).is_err());
    }
}
