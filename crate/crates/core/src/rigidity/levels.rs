use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::operator::{Compression, PolynomialInT, WeightedVectorSequence};
use crate::rigidity::detect::{candidate_compressions, finish_report, LimitCandidateReport};
use crate::transformations::{CycleTable, IntervalPermutation};
use crate::C64;

/// Level `level` of the stage-`stage` tower (1-based stage).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LevelSet {
    pub stage: usize,
    pub level: u32,
}

/// Levels of stages `1..=max_stage`, coarsest stage first and bottom
/// level first, truncated to `terms`.
pub fn level_tests(p: &IntervalPermutation, max_stage: usize, terms: usize) -> Vec<LevelSet> {
    let mut out = Vec::new();
    for stage in 1..=max_stage.min(p.heights().len()) {
        for level in 0..p.heights()[stage - 1] as u32 {
            if out.len() == terms {
                return out;
            }
            out.push(LevelSet { stage, level });
        }
    }
    out
}

/// Dense normalized indicators of `tests` in the atom basis.
pub fn level_sequence(p: &IntervalPermutation, tests: &[LevelSet]) -> Result<WeightedVectorSequence> {
    let vectors = tests
        .iter()
        .map(|t| {
            (0..p.atom_count())
                .map(|i| {
                    let inside = p.level_of(t.stage, i) == Some(t.level);
                    C64::new(if inside { p.mass_f64(i).sqrt() } else { 0.0 }, 0.0)
                })
                .collect()
        })
        .collect();
    WeightedVectorSequence::from_vectors(vectors, format!("levels-{}", tests.len()))
}

/// Exact compressions of Koopman powers against normalized level
/// indicators: `⟨Uⁿ x_j, x_l⟩ = m(A_l ∩ T⁻ⁿA_j) / √(m(A_j) m(A_l))`.
/// Memory is linear in the atom count.
#[derive(Debug, Clone)]
pub struct LevelCompressor {
    table: CycleTable,
    masses: Vec<f64>,
    /// Tests containing atom `i` are `members[start[i]..start[i + 1]]`.
    start: Vec<usize>,
    members: Vec<u32>,
    norms: Vec<f64>,
}

impl LevelCompressor {
    pub fn new(p: &IntervalPermutation, tests: &[LevelSet]) -> Result<Self> {
        if tests.is_empty() {
            return Err(Error::invalid("at least one level is required"));
        }
        let index: BTreeMap<LevelSet, u32> = tests.iter().enumerate().map(|(k, t)| (*t, k as u32)).collect();
        if index.len() != tests.len() {
            return Err(Error::invalid("levels must be distinct"));
        }
        let stages: Vec<usize> = {
            let mut s: Vec<usize> = tests.iter().map(|t| t.stage).collect();
            s.sort_unstable();
            s.dedup();
            s
        };
        let k = p.atom_count();
        let masses: Vec<f64> = (0..k).map(|i| p.mass_f64(i)).collect();
        let mut start = Vec::with_capacity(k + 1);
        let mut members = Vec::new();
        let mut mass_of = vec![0.0; tests.len()];
        start.push(0);
        for i in 0..k {
            for &stage in &stages {
                if let Some(level) = p.level_of(stage, i) {
                    if let Some(&t) = index.get(&LevelSet { stage, level }) {
                        members.push(t);
                        mass_of[t as usize] += masses[i];
                    }
                }
            }
            start.push(members.len());
        }
        if let Some(t) = mass_of.iter().position(|m| *m == 0.0) {
            return Err(Error::invalid(format!("level {:?} is empty", tests[t])));
        }
        Ok(LevelCompressor {
            table: CycleTable::new(p.perm()),
            masses,
            start,
            members,
            norms: mass_of.iter().map(|m| m.sqrt()).collect(),
        })
    }

    pub fn terms(&self) -> usize {
        self.norms.len()
    }

    fn tests_of(&self, i: usize) -> &[u32] {
        &self.members[self.start[i]..self.start[i + 1]]
    }

    pub fn compress_power(&self, n: i64) -> Compression {
        let j = self.terms();
        let mut acc = vec![0.0; j * j];
        for i in 0..self.masses.len() {
            let here = self.tests_of(i);
            if here.is_empty() {
                continue;
            }
            let there = self.tests_of(self.table.image(i, n));
            for &l in here {
                for &t in there {
                    acc[l as usize * j + t as usize] += self.masses[i];
                }
            }
        }
        let entries = acc
            .iter()
            .enumerate()
            .map(|(idx, a)| C64::new(a / (self.norms[idx / j] * self.norms[idx % j]), 0.0))
            .collect();
        Compression::from_entries(j, entries).expect("square block")
    }
}

/// [`weak_limit_detect`](crate::rigidity::weak_limit_detect) for the
/// Koopman operator of `p` against level indicators, computed exactly.
pub fn weak_limit_detect_levels(
    p: &IntervalPermutation,
    candidates: &[PolynomialInT],
    times: &[i64],
    tol: f64,
    tests: &[LevelSet],
) -> Result<LimitCandidateReport> {
    if candidates.is_empty() {
        return Err(Error::invalid("at least one candidate is required"));
    }
    if times.is_empty() {
        return Err(Error::invalid("at least one time is required"));
    }
    let c = LevelCompressor::new(p, tests)?;
    let mut exponents: Vec<i64> = candidates.iter().flat_map(|q| q.terms().keys().copied()).collect();
    exponents.sort_unstable();
    exponents.dedup();
    let powers: BTreeMap<i64, Compression> = exponents.par_iter().map(|&n| (n, c.compress_power(n))).collect();
    let cand = candidate_compressions(&powers, candidates, c.terms());
    let rows: Vec<Vec<f64>> = times
        .par_iter()
        .map(|&n| {
            let here = c.compress_power(n);
            cand.iter().map(|q| here.distance(q)).collect()
        })
        .collect();
    Ok(finish_report(candidates, times, rows, tol))
}
