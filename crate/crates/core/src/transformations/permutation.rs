use num_rational::Rational64;
use num_traits::{CheckedAdd, One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::operator::{Basis, LinearMap, OperatorMatrix};
use crate::C64;

/// A measure-preserving permutation of finitely many atoms.
///
/// `perm[i]` is the image of atom `i`. Masses are exact rationals summing to
/// one and invariant under `perm`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalPermutation {
    perm: Vec<usize>,
    masses: Vec<Rational64>,
    heights: Vec<usize>,
    /// `level_labels[k][i]` is the stage-`k+1` tower level containing atom
    /// `i`, or `None` when `i` is a spacer added later.
    level_labels: Vec<Vec<Option<u32>>>,
}

pub(crate) fn check_bijection(perm: &[usize]) -> Result<()> {
    if perm.is_empty() {
        return Err(Error::invalid("permutation needs at least one atom"));
    }
    let mut seen = vec![false; perm.len()];
    for &t in perm {
        if t >= perm.len() || seen[t] {
            return Err(Error::invalid("map is not a bijection"));
        }
        seen[t] = true;
    }
    Ok(())
}

pub(crate) fn exact_total(masses: &[Rational64]) -> Result<Rational64> {
    let mut total = Rational64::zero();
    for m in masses {
        total = total.checked_add(m).ok_or(Error::Overflow)?;
    }
    Ok(total)
}

impl IntervalPermutation {
    /// Uniform masses `1/K`.
    pub fn uniform(perm: Vec<usize>) -> Result<Self> {
        check_bijection(&perm)?;
        let k = i64::try_from(perm.len()).map_err(|_| Error::Overflow)?;
        let masses = vec![Rational64::new(1, k); perm.len()];
        Ok(IntervalPermutation { perm, masses, heights: Vec::new(), level_labels: Vec::new() })
    }

    pub fn with_masses(perm: Vec<usize>, masses: Vec<Rational64>) -> Result<Self> {
        check_bijection(&perm)?;
        if masses.len() != perm.len() {
            return Err(Error::DimensionMismatch { expected: perm.len(), found: masses.len() });
        }
        if masses.iter().any(|m| *m <= Rational64::zero()) {
            return Err(Error::invalid("atom masses must be positive"));
        }
        if exact_total(&masses)? != Rational64::one() {
            return Err(Error::invalid("atom masses must sum to 1"));
        }
        if perm.iter().enumerate().any(|(i, &t)| masses[t] != masses[i]) {
            return Err(Error::invalid("permutation does not preserve the atom masses"));
        }
        Ok(IntervalPermutation { perm, masses, heights: Vec::new(), level_labels: Vec::new() })
    }

    pub(crate) fn with_towers(mut self, heights: Vec<usize>, level_labels: Vec<Vec<Option<u32>>>) -> Self {
        self.heights = heights;
        self.level_labels = level_labels;
        self
    }

    pub fn atom_count(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn masses(&self) -> &[Rational64] {
        &self.masses
    }

    pub fn mass_f64(&self, i: usize) -> f64 {
        self.masses[i].to_f64().unwrap_or(f64::NAN)
    }

    pub fn total_mass(&self) -> Result<Rational64> {
        exact_total(&self.masses)
    }

    /// Recorded tower heights `h_1, …, h_n` (empty for plain permutations).
    pub fn heights(&self) -> &[usize] {
        &self.heights
    }

    /// Level of atom `i` in the stage-`stage` tower (1-based stage).
    pub fn level_of(&self, stage: usize, atom: usize) -> Option<u32> {
        self.level_labels.get(stage.checked_sub(1)?)?.get(atom).copied().flatten()
    }

    /// Atoms making up level `level` of the stage-`stage` tower.
    pub fn level_atoms(&self, stage: usize, level: u32) -> Vec<usize> {
        (0..self.atom_count()).filter(|&i| self.level_of(stage, i) == Some(level)).collect()
    }

    pub fn inverse(&self) -> Vec<usize> {
        let mut inv = vec![0; self.perm.len()];
        for (i, &t) in self.perm.iter().enumerate() {
            inv[t] = i;
        }
        inv
    }

    /// `perm^n` as an index map, `n ∈ ℤ`.
    pub fn power_map(&self, n: i64) -> Vec<usize> {
        CycleTable::new(&self.perm).power_map(n)
    }

    /// The permutation `perm^n` with the same masses and tower records.
    pub fn power(&self, n: i64) -> IntervalPermutation {
        IntervalPermutation { perm: self.power_map(n), ..self.clone() }
    }

    /// Dense Koopman matrix `U f = f ∘ T` in the normalized atom basis:
    /// `U[i][perm(i)] = 1`.
    pub fn koopman(&self) -> Result<OperatorMatrix> {
        let n = self.atom_count();
        let mut entries = vec![C64::new(0.0, 0.0); n * n];
        for (i, &t) in self.perm.iter().enumerate() {
            entries[i * n + t] = C64::new(1.0, 0.0);
        }
        Ok(OperatorMatrix::new(n, entries, Basis::Atom)?.assume_unitary())
    }

    /// Matrix-free Koopman operator with exact powers.
    pub fn koopman_map(&self) -> PermutationKoopman {
        PermutationKoopman::new(&self.perm)
    }

    /// `m(T^{-n}A ∩ B)` by walking orbits.
    pub fn orbit_mass(&self, n: i64, a: &[usize], b: &[usize]) -> Rational64 {
        let pn = self.power_map(n);
        let mut in_a = vec![false; self.atom_count()];
        for &i in a {
            in_a[i] = true;
        }
        b.iter().filter(|&&i| in_a[pn[i]]).map(|&i| self.masses[i]).sum()
    }
}

pub fn koopman_of_permutation(p: &IntervalPermutation) -> Result<OperatorMatrix> {
    p.koopman()
}

/// Cycle decomposition supporting `O(1)` lookups of `perm^n(i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleTable {
    cycles: Vec<Vec<usize>>,
    /// `(cycle, position)` of each atom.
    place: Vec<(usize, usize)>,
}

impl CycleTable {
    pub fn new(perm: &[usize]) -> Self {
        let mut place = vec![(usize::MAX, 0); perm.len()];
        let mut cycles = Vec::new();
        for start in 0..perm.len() {
            if place[start].0 != usize::MAX {
                continue;
            }
            let id = cycles.len();
            let mut cycle = Vec::new();
            let mut i = start;
            loop {
                place[i] = (id, cycle.len());
                cycle.push(i);
                i = perm[i];
                if i == start {
                    break;
                }
            }
            cycles.push(cycle);
        }
        CycleTable { cycles, place }
    }

    pub fn cycles(&self) -> &[Vec<usize>] {
        &self.cycles
    }

    pub fn image(&self, i: usize, n: i64) -> usize {
        let (c, pos) = self.place[i];
        let cycle = &self.cycles[c];
        let len = cycle.len() as i64;
        cycle[(pos as i64 + n).rem_euclid(len) as usize]
    }

    pub fn power_map(&self, n: i64) -> Vec<usize> {
        (0..self.place.len()).map(|i| self.image(i, n)).collect()
    }
}

/// `U x = x ∘ perm` on coordinate vectors, without forming a matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PermutationKoopman {
    table: CycleTable,
}

impl PermutationKoopman {
    pub fn new(perm: &[usize]) -> Self {
        PermutationKoopman { table: CycleTable::new(perm) }
    }
}

impl LinearMap for PermutationKoopman {
    fn dim(&self) -> usize {
        self.table.place.len()
    }

    fn apply(&self, x: &[C64]) -> Vec<C64> {
        (0..x.len()).map(|i| x[self.table.image(i, 1)]).collect()
    }

    fn apply_inverse(&self, x: &[C64]) -> Result<Vec<C64>> {
        Ok((0..x.len()).map(|i| x[self.table.image(i, -1)]).collect())
    }

    fn apply_power(&self, n: i64, x: &[C64]) -> Result<Vec<C64>> {
        crate::operator::map_check_len(self.dim(), x)?;
        Ok((0..x.len()).map(|i| x[self.table.image(i, n)]).collect())
    }
}

/// The `m`-cyclic shift `S e_i = e_{(i+1) mod m}`.
pub fn cyclic_shift(m: usize) -> Result<OperatorMatrix> {
    let targets: Vec<usize> = (0..m).map(|i| (i + 1) % m.max(1)).collect();
    OperatorMatrix::permutation(&targets, Basis::Atom)
}
