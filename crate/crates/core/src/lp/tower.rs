use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lp::NonsingularMapSpec;

/// Disjoint levels `A, τA, …, τ^{n−1}A` and the leftover set.
#[derive(Debug, Clone, PartialEq)]
pub struct TowerSpec {
    pub base: Vec<usize>,
    pub height: usize,
    /// `levels[i][k] = τ^i(base[k])`.
    pub levels: Vec<Vec<usize>>,
    pub residual: Vec<usize>,
    pub residual_mass_exact: Rational64,
    pub residual_mass: f64,
}

impl TowerSpec {
    pub fn base_mass(&self, map: &NonsingularMapSpec) -> Rational64 {
        self.base.iter().map(|&i| map.masses()[i]).sum()
    }

    /// Exact checks: levels follow `τ`, levels and residual partition the atoms.
    pub fn verify(&self, map: &NonsingularMapSpec) -> Result<()> {
        let k = map.atom_count();
        if self.levels.len() != self.height || self.levels.first().map(|l| l != &self.base).unwrap_or(true) {
            return Err(Error::invalid("tower levels do not start at the base"));
        }
        for w in self.levels.windows(2) {
            if w[0].len() != w[1].len() || w[0].iter().zip(&w[1]).any(|(&a, &b)| a >= k || map.perm()[a] != b) {
                return Err(Error::invalid("tower levels are not images of each other under the map"));
            }
        }
        let mut seen = vec![false; k];
        for &i in self.levels.iter().flatten().chain(&self.residual) {
            if i >= k || seen[i] {
                return Err(Error::invalid("tower levels and residual overlap"));
            }
            seen[i] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::invalid("tower levels and residual miss some atom"));
        }
        let resid: Rational64 = self.residual.iter().map(|&i| map.masses()[i]).sum();
        if resid != self.residual_mass_exact {
            return Err(Error::invalid("recorded residual mass is wrong"));
        }
        Ok(())
    }
}

/// Packs each cycle of length `L ≥ n` with `⌊L/n⌋` consecutive segments of
/// length `n`, placing the `L mod n` leftover atoms where their mass is
/// smallest. Shorter cycles go entirely to the residual.
pub fn rokhlin_tower_find(map: &NonsingularMapSpec, n: usize, delta: f64) -> Result<TowerSpec> {
    if n == 0 {
        return Err(Error::invalid("tower height must be at least 1"));
    }
    let masses = map.masses();
    let mut base = Vec::new();
    let mut residual = Vec::new();
    for cycle in map.cycles() {
        let len = cycle.len();
        if len < n {
            residual.extend_from_slice(&cycle);
            continue;
        }
        let r = len % n;
        let mut start = 0;
        if r > 0 {
            // window masses via cyclic prefix sums
            let mut prefix = vec![Rational64::zero(); 2 * len + 1];
            for p in 0..2 * len {
                prefix[p + 1] = prefix[p] + masses[cycle[p % len]];
            }
            let mut best = prefix[r] - prefix[0];
            for s in 1..len {
                let w = prefix[s + r] - prefix[s];
                if w < best {
                    best = w;
                    start = s;
                }
            }
        }
        for p in 0..r {
            residual.push(cycle[(start + p) % len]);
        }
        for seg in 0..len / n {
            base.push(cycle[(start + r + seg * n) % len]);
        }
    }
    if base.is_empty() {
        return Err(Error::Infeasible(format!("no cycle of length >= {n}")));
    }
    let residual_mass_exact: Rational64 = residual.iter().map(|&i| masses[i]).sum();
    let residual_mass = residual_mass_exact.to_f64().unwrap_or(f64::NAN);
    if residual_mass > delta {
        return Err(Error::Infeasible(format!("residual mass {residual_mass:.4} exceeds {delta}")));
    }
    let mut levels = vec![base.clone()];
    for i in 1..n {
        let next = levels[i - 1].iter().map(|&a| map.perm()[a]).collect();
        levels.push(next);
    }
    residual.sort_unstable();
    Ok(TowerSpec { base, height: n, levels, residual, residual_mass_exact, residual_mass })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(k: usize) -> NonsingularMapSpec {
        NonsingularMapSpec::from_integer_weights((0..k).map(|i| (i + 1) % k).collect(), &vec![1; k]).unwrap()
    }

    #[test]
    fn long_cycle_leaves_remainder() {
        let map = cycle(100);
        let t = rokhlin_tower_find(&map, 95, 0.06).unwrap();
        assert_eq!(t.base.len(), 1);
        assert_eq!(t.residual_mass_exact, Rational64::new(5, 100));
        t.verify(&map).unwrap();
    }

    #[test]
    fn identity_is_infeasible() {
        let map = NonsingularMapSpec::from_integer_weights((0..10).collect(), &vec![1; 10]).unwrap();
        assert!(matches!(rokhlin_tower_find(&map, 2, 0.01), Err(Error::Infeasible(_))));
    }

    #[test]
    fn leftover_avoids_heavy_atoms() {
        let w = [1, 1, 50, 1, 1];
        let map = NonsingularMapSpec::from_integer_weights(vec![1, 2, 3, 4, 0], &w).unwrap();
        let t = rokhlin_tower_find(&map, 4, 1.0).unwrap();
        assert_ne!(t.residual, vec![2]);
        assert_eq!(t.residual_mass_exact, Rational64::new(1, 54));
        t.verify(&map).unwrap();
    }
}
