use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::lp::NonsingularMapSpec;
use crate::random::seeded;
use num_rational::Rational64;

/// Largest integer weight drawn for random masses.
pub const MAX_WEIGHT: i64 = 10;

/// A single `K`-cycle with random masses.
pub fn k_cycle(k: usize, seed: u64) -> Result<NonsingularMapSpec> {
    let mut rng = seeded(seed);
    let w: Vec<i64> = (0..k).map(|_| rng.random_range(1..=MAX_WEIGHT)).collect();
    NonsingularMapSpec::from_integer_weights((0..k).map(|i| (i + 1) % k).collect(), &w)
}

/// Random permutation of `k` atoms whose cycles have lengths in
/// `[min_len, max_len]` (the last cycle absorbs any remainder), with random
/// masses.
pub fn random_long_cycles(k: usize, min_len: usize, max_len: usize, seed: u64) -> Result<NonsingularMapSpec> {
    if min_len == 0 || min_len > max_len || k < min_len {
        return Err(Error::invalid("cycle length range does not fit the atom count"));
    }
    let mut rng = seeded(seed);
    let mut atoms: Vec<usize> = (0..k).collect();
    atoms.shuffle(&mut rng);
    let mut lengths = Vec::new();
    let mut left = k;
    while left > 0 {
        let l = rng.random_range(min_len..=max_len);
        if left < l + min_len {
            lengths.push(left);
            left = 0;
        } else {
            lengths.push(l);
            left -= l;
        }
    }
    let mut perm = vec![0; k];
    let mut pos = 0;
    for l in lengths {
        let cycle = &atoms[pos..pos + l];
        for i in 0..l {
            perm[cycle[i]] = cycle[(i + 1) % l];
        }
        pos += l;
    }
    let w: Vec<i64> = (0..k).map(|_| rng.random_range(1..=MAX_WEIGHT)).collect();
    NonsingularMapSpec::from_integer_weights(perm, &w)
}

/// Two atoms of masses `1/3, 2/3` exchanged.
pub fn two_atom_swap() -> NonsingularMapSpec {
    NonsingularMapSpec::new(vec![1, 0], vec![Rational64::new(1, 3), Rational64::new(2, 3)]).expect("valid preset")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_lengths_respect_bounds() {
        let m = random_long_cycles(1000, 100, 300, 5).unwrap();
        assert!(m.cycles().iter().all(|c| c.len() >= 100));
        assert!(m.cycle_products_are_one().unwrap());
        assert_eq!(random_long_cycles(1000, 100, 300, 5).unwrap(), m);
    }
}
