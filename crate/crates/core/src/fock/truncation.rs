use std::collections::HashMap;

use crate::error::{Error, Result};

/// Symmetric tensor powers `G^{⊙d}`, `d = 0..=D`, of an `m`-dimensional
/// space, indexed by nondecreasing multisets of basis indices.
#[derive(Debug, Clone, PartialEq)]
pub struct FockTruncation {
    base_dim: usize,
    max_degree: usize,
    multisets: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

/// `C(n, k)` with overflow checks.
pub fn binomial(n: usize, k: usize) -> Option<usize> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    usize::try_from(acc).ok()
}

/// Largest block the truncation will enumerate.
pub const MAX_BLOCK_DIM: usize = 1 << 16;

fn multisets(m: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(d);
    fn rec(m: usize, d: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(m, d, i, cur, out);
            cur.pop();
        }
    }
    rec(m, d, 0, &mut cur, &mut out);
    out
}

impl FockTruncation {
    pub fn new(base_dim: usize, max_degree: usize) -> Result<Self> {
        if base_dim == 0 {
            return Err(Error::invalid("base dimension must be positive"));
        }
        let mut sets = Vec::with_capacity(max_degree + 1);
        let mut index = Vec::with_capacity(max_degree + 1);
        for d in 0..=max_degree {
            let dim = binomial(base_dim + d - 1, d).ok_or(Error::Overflow)?;
            if dim > MAX_BLOCK_DIM {
                return Err(Error::invalid(format!("degree-{d} block of dimension {dim} is too large")));
            }
            let ms = multisets(base_dim, d);
            index.push(ms.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect());
            sets.push(ms);
        }
        Ok(FockTruncation { base_dim, max_degree, multisets: sets, index })
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn graded_dims(&self) -> Vec<usize> {
        self.multisets.iter().map(Vec::len).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.graded_dims().iter().sum()
    }

    /// Multisets of degree `d`, in flat-index order.
    pub fn multisets(&self, d: usize) -> &[Vec<usize>] {
        &self.multisets[d]
    }

    pub fn flat_index(&self, multiset: &[usize]) -> Option<usize> {
        self.index.get(multiset.len())?.get(multiset).copied()
    }
}

/// `Π_k μ_k!` for the multiplicities `μ_k` of a sorted multiset.
pub fn multiplicity_factorial(multiset: &[usize]) -> f64 {
    let mut acc = 1.0;
    let mut run = 0u32;
    for (i, x) in multiset.iter().enumerate() {
        run = if i > 0 && multiset[i - 1] == *x { run + 1 } else { 1 };
        acc *= run as f64;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_dimensions_are_binomial() {
        let t = FockTruncation::new(3, 3).unwrap();
        assert_eq!(t.graded_dims(), vec![1, 3, 6, 10]);
        assert_eq!(t.multisets(0), &[Vec::<usize>::new()]);
        assert_eq!(t.flat_index(&[0, 2]), Some(2));
    }

    #[test]
    fn multiplicities() {
        assert_eq!(multiplicity_factorial(&[0, 0, 1, 2, 2, 2]), 12.0);
        assert_eq!(multiplicity_factorial(&[]), 1.0);
        assert_eq!(binomial(10, 3), Some(120));
    }
}
