use crate::error::{Error, Result};
use crate::fock::truncation::{multiplicity_factorial, FockTruncation};
use crate::operator::{Basis, OperatorMatrix};
use crate::C64;

/// Block-diagonal operator, one block per degree.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedOperator {
    blocks: Vec<OperatorMatrix>,
}

impl GradedOperator {
    pub fn new(blocks: Vec<OperatorMatrix>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::invalid("a graded operator needs at least one block"));
        }
        Ok(GradedOperator { blocks })
    }

    pub fn blocks(&self) -> &[OperatorMatrix] {
        &self.blocks
    }

    pub fn block(&self, d: usize) -> &OperatorMatrix {
        &self.blocks[d]
    }

    pub fn degrees(&self) -> usize {
        self.blocks.len()
    }

    fn zip(&self, other: &GradedOperator, f: impl Fn(&OperatorMatrix, &OperatorMatrix) -> Result<OperatorMatrix>) -> Result<Self> {
        if self.blocks.len() != other.blocks.len() {
            return Err(Error::DimensionMismatch { expected: self.blocks.len(), found: other.blocks.len() });
        }
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| f(a, b)).collect::<Result<_>>()?;
        Ok(GradedOperator { blocks })
    }

    pub fn compose(&self, other: &GradedOperator) -> Result<Self> {
        self.zip(other, |a, b| a.compose(b))
    }

    pub fn adjoint(&self) -> Self {
        GradedOperator { blocks: self.blocks.iter().map(OperatorMatrix::adjoint).collect() }
    }

    pub fn power(&self, n: i64) -> Result<Self> {
        Ok(GradedOperator { blocks: self.blocks.iter().map(|b| b.power(n)).collect::<Result<_>>()? })
    }

    /// Largest blockwise `max |A − B|`.
    pub fn max_abs_diff(&self, other: &GradedOperator) -> Result<f64> {
        if self.blocks.len() != other.blocks.len() {
            return Err(Error::DimensionMismatch { expected: self.blocks.len(), found: other.blocks.len() });
        }
        let mut worst = 0.0f64;
        for (a, b) in self.blocks.iter().zip(&other.blocks) {
            worst = worst.max(a.max_abs_diff(b)?);
        }
        Ok(worst)
    }

    /// Largest block operator norm.
    pub fn operator_norm(&self) -> f64 {
        self.blocks.iter().map(OperatorMatrix::operator_norm).fold(0.0, f64::max)
    }

    /// The blocks laid out on the diagonal of one matrix.
    pub fn to_dense(&self) -> OperatorMatrix {
        let total: usize = self.blocks.iter().map(OperatorMatrix::dim).sum();
        let mut entries = vec![C64::new(0.0, 0.0); total * total];
        let mut offset = 0;
        for b in &self.blocks {
            let n = b.dim();
            for i in 0..n {
                for j in 0..n {
                    entries[(offset + i) * total + offset + j] = b.get(i, j);
                }
            }
            offset += n;
        }
        OperatorMatrix::new(total, entries, Basis::FockGraded).expect("finite blocks")
    }
}

/// Permanent by Ryser's formula with Gray-code updates.
pub fn permanent(a: &[C64], n: usize) -> C64 {
    if n == 0 {
        return C64::new(1.0, 0.0);
    }
    let mut row_sums = vec![C64::new(0.0, 0.0); n];
    let mut total = C64::new(0.0, 0.0);
    let mut gray: u64 = 0;
    for k in 1u64..(1u64 << n) {
        let next = k ^ (k >> 1);
        let bit = (gray ^ next).trailing_zeros() as usize;
        let adding = next & (1 << bit) != 0;
        for (i, s) in row_sums.iter_mut().enumerate() {
            if adding {
                *s += a[i * n + bit];
            } else {
                *s -= a[i * n + bit];
            }
        }
        gray = next;
        let prod: C64 = row_sums.iter().product();
        let sign = if (n as u32 - next.count_ones()).is_multiple_of(2) { 1.0 } else { -1.0 };
        total += sign * prod;
    }
    total
}

/// `F(V)`: on the degree-`d` block, `V^{⊗d}` restricted to symmetric tensors
/// in the orthonormal basis of normalized symmetrized monomials.
pub fn symmetric_lift(v: &OperatorMatrix, trunc: &FockTruncation) -> Result<GradedOperator> {
    let m = trunc.base_dim();
    if v.dim() != m {
        return Err(Error::DimensionMismatch { expected: m, found: v.dim() });
    }
    let mut blocks = Vec::with_capacity(trunc.max_degree() + 1);
    for d in 0..=trunc.max_degree() {
        let sets = trunc.multisets(d);
        let norms: Vec<f64> = sets.iter().map(|s| multiplicity_factorial(s).sqrt()).collect();
        let mut sub = vec![C64::new(0.0, 0.0); d * d];
        let block = OperatorMatrix::from_fn(sets.len(), Basis::FockGraded, |r, c| {
            for (i, &a) in sets[r].iter().enumerate() {
                for (j, &b) in sets[c].iter().enumerate() {
                    sub[i * d + j] = v.get(a, b);
                }
            }
            permanent(&sub, d) / (norms[r] * norms[c])
        })?;
        let block = if v.is_unitary_certified() { block.certify_unitary(1e-9)? } else { block };
        blocks.push(block);
    }
    GradedOperator::new(blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_unitary, seeded};

    #[test]
    fn permanent_small_cases() {
        let a = [C64::new(1.0, 0.0), C64::new(2.0, 0.0), C64::new(3.0, 0.0), C64::new(4.0, 0.0)];
        assert_eq!(permanent(&a, 2), C64::new(10.0, 0.0));
        let ones = vec![C64::new(1.0, 0.0); 9];
        assert!((permanent(&ones, 3) - C64::new(6.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn identity_lifts_to_identity() {
        let t = FockTruncation::new(3, 3).unwrap();
        let f = symmetric_lift(&OperatorMatrix::identity(3, Basis::Atom), &t).unwrap();
        for (d, b) in f.blocks().iter().enumerate() {
            assert_eq!(b.dim(), t.graded_dims()[d]);
            assert!(b.max_abs_diff(&OperatorMatrix::identity(b.dim(), Basis::FockGraded)).unwrap() < 1e-15);
        }
    }

    #[test]
    fn lift_is_multiplicative() {
        let t = FockTruncation::new(4, 3).unwrap();
        let mut rng = seeded(11);
        let u = random_unitary(&mut rng, 4, Basis::Atom).unwrap();
        let v = random_unitary(&mut rng, 4, Basis::Atom).unwrap();
        let lhs = symmetric_lift(&u.compose(&v).unwrap(), &t).unwrap();
        let rhs = symmetric_lift(&u, &t).unwrap().compose(&symmetric_lift(&v, &t).unwrap()).unwrap();
        assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-9);
        let adj = symmetric_lift(&u.adjoint(), &t).unwrap();
        assert!(adj.max_abs_diff(&symmetric_lift(&u, &t).unwrap().adjoint()).unwrap() < 1e-12);
    }

    #[test]
    fn dense_layout() {
        let t = FockTruncation::new(2, 2).unwrap();
        let f = symmetric_lift(&OperatorMatrix::identity(2, Basis::Atom), &t).unwrap().to_dense();
        assert_eq!(f.dim(), 6);
    }
}
