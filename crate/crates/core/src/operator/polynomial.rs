use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::operator::OperatorMatrix;
use crate::C64;

/// Finite Laurent polynomial `Σ a_n T^n`, `n ∈ ℤ`.
///
/// Zero coefficients are dropped, so the support is exactly the set of
/// exponents with nonzero coefficient. The `ℓ¹` norm is cached.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialInT {
    terms: BTreeMap<i64, C64>,
    ell1: f64,
}

impl PolynomialInT {
    pub fn new(terms: impl IntoIterator<Item = (i64, C64)>) -> Result<Self> {
        let mut map: BTreeMap<i64, C64> = BTreeMap::new();
        for (n, a) in terms {
            if !a.re.is_finite() || !a.im.is_finite() {
                return Err(Error::invalid(format!("non-finite coefficient at exponent {n}")));
            }
            *map.entry(n).or_insert(C64::new(0.0, 0.0)) += a;
        }
        map.retain(|_, a| a.norm() != 0.0);
        let ell1 = map.values().map(|a| a.norm()).sum();
        Ok(PolynomialInT { terms: map, ell1 })
    }

    pub fn real(terms: &[(i64, f64)]) -> Result<Self> {
        Self::new(terms.iter().map(|&(n, a)| (n, C64::new(a, 0.0))))
    }

    pub fn monomial(n: i64) -> Self {
        Self::real(&[(n, 1.0)]).expect("finite")
    }

    /// `½(T^i + T^j)`.
    pub fn half_sum(i: i64, j: i64) -> Self {
        Self::real(&[(i, 0.5), (j, 0.5)]).expect("finite")
    }

    pub fn terms(&self) -> &BTreeMap<i64, C64> {
        &self.terms
    }

    pub fn coeff(&self, n: i64) -> C64 {
        self.terms.get(&n).copied().unwrap_or(C64::new(0.0, 0.0))
    }

    pub fn ell1(&self) -> f64 {
        self.ell1
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// `T^k · p`.
    pub fn shifted(&self, k: i64) -> Self {
        let terms = self.terms.iter().map(|(&n, &a)| (n + k, a)).collect();
        PolynomialInT { terms, ell1: self.ell1 }
    }

    /// Sum of coefficients, i.e. `p(1)`.
    pub fn coefficient_sum(&self) -> C64 {
        self.terms.values().sum()
    }
}

impl fmt::Display for PolynomialInT {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (n, a)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if a.im == 0.0 {
                write!(f, "{}*T^{}", a.re, n)?;
            } else {
                write!(f, "({}{:+}i)*T^{}", a.re, a.im, n)?;
            }
        }
        Ok(())
    }
}

/// Dense `p(T)`. Negative exponents need a unitary-certified `T`.
pub fn apply_polynomial(t: &OperatorMatrix, p: &PolynomialInT) -> Result<OperatorMatrix> {
    let mut acc = OperatorMatrix::zeros(t.dim(), t.basis());
    for (&n, &a) in p.terms() {
        let power = t.power(n)?;
        acc = acc.add(&power.scale(a))?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::Basis;

    #[test]
    fn zero_coefficients_are_dropped() {
        let p = PolynomialInT::real(&[(0, 0.5), (1, 0.0), (-1, 0.5), (0, -0.5)]).unwrap();
        assert_eq!(p.terms().len(), 1);
        assert_eq!(p.ell1(), 0.5);
        assert_eq!(p.min_exponent(), Some(-1));
        assert_eq!(format!("{p}"), "0.5*T^-1");
    }

    #[test]
    fn shift_keeps_norm() {
        let p = PolynomialInT::half_sum(0, -1).shifted(3);
        assert_eq!(p.min_exponent(), Some(2));
        assert_eq!(p.max_exponent(), Some(3));
        assert_eq!(p.ell1(), 1.0);
    }

    #[test]
    fn dense_evaluation_on_shift() {
        let targets = [1usize, 2, 3, 0];
        let s = OperatorMatrix::permutation(&targets, Basis::Atom).unwrap();
        let p = PolynomialInT::half_sum(0, -1);
        let m = apply_polynomial(&s, &p).unwrap();
        // ½(I + S^{-1}): each column hits e_j and e_{j-1}
        for j in 0..4 {
            assert_eq!(m.get(j, j), C64::new(0.5, 0.0));
            assert_eq!(m.get((j + 3) % 4, j), C64::new(0.5, 0.0));
        }
    }
}
