use crate::error::{Error, Result};
use crate::operator::{OperatorMatrix, PolynomialInT};
use crate::C64;

/// An operator that can be applied to vectors without being stored densely.
pub trait LinearMap: Sync {
    fn dim(&self) -> usize;

    /// `T x`. Callers guarantee `x.len() == self.dim()`.
    fn apply(&self, x: &[C64]) -> Vec<C64>;

    /// `T^{-1} x`, for maps that know their inverse.
    fn apply_inverse(&self, _x: &[C64]) -> Result<Vec<C64>> {
        Err(Error::NotInvertible(-1))
    }

    /// `T^n x`.
    fn apply_power(&self, n: i64, x: &[C64]) -> Result<Vec<C64>> {
        check_len(self.dim(), x)?;
        let mut y = x.to_vec();
        if n >= 0 {
            for _ in 0..n {
                y = self.apply(&y);
            }
        } else {
            for _ in 0..n.unsigned_abs() {
                y = self.apply_inverse(&y).map_err(|_| Error::NotInvertible(n))?;
            }
        }
        Ok(y)
    }
}

pub(crate) fn check_len(dim: usize, x: &[C64]) -> Result<()> {
    if x.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: x.len() });
    }
    Ok(())
}

impl LinearMap for OperatorMatrix {
    fn dim(&self) -> usize {
        OperatorMatrix::dim(self)
    }

    fn apply(&self, x: &[C64]) -> Vec<C64> {
        self.matvec_unchecked(x)
    }

    fn apply_inverse(&self, x: &[C64]) -> Result<Vec<C64>> {
        if !self.is_unitary_certified() {
            return Err(Error::NotInvertible(-1));
        }
        Ok(self.adjoint_matvec_unchecked(x))
    }

    fn apply_power(&self, n: i64, x: &[C64]) -> Result<Vec<C64>> {
        check_len(OperatorMatrix::dim(self), x)?;
        if n.unsigned_abs() <= 64 {
            let mut y = x.to_vec();
            for _ in 0..n.unsigned_abs() {
                y = if n >= 0 { self.apply(&y) } else { self.apply_inverse(&y).map_err(|_| Error::NotInvertible(n))? };
            }
            return Ok(y);
        }
        Ok(self.power(n)?.matvec_unchecked(x))
    }
}

/// `p(T)` for a Laurent polynomial `p`, evaluated lazily through `T`.
pub struct PolynomialMap<'a, M: LinearMap + ?Sized> {
    pub base: &'a M,
    pub poly: &'a PolynomialInT,
}

impl<M: LinearMap + ?Sized> LinearMap for PolynomialMap<'_, M> {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn apply(&self, x: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); x.len()];
        for (&n, &a) in self.poly.terms() {
            let y = self
                .base
                .apply_power(n, x)
                .expect("polynomial exponent not supported by the base map");
            for (o, v) in out.iter_mut().zip(&y) {
                *o += a * v;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::Basis;

    #[test]
    fn dense_power_paths_agree() {
        let targets: Vec<usize> = (0..7).map(|i| (i + 3) % 7).collect();
        let s = OperatorMatrix::permutation(&targets, Basis::Atom).unwrap();
        let x: Vec<C64> = (0..7).map(|i| C64::new(i as f64, 1.0)).collect();
        let by_steps = s.apply_power(-100, &x).unwrap();
        // 100 ≡ 2 (mod 7)
        let by_small = s.apply_power(-2, &x).unwrap();
        for (a, b) in by_steps.iter().zip(&by_small) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn non_certified_inverse_fails() {
        let m = OperatorMatrix::from_fn(2, Basis::Atom, |_, _| C64::new(1.0, 0.0)).unwrap();
        let x = vec![C64::new(1.0, 0.0); 2];
        assert_eq!(m.apply_power(-3, &x), Err(Error::NotInvertible(-3)));
        assert!(m.apply_power(2, &[C64::new(0.0, 0.0)]).is_err());
    }
}
