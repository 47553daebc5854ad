use crate::error::{Error, Result};
use crate::operator::map::LinearMap;
use crate::operator::wot::norm2;
use crate::operator::{Basis, OperatorMatrix};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommutationCheck {
    pub commutes: bool,
    /// `‖AB − BA‖_max`.
    pub residual: f64,
}

pub fn commutes_check(a: &OperatorMatrix, b: &OperatorMatrix, tol: f64) -> Result<CommutationCheck> {
    let ab = a.compose(b)?;
    let ba = b.compose(a)?;
    let residual = ab.max_abs_diff(&ba)?;
    Ok(CommutationCheck { commutes: residual <= tol, residual })
}

/// `max_k ‖A B e_k − B A e_k‖_∞` for maps that are not stored densely.
pub fn commutator_residual_maps<A: LinearMap + ?Sized, B: LinearMap + ?Sized>(a: &A, b: &B) -> Result<f64> {
    let n = a.dim();
    if b.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: b.dim() });
    }
    let mut worst = 0.0f64;
    let mut e = vec![C64::new(0.0, 0.0); n];
    for k in 0..n {
        e[k] = C64::new(1.0, 0.0);
        let ab = a.apply(&b.apply(&e));
        let ba = b.apply(&a.apply(&e));
        for (x, y) in ab.iter().zip(&ba) {
            worst = worst.max((x - y).norm());
        }
        e[k] = C64::new(0.0, 0.0);
    }
    Ok(worst)
}

/// Positivity plus `M 1 = 1` and `M* 1 = 1` in an atom basis with the
/// given masses. In the normalized atom basis the constant function has
/// coordinates `√m_i`.
pub fn bistochastic_check_weighted(op: &OperatorMatrix, masses: &[f64], tol: f64) -> Result<bool> {
    if !matches!(op.basis(), Basis::Atom | Basis::Indicator) {
        return Err(Error::WrongBasis { expected: "atom or indicator", found: op.basis().name() });
    }
    let n = op.dim();
    if masses.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: masses.len() });
    }
    if op.entries().iter().any(|z| z.re < -tol || z.im.abs() > tol) {
        return Ok(false);
    }
    let one: Vec<C64> = masses.iter().map(|m| C64::new(m.sqrt(), 0.0)).collect();
    let forward = op.matvec(&one)?;
    let backward = op.adjoint().matvec(&one)?;
    let close = |v: &[C64]| v.iter().zip(&one).all(|(a, b)| (a - b).norm() <= tol);
    Ok(close(&forward) && close(&backward))
}

/// Uniform-mass version: nonnegative entries with unit row and column sums.
pub fn bistochastic_check(op: &OperatorMatrix, tol: f64) -> Result<bool> {
    let n = op.dim();
    bistochastic_check_weighted(op, &vec![1.0 / n as f64; n], tol)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsometryDefect {
    /// Basis index `i` with the smallest `‖½(I + T^k) e_i‖`.
    pub index: usize,
    pub norm: f64,
    /// `1 − norm`; positive means `½(I + T^k)` is not an isometry.
    pub defect: f64,
}

/// Witness that `½(I + T^k)` shrinks some basis vector.
pub fn isometry_defect_witness<M: LinearMap + ?Sized>(t: &M, k: i64) -> Result<IsometryDefect> {
    let n = t.dim();
    let mut best = IsometryDefect { index: 0, norm: f64::INFINITY, defect: f64::NEG_INFINITY };
    let mut e = vec![C64::new(0.0, 0.0); n];
    for i in 0..n {
        e[i] = C64::new(1.0, 0.0);
        let tk = t.apply_power(k, &e)?;
        let y: Vec<C64> = e.iter().zip(&tk).map(|(a, b)| 0.5 * (a + b)).collect();
        let norm = norm2(&y);
        if norm < best.norm {
            best = IsometryDefect { index: i, norm, defect: 1.0 - norm };
        }
        e[i] = C64::new(0.0, 0.0);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{apply_polynomial, PolynomialInT};

    fn shift(m: usize) -> OperatorMatrix {
        let t: Vec<usize> = (0..m).map(|i| (i + 1) % m).collect();
        OperatorMatrix::permutation(&t, Basis::Atom).unwrap()
    }

    #[test]
    fn diagonal_operators_commute() {
        let a = OperatorMatrix::diagonal(&[C64::new(1.0, 2.0), C64::new(0.0, 1.0)], Basis::Atom).unwrap();
        let b = OperatorMatrix::diagonal(&[C64::new(-1.0, 0.0), C64::new(3.0, 0.0)], Basis::Atom).unwrap();
        assert!(commutes_check(&a, &b, 1e-12).unwrap().commutes);
        let s = shift(2);
        let c = commutes_check(&a, &s, 1e-12).unwrap();
        assert!(!c.commutes && c.residual > 0.5);
    }

    #[test]
    fn shift_is_bistochastic_and_average_is_too() {
        let s = shift(5);
        assert!(bistochastic_check(&s, 1e-12).unwrap());
        let avg = apply_polynomial(&s, &PolynomialInT::half_sum(0, -1)).unwrap();
        assert!(bistochastic_check(&avg, 1e-12).unwrap());
        let bad = OperatorMatrix::identity(5, Basis::Atom).scale(C64::new(0.5, 0.0));
        assert!(!bistochastic_check(&bad, 1e-12).unwrap());
        let fourier = OperatorMatrix::identity(3, Basis::Fourier);
        assert!(matches!(bistochastic_check(&fourier, 1e-12), Err(Error::WrongBasis { .. })));
    }

    #[test]
    fn half_identity_plus_shift_is_not_isometric() {
        let s = shift(6);
        let w = isometry_defect_witness(&s, 1).unwrap();
        assert!((w.norm - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        let fixed = isometry_defect_witness(&s, 6).unwrap();
        assert!((fixed.norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn map_commutator_matches_dense() {
        let a = shift(4);
        let d = OperatorMatrix::diagonal(&[C64::new(1.0, 0.0), C64::new(2.0, 0.0), C64::new(3.0, 0.0), C64::new(4.0, 0.0)], Basis::Atom).unwrap();
        let dense = commutes_check(&a, &d, 0.0).unwrap().residual;
        assert!((commutator_residual_maps(&a, &d).unwrap() - dense).abs() < 1e-15);
    }
}
