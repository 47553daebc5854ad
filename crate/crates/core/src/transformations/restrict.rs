use crate::error::{Error, Result};
use crate::operator::{inner, norm2, Basis, OperatorMatrix};
use crate::C64;

const FIXED_TOL: f64 = 1e-9;

/// Coordinates of the constant function `1` in the basis of `op`, for
/// uniform atom masses.
fn constants_vector(op: &OperatorMatrix) -> Result<Vec<C64>> {
    let n = op.dim();
    match op.basis() {
        Basis::Fourier => {
            let mut c = vec![C64::new(0.0, 0.0); n];
            c[0] = C64::new(1.0, 0.0);
            Ok(c)
        }
        Basis::Atom | Basis::Indicator => Ok(vec![C64::new(1.0 / (n as f64).sqrt(), 0.0); n]),
        Basis::FockGraded => Err(Error::WrongBasis { expected: "fourier, atom or indicator", found: "fock-graded" }),
    }
}

/// Unitary Hermitian `H` with `H e_0 = c` for a unit vector `c`.
fn householder_to(c: &[C64]) -> OperatorMatrix {
    let n = c.len();
    let phase = if c[0].norm() > 0.0 { c[0] / c[0].norm() } else { C64::new(1.0, 0.0) };
    let target: Vec<C64> = c.iter().map(|z| z / phase).collect();
    let mut v = target.clone();
    v[0] -= C64::new(1.0, 0.0);
    let vv: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    let mut h = OperatorMatrix::identity(n, Basis::Atom);
    if vv < 1e-300 {
        return h;
    }
    h = OperatorMatrix::from_fn(n, Basis::Atom, |i, j| {
        let d = if i == j { 1.0 } else { 0.0 };
        C64::new(d, 0.0) - 2.0 * v[i] * v[j].conj() / vv
    })
    .expect("finite");
    h.assume_unitary()
}

fn check_fixed(op: &OperatorMatrix, c: &[C64]) -> Result<()> {
    let forward = op.matvec(c)?;
    let backward = op.adjoint().matvec(c)?;
    let err = |v: &[C64]| v.iter().zip(c).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    if err(&forward) > FIXED_TOL || err(&backward) > FIXED_TOL {
        return Err(Error::invalid("operator does not fix the constants"));
    }
    Ok(())
}

/// Compression to the orthogonal complement of the constants, for the
/// constants vector of the basis (uniform masses for atom bases).
pub fn mean_zero_restrict(op: &OperatorMatrix) -> Result<OperatorMatrix> {
    let c = constants_vector(op)?;
    mean_zero_restrict_with(op, &c)
}

/// Compression to the orthogonal complement of a given constants vector.
///
/// In the Fourier basis this drops mode 0 and keeps every other entry.
pub fn mean_zero_restrict_with(op: &OperatorMatrix, constants: &[C64]) -> Result<OperatorMatrix> {
    let n = op.dim();
    if n < 2 {
        return Err(Error::invalid("restriction needs dimension at least 2"));
    }
    if constants.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: constants.len() });
    }
    let norm = norm2(constants);
    if norm == 0.0 {
        return Err(Error::invalid("constants vector is zero"));
    }
    let c: Vec<C64> = constants.iter().map(|z| z / norm).collect();
    check_fixed(op, &c)?;
    let unitary = op.is_unitary_certified();
    let conj = if c[0] == C64::new(1.0, 0.0) && c[1..].iter().all(|z| *z == C64::new(0.0, 0.0)) {
        op.clone()
    } else {
        let h = householder_to(&c).with_basis(op.basis());
        h.compose(op)?.compose(&h)?
    };
    let restricted = OperatorMatrix::from_fn(n - 1, op.basis(), |i, j| conj.get(i + 1, j + 1))?;
    Ok(if unitary { restricted.assume_unitary() } else { restricted })
}

/// Inverse of [`mean_zero_restrict_with`]: `P_const + R` embedded back into
/// the full space, where `P_const = c c*`.
pub fn reassemble_with_constants(restricted: &OperatorMatrix, constants: &[C64]) -> Result<OperatorMatrix> {
    let n = restricted.dim() + 1;
    if constants.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: constants.len() });
    }
    let norm = norm2(constants);
    let c: Vec<C64> = constants.iter().map(|z| z / norm).collect();
    let block = OperatorMatrix::from_fn(n, restricted.basis(), |i, j| match (i, j) {
        (0, 0) => C64::new(1.0, 0.0),
        (0, _) | (_, 0) => C64::new(0.0, 0.0),
        _ => restricted.get(i - 1, j - 1),
    })?;
    let h = householder_to(&c).with_basis(restricted.basis());
    let full = h.compose(&block)?.compose(&h)?;
    debug_assert!((inner(&full.matvec(&c)?, &c) - C64::new(1.0, 0.0)).norm() < 1e-9);
    Ok(full)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transformations::{rotation_koopman, IntervalPermutation, RotationSpec};

    #[test]
    fn rotation_drops_mode_zero() {
        let t = rotation_koopman(&RotationSpec::golden(3).unwrap());
        let r = mean_zero_restrict(&t).unwrap();
        assert_eq!(r.dim(), 6);
        for i in 0..6 {
            assert_eq!(r.get(i, i), t.get(i + 1, i + 1));
        }
        assert!(r.is_unitary_certified());
    }

    #[test]
    fn identity_restricts_to_identity() {
        let r = mean_zero_restrict(&OperatorMatrix::identity(5, Basis::Atom)).unwrap();
        assert!(r.max_abs_diff(&OperatorMatrix::identity(4, Basis::Atom)).unwrap() < 1e-14);
    }

    #[test]
    fn permutation_reassembles() {
        let p = IntervalPermutation::uniform(vec![1, 2, 0, 4, 3]).unwrap();
        let u = p.koopman().unwrap();
        let c = vec![C64::new(1.0 / 5f64.sqrt(), 0.0); 5];
        let r = mean_zero_restrict(&u).unwrap();
        let back = reassemble_with_constants(&r, &c).unwrap();
        assert!(back.max_abs_diff(&u).unwrap() < 1e-13);
    }

    #[test]
    fn rejects_operators_moving_constants() {
        let d = OperatorMatrix::diagonal(&[C64::new(0.5, 0.0), C64::new(1.0, 0.0)], Basis::Fourier).unwrap();
        assert!(mean_zero_restrict(&d).is_err());
    }
}
