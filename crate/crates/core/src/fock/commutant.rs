use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::operator::{Basis, OperatorMatrix, PolynomialInT};
use crate::transformations::cyclic_shift;
use crate::C64;

/// Relative singular-value threshold for the null space.
pub const NULL_SPACE_TOL: f64 = 1e-9;

/// `Σ a_n S^{n mod m}` for the `m`-cyclic shift `S`.
pub fn toeplitz_from_coeffs(a: &PolynomialInT, shift: &OperatorMatrix) -> Result<OperatorMatrix> {
    let m = shift.dim();
    if *shift != cyclic_shift(m)? {
        return Err(Error::invalid("toeplitz_from_coeffs expects the m-cyclic shift"));
    }
    let mut column = vec![C64::new(0.0, 0.0); m];
    for (&n, &c) in a.terms() {
        column[n.rem_euclid(m as i64) as usize] += c;
    }
    circulant(&column)
}

/// Circulant matrix with the given first column.
pub fn circulant(first_column: &[C64]) -> Result<OperatorMatrix> {
    let m = first_column.len();
    OperatorMatrix::from_fn(m, Basis::Atom, |i, j| first_column[(i + m - j) % m])
}

/// `max |X[i+1][j+1] − X[i][j]|` with indices mod `m`.
pub fn circulant_defect(x: &OperatorMatrix) -> f64 {
    let m = x.dim();
    let mut worst = 0.0f64;
    for i in 0..m {
        for j in 0..m {
            worst = worst.max((x.get((i + 1) % m, (j + 1) % m) - x.get(i, j)).norm());
        }
    }
    worst
}

/// Orthonormal basis (entrywise inner product) of `{X : XT = TX}`.
pub fn commutant_basis(t: &OperatorMatrix) -> Result<Vec<OperatorMatrix>> {
    let m = t.dim();
    let n = m * m;
    let mut l = DMatrix::<C64>::zeros(n, n);
    for i in 0..m {
        for j in 0..m {
            let row = i * m + j;
            for k in 0..m {
                l[(row, i * m + k)] += t.get(k, j);
                l[(row, k * m + j)] -= t.get(i, k);
            }
        }
    }
    let svd = l.svd(false, true);
    let v_t = svd.v_t.ok_or_else(|| Error::invalid("singular value decomposition failed"))?;
    let scale = svd.singular_values.iter().cloned().fold(1.0f64, f64::max);
    let mut basis = Vec::new();
    for (r, s) in svd.singular_values.iter().enumerate() {
        if *s <= NULL_SPACE_TOL * scale {
            let entries: Vec<C64> = (0..n).map(|c| v_t[(r, c)].conj()).collect();
            basis.push(OperatorMatrix::new(m, entries, t.basis())?);
        }
    }
    Ok(basis)
}

/// Frobenius distance from `x` to the span of an orthonormal family.
pub fn span_residual(x: &OperatorMatrix, orthonormal: &[OperatorMatrix]) -> f64 {
    let mut r: Vec<C64> = x.entries().to_vec();
    for b in orthonormal {
        let c: C64 = b.entries().iter().zip(x.entries()).map(|(bi, xi)| bi.conj() * xi).sum();
        for (ri, bi) in r.iter_mut().zip(b.entries()) {
            *ri -= c * bi;
        }
    }
    r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
