use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::lp::lamperti::{lamperti_apply, p_norm, pow_p, root_p};
use crate::lp::{LampertiOperator, TowerSpec};
use crate::C64;

/// Approximate eigenvector built on a tower.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenApproximation {
    pub f: Vec<C64>,
    pub norm: f64,
    /// `‖Tf − λf‖_p`.
    pub defect: f64,
    /// `2(δ + 1/n)^{1/p}` with `δ` the tower's residual mass.
    pub bound: f64,
}

/// Builds `f` with `‖f‖_p = 1` and `‖Tf − λf‖_p ≤ 2(δ + 1/n)^{1/p}`.
///
/// On the base `f = a = ((1 − m(C))/(n·m(A)))^{1/p}`; going up,
/// `f(τy) = λ·(m(y)/m(τy))^{1/p}·f(y)`; on the residual `C`, `f = 1`.
pub fn approx_eigenvector(op: &LampertiOperator, tower: &TowerSpec, lambda: C64) -> Result<EigenApproximation> {
    let map = op.map();
    tower.verify(map).map_err(|e| Error::invalid(format!("tower does not belong to the operator: {e}")))?;
    if (lambda.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::invalid("lambda must be unimodular"));
    }
    let p = op.p();
    let m = map.masses_f64();
    let n = tower.height;
    let base_mass = tower.base_mass(map).to_f64().unwrap_or(f64::NAN);
    let a = root_p((1.0 - tower.residual_mass) / (n as f64 * base_mass), p);
    let mut f = vec![C64::new(1.0, 0.0); op.dim()];
    for &b in &tower.base {
        f[b] = C64::new(a, 0.0);
    }
    for w in tower.levels.windows(2) {
        for (&y, &x) in w[0].iter().zip(&w[1]) {
            f[x] = lambda * root_p(m[y] / m[x], p) * f[y];
        }
    }
    let norm = p_norm(&m, &f, p);
    let tf = lamperti_apply(op, &f)?;
    let diff: Vec<C64> = tf.iter().zip(&f).map(|(t, v)| t - lambda * v).collect();
    let defect = p_norm(&m, &diff, p);
    let bound = 2.0 * root_p(tower.residual_mass + 1.0 / n as f64, p);
    Ok(EigenApproximation { f, norm, defect, bound })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityCheck {
    pub invariant: bool,
    /// `‖Tf − f‖_p`.
    pub residual: f64,
    /// `g = |f|^p`.
    pub density: Vec<f64>,
    /// Largest `|ν(τi) − ν(i)|` for `ν = g·m`.
    pub max_violation: f64,
}

/// For `f` with `‖Tf − f‖_p ≤ tol`, checks that `ν = |f|^p m` is
/// `τ`-invariant on every atom.
///
/// With `e = Tf − f` one has `ν(τi) = m(i)|f(i) + e(i)|^p`, so atom `i` is
/// allowed `p·m(i)^{1−1/p}·M^{p−1}·tol` with `M = |f(i)| + tol·m(i)^{−1/p}`.
pub fn invariant_density_check(op: &LampertiOperator, f: &[C64], tol: f64) -> Result<DensityCheck> {
    let p = op.p();
    let m = op.map().masses_f64();
    let norm = p_norm(&m, f, p);
    if (norm - 1.0).abs() > tol {
        return Err(Error::invalid(format!("‖f‖_p = {norm} is not 1 within {tol}")));
    }
    let tf = lamperti_apply(op, f)?;
    let diff: Vec<C64> = tf.iter().zip(f).map(|(a, b)| a - b).collect();
    let residual = p_norm(&m, &diff, p);
    let density: Vec<f64> = f.iter().map(|z| pow_p(z.norm(), p)).collect();
    let mut max_violation = 0.0f64;
    let mut invariant = residual <= tol;
    for (i, &t) in op.map().perm().iter().enumerate() {
        let v = (m[t] * density[t] - m[i] * density[i]).abs();
        max_violation = max_violation.max(v);
        let big_m = f[i].norm() + tol * m[i].powf(-1.0 / p);
        let allowed = p * m[i].powf(1.0 - 1.0 / p) * big_m.powf(p - 1.0) * tol + 1e-14 * m[i] * (1.0 + density[i]);
        if v > allowed {
            invariant = false;
        }
    }
    Ok(DensityCheck { invariant, residual, density, max_violation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{rokhlin_tower_find, NonsingularMapSpec};
    use num_rational::Rational64;

    fn cycle_op(k: usize, p: f64) -> LampertiOperator {
        let w: Vec<i64> = (0..k as i64).map(|i| 1 + (i * 7) % 5).collect();
        let map = NonsingularMapSpec::from_integer_weights((0..k).map(|i| (i + 1) % k).collect(), &w).unwrap();
        LampertiOperator::new(p, map).unwrap()
    }

    #[test]
    fn full_tower_root_of_unity_is_exact() {
        let k = 12;
        let op = cycle_op(k, 1.5);
        let tower = rokhlin_tower_find(op.map(), k, 0.0).unwrap();
        let lambda = C64::from_polar(1.0, std::f64::consts::TAU * 5.0 / k as f64);
        let e = approx_eigenvector(&op, &tower, lambda).unwrap();
        assert!((e.norm - 1.0).abs() < 1e-12);
        assert!(e.defect < 1e-12, "{}", e.defect);
    }

    #[test]
    fn odd_cycle_minus_one_is_bounded() {
        let k = 15;
        for p in [1.0, 2.0, 3.0] {
            let op = cycle_op(k, p);
            let tower = rokhlin_tower_find(op.map(), k, 0.0).unwrap();
            let e = approx_eigenvector(&op, &tower, C64::new(-1.0, 0.0)).unwrap();
            assert!(e.defect > 0.0 && e.defect <= 2.0 * (1.0 / k as f64).powf(1.0 / p) + 1e-12);
        }
    }

    #[test]
    fn swap_fixed_vector_density() {
        let map = NonsingularMapSpec::new(vec![1, 0], vec![Rational64::new(1, 3), Rational64::new(2, 3)]).unwrap();
        let op = LampertiOperator::new(2.0, map).unwrap();
        let f = vec![C64::new(1.5f64.sqrt(), 0.0), C64::new(3f64.sqrt() / 2.0, 0.0)];
        let d = invariant_density_check(&op, &f, 1e-12).unwrap();
        assert!(d.invariant);
        assert!((d.density[0] - 1.5).abs() < 1e-14 && (d.density[1] - 0.75).abs() < 1e-14);
    }

    #[test]
    fn non_fixed_vector_fails() {
        let map = NonsingularMapSpec::from_integer_weights(vec![1, 2, 0], &[1, 2, 3]).unwrap();
        let op = LampertiOperator::new(2.0, map).unwrap();
        let m = op.map().masses_f64();
        let raw = vec![C64::new(0.3, 0.1), C64::new(-1.0, 0.5), C64::new(0.2, 0.0)];
        let n = p_norm(&m, &raw, 2.0);
        let f: Vec<C64> = raw.iter().map(|z| z / n).collect();
        let d = invariant_density_check(&op, &f, 1e-9).unwrap();
        assert!(!d.invariant && d.residual > 1e-3);
    }
}
