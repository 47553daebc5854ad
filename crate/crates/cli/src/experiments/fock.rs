use weaklimit::fock::{circulant_defect, commutant_basis, span_residual, symmetric_lift, toeplitz_from_coeffs, FockTruncation};
use weaklimit::operator::PolynomialInT;
use weaklimit::random::random_unitary;
use weaklimit::transformations::cyclic_shift;
use weaklimit::{Basis, C64};

use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};
use crate::experiments::grid;
use crate::experiments::kronecker::stream;
use crate::report::ExperimentReport;

const FOCK_STREAM: u64 = 3 << 48;

/// `C(m + d − 1, d)` by the multiplicative formula.
fn multiset_count(m: usize, d: usize) -> usize {
    (1..=d).fold(1usize, |acc, i| acc * (m - 1 + i) / i)
}

struct LiftOutcome {
    m: usize,
    functor: f64,
    power: f64,
    dims_ok: bool,
}

fn lift_instance(seed: u64, i: usize, m: usize, degree: usize, n_max: i64) -> CliResult<LiftOutcome> {
    let mut rng = stream(seed, FOCK_STREAM, i);
    let trunc = FockTruncation::new(m, degree)?;
    let u = random_unitary(&mut rng, m, Basis::Atom)?;
    let v = random_unitary(&mut rng, m, Basis::Atom)?;
    let fu = symmetric_lift(&u, &trunc)?;
    let fv = symmetric_lift(&v, &trunc)?;
    let functor = symmetric_lift(&u.compose(&v)?, &trunc)?.max_abs_diff(&fu.compose(&fv)?)?;
    let mut power = 0.0f64;
    for n in 0..=n_max {
        power = power.max(fu.power(n)?.max_abs_diff(&symmetric_lift(&u.power(n)?, &trunc)?)?);
    }
    let dims_ok = trunc.graded_dims().iter().enumerate().all(|(d, &k)| k == multiset_count(m, d));
    Ok(LiftOutcome { m, functor, power, dims_ok })
}

struct CommutantOutcome {
    dim: usize,
    defect: f64,
    containment: f64,
}

fn commutant_instance(m: usize) -> CliResult<CommutantOutcome> {
    let s = cyclic_shift(m)?;
    let basis = commutant_basis(&s)?;
    let defect = basis.iter().map(circulant_defect).fold(0.0, f64::max);
    let scale = C64::new(1.0 / (m as f64).sqrt(), 0.0);
    let circ = (0..m as i64)
        .map(|k| Ok(toeplitz_from_coeffs(&PolynomialInT::monomial(k), &s)?.scale(scale)))
        .collect::<CliResult<Vec<_>>>()?;
    let a = circ.iter().map(|c| span_residual(c, &basis)).fold(0.0, f64::max);
    let b = basis.iter().map(|x| span_residual(x, &circ)).fold(0.0, f64::max);
    Ok(CommutantOutcome { dim: basis.len(), defect, containment: a.max(b) })
}

pub(crate) fn run(cfg: &ExperimentConfig, report: &mut ExperimentReport) -> CliResult<()> {
    let seed = cfg.seed();
    let count = cfg.usize("unitaries")?;
    let degree = cfg.usize("trunc")?;
    let m_max = cfg.usize("m_max")?;
    let n_max = cfg.i64("n_max")?;
    let (s0, s1) = (cfg.usize("shift_min")?, cfg.usize("shift_max")?);
    let tol = cfg.positive("tol")?;
    if m_max == 0 || s0 == 0 || s0 > s1 {
        return Err(CliError::usage("need m_max >= 1 and 1 <= shift_min <= shift_max"));
    }

    let lifts = grid(cfg.parallel(), count, |i| lift_instance(seed, i, 1 + i % m_max, degree, n_max))
        .into_iter()
        .collect::<CliResult<Vec<_>>>()?;
    let (mut functor, mut power, mut dims_ok) = (0.0f64, 0.0f64, true);
    for (i, o) in lifts.iter().enumerate() {
        report.row(i as i64, "lift.functor_error", o.functor);
        report.row(i as i64, "lift.power_error", o.power);
        report.row(i as i64, "lift.base_dim", o.m as f64);
        functor = functor.max(o.functor);
        power = power.max(o.power);
        dims_ok &= o.dims_ok;
    }
    report.summary("lift.max_functor_error", functor);
    report.summary("lift.max_power_error", power);
    report.check("lift_functorial", functor <= tol, format!("max |F(UV) - F(U)F(V)| = {functor:.3e}"));
    report.check("lift_powers", power <= tol, format!("max |F(U)^n - F(U^n)| = {power:.3e} for n <= {n_max}"));
    report.check("graded_dimensions", dims_ok, "C(m+d-1, d) for every degree");

    let ms: Vec<usize> = (s0..=s1).collect();
    let comm = grid(cfg.parallel(), ms.len(), |i| commutant_instance(ms[i]))
        .into_iter()
        .collect::<CliResult<Vec<_>>>()?;
    let (mut dims, mut defect, mut containment) = (true, 0.0f64, 0.0f64);
    for (&m, o) in ms.iter().zip(&comm) {
        report.row(m as i64, "commutant.dim", o.dim as f64);
        report.row(m as i64, "commutant.circulant_defect", o.defect);
        report.row(m as i64, "commutant.containment_residual", o.containment);
        dims &= o.dim == m;
        defect = defect.max(o.defect);
        containment = containment.max(o.containment);
    }
    report.check("commutant_dimension", dims, format!("dim = m for m in {s0}..={s1}"));
    report.check("commutant_circulant", defect <= tol, format!("max circulant defect {defect:.3e}"));
    report.check("commutant_equals_toeplitz", containment <= tol, format!("max span residual {containment:.3e}"));
    Ok(())
}
