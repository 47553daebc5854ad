use weaklimit::operator::{
    commutator_residual_maps, commutes_check, isometry_defect_witness, left_composition_lipschitz, PolynomialInT,
    PolynomialMap,
};
use weaklimit::rigidity::weak_limit_detect;
use weaklimit::transformations::{cyclic_shift, rank_one_build, PermutationKoopman, RankOneSpec};
use weaklimit::{Basis, OperatorMatrix};

use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};
use crate::experiments::chacon::analysis_from;
use crate::experiments::rigidity::{denominators_up_to, rotation_operator};
use crate::report::ExperimentReport;

pub(crate) fn run(cfg: &ExperimentConfig, report: &mut ExperimentReport) -> CliResult<()> {
    let tol = cfg.positive("tol")?;
    let rot_tol = cfg.positive("rotation_tol")?;
    let chacon_tol = cfg.positive("chacon_tol")?;
    rotation_part(cfg, report, tol, rot_tol)?;
    chacon_part(cfg, report, tol, chacon_tol)?;
    isometry_part(cfg, report)?;
    Ok(())
}

/// The rotation limit along denominators is `I`; `T·I` must reappear
/// one step later.
fn rotation_part(cfg: &ExperimentConfig, report: &mut ExperimentReport, tol: f64, detect_tol: f64) -> CliResult<()> {
    let setup = rotation_operator("golden", cfg.usize("trunc")?, cfg.usize("terms")?)?;
    let q = denominators_up_to(setup.alpha, cfg.u64("n_max")?)?;
    let times: Vec<i64> = q.iter().map(|&n| n as i64).collect();
    let shifted: Vec<i64> = times.iter().map(|n| n + 1).collect();
    let base = weak_limit_detect(&setup.t, &[PolynomialInT::monomial(0)], &times, detect_tol, &setup.seq)?;
    let next = weak_limit_detect(&setup.t, &[PolynomialInT::monomial(1)], &shifted, detect_tol, &setup.seq)?;
    let v = OperatorMatrix::identity(setup.t.dim(), Basis::Fourier);
    let c = commutes_check(&v, &setup.t, tol)?;
    report.summary("rotation.commutator", c.residual);
    report.check("rotation_limit_commutes", c.commutes, format!("|VT - TV| = {:.3e}", c.residual));
    let lip = left_composition_lipschitz(&setup.t, &setup.seq);
    let mut within = true;
    for (i, &n) in times.iter().enumerate() {
        let (d0, d1) = (base.table[i][0], next.table[i][0]);
        report.row(n, "rotation.d(T^n,I)", d0);
        report.row(n + 1, "rotation.d(T^(n+1),T)", d1);
        if let Some(l) = lip {
            within &= d1 <= l * d0 + 1e-12;
        }
    }
    let last = next.table.last().map_or(f64::INFINITY, |r| r[0]);
    report.summary("rotation.final_shifted", last);
    if let Some(l) = lip {
        report.summary("rotation.lipschitz", l);
        report.check("rotation_shift_lipschitz", within, format!("d(T^(n+1), T) <= {l:.4} d(T^n, I)"));
    }
    report.check("rotation_shift_detected", last < detect_tol, format!("{last:.6e} < {detect_tol:e}"));
    Ok(())
}

/// The Chacon limit `V = P(T)` commutes with `T`, and `T·V` is detected at
/// times `h_n + 1`.
fn chacon_part(cfg: &ExperimentConfig, report: &mut ExperimentReport, tol: f64, detect_tol: f64) -> CliResult<()> {
    let a = analysis_from(cfg)?;
    let v = a.candidates[*a.argmin.last().expect("nonempty")].clone();
    let stage = *a.stages.last().expect("nonempty");
    let p = rank_one_build(&RankOneSpec::chacon(stage)?, stage)?;
    let t = PermutationKoopman::new(p.perm());
    let residual = commutator_residual_maps(&PolynomialMap { base: &t, poly: &v }, &t)?;
    report.note("chacon.limit", v.to_string());
    report.note("chacon.shifted_limit", v.shifted(1).to_string());
    report.summary("chacon.commutator", residual);
    report.check("chacon_limit_commutes", residual <= tol, format!("|VT - TV| = {residual:.3e} on {} atoms", p.atom_count()));
    for (s, &h) in a.heights.iter().enumerate() {
        report.row(h, "chacon.d(T^h,V)", a.minima[s]);
        report.row(h + 1, "chacon.d(T^(h+1),TV)", a.shifted[s]);
    }
    let last = *a.shifted.last().expect("nonempty");
    let decreasing = a.shifted.windows(2).all(|w| w[1] < w[0]);
    report.check("chacon_shift_decreases", decreasing, format!("{:?}", a.shifted));
    report.check("chacon_shift_detected", last < detect_tol, format!("{last:.6e} < {detect_tol:e}"));
    Ok(())
}

/// `‖½(I + T^k) e‖ = 1/√2` exactly when `k ≢ 0 (mod m)`.
fn isometry_part(cfg: &ExperimentConfig, report: &mut ExperimentReport) -> CliResult<()> {
    let m = cfg.usize("shift_m")?;
    if m < 2 {
        return Err(CliError::usage("shift_m must be at least 2"));
    }
    let s = cyclic_shift(m)?;
    let target = std::f64::consts::FRAC_1_SQRT_2;
    let mut worst = 0.0f64;
    let mut identity_ok = true;
    for k in -2 * m as i64..=2 * m as i64 {
        let w = isometry_defect_witness(&s, k)?;
        report.row(k, "isometry.witness_norm", w.norm);
        if k.rem_euclid(m as i64) == 0 {
            identity_ok &= (w.norm - 1.0).abs() <= 1e-12;
        } else {
            worst = worst.max((w.norm - target).abs());
        }
    }
    report.check("isometry_defect", worst <= 1e-12, format!("max |‖½(e + T^k e)‖ - 1/√2| = {worst:.3e}"));
    report.check("isometry_at_period", identity_ok, "½(I + T^k) = I when m divides k");
    Ok(())
}
