use weaklimit::transformations::{
    closed_form_f1, closed_form_f2, folding_koopman, nonzero_indices, quadrature_coefficient, FoldingMapSpec,
};
use weaklimit::C64;

use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};
use crate::experiments::rigidity::join;
use crate::report::ExperimentReport;

pub(crate) fn run(cfg: &ExperimentConfig, report: &mut ExperimentReport) -> CliResult<()> {
    let trunc = cfg.usize("trunc")?;
    let bound = cfg.i64("n_max")?;
    if bound < 2 {
        return Err(CliError::usage("n_max (index range) must be at least 2"));
    }
    let threshold = cfg.positive("threshold")?;
    let tol = cfg.positive("tol")?;
    let quad_tol = cfg.positive("quad_tol")?;

    let special = [
        ("<Sf1,f1>", closed_form_f1(1), 0.5),
        ("<Sf1,f-1>", closed_form_f1(-1), -0.5),
        ("<Sf2,f2>", closed_form_f2(2), 0.5),
        ("<Sf2,f-2>", closed_form_f2(-2), 0.5),
    ];
    let mut worst_special = 0.0f64;
    for (name, z, want) in special {
        report.summary(format!("{name}.re"), z.re);
        report.summary(format!("{name}.im"), z.im);
        worst_special = worst_special.max((z - C64::new(want, 0.0)).norm());
    }
    report.check("special_values", worst_special <= tol, format!("max error {worst_special:.3e} <= {tol:e}"));

    let js: Vec<i64> = (-bound..=bound).collect();
    let quad = crate::experiments::grid(cfg.parallel(), js.len(), |i| {
        (quadrature_coefficient(1, js[i]), quadrature_coefficient(2, js[i]))
    });
    let mut worst_quad = 0.0f64;
    for (&j, (q1, q2)) in js.iter().zip(&quad) {
        let (c1, c2) = (closed_form_f1(j), closed_form_f2(j));
        let (e1, e2) = ((c1 - q1).norm(), (c2 - q2).norm());
        worst_quad = worst_quad.max(e1).max(e2);
        report.row(j, "f1.re", c1.re);
        report.row(j, "f1.im", c1.im);
        report.row(j, "f2.re", c2.re);
        report.row(j, "f2.im", c2.im);
        report.row(j, "f1.quad_err", e1);
        report.row(j, "f2.quad_err", e2);
    }
    report.summary("max_quadrature_error", worst_quad);
    report.check("closed_forms_vs_quadrature", worst_quad <= quad_tol, format!("{worst_quad:.3e} <= {quad_tol:e}"));

    let m1 = nonzero_indices(1, bound, threshold);
    let m2 = nonzero_indices(2, bound, threshold);
    let want1: Vec<i64> = js.iter().copied().filter(|&j| (j % 2 == 0 && j != 0) || j.abs() == 1).collect();
    let want2: Vec<i64> = js.iter().copied().filter(|&j| j % 2 != 0 || j.abs() == 2).collect();
    report.note("nonzero_f1", join(&m1));
    report.note("nonzero_f2", join(&m2));
    report.check("index_set_f1", m1 == want1, format!("{} indices in |j| <= {bound}", m1.len()));
    report.check("index_set_f2", m2 == want2, format!("{} indices in |j| <= {bound}", m2.len()));

    let matrix = folding_koopman(&FoldingMapSpec::new(trunc)?);
    let norm = matrix.operator_norm();
    report.summary("truncated_norm", norm);
    report.check("truncation_contracts", norm <= 1.0 + 1e-9, format!("operator norm {norm:.12}"));
    Ok(())
}
