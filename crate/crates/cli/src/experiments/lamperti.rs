use rand::Rng;
use weaklimit::lp::presets::{k_cycle, random_long_cycles, two_atom_swap};
use weaklimit::lp::{approx_eigenvector, lamperti_apply, root_p, rokhlin_tower_find, LampertiOperator, NonsingularMapSpec};
use weaklimit::random::gaussian_vector;
use weaklimit::C64;

use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};
use crate::experiments::grid;
use crate::experiments::kronecker::stream;
use crate::report::ExperimentReport;

const LAMPERTI_STREAM: u64 = 4 << 48;
const EXPONENTS: [f64; 4] = [1.0, 1.5, 2.0, 3.0];

struct Cell {
    p: f64,
    delta: f64,
    height: usize,
    root: usize,
}

struct CellOutcome {
    defect: f64,
    bound: f64,
    nominal: f64,
    norm: f64,
    residual: f64,
}

pub(crate) fn run(cfg: &ExperimentConfig, report: &mut ExperimentReport) -> CliResult<()> {
    let seed = cfg.seed();
    let roots = cfg.usize("roots")?;
    let k = cfg.usize("cycle_atoms")?;
    let big = cfg.usize("tower_atoms")?;
    let samples = cfg.usize("random_f")?;
    let tol = cfg.positive("tol")?;
    let l1_tol = cfg.positive("l1_tol")?;
    if roots == 0 || k < 2 || big < 8000 {
        return Err(CliError::usage("need roots >= 1, cycle_atoms >= 2, tower_atoms >= 8000"));
    }

    let cycle = k_cycle(k, seed)?;
    let long = random_long_cycles(big, 4000, 8000, seed.wrapping_add(1))?;
    let cases: [(f64, usize, &NonsingularMapSpec); 3] = [(0.0, k, &cycle), (0.05, 100, &long), (0.1, 10, &long)];
    let towers = cases
        .iter()
        .map(|&(delta, n, map)| rokhlin_tower_find(map, n, delta))
        .collect::<weaklimit::Result<Vec<_>>>()?;
    let mut cells = Vec::new();
    for (ci, &(delta, height, _)) in cases.iter().enumerate() {
        for &p in &EXPONENTS {
            for root in 0..roots {
                cells.push((ci, Cell { p, delta, height, root }));
            }
        }
    }
    let outcomes = grid(cfg.parallel(), cells.len(), |i| -> CliResult<CellOutcome> {
        let (ci, c) = &cells[i];
        let op = LampertiOperator::new(c.p, cases[*ci].2.clone())?;
        let lambda = C64::from_polar(1.0, std::f64::consts::TAU * c.root as f64 / roots as f64);
        let e = approx_eigenvector(&op, &towers[*ci], lambda)?;
        Ok(CellOutcome {
            defect: e.defect,
            bound: e.bound,
            nominal: 2.0 * root_p(c.delta + 1.0 / c.height as f64, c.p),
            norm: e.norm,
            residual: towers[*ci].residual_mass,
        })
    })
    .into_iter()
    .collect::<CliResult<Vec<_>>>()?;
    let (mut violations, mut norm_err) = (0usize, 0.0f64);
    for (i, ((_, c), o)) in cells.iter().zip(&outcomes).enumerate() {
        let label = format!("p={},delta={},n={}", c.p, c.delta, c.height);
        report.row(i as i64, format!("{label}.defect"), o.defect);
        report.row(i as i64, format!("{label}.bound"), o.nominal);
        violations += usize::from(o.defect > o.bound || o.bound > o.nominal);
        norm_err = norm_err.max((o.norm - 1.0).abs());
    }
    for (ci, &(delta, n, _)) in cases.iter().enumerate() {
        report.summary(format!("tower.delta={delta},n={n}.residual"), outcomes[ci * EXPONENTS.len() * roots].residual);
    }
    report.summary("eigen.violations", violations as f64);
    report.summary("eigen.max_norm_error", norm_err);
    report.check("eigen_bound", violations == 0, format!("{violations} of {} grid cells above 2(delta + 1/n)^(1/p)", cells.len()));
    report.check("eigen_normalized", norm_err <= tol, format!("max |‖f‖_p - 1| = {norm_err:.3e}"));

    let presets: [(&str, NonsingularMapSpec); 3] =
        [("k_cycle", cycle.clone()), ("random_long_cycles", long.clone()), ("two_atom_swap", two_atom_swap())];
    let (mut l1_err, mut negative) = (0.0f64, 0usize);
    for (pi, (name, map)) in presets.iter().enumerate() {
        let op = LampertiOperator::new(1.0, map.clone())?;
        let m = map.masses_f64();
        let mut rng = stream(seed, LAMPERTI_STREAM, pi);
        let mut worst = 0.0f64;
        for _ in 0..samples {
            let f = gaussian_vector(&mut rng, op.dim());
            let tf = lamperti_apply(&op, &f)?;
            let before: C64 = m.iter().zip(&f).map(|(w, z)| w * z).sum();
            let after: C64 = m.iter().zip(&tf).map(|(w, z)| w * z).sum();
            worst = worst.max((before - after).norm());
            let g: Vec<C64> = (0..op.dim()).map(|_| C64::new(rng.random_range(0.0..1.0), 0.0)).collect();
            negative += lamperti_apply(&op, &g)?.iter().filter(|z| z.re < 0.0 || z.im != 0.0).count();
        }
        report.row(pi as i64, format!("l1.{name}"), worst);
        l1_err = l1_err.max(worst);
    }
    report.summary("l1.max_error", l1_err);
    report.check("l1_invariance", l1_err <= l1_tol, format!("max |Σ m Tf - Σ m f| = {l1_err:.3e}"));
    report.check("positivity", negative == 0, format!("{negative} negative outputs from nonnegative inputs"));
    Ok(())
}
