use std::path::Path;

use rayon::prelude::*;

use super::config::{CheckKind, CheckSpec, Config};
use super::table::Table;
use super::{localtime_table, ratio_histogram, ratio_reports, ratio_table, run_pde, simulate, PdeRun, Simulation};
use crate::error::{Error, Result};
use crate::fv::Initial;
use crate::localtime::{self, Notion};
use crate::path::{terminal_mean, transmission_probability, upper_fraction};

/// Test function for the duality check.
fn duality_test_function(y: f64) -> f64 {
    (-y * y).exp()
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub kind: CheckKind,
    pub predicted: f64,
    pub observed: f64,
    /// Monte Carlo standard error of `observed`; NaN for deterministic checks.
    pub stderr: f64,
    /// Quantity compared against `tolerance` (absolute or relative, per kind).
    pub error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub plan: String,
    /// Sorted by name.
    pub results: Vec<CheckResult>,
}

impl CheckReport {
    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|r| r.pass)
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new(&["name", "kind", "predicted", "observed", "stderr", "error", "tolerance", "status"]);
        for r in &self.results {
            t.push(vec![
                r.name.clone().into(),
                r.kind.as_str().into(),
                r.predicted.into(),
                r.observed.into(),
                r.stderr.into(),
                r.error.into(),
                r.tolerance.into(),
                r.pass.into(),
            ]);
        }
        t
    }
}

/// The CSV trail of one plan run.
#[derive(Clone, Debug)]
pub struct Artifacts {
    pub ensemble: Table,
    pub localtime: Table,
    pub ratio: Table,
    pub ratio_hist: Option<Table>,
    pub pde: Table,
    pub report: Table,
}

/// Writes `dir/{ensemble,localtime,ratio,pde,report}.csv` (and
/// `ratio_hist.csv` when the medium has an interface).
pub fn write_artifacts(dir: &Path, a: &Artifacts) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    a.ensemble.write_to(&dir.join("ensemble.csv"))?;
    a.localtime.write_to(&dir.join("localtime.csv"))?;
    a.ratio.write_to(&dir.join("ratio.csv"))?;
    if let Some(h) = &a.ratio_hist {
        h.write_to(&dir.join("ratio_hist.csv"))?;
    }
    a.pde.write_to(&dir.join("pde.csv"))?;
    a.report.write_to(&dir.join("report.csv"))?;
    Ok(())
}

fn result(spec: &CheckSpec, predicted: f64, observed: f64, stderr: f64, error: f64) -> CheckResult {
    CheckResult {
        name: spec.name(),
        kind: spec.kind,
        predicted,
        observed,
        stderr,
        error,
        tolerance: spec.tolerance,
        pass: error <= spec.tolerance,
    }
}

fn evaluate(spec: &CheckSpec, config: &Config, sim: &Simulation, pde: &PdeRun, eps: &[f64]) -> Result<CheckResult> {
    let medium = &config.medium;
    let ens = &sim.ensemble;
    let x_j = || medium.interfaces()[spec.interface].x;
    Ok(match spec.kind {
        CheckKind::Splitting => {
            let x = x_j();
            let predicted = transmission_probability(medium, x)?;
            let (p, se) = upper_fraction(ens, &sim.chain, &sim.scale, x)?;
            result(spec, predicted, p, se, (p - predicted).abs())
        }
        CheckKind::JumpRatio | CheckKind::OccupationRatio => {
            let r = if spec.kind == CheckKind::JumpRatio {
                localtime::estimate_ratio(ens, medium, spec.interface, eps)?
            } else {
                localtime::occupation_ratio(ens, medium, spec.interface, eps)?
            };
            result(spec, r.predicted, r.extrapolated, r.stderr, r.relative_error())
        }
        CheckKind::Continuity => {
            let x = spec.at.expect("validated");
            let p = localtime::continuity_probe(ens, &sim.scale, x, eps)?;
            // at an interface only ℓ/m′ is continuous
            let (right, left, diff_se) = if medium.interface_at(x).is_some() {
                (p.normalized_right, p.normalized_left, p.normalized_stderr)
            } else {
                (p.right.value, p.left.value, p.difference_stderr)
            };
            if left <= 0.0 {
                return Err(Error::UndefinedRatio { x });
            }
            let ratio = right / left;
            result(spec, 1.0, ratio, diff_se / left, (ratio - 1.0).abs())
        }
        CheckKind::Duality => {
            let predicted = crate::fv::expectation(&pde.system, &pde.p, duality_test_function);
            let (mc, se) = terminal_mean(ens, duality_test_function);
            result(spec, predicted, mc, se, (mc - predicted).abs())
        }
        CheckKind::Conservation => result(spec, pde.mass_initial, pde.mass_final, f64::NAN, pde.mass_drift()),
    })
}

/// Simulates, solves and evaluates every check of the plan. Checks run
/// concurrently; the report is sorted by check name.
pub fn run_checks(config: &Config) -> Result<(CheckReport, Artifacts)> {
    let plan = &config.plan;
    let medium = &config.medium;
    let eps = plan.epsilons();
    let hist_interface = plan
        .checks
        .iter()
        .find(|c| c.kind == CheckKind::JumpRatio)
        .map_or(0, |c| c.interface);
    let focus = medium.interfaces().get(hist_interface).map(|i| (i.x, eps[0]));

    let (sim, pde) = rayon::join(
        || simulate(medium, &plan.engine, 0, focus),
        || {
            let s = &plan.solver;
            run_pde(medium, &Initial::Delta(plan.engine.start), plan.engine.t, s.cells, s.dt, s.scheme)
        },
    );
    let (sim, pde) = (sim?, pde?);

    let mut results = plan
        .checks
        .par_iter()
        .map(|c| {
            evaluate(c, config, &sim, &pde, &eps).map_err(|e| Error::Check { name: c.name(), source: Box::new(e) })
        })
        .collect::<Result<Vec<_>>>()?;
    results.sort_by(|a, b| a.name.cmp(&b.name));
    let report = CheckReport { plan: plan.name.clone(), results };

    let mut points = medium.interface_positions();
    points.extend(&plan.estimator.probes);
    let ens = &sim.ensemble;
    let artifacts = Artifacts {
        ensemble: super::ensemble_table(ens),
        localtime: localtime_table(ens, &sim.scale, &points, &eps, &[Notion::Nlt, Notion::Smlt, Notion::Dlt])?,
        ratio: ratio_table(&ratio_reports(ens, medium, &eps)?),
        ratio_hist: focus.map(|_| ratio_histogram(ens, medium, hist_interface, eps[0], 50)).transpose()?,
        pde: pde.table(),
        report: report.table(),
    };
    Ok((report, artifacts))
}
