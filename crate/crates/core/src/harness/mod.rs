//! Configuration, orchestration and CSV emission behind the `ltlab` binary.
//!
//! Every subcommand is a plain function here returning [`Table`]s, so the
//! binary only parses flags and writes files.

mod checks;
mod config;
mod table;

use std::path::Path;

use serde::{Deserialize, Serialize};

pub use checks::{run_checks, write_artifacts, Artifacts, CheckReport, CheckResult};
pub use config::{
    parse_config, parse_config_str, parse_medium_str, CheckKind, CheckSpec, Config, EngineSettings, EstimatorSettings, ExperimentPlan,
    SolverSettings,
};
pub use table::{format_float, read_xy_csv, Cell, Table};

use crate::error::{Error, Result};
use crate::fv::{self, DensityField, FvSystem, Initial, Scheme};
use crate::localtime::{self, JumpRatioReport, LocalTimeEstimate, Notion};
use crate::media::{Medium, MediumSpec, Side, ValidationReport};
use crate::path::{build_grid, chain_parameters, simulate_paths, ChainModel, PathEnsemble, SimulationConfig};
use crate::scale::ScaleSpeed;

pub fn validation_table(report: &ValidationReport) -> Table {
    let mut t = Table::new(&["rule", "location", "detail"]);
    for v in &report.violations {
        t.push(vec![v.rule.describe().into(), v.location.clone().into(), v.detail.clone().into()]);
    }
    t
}

/// Validates a raw medium document without building the plan.
pub fn validate_document(text: &str) -> Result<ValidationReport> {
    Ok(config::parse_medium_str(text)?.validate())
}

pub fn scale_table(ss: &ScaleSpeed, n: usize) -> Table {
    let mut t = Table::new(&["x", "s_prime_left", "s_prime_right", "m_prime_left", "m_prime_right", "s"]);
    for r in ss.tabulate(n) {
        t.push(vec![
            r.x.into(),
            r.s_prime_left.into(),
            r.s_prime_right.into(),
            r.m_prime_left.into(),
            r.m_prime_right.into(),
            r.s.into(),
        ]);
    }
    t
}

/// Everything needed to regenerate an ensemble bit for bit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleManifest {
    pub medium: MediumSpec,
    pub engine: EngineSettings,
    pub grid_id: u64,
}

/// A simulated ensemble together with the model that produced it.
pub struct Simulation {
    pub scale: ScaleSpeed,
    pub chain: ChainModel,
    pub ensemble: PathEnsemble,
}

impl Simulation {
    pub fn manifest(&self, engine: &EngineSettings) -> EnsembleManifest {
        EnsembleManifest { medium: self.scale.medium().spec().clone(), engine: engine.clone(), grid_id: self.ensemble.meta.grid_id }
    }
}

/// `focus = Some((x, eps))` keeps per-path tallies on the nodes within
/// `eps` of `x`.
pub fn simulate(
    medium: &Medium,
    engine: &EngineSettings,
    trace: usize,
    focus: Option<(f64, f64)>,
) -> Result<Simulation> {
    let scale = ScaleSpeed::new(medium);
    let chain = chain_parameters(&scale, &build_grid(medium, engine.h)?);
    let cfg = SimulationConfig {
        mode: engine.mode,
        trace,
        focus: focus.and_then(|(x, eps)| focus_band(chain.grid().nodes(), x, eps)),
        ..SimulationConfig::new(engine.start, engine.t, engine.paths, engine.seed)
    };
    let ensemble = simulate_paths(&chain, &cfg)?;
    Ok(Simulation { scale, chain, ensemble })
}

/// Regenerates the ensemble described by a manifest, checking the grid matches.
pub fn load_ensemble(path: &Path) -> Result<(Medium, EngineSettings, Simulation)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    let manifest: EnsembleManifest = serde_json::from_str(&text)?;
    let medium = Medium::new(manifest.medium)?;
    let sim = simulate(&medium, &manifest.engine, 0, None)?;
    if sim.ensemble.meta.grid_id != manifest.grid_id {
        return Err(Error::Config(format!(
            "grid id {} in {} does not match the regenerated grid {}",
            manifest.grid_id,
            path.display(),
            sim.ensemble.meta.grid_id
        )));
    }
    Ok((medium, manifest.engine, sim))
}

pub fn ensemble_table(ens: &PathEnsemble) -> Table {
    let mut t = Table::new(&["node_x", "total_occupation_time", "visit_count"]);
    for ((&x, &o), &v) in ens.node_x.iter().zip(&ens.occupation).zip(&ens.visits) {
        t.push(vec![x.into(), o.into(), v.into()]);
    }
    t
}

pub fn trace_table(ens: &PathEnsemble) -> Table {
    let mut t = Table::new(&["path", "node_index", "holding_time"]);
    for (i, tr) in ens.traces.iter().enumerate() {
        for &(k, dt) in tr {
            t.push(vec![i.into(), (k as usize).into(), dt.into()]);
        }
    }
    t
}

fn push_estimate(t: &mut Table, e: &LocalTimeEstimate) {
    t.push(vec![e.x.into(), e.side.as_str().into(), e.epsilon.into(), e.notion.as_str().into(), e.value.into(), e.stderr.into()]);
}

/// Local times at each point, both sides, in the requested notions: per
/// window width, then the extrapolation (empty `epsilon`).
pub fn localtime_table(
    ens: &PathEnsemble,
    ss: &ScaleSpeed,
    points: &[f64],
    epsilons: &[f64],
    notions: &[Notion],
) -> Result<Table> {
    let mut t = Table::new(&["x", "side", "epsilon", "notion", "value", "stderr"]);
    for &x in points {
        for side in [Side::Left, Side::Right] {
            let nlt = localtime::nlt_estimate(ens, ss.medium(), x, side, epsilons)?;
            for &notion in notions {
                let fam = localtime::convert_family(&nlt, notion, ss)?;
                fam.per_epsilon.iter().chain([&fam.extrapolated]).for_each(|e| push_estimate(&mut t, e));
            }
        }
    }
    Ok(t)
}

pub fn ratio_reports(ens: &PathEnsemble, medium: &Medium, epsilons: &[f64]) -> Result<Vec<JumpRatioReport>> {
    (0..medium.interfaces().len()).map(|j| localtime::estimate_ratio(ens, medium, j, epsilons)).collect()
}

pub fn ratio_table(reports: &[JumpRatioReport]) -> Table {
    let mut t = Table::new(&["x_j", "predicted", "estimated", "half_width"]);
    for r in reports {
        t.push(vec![r.x.into(), r.predicted.into(), r.extrapolated.into(), r.half_width.into()]);
    }
    t
}

/// Node range covering both `eps`-windows around `x`, for per-path tallies.
pub fn focus_band(ens_nodes: &[f64], x: f64, eps: f64) -> Option<(usize, usize)> {
    let tol = 1e-9 * eps;
    let lo = ens_nodes.partition_point(|&y| y < x - eps - tol);
    let hi = ens_nodes.partition_point(|&y| y <= x + eps + tol);
    (hi > lo).then(|| (lo, hi - 1))
}

/// Histogram of per-path right/left ratios at interface `j`.
pub fn ratio_histogram(ens: &PathEnsemble, medium: &Medium, j: usize, eps: f64, bins: usize) -> Result<Table> {
    let ratios = localtime::per_path_ratios(ens, medium, j, eps)?;
    let hi = 4.0 * localtime::predicted_ratio(medium, j);
    let counts = localtime::histogram(&ratios, bins, 0.0, hi);
    let mut t = Table::new(&["bin_lo", "bin_hi", "count"]);
    let w = hi / bins as f64;
    for (b, c) in counts.into_iter().enumerate() {
        t.push(vec![(b as f64 * w).into(), ((b + 1) as f64 * w).into(), c.into()]);
    }
    Ok(t)
}

/// Parses `delta:<x0>` or `csv:<path>`.
pub fn parse_initial(spec: &str) -> Result<Initial> {
    match spec.split_once(':') {
        Some(("delta", x)) => x
            .trim()
            .parse()
            .map(Initial::Delta)
            .map_err(|_| Error::Config(format!("bad delta location `{x}`"))),
        Some(("csv", p)) => Ok(Initial::Tabulated(read_xy_csv(Path::new(p))?)),
        _ => Err(Error::Config(format!("initial data must be `delta:<x0>` or `csv:<path>`, got `{spec}`"))),
    }
}

pub struct PdeRun {
    pub system: FvSystem,
    pub field: DensityField,
    pub p: Vec<f64>,
    pub mass_initial: f64,
    pub mass_final: f64,
}

impl PdeRun {
    pub fn mass_drift(&self) -> f64 {
        (self.mass_final - self.mass_initial).abs() / self.mass_initial.abs()
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new(&["cell_center", "u", "p", "eta"]);
        for i in 0..self.system.len() {
            t.push(vec![self.system.centers()[i].into(), self.field.u[i].into(), self.p[i].into(), self.system.eta()[i].into()]);
        }
        t
    }

    pub fn summary(&self) -> Table {
        let mut t = Table::new(&["mass_initial", "mass_final", "mass_drift"]);
        t.push(vec![self.mass_initial.into(), self.mass_final.into(), self.mass_drift().into()]);
        t
    }
}

/// Solves the forward problem. For a delta start `p = η/η(x0)·u`; for
/// tabulated data `p = η u / M₀`, the normalized conserved density.
pub fn run_pde(medium: &Medium, init: &Initial, t: f64, cells: usize, dt: f64, scheme: Scheme) -> Result<PdeRun> {
    let (system, field) = fv::solve_forward(medium, init, t, cells, dt, scheme)?;
    let mass_initial = fv::initial_field(&system, medium, init)?.mass(&system);
    let mass_final = field.mass(&system);
    let p = match init {
        Initial::Delta(x0) => fv::p_from_q(&system, medium, &field, *x0)?,
        Initial::Tabulated(_) => field.u.iter().zip(system.eta()).map(|(u, e)| e * u / mass_initial).collect(),
    };
    Ok(PdeRun { system, field, p, mass_initial, mass_final })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_spec_parsing() {
        assert_eq!(parse_initial("delta:-0.25").unwrap(), Initial::Delta(-0.25));
        assert!(parse_initial("delta:abc").is_err());
        assert!(parse_initial("gauss:1").is_err());
    }

    #[test]
    fn focus_band_covers_both_windows() {
        let nodes: Vec<f64> = (0..=20).map(|i| -1.0 + 0.1 * i as f64).collect();
        assert_eq!(focus_band(&nodes, 0.0, 0.2), Some((8, 12)));
    }
}
