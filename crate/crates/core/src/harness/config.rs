use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fv::Scheme;
use crate::media::{Interface, Medium, MediumSpec, Piece};
use crate::path::HoldingMode;

/// The config document: a medium plus an optional `experiment` section.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigDoc {
    window: [f64; 2],
    bounds: [f64; 2],
    #[serde(default)]
    interfaces: Vec<Interface>,
    pieces: Vec<Piece>,
    #[serde(default)]
    experiment: Option<ExperimentPlan>,
}

/// The medium part only; the experiment section is skipped unparsed.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MediumDoc {
    window: [f64; 2],
    bounds: [f64; 2],
    #[serde(default)]
    interfaces: Vec<Interface>,
    pieces: Vec<Piece>,
    #[serde(default, rename = "experiment")]
    _experiment: Option<serde::de::IgnoredAny>,
}

/// Reads the medium of a config document without validating it.
pub fn parse_medium_str(text: &str) -> Result<MediumSpec> {
    let d: MediumDoc = serde_json::from_str(text)?;
    Ok(MediumSpec { window: d.window, bounds: d.bounds, interfaces: d.interfaces, pieces: d.pieces })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Splitting,
    JumpRatio,
    OccupationRatio,
    Duality,
    Conservation,
    Continuity,
}

impl CheckKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckKind::Splitting => "splitting",
            CheckKind::JumpRatio => "jump_ratio",
            CheckKind::OccupationRatio => "occupation_ratio",
            CheckKind::Duality => "duality",
            CheckKind::Conservation => "conservation",
            CheckKind::Continuity => "continuity",
        }
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckSpec {
    pub kind: CheckKind,
    /// Defaults to the kind, suffixed with the interface index or probe point.
    #[serde(default)]
    pub name: Option<String>,
    pub tolerance: f64,
    /// Interface index for splitting and ratio checks.
    #[serde(default)]
    pub interface: usize,
    /// Probe point for continuity checks.
    #[serde(default)]
    pub at: Option<f64>,
}

impl CheckSpec {
    pub fn name(&self) -> String {
        match (&self.name, self.kind) {
            (Some(n), _) => n.clone(),
            (None, CheckKind::Continuity) => format!("continuity@{}", self.at.unwrap_or(f64::NAN)),
            (None, CheckKind::Splitting | CheckKind::JumpRatio | CheckKind::OccupationRatio) => {
                format!("{}#{}", self.kind, self.interface)
            }
            (None, kind) => kind.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EngineSettings {
    pub h: f64,
    pub t: f64,
    pub paths: usize,
    pub seed: u64,
    pub mode: HoldingMode,
    pub start: f64,
}

impl Default for EngineSettings {
    fn default() -> Self {
        EngineSettings { h: 0.01, t: 0.5, paths: 10_000, seed: 1, mode: HoldingMode::Fixed, start: 0.0 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EstimatorSettings {
    /// Decreasing window widths; `{8h, 4h, 2h}` when absent.
    pub epsilons: Option<Vec<f64>>,
    /// Extra points at which local times are tabulated.
    pub probes: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSettings {
    pub cells: usize,
    pub dt: f64,
    pub scheme: Scheme,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings { cells: 2000, dt: 1e-4, scheme: Scheme::ImplicitEuler }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentPlan {
    #[serde(default = "default_plan_name")]
    pub name: String,
    #[serde(default)]
    pub engine: EngineSettings,
    #[serde(default)]
    pub estimator: EstimatorSettings,
    #[serde(default)]
    pub solver: SolverSettings,
    #[serde(default)]
    pub checks: Vec<CheckSpec>,
}

fn default_plan_name() -> String {
    "plan".to_string()
}

impl Default for ExperimentPlan {
    fn default() -> Self {
        ExperimentPlan {
            name: default_plan_name(),
            engine: EngineSettings::default(),
            estimator: EstimatorSettings::default(),
            solver: SolverSettings::default(),
            checks: Vec::new(),
        }
    }
}

impl ExperimentPlan {
    pub fn epsilons(&self) -> Vec<f64> {
        self.estimator.epsilons.clone().unwrap_or_else(|| crate::localtime::default_epsilons(self.engine.h))
    }

    /// Structural checks that do not need the medium beyond interface count.
    pub fn validate(&self, medium: &Medium) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.name.is_empty() || self.name.contains(['/', '\\']) || self.name == "." || self.name == ".." {
            return bad(format!("plan name `{}` is not a valid directory name", self.name));
        }
        let e = &self.engine;
        if !(e.h > 0.0 && e.t > 0.0 && e.paths > 0) {
            return bad(format!("engine needs h > 0, t > 0, paths > 0 (got h={}, t={}, paths={})", e.h, e.t, e.paths));
        }
        let s = &self.solver;
        if !(s.dt > 0.0 && s.cells > 0) {
            return bad(format!("solver needs dt > 0 and cells > 0 (got dt={}, cells={})", s.dt, s.cells));
        }
        if let Some(eps) = &self.estimator.epsilons {
            if eps.is_empty() || eps.iter().any(|&x| !(x > 0.0)) || eps.windows(2).any(|w| w[1] >= w[0]) {
                return bad(format!("epsilons must be positive and decreasing: {eps:?}"));
            }
        }
        let mut names = BTreeSet::new();
        for c in &self.checks {
            let name = c.name();
            if !(c.tolerance >= 0.0) {
                return bad(format!("check `{name}`: tolerance must be non-negative, got {}", c.tolerance));
            }
            let needs_interface =
                matches!(c.kind, CheckKind::Splitting | CheckKind::JumpRatio | CheckKind::OccupationRatio);
            if needs_interface && c.interface >= medium.interfaces().len() {
                return bad(format!("check `{name}`: no interface with index {}", c.interface));
            }
            if c.kind == CheckKind::Continuity && c.at.is_none() {
                return bad(format!("check `{name}`: continuity checks need `at`"));
            }
            if !names.insert(name.clone()) {
                return bad(format!("check name `{name}` appears twice"));
            }
        }
        Ok(())
    }
}

/// A parsed and validated config document.
#[derive(Clone, Debug)]
pub struct Config {
    pub medium: Medium,
    pub plan: ExperimentPlan,
}

/// Parses a config document; serde reports syntax and schema errors with
/// line and column.
pub fn parse_config_str(text: &str) -> Result<Config> {
    let doc: ConfigDoc = serde_json::from_str(text)?;
    let medium = Medium::new(MediumSpec {
        window: doc.window,
        bounds: doc.bounds,
        interfaces: doc.interfaces,
        pieces: doc.pieces,
    })?;
    let plan = doc.experiment.unwrap_or_default();
    plan.validate(&medium)?;
    Ok(Config { medium, plan })
}

pub fn parse_config(path: &Path) -> Result<Config> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config_str(&text)
}
