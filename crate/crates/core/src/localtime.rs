//! Local-time estimators on simulated ensembles.
//!
//! Natural local time (nlt, time/length) is the occupation density with
//! respect to Lebesgue measure; semimartingale local time (smlt, length) is
//! the density with respect to quadratic variation, `L = q·ℓ`; diffusion
//! local time (dlt, dimensionless) is the density with respect to the speed
//! measure, `L̃ = ℓ/m′`.
//!
//! A one-sided window `(x, x+ε)` or `(x−ε, x)` is estimated from the chain
//! occupation of the nodes strictly inside it. Each node stands for a hat
//! kernel over its two neighbouring intervals, so the occupation is divided
//! by the total kernel mass `Σ (y_{k+1} − y_{k−1})/2` rather than by `ε`.
//! The remaining O(ε) bias is removed by a least-squares line in `ε`.
//!
//! Standard errors come from batch means; every estimate keeps its
//! per-batch values so ratios and differences get delta-method errors.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::media::{Medium, Side};
use crate::path::PathEnsemble;
use crate::scale::ScaleSpeed;
use crate::stats::batch_mean_stderr;

/// Confidence half-widths are this many standard errors.
pub const HALF_WIDTH_Z: f64 = 3.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Notion {
    Nlt,
    Smlt,
    Dlt,
}

impl Notion {
    pub fn as_str(self) -> &'static str {
        match self {
            Notion::Nlt => "nlt",
            Notion::Smlt => "smlt",
            Notion::Dlt => "dlt",
        }
    }
}

impl fmt::Display for Notion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Notion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nlt" => Ok(Notion::Nlt),
            "smlt" => Ok(Notion::Smlt),
            "dlt" => Ok(Notion::Dlt),
            other => Err(Error::UnknownNotion(other.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalTimeEstimate {
    pub x: f64,
    pub side: Side,
    /// Window width; `None` for the ε → 0 extrapolation.
    pub epsilon: Option<f64>,
    pub value: f64,
    pub stderr: f64,
    pub notion: Notion,
    /// Per-batch values whose size-weighted mean is `value`.
    pub batch_values: Vec<f64>,
}

impl LocalTimeEstimate {
    fn scaled(&self, factor: f64, notion: Notion) -> Self {
        LocalTimeEstimate {
            value: self.value * factor,
            stderr: self.stderr * factor,
            notion,
            batch_values: self.batch_values.iter().map(|v| v * factor).collect(),
            ..self.clone()
        }
    }
}

/// Occupation of one window.
#[derive(Clone, Debug, PartialEq)]
pub struct WindowOccupation {
    /// Mean per-path time spent at nodes inside the window.
    pub time: f64,
    pub stderr: f64,
    /// Kernel mass of the nodes inside the window.
    pub effective_length: f64,
    pub nodes: std::ops::Range<usize>,
    pub batch_means: Vec<f64>,
}

fn window_bounds(x: f64, side: Side, epsilon: f64) -> (f64, f64) {
    match side {
        Side::Right => (x, x + epsilon),
        Side::Left => (x - epsilon, x),
    }
}

fn check_window(medium: &Medium, lo: f64, hi: f64) -> Result<()> {
    let (wlo, whi) = medium.window();
    if lo < wlo {
        return Err(Error::OutOfDomain { x: lo, lo: wlo, hi: whi });
    }
    if hi > whi {
        return Err(Error::OutOfDomain { x: hi, lo: wlo, hi: whi });
    }
    let span = hi - lo;
    if let Some(itf) = medium.interfaces().iter().find(|i| i.x > lo + 1e-12 * span && i.x < hi - 1e-12 * span) {
        return Err(Error::StraddlesInterface { lo, hi, interface: itf.x });
    }
    Ok(())
}

fn interior_nodes(nodes: &[f64], lo: f64, hi: f64) -> std::ops::Range<usize> {
    let tol = 1e-9 * (hi - lo);
    let a = nodes.partition_point(|&y| y <= lo + tol);
    let b = nodes.partition_point(|&y| y < hi - tol);
    a..b.max(a)
}

fn kernel_mass(nodes: &[f64], k: usize) -> f64 {
    let left = if k > 0 { nodes[k] - nodes[k - 1] } else { 0.0 };
    let right = if k + 1 < nodes.len() { nodes[k + 1] - nodes[k] } else { 0.0 };
    0.5 * (left + right)
}

/// Mean time per path spent inside the one-sided window at `x`.
pub fn window_occupation(
    ensemble: &PathEnsemble,
    medium: &Medium,
    x: f64,
    side: Side,
    epsilon: f64,
) -> Result<WindowOccupation> {
    weighted_window(ensemble, medium, x, side, epsilon, |_| 1.0)
}

fn weighted_window(
    ensemble: &PathEnsemble,
    medium: &Medium,
    x: f64,
    side: Side,
    epsilon: f64,
    weight: impl Fn(usize) -> f64,
) -> Result<WindowOccupation> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidArgument(format!("window width must be positive, got {epsilon}")));
    }
    let (lo, hi) = window_bounds(x, side, epsilon);
    check_window(medium, lo, hi)?;
    let nodes = interior_nodes(&ensemble.node_x, lo, hi);
    if nodes.is_empty() {
        return Err(Error::EmptyWindow { lo, hi });
    }
    let weights: Vec<f64> = nodes.clone().map(&weight).collect();
    let effective_length = nodes.clone().map(|k| kernel_mass(&ensemble.node_x, k)).sum();
    let batch_means: Vec<f64> = ensemble
        .batch_occupation
        .iter()
        .zip(&ensemble.batch_paths)
        .map(|(occ, &n)| occ[nodes.clone()].iter().zip(&weights).map(|(o, w)| o * w).sum::<f64>() / n as f64)
        .collect();
    let (time, stderr) = batch_mean_stderr(&batch_means, &ensemble.batch_paths);
    Ok(WindowOccupation { time, stderr, effective_length, nodes, batch_means })
}

/// Intercept weights of the least-squares line through `(ε_i, v_i)`.
fn intercept_weights(eps: &[f64]) -> Vec<f64> {
    let n = eps.len() as f64;
    if eps.len() == 1 {
        return vec![1.0];
    }
    let mean = eps.iter().sum::<f64>() / n;
    let sxx: f64 = eps.iter().map(|e| (e - mean).powi(2)).sum();
    eps.iter().map(|e| 1.0 / n - mean * (e - mean) / sxx).collect()
}

fn check_epsilons(epsilons: &[f64]) -> Result<()> {
    if epsilons.is_empty() {
        return Err(Error::InvalidArgument("at least one window width required".into()));
    }
    if epsilons.iter().any(|&e| !(e > 0.0)) || epsilons.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidArgument(format!("window widths must be positive and decreasing: {epsilons:?}")));
    }
    Ok(())
}

/// Per-ε estimates and their ε → 0 extrapolation.
#[derive(Clone, Debug, PartialEq)]
pub struct Extrapolated {
    pub per_epsilon: Vec<LocalTimeEstimate>,
    pub extrapolated: LocalTimeEstimate,
}

fn combine(ensemble: &PathEnsemble, per_epsilon: Vec<LocalTimeEstimate>) -> Extrapolated {
    let eps: Vec<f64> = per_epsilon.iter().map(|e| e.epsilon.expect("per-window")).collect();
    let w = intercept_weights(&eps);
    let nb = ensemble.n_batches();
    let batch_values: Vec<f64> =
        (0..nb).map(|b| per_epsilon.iter().zip(&w).map(|(e, wi)| wi * e.batch_values[b]).sum()).collect();
    let value = per_epsilon.iter().zip(&w).map(|(e, wi)| wi * e.value).sum();
    let (_, stderr) = batch_mean_stderr(&batch_values, &ensemble.batch_paths);
    let first = &per_epsilon[0];
    let extrapolated = LocalTimeEstimate {
        x: first.x,
        side: first.side,
        epsilon: None,
        value,
        stderr,
        notion: first.notion,
        batch_values,
    };
    Extrapolated { per_epsilon, extrapolated }
}

fn windowed_estimate(
    ensemble: &PathEnsemble,
    medium: &Medium,
    x: f64,
    side: Side,
    epsilons: &[f64],
    notion: Notion,
    weight: impl Fn(usize) -> f64 + Copy,
) -> Result<Extrapolated> {
    check_epsilons(epsilons)?;
    let per_epsilon = epsilons
        .iter()
        .map(|&eps| {
            let w = weighted_window(ensemble, medium, x, side, eps, weight)?;
            let len = w.effective_length;
            let (value, stderr) = (w.time / len, w.stderr / len);
            Ok(LocalTimeEstimate {
                x,
                side,
                epsilon: Some(eps),
                value,
                stderr,
                notion,
                batch_values: w.batch_means.iter().map(|m| m / len).collect(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(combine(ensemble, per_epsilon))
}

/// One-sided natural local time at `x`.
pub fn nlt_estimate(
    ensemble: &PathEnsemble,
    medium: &Medium,
    x: f64,
    side: Side,
    epsilons: &[f64],
) -> Result<Extrapolated> {
    windowed_estimate(ensemble, medium, x, side, epsilons, Notion::Nlt, |_| 1.0)
}

/// Semimartingale local time tallied directly: node occupations weighted by `q(y_k)`.
pub fn smlt_direct(
    ensemble: &PathEnsemble,
    ss: &ScaleSpeed,
    x: f64,
    side: Side,
    epsilons: &[f64],
) -> Result<Extrapolated> {
    let q: Vec<f64> = ensemble
        .node_x
        .iter()
        .map(|&y| ss.densities_at(y, side).map(|d| d.qv_rate))
        .collect::<Result<_>>()?;
    windowed_estimate(ensemble, ss.medium(), x, side, epsilons, Notion::Smlt, |k| q[k])
}

/// Converts between notions using the one-sided `q(x±)` and `m′(x±)`.
pub fn convert_lt(est: &LocalTimeEstimate, target: Notion, ss: &ScaleSpeed) -> Result<LocalTimeEstimate> {
    let d = ss.densities_at(est.x, est.side)?;
    let to_nlt = match est.notion {
        Notion::Nlt => 1.0,
        Notion::Smlt => 1.0 / d.qv_rate,
        Notion::Dlt => d.m_prime,
    };
    let from_nlt = match target {
        Notion::Nlt => 1.0,
        Notion::Smlt => d.qv_rate,
        Notion::Dlt => 1.0 / d.m_prime,
    };
    Ok(est.scaled(to_nlt * from_nlt, target))
}

/// Converts an extrapolated family, keeping per-ε entries in step.
pub fn convert_family(family: &Extrapolated, target: Notion, ss: &ScaleSpeed) -> Result<Extrapolated> {
    Ok(Extrapolated {
        per_epsilon: family.per_epsilon.iter().map(|e| convert_lt(e, target, ss)).collect::<Result<_>>()?,
        extrapolated: convert_lt(&family.extrapolated, target, ss)?,
    })
}

/// Predicted `ℓ(x_j⁺)/ℓ(x_j⁻) = [η⁺/η⁻]·[D⁻/D⁺]·[λ/(1 − λ)]`.
pub fn predicted_ratio(medium: &Medium, j: usize) -> f64 {
    let (dm, dp, em, ep) = medium.one_sided(j);
    let l = medium.lambda(j);
    (ep / em) * (dm / dp) * (l / (1.0 - l))
}

/// Same prediction in concentration-jump form, `[η⁺/η⁻]·[β⁻/β⁺]`, from the
/// configured β pair when present.
pub fn predicted_ratio_beta(medium: &Medium, j: usize) -> f64 {
    let (_, _, em, ep) = medium.one_sided(j);
    let itf = &medium.interfaces()[j];
    let beta_minus_over_plus = match (itf.beta_minus, itf.beta_plus) {
        (Some(bm), Some(bp)) => bm / bp,
        _ => 1.0 / medium.beta_ratio(j),
    };
    (ep / em) * beta_minus_over_plus
}

/// Ratio `a/b` of two estimates sharing batches, with delta-method batch values.
fn ratio_of(a: &LocalTimeEstimate, b: &LocalTimeEstimate, x: f64) -> Result<(f64, Vec<f64>)> {
    if b.value <= 0.0 {
        return Err(Error::UndefinedRatio { x });
    }
    let r = a.value / b.value;
    let psi = a.batch_values.iter().zip(&b.batch_values).map(|(ab, bb)| (ab - r * bb) / b.value).collect();
    Ok((r, psi))
}

#[derive(Clone, Debug, PartialEq)]
pub struct JumpRatioReport {
    pub x: f64,
    pub predicted: f64,
    pub epsilons: Vec<f64>,
    /// Right/left nlt ratio per ε.
    pub estimated: Vec<f64>,
    pub extrapolated: f64,
    pub stderr: f64,
    /// `HALF_WIDTH_Z` standard errors.
    pub half_width: f64,
}

impl JumpRatioReport {
    pub fn relative_error(&self) -> f64 {
        (self.extrapolated - self.predicted).abs() / self.predicted
    }
}

pub fn estimate_ratio(ensemble: &PathEnsemble, medium: &Medium, j: usize, epsilons: &[f64]) -> Result<JumpRatioReport> {
    let x = medium
        .interfaces()
        .get(j)
        .ok_or_else(|| Error::InvalidArgument(format!("no interface with index {j}")))?
        .x;
    let right = nlt_estimate(ensemble, medium, x, Side::Right, epsilons)?;
    let left = nlt_estimate(ensemble, medium, x, Side::Left, epsilons)?;
    ratio_report(ensemble, x, predicted_ratio(medium, j), &right, &left)
}

fn ratio_report(
    ensemble: &PathEnsemble,
    x: f64,
    predicted: f64,
    right: &Extrapolated,
    left: &Extrapolated,
) -> Result<JumpRatioReport> {
    let eps: Vec<f64> = right.per_epsilon.iter().map(|e| e.epsilon.expect("per-window")).collect();
    let w = intercept_weights(&eps);
    let mut estimated = Vec::with_capacity(eps.len());
    let mut psi = vec![0.0; ensemble.n_batches()];
    for ((r, l), wi) in right.per_epsilon.iter().zip(&left.per_epsilon).zip(&w) {
        let (ratio, p) = ratio_of(r, l, x)?;
        estimated.push(ratio);
        psi.iter_mut().zip(p).for_each(|(acc, v)| *acc += wi * v);
    }
    let extrapolated = estimated.iter().zip(&w).map(|(r, wi)| r * wi).sum();
    let (_, stderr) = batch_mean_stderr(&psi, &ensemble.batch_paths);
    Ok(JumpRatioReport {
        x,
        predicted,
        epsilons: eps,
        estimated,
        extrapolated,
        stderr,
        half_width: HALF_WIDTH_Z * stderr,
    })
}

/// Ratio of raw window occupations `∫1_(x,x+ε) / ∫1_(x−ε,x)`, extrapolated,
/// against the concentration-jump prediction.
pub fn occupation_ratio(ensemble: &PathEnsemble, medium: &Medium, j: usize, epsilons: &[f64]) -> Result<JumpRatioReport> {
    check_epsilons(epsilons)?;
    let x = medium
        .interfaces()
        .get(j)
        .ok_or_else(|| Error::InvalidArgument(format!("no interface with index {j}")))?
        .x;
    let raw = |side: Side| -> Result<Extrapolated> {
        let per = epsilons
            .iter()
            .map(|&eps| {
                let w = window_occupation(ensemble, medium, x, side, eps)?;
                Ok(LocalTimeEstimate {
                    x,
                    side,
                    epsilon: Some(eps),
                    value: w.time,
                    stderr: w.stderr,
                    notion: Notion::Nlt,
                    batch_values: w.batch_means,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(combine(ensemble, per))
    };
    ratio_report(ensemble, x, predicted_ratio_beta(medium, j), &raw(Side::Right)?, &raw(Side::Left)?)
}

/// Left/right comparison at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct ContinuityProbe {
    pub x: f64,
    pub left: LocalTimeEstimate,
    pub right: LocalTimeEstimate,
    /// `right − left` of the extrapolated nlt.
    pub difference: f64,
    pub difference_stderr: f64,
    /// Same comparison for `ℓ/m′`.
    pub normalized_left: f64,
    pub normalized_right: f64,
    pub normalized_difference: f64,
    pub normalized_stderr: f64,
}

impl ContinuityProbe {
    pub fn nlt_agrees(&self, z: f64) -> bool {
        self.difference.abs() <= z * self.difference_stderr
    }

    pub fn normalized_agrees(&self, z: f64) -> bool {
        self.normalized_difference.abs() <= z * self.normalized_stderr
    }
}

pub fn continuity_probe(ensemble: &PathEnsemble, ss: &ScaleSpeed, x: f64, epsilons: &[f64]) -> Result<ContinuityProbe> {
    let medium = ss.medium();
    let right = nlt_estimate(ensemble, medium, x, Side::Right, epsilons)?.extrapolated;
    let left = nlt_estimate(ensemble, medium, x, Side::Left, epsilons)?.extrapolated;
    let diff = |a: &LocalTimeEstimate, b: &LocalTimeEstimate| {
        let d: Vec<f64> = a.batch_values.iter().zip(&b.batch_values).map(|(x, y)| x - y).collect();
        batch_mean_stderr(&d, &ensemble.batch_paths)
    };
    let (difference, difference_stderr) = diff(&right, &left);
    let nr = convert_lt(&right, Notion::Dlt, ss)?;
    let nl = convert_lt(&left, Notion::Dlt, ss)?;
    let (normalized_difference, normalized_stderr) = diff(&nr, &nl);
    Ok(ContinuityProbe {
        x,
        normalized_left: nl.value,
        normalized_right: nr.value,
        left,
        right,
        difference,
        difference_stderr,
        normalized_difference,
        normalized_stderr,
    })
}

/// Default window widths `{8h, 4h, 2h}`.
pub fn default_epsilons(h: f64) -> Vec<f64> {
    vec![8.0 * h, 4.0 * h, 2.0 * h]
}

/// Per-path right/left nlt ratios at interface `j` for one window width;
/// needs per-path tallies covering both windows. Paths with no left-side
/// occupation are skipped.
pub fn per_path_ratios(ensemble: &PathEnsemble, medium: &Medium, j: usize, epsilon: f64) -> Result<Vec<f64>> {
    let x = medium
        .interfaces()
        .get(j)
        .ok_or_else(|| Error::InvalidArgument(format!("no interface with index {j}")))?
        .x;
    let focus = ensemble
        .focus
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("ensemble has no per-path tallies".into()))?;
    let window = |side: Side| -> Result<(std::ops::Range<usize>, f64)> {
        let (lo, hi) = window_bounds(x, side, epsilon);
        check_window(medium, lo, hi)?;
        let nodes = interior_nodes(&ensemble.node_x, lo, hi);
        if nodes.is_empty() {
            return Err(Error::EmptyWindow { lo, hi });
        }
        if nodes.start < focus.lo || nodes.end > focus.hi + 1 {
            return Err(Error::InvalidArgument(format!("window ({lo}, {hi}) not covered by per-path tallies")));
        }
        let len = nodes.clone().map(|k| kernel_mass(&ensemble.node_x, k)).sum();
        Ok((nodes, len))
    };
    let (rn, rlen) = window(Side::Right)?;
    let (ln, llen) = window(Side::Left)?;
    let sum = |row: &[f64], r: &std::ops::Range<usize>| -> f64 { row[r.start - focus.lo..r.end - focus.lo].iter().sum() };
    Ok((0..ensemble.n_paths())
        .filter_map(|i| {
            let row = focus.path(i);
            let left = sum(row, &ln) / llen;
            (left > 0.0).then(|| (sum(row, &rn) / rlen) / left)
        })
        .collect())
}

/// Equal-width histogram; values outside `[lo, hi)` are dropped.
pub fn histogram(values: &[f64], bins: usize, lo: f64, hi: f64) -> Vec<usize> {
    let mut counts = vec![0; bins];
    let width = (hi - lo) / bins as f64;
    for &v in values {
        if v >= lo && v < hi {
            counts[(((v - lo) / width) as usize).min(bins - 1)] += 1;
        }
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::path::{build_grid, chain_parameters, simulate_paths, ChainModel, SimulationConfig};

    fn setup(medium: &Medium, h: f64) -> (ScaleSpeed, ChainModel) {
        let ss = ScaleSpeed::new(medium);
        let chain = chain_parameters(&ss, &build_grid(medium, h).unwrap());
        (ss, chain)
    }

    fn crafted_ensemble(node_x: Vec<f64>, occ: Vec<f64>) -> PathEnsemble {
        use crate::path::{EnsembleMeta, HoldingMode};
        let n = node_x.len();
        PathEnsemble {
            meta: EnsembleMeta {
                seed: 0,
                n_paths: 1,
                grid_id: 0,
                horizon: occ.iter().sum(),
                mode: HoldingMode::Fixed,
                start_node: 0,
                n_batches: 1,
            },
            node_x,
            occupation: occ.clone(),
            visits: vec![1; n],
            batch_occupation: vec![occ],
            batch_paths: vec![1],
            final_nodes: vec![0],
            boundary_paths: 0,
            focus: None,
            traces: vec![],
        }
    }

    #[test]
    fn window_never_entered_is_zero() {
        let m = Medium::homogeneous((-1.0, 1.0), 1.0, 1.0).unwrap();
        let nodes: Vec<f64> = (0..=20).map(|i| -1.0 + 0.1 * i as f64).collect();
        let mut occ = vec![0.0; 21];
        occ[0] = 1.0;
        let e = crafted_ensemble(nodes, occ);
        let w = window_occupation(&e, &m, 0.5, Side::Right, 0.3).unwrap();
        assert_eq!(w.time, 0.0);
        let n = nlt_estimate(&e, &m, 0.5, Side::Right, &[0.3, 0.2]).unwrap();
        assert_eq!(n.extrapolated.value, 0.0);
    }

    #[test]
    fn window_sums_holding_times() {
        let m = Medium::homogeneous((-1.0, 1.0), 1.0, 1.0).unwrap();
        let nodes: Vec<f64> = (0..=20).map(|i| -1.0 + 0.1 * i as f64).collect();
        let mut occ = vec![0.0; 21];
        occ[12] = 0.4; // x = 0.2
        occ[0] = 0.6;
        let e = crafted_ensemble(nodes, occ);
        let w = window_occupation(&e, &m, 0.1, Side::Right, 0.15).unwrap();
        assert!((w.time - 0.4).abs() < 1e-15);
        assert_eq!(w.nodes, 12..13);
    }

    #[test]
    fn straddling_windows_are_rejected() {
        let m = Medium::single_interface((-3.0, 3.0), (1.0, 2.0), (1.0, 1.0), (1.0, 1.0)).unwrap();
        let (_, chain) = setup(&m, 0.05);
        let e = simulate_paths(&chain, &SimulationConfig::new(0.0, 0.05, 10, 1)).unwrap();
        assert!(matches!(
            window_occupation(&e, &m, -0.1, Side::Right, 0.2),
            Err(Error::StraddlesInterface { .. })
        ));
        assert!(window_occupation(&e, &m, 0.0, Side::Right, 0.2).is_ok());
        assert!(matches!(window_occupation(&e, &m, 0.0, Side::Right, 0.01), Err(Error::EmptyWindow { .. })));
    }

    #[test]
    fn notion_parsing() {
        assert_eq!("smlt".parse::<Notion>().unwrap(), Notion::Smlt);
        assert!(matches!("xlt".parse::<Notion>(), Err(Error::UnknownNotion(_))));
    }

    #[test]
    fn conversions() {
        let m = Medium::single_interface((-3.0, 3.0), (1.0, 2.0), (1.0, 1.0), (1.0, 1.0)).unwrap();
        let ss = ScaleSpeed::new(&m);
        let est = LocalTimeEstimate {
            x: 0.0,
            side: Side::Right,
            epsilon: Some(0.1),
            value: 3.0,
            stderr: 0.1,
            notion: Notion::Nlt,
            batch_values: vec![3.0],
        };
        // q(0⁺) = 2
        let smlt = convert_lt(&est, Notion::Smlt, &ss).unwrap();
        assert!((smlt.value - 6.0).abs() < 1e-14);
        let back = convert_lt(&convert_lt(&est, Notion::Dlt, &ss).unwrap(), Notion::Nlt, &ss).unwrap();
        assert!((back.value - 3.0).abs() < 1e-12 * 3.0);

        // η ≡ D: q ≡ 1
        let same = Medium::homogeneous((-1.0, 1.0), 1.5, 1.5).unwrap();
        let ss = ScaleSpeed::new(&same);
        let s = convert_lt(&LocalTimeEstimate { x: 0.2, ..est.clone() }, Notion::Smlt, &ss).unwrap();
        assert_eq!(s.value, 3.0);
    }

    #[test]
    fn predicted_ratios() {
        let m = Medium::single_interface((-3.0, 3.0), (1.0, 2.0), (1.0, 3.0), (1.0, 1.0)).unwrap();
        assert!((predicted_ratio(&m, 0) - 3.0).abs() < 1e-14);
        assert!((predicted_ratio_beta(&m, 0) - 3.0).abs() < 1e-14);

        let sym = Medium::single_interface((-1.0, 1.0), (1.5, 1.5), (2.0, 2.0), (1.0, 1.0)).unwrap();
        assert!((predicted_ratio(&sym, 0) - 1.0).abs() < 1e-15);

        let alpha = 0.7;
        let skew = Medium::new(crate::media::MediumSpec {
            window: [-1.0, 1.0],
            bounds: [0.5, 2.0],
            interfaces: vec![crate::media::Interface::with_lambda(0.0, alpha)],
            pieces: vec![
                crate::media::Piece::constant(-1.0, 0.0, 1.0, 1.0),
                crate::media::Piece::constant(0.0, 1.0, 1.0, 1.0),
            ],
        })
        .unwrap();
        assert!((predicted_ratio(&skew, 0) - 7.0 / 3.0).abs() < 1e-14);
        assert!((predicted_ratio_beta(&skew, 0) - 7.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn intercept_weights_examples() {
        let w = intercept_weights(&[8.0, 4.0, 2.0]);
        let expect = [-0.5, 0.5, 1.0];
        for (a, b) in w.iter().zip(expect) {
            assert!((a - b).abs() < 1e-14);
        }
        // reproduces the intercept of an exact line
        let v: f64 = [8.0, 4.0, 2.0].iter().zip(&w).map(|(e, wi)| wi * (1.5 + 0.3 * e)).sum();
        assert!((v - 1.5).abs() < 1e-14);
    }

    #[test]
    fn epsilons_must_decrease() {
        let m = Medium::homogeneous((-1.0, 1.0), 1.0, 1.0).unwrap();
        let (_, chain) = setup(&m, 0.05);
        let e = simulate_paths(&chain, &SimulationConfig::new(0.0, 0.05, 10, 1)).unwrap();
        assert!(nlt_estimate(&e, &m, 0.0, Side::Right, &[0.1, 0.2]).is_err());
        assert!(nlt_estimate(&e, &m, 0.0, Side::Right, &[]).is_err());
    }

    #[test]
    fn brownian_sides_agree() {
        let m = Medium::homogeneous((-3.0, 3.0), 1.0, 1.0).unwrap();
        let (ss, chain) = setup(&m, 0.02);
        let e = simulate_paths(&chain, &SimulationConfig::new(0.0, 1.0, 20_000, 17)).unwrap();
        let p = continuity_probe(&e, &ss, 0.0, &default_epsilons(0.02)).unwrap();
        assert!(p.nlt_agrees(3.0), "{p:?}");
        // E ℓ(1, 0) = E|B_1| = sqrt(2/π) for standard Brownian motion
        let expect = (2.0 / std::f64::consts::PI).sqrt();
        assert!((p.right.value - expect).abs() < 3.0 * p.right.stderr + 0.01, "{} vs {expect}", p.right.value);
    }

    #[test]
    fn undefined_ratio_without_left_occupation() {
        let m = Medium::single_interface((-1.0, 1.0), (1.0, 1.0), (1.0, 1.0), (1.0, 1.0)).unwrap();
        let nodes: Vec<f64> = (0..=20).map(|i| -1.0 + 0.1 * i as f64).collect();
        let mut occ = vec![0.0; 21];
        occ[12] = 1.0;
        let e = crafted_ensemble(nodes, occ);
        assert!(matches!(estimate_ratio(&e, &m, 0, &[0.4, 0.3]), Err(Error::UndefinedRatio { .. })));
    }

    #[test]
    fn histogram_counts() {
        let h = histogram(&[0.1, 0.5, 0.55, 0.99, 1.0, -0.2], 2, 0.0, 1.0);
        assert_eq!(h, vec![1, 3]);
    }
}
