//! Monte Carlo over the embedded chain.
//!
//! Path `i` draws from the ChaCha8 stream `i` of the key `seed`, consuming a
//! fixed number of 64-bit words per step, so every random number is a pure
//! function of `(seed, path, step)`. Paths are grouped into contiguous
//! batches; batches run in parallel and are merged in index order, so the
//! output is independent of the thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::path::chain::ChainModel;
use crate::stats::mean_stderr;

/// Upper bound on the number of batches used for batch-means standard errors.
pub const DEFAULT_BATCHES: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum HoldingMode {
    /// Deterministic holding time `tau(k)`.
    #[default]
    Fixed,
    /// Exponential holding time with mean `tau(k)`.
    Exp,
}

/// Random stream for one path.
pub fn path_rng(seed: u64, path: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(path);
    rng
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimulationConfig {
    pub start: f64,
    pub horizon: f64,
    pub n_paths: usize,
    pub seed: u64,
    pub mode: HoldingMode,
    /// 0 selects `min(n_paths, DEFAULT_BATCHES)`.
    pub batches: usize,
    /// Inclusive node range whose occupation is also kept per path.
    pub focus: Option<(usize, usize)>,
    /// Number of leading paths whose full `(node, holding)` trace is kept.
    pub trace: usize,
}

impl SimulationConfig {
    pub fn new(start: f64, horizon: f64, n_paths: usize, seed: u64) -> Self {
        SimulationConfig {
            start,
            horizon,
            n_paths,
            seed,
            mode: HoldingMode::Fixed,
            batches: 0,
            focus: None,
            trace: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleMeta {
    pub seed: u64,
    pub n_paths: usize,
    pub grid_id: u64,
    pub horizon: f64,
    pub mode: HoldingMode,
    pub start_node: usize,
    pub n_batches: usize,
}

/// Per-path occupation restricted to a node band.
#[derive(Clone, Debug, PartialEq)]
pub struct FocusTallies {
    pub lo: usize,
    pub hi: usize,
    /// Row-major `n_paths × (hi − lo + 1)`.
    pub per_path: Vec<f64>,
}

impl FocusTallies {
    pub fn width(&self) -> usize {
        self.hi - self.lo + 1
    }

    pub fn path(&self, i: usize) -> &[f64] {
        let w = self.width();
        &self.per_path[i * w..(i + 1) * w]
    }
}

#[derive(Clone, Debug)]
pub struct PathEnsemble {
    pub meta: EnsembleMeta,
    pub node_x: Vec<f64>,
    /// Total occupation time per node, summed over paths.
    pub occupation: Vec<f64>,
    /// Holding intervals started per node, summed over paths.
    pub visits: Vec<u64>,
    /// Occupation per batch and node.
    pub batch_occupation: Vec<Vec<f64>>,
    pub batch_paths: Vec<usize>,
    /// Node occupied at the horizon, per path.
    pub final_nodes: Vec<u32>,
    /// Paths that visited either window end.
    pub boundary_paths: usize,
    pub focus: Option<FocusTallies>,
    pub traces: Vec<Vec<(u32, f64)>>,
}

impl PathEnsemble {
    pub fn n_paths(&self) -> usize {
        self.meta.n_paths
    }

    pub fn n_batches(&self) -> usize {
        self.batch_paths.len()
    }

    /// Exact fraction of paths that touched a window end.
    pub fn boundary_fraction(&self) -> f64 {
        self.boundary_paths as f64 / self.meta.n_paths as f64
    }

    /// Batch index of path `i`.
    pub fn batch_of(&self, i: usize) -> usize {
        batch_of(i, self.meta.n_paths, self.n_batches())
    }
}

fn batch_range(b: usize, n: usize, batches: usize) -> std::ops::Range<usize> {
    (b * n / batches)..((b + 1) * n / batches)
}

fn batch_of(i: usize, n: usize, batches: usize) -> usize {
    // largest b with b*n/batches <= i
    let mut b = (i * batches) / n;
    while batch_range(b, n, batches).end <= i {
        b += 1;
    }
    b
}

struct BatchOut {
    occupation: Vec<f64>,
    visits: Vec<u64>,
    finals: Vec<u32>,
    boundary: usize,
    focus: Vec<f64>,
    traces: Vec<Vec<(u32, f64)>>,
}

pub fn simulate_paths(chain: &ChainModel, cfg: &SimulationConfig) -> Result<PathEnsemble> {
    let grid = chain.grid();
    let start = grid.node_index(cfg.start).ok_or(Error::NotANode { x: cfg.start })?;
    if !(cfg.horizon > 0.0 && cfg.horizon.is_finite()) {
        return Err(Error::InvalidArgument(format!("horizon must be positive, got {}", cfg.horizon)));
    }
    if cfg.n_paths == 0 {
        return Err(Error::InvalidArgument("n_paths must be at least 1".into()));
    }
    let n_nodes = chain.len();
    if let Some((lo, hi)) = cfg.focus {
        if lo > hi || hi >= n_nodes {
            return Err(Error::InvalidArgument(format!("focus band {lo}..={hi} outside grid")));
        }
    }
    let batches = if cfg.batches == 0 { cfg.n_paths.min(DEFAULT_BATCHES) } else { cfg.batches.min(cfg.n_paths) };

    let outs: Vec<BatchOut> = (0..batches)
        .into_par_iter()
        .map(|b| run_batch(chain, cfg, start, batch_range(b, cfg.n_paths, batches)))
        .collect();

    let mut occupation = vec![0.0; n_nodes];
    let mut visits = vec![0u64; n_nodes];
    let mut final_nodes = Vec::with_capacity(cfg.n_paths);
    let mut boundary_paths = 0;
    let mut focus_rows = Vec::new();
    let mut traces = Vec::new();
    let mut batch_occupation = Vec::with_capacity(batches);
    let mut batch_paths = Vec::with_capacity(batches);
    for (b, out) in outs.into_iter().enumerate() {
        for k in 0..n_nodes {
            occupation[k] += out.occupation[k];
            visits[k] += out.visits[k];
        }
        batch_paths.push(batch_range(b, cfg.n_paths, batches).len());
        final_nodes.extend(out.finals);
        boundary_paths += out.boundary;
        focus_rows.extend(out.focus);
        traces.extend(out.traces);
        batch_occupation.push(out.occupation);
    }

    Ok(PathEnsemble {
        meta: EnsembleMeta {
            seed: cfg.seed,
            n_paths: cfg.n_paths,
            grid_id: grid.id(),
            horizon: cfg.horizon,
            mode: cfg.mode,
            start_node: start,
            n_batches: batches,
        },
        node_x: grid.nodes().to_vec(),
        occupation,
        visits,
        batch_occupation,
        batch_paths,
        final_nodes,
        boundary_paths,
        focus: cfg.focus.map(|(lo, hi)| FocusTallies { lo, hi, per_path: focus_rows }),
        traces,
    })
}

fn run_batch(chain: &ChainModel, cfg: &SimulationConfig, start: usize, paths: std::ops::Range<usize>) -> BatchOut {
    let n_nodes = chain.len();
    let last = n_nodes - 1;
    let p_up = chain.p_up();
    let tau = chain.tau();
    let horizon = cfg.horizon;
    let mut out = BatchOut {
        occupation: vec![0.0; n_nodes],
        visits: vec![0; n_nodes],
        finals: Vec::with_capacity(paths.len()),
        boundary: 0,
        focus: Vec::new(),
        traces: Vec::new(),
    };
    let focus_width = cfg.focus.map_or(0, |(lo, hi)| hi - lo + 1);
    // per-path occupation, reset between paths only on the focus band
    let mut path_occ = vec![0.0; focus_width];

    for i in paths {
        let mut rng = path_rng(cfg.seed, i as u64);
        let keep_trace = i < cfg.trace;
        let mut trace = Vec::new();
        let mut k = start;
        let mut t = 0.0;
        let mut touched = k == 0 || k == last;
        path_occ.iter_mut().for_each(|v| *v = 0.0);
        loop {
            let hold = match cfg.mode {
                HoldingMode::Fixed => tau[k],
                HoldingMode::Exp => {
                    let u: f64 = rng.random();
                    -tau[k] * (1.0 - u).ln()
                }
            };
            out.visits[k] += 1;
            let clipped = t + hold >= horizon;
            let dt = if clipped { horizon - t } else { hold };
            out.occupation[k] += dt;
            if let Some((lo, hi)) = cfg.focus {
                if (lo..=hi).contains(&k) {
                    path_occ[k - lo] += dt;
                }
            }
            if keep_trace {
                trace.push((k as u32, dt));
            }
            if clipped {
                break;
            }
            t += hold;
            let u: f64 = rng.random();
            k = if u < p_up[k] { k + 1 } else { k - 1 };
            touched |= k == 0 || k == last;
        }
        out.finals.push(k as u32);
        out.boundary += touched as usize;
        out.focus.extend_from_slice(&path_occ);
        if keep_trace {
            out.traces.push(trace);
        }
    }
    out
}

/// Exit statistics of the chain from `start` between absorbing nodes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExitStats {
    pub p_upper: f64,
    pub p_upper_stderr: f64,
    pub mean_time: f64,
    pub mean_time_stderr: f64,
    pub n_paths: usize,
}

pub fn simulate_exits(
    chain: &ChainModel,
    start: f64,
    lower: f64,
    upper: f64,
    n_paths: usize,
    seed: u64,
    mode: HoldingMode,
) -> Result<ExitStats> {
    let grid = chain.grid();
    let s = grid.node_index(start).ok_or(Error::NotANode { x: start })?;
    let a = grid.node_index(lower).ok_or(Error::NotANode { x: lower })?;
    let b = grid.node_index(upper).ok_or(Error::NotANode { x: upper })?;
    if !(a < s && s < b) {
        return Err(Error::InvalidArgument(format!("need lower < start < upper, got {lower}, {start}, {upper}")));
    }
    if n_paths < 2 {
        return Err(Error::InvalidArgument("exit statistics need at least 2 paths".into()));
    }
    let p_up = chain.p_up();
    let tau = chain.tau();
    let (hits, times): (Vec<f64>, Vec<f64>) = (0..n_paths)
        .into_par_iter()
        .map(|i| {
            let mut rng = path_rng(seed, i as u64);
            let mut k = s;
            let mut t = 0.0;
            while k != a && k != b {
                t += match mode {
                    HoldingMode::Fixed => tau[k],
                    HoldingMode::Exp => {
                        let u: f64 = rng.random();
                        -tau[k] * (1.0 - u).ln()
                    }
                };
                let u: f64 = rng.random();
                k = if u < p_up[k] { k + 1 } else { k - 1 };
            }
            ((k == b) as u8 as f64, t)
        })
        .unzip();
    let (p, p_se) = mean_stderr(&hits);
    let (m, m_se) = mean_stderr(&times);
    Ok(ExitStats { p_upper: p, p_upper_stderr: p_se, mean_time: m, mean_time_stderr: m_se, n_paths })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::media::Medium;
    use crate::path::chain::chain_parameters;
    use crate::path::grid::build_grid;
    use crate::scale::ScaleSpeed;
    use crate::stats::mean_stderr;

    fn bm_chain() -> ChainModel {
        let m = Medium::homogeneous((-2.0, 2.0), 1.0, 1.0).unwrap();
        chain_parameters(&ScaleSpeed::new(&m), &build_grid(&m, 0.05).unwrap())
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let c = bm_chain();
        let mut cfg = SimulationConfig::new(0.0, 0.2, 3, 42);
        cfg.trace = 3;
        let a = simulate_paths(&c, &cfg).unwrap();
        let b = simulate_paths(&c, &cfg).unwrap();
        assert_eq!(a.occupation, b.occupation);
        assert_eq!(a.final_nodes, b.final_nodes);
        assert_eq!(a.traces, b.traces);
        cfg.seed = 43;
        let d = simulate_paths(&c, &cfg).unwrap();
        assert_ne!(a.traces, d.traces);
    }

    #[test]
    fn thread_count_does_not_change_output() {
        let c = bm_chain();
        let cfg = SimulationConfig::new(0.0, 0.3, 500, 7);
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = one.install(|| simulate_paths(&c, &cfg).unwrap());
        let b = four.install(|| simulate_paths(&c, &cfg).unwrap());
        assert_eq!(a.occupation, b.occupation);
        assert_eq!(a.final_nodes, b.final_nodes);
    }

    #[test]
    fn traces_sum_to_horizon_and_step_by_one() {
        let c = bm_chain();
        let mut cfg = SimulationConfig::new(0.0, 0.25, 20, 1);
        cfg.trace = 20;
        cfg.mode = HoldingMode::Exp;
        let e = simulate_paths(&c, &cfg).unwrap();
        let start = e.meta.start_node as u32;
        for tr in &e.traces {
            assert_eq!(tr[0].0, start);
            let total: f64 = tr.iter().map(|s| s.1).sum();
            assert!((total - 0.25).abs() < 1e-12);
            assert!(tr.windows(2).all(|w| w[0].0.abs_diff(w[1].0) == 1));
        }
        let total: f64 = e.occupation.iter().sum();
        assert!((total - 0.25 * 20.0).abs() < 1e-10);
        let from_batches: f64 = e.batch_occupation.iter().flatten().sum();
        assert!((from_batches - total).abs() < 1e-10);
    }

    #[test]
    fn start_must_be_a_node() {
        let c = bm_chain();
        let cfg = SimulationConfig::new(0.013, 0.2, 3, 42);
        assert!(matches!(simulate_paths(&c, &cfg), Err(Error::NotANode { .. })));
    }

    #[test]
    fn symmetric_mean_is_zero() {
        let c = bm_chain();
        let e = simulate_paths(&c, &SimulationConfig::new(0.0, 0.5, 20_000, 3)).unwrap();
        let xs: Vec<f64> = e.final_nodes.iter().map(|&k| e.node_x[k as usize]).collect();
        let (m, se) = mean_stderr(&xs);
        assert!(m.abs() < 3.0 * se, "mean {m} se {se}");
    }

    #[test]
    fn focus_rows_match_totals() {
        let c = bm_chain();
        let k0 = c.grid().node_index(0.0).unwrap();
        let mut cfg = SimulationConfig::new(0.0, 0.2, 50, 9);
        cfg.focus = Some((k0 - 3, k0 + 3));
        let e = simulate_paths(&c, &cfg).unwrap();
        let f = e.focus.as_ref().unwrap();
        for j in 0..f.width() {
            let s: f64 = (0..50).map(|i| f.path(i)[j]).sum();
            assert!((s - e.occupation[k0 - 3 + j]).abs() < 1e-12);
        }
    }

    #[test]
    fn batch_assignment_is_contiguous() {
        for (n, b) in [(10, 3), (100, 100), (7, 7), (1000, 64)] {
            let mut prev = 0;
            for i in 0..n {
                let bi = batch_of(i, n, b);
                assert!(batch_range(bi, n, b).contains(&i));
                assert!(bi >= prev);
                prev = bi;
            }
        }
    }
}
