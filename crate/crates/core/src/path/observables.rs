//! Ensemble functionals: terminal-state averages, the side-of-interface
//! fraction, and the martingale-problem residual for `f = G∘s`.

use crate::error::Result;
use crate::media::Side;
use crate::path::chain::ChainModel;
use crate::path::simulate::PathEnsemble;
use crate::scale::ScaleSpeed;
use crate::stats::{batch_mean_stderr, mean_stderr};

/// Mean of `f(X_t)` over paths with its standard error.
pub fn terminal_mean<F: Fn(f64) -> f64>(ensemble: &PathEnsemble, f: F) -> (f64, f64) {
    let xs: Vec<f64> = ensemble.final_nodes.iter().map(|&k| f(ensemble.node_x[k as usize])).collect();
    mean_stderr(&xs)
}

/// Estimate of `P(X_t > x)` and its standard error.
///
/// Paths ending exactly on the node `x` count with weight
/// `m′(x⁺)δ⁺ / (m′(x⁺)δ⁺ + m′(x⁻)δ⁻)`, `δ±` the half spacings: the share of
/// the node's cell lying above `x`, measured in speed measure.
pub fn upper_fraction(ensemble: &PathEnsemble, chain: &ChainModel, ss: &ScaleSpeed, x: f64) -> Result<(f64, f64)> {
    let grid = chain.grid();
    let k0 = grid.node_index(x);
    let w_on = match k0 {
        Some(k) => {
            let up = ss.densities_at(x, Side::Right)?.m_prime * grid.spacing_right(k).unwrap_or(0.0);
            let down = ss.densities_at(x, Side::Left)?.m_prime * grid.spacing_left(k).unwrap_or(0.0);
            up / (up + down)
        }
        None => 0.0,
    };
    let xs: Vec<f64> = ensemble
        .final_nodes
        .iter()
        .map(|&k| {
            let k = k as usize;
            if Some(k) == k0 {
                w_on
            } else if ensemble.node_x[k] > x {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    Ok(mean_stderr(&xs))
}

/// Uniform cubic B-spline bump, support `[c − 2w, c + 2w]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CubicBump {
    pub center: f64,
    pub width: f64,
}

impl CubicBump {
    pub fn value(&self, u: f64) -> f64 {
        let z = ((u - self.center) / self.width).abs();
        if z < 1.0 {
            (4.0 - 6.0 * z * z + 3.0 * z * z * z) / 6.0
        } else if z < 2.0 {
            (2.0 - z).powi(3) / 6.0
        } else {
            0.0
        }
    }

    pub fn second_derivative(&self, u: f64) -> f64 {
        let z = ((u - self.center) / self.width).abs();
        let w2 = self.width * self.width;
        if z < 1.0 {
            (3.0 * z - 2.0) / w2
        } else if z < 2.0 {
            (2.0 - z) / w2
        } else {
            0.0
        }
    }
}

/// `(Af)(y_k)` for `f = G∘s`, i.e. `G″(s) s′/m′`. At interface nodes the
/// one-sided values differ, so the speed-weighted cell value
/// `G″(s_k) Δs⁻Δs⁺ / (2 tau_k)` is used instead.
pub fn generator_of_scale_composite(chain: &ChainModel, ss: &ScaleSpeed, g: &CubicBump) -> Result<Vec<f64>> {
    let grid = chain.grid();
    let ds = chain.scale_increments();
    grid.nodes()
        .iter()
        .enumerate()
        .map(|(k, &y)| {
            let s = ss.scale_value(y)?;
            if grid.is_interface_node(k) {
                Ok(g.second_derivative(s) * ds[k - 1] * ds[k] / (2.0 * chain.tau()[k]))
            } else {
                let d = ss.densities_at(y, Side::Right)?;
                Ok(g.second_derivative(s) * d.s_prime / d.m_prime)
            }
        })
        .collect()
}

/// Ensemble mean of `f(X_t) − f(X_0) − ∫₀ᵗ Af(X_s) ds` with `f = G∘s`, and
/// its batch-means standard error.
pub fn martingale_residual(
    ensemble: &PathEnsemble,
    chain: &ChainModel,
    ss: &ScaleSpeed,
    g: &CubicBump,
) -> Result<(f64, f64)> {
    let af = generator_of_scale_composite(chain, ss, g)?;
    let f_nodes: Vec<f64> = ensemble
        .node_x
        .iter()
        .map(|&y| ss.scale_value(y).map(|s| g.value(s)))
        .collect::<Result<_>>()?;
    let f0 = f_nodes[ensemble.meta.start_node];

    let nb = ensemble.n_batches();
    let mut terminal = vec![0.0; nb];
    for (i, &k) in ensemble.final_nodes.iter().enumerate() {
        terminal[ensemble.batch_of(i)] += f_nodes[k as usize];
    }
    let means: Vec<f64> = (0..nb)
        .map(|b| {
            let n = ensemble.batch_paths[b] as f64;
            let integral: f64 = ensemble.batch_occupation[b].iter().zip(&af).map(|(o, a)| o * a).sum();
            (terminal[b] - integral) / n - f0
        })
        .collect();
    Ok(batch_mean_stderr(&means, &ensemble.batch_paths))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::media::Medium;
    use crate::path::chain::chain_parameters;
    use crate::path::grid::build_grid;
    use crate::path::simulate::{simulate_paths, SimulationConfig};

    #[test]
    fn bump_second_derivative_matches_finite_differences() {
        let g = CubicBump { center: 0.3, width: 0.7 };
        let h = 1e-4;
        for u in [-0.9, -0.2, 0.1, 0.45, 1.2, 2.0] {
            let fd = (g.value(u + h) - 2.0 * g.value(u) + g.value(u - h)) / (h * h);
            assert!((fd - g.second_derivative(u)).abs() < 1e-5, "u={u}");
        }
        assert_eq!(g.value(0.3 + 1.4), 0.0);
    }

    #[test]
    fn upper_fraction_symmetric() {
        let m = Medium::homogeneous((-2.0, 2.0), 1.0, 1.0).unwrap();
        let ss = ScaleSpeed::new(&m);
        let chain = chain_parameters(&ss, &build_grid(&m, 0.05).unwrap());
        let e = simulate_paths(&chain, &SimulationConfig::new(0.0, 0.3, 20_000, 11)).unwrap();
        let (p, se) = upper_fraction(&e, &chain, &ss, 0.0).unwrap();
        assert!((p - 0.5).abs() < 3.0 * se, "{p} ± {se}");
    }

    #[test]
    fn residual_vanishes_for_brownian_motion() {
        let m = Medium::homogeneous((-3.0, 3.0), 1.0, 1.0).unwrap();
        let ss = ScaleSpeed::new(&m);
        let chain = chain_parameters(&ss, &build_grid(&m, 0.02).unwrap());
        let e = simulate_paths(&chain, &SimulationConfig::new(0.0, 0.3, 20_000, 5)).unwrap();
        let g = CubicBump { center: 0.0, width: 1.0 };
        let (r, se) = martingale_residual(&e, &chain, &ss, &g).unwrap();
        assert!(r.abs() < 3.0 * se, "{r} ± {se}");
    }
}
