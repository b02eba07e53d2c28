use rayon::prelude::*;

use crate::media::Side;
use crate::path::grid::Grid;
use crate::scale::ScaleSpeed;

/// Embedded random walk on the grid: step probabilities from the scale
/// function, mean holding times from the speed measure.
#[derive(Clone, Debug)]
pub struct ChainModel {
    grid: Grid,
    p_up: Vec<f64>,
    tau: Vec<f64>,
    /// `s(y_{k+1}) − s(y_k)` for each grid interval.
    ds: Vec<f64>,
}

/// Reflecting ends: the first node always steps up, the last always down,
/// each holding for the one-sided mean passage time to its neighbour.
pub fn chain_parameters(ss: &ScaleSpeed, grid: &Grid) -> ChainModel {
    let y = grid.nodes();
    let n = y.len();
    let ds: Vec<f64> = (0..n - 1)
        .map(|k| {
            let p = ss.medium().piece_index(y[k], Side::Right).expect("node in window");
            ss.piece_integral(p, y[k], y[k + 1])
        })
        .collect();

    let (p_up, tau): (Vec<f64>, Vec<f64>) = (0..n)
        .into_par_iter()
        .map(|k| {
            if k == 0 {
                (1.0, ss.mean_exit_time_reflecting(y[0], y[1]).expect("in window"))
            } else if k == n - 1 {
                (0.0, ss.mean_exit_time_reflecting(y[k], y[k - 1]).expect("in window"))
            } else {
                let p = ds[k - 1] / (ds[k - 1] + ds[k]);
                (p, ss.mean_exit_time(y[k - 1], y[k], y[k + 1]).expect("in window"))
            }
        })
        .unzip();

    ChainModel { grid: grid.clone(), p_up, tau, ds }
}

impl ChainModel {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn p_up(&self) -> &[f64] {
        &self.p_up
    }

    pub fn tau(&self) -> &[f64] {
        &self.tau
    }

    pub fn scale_increments(&self) -> &[f64] {
        &self.ds
    }

    pub fn len(&self) -> usize {
        self.p_up.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p_up.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::media::Medium;
    use crate::path::grid::build_grid;

    fn chain(m: &Medium, h: f64) -> ChainModel {
        chain_parameters(&ScaleSpeed::new(m), &build_grid(m, h).unwrap())
    }

    #[test]
    fn brownian_chain() {
        let h = 0.05;
        let c = chain(&Medium::homogeneous((-1.0, 1.0), 1.0, 1.0).unwrap(), h);
        for k in 1..c.len() - 1 {
            assert!((c.p_up()[k] - 0.5).abs() < 1e-12);
            assert!((c.tau()[k] - h * h).abs() < 1e-14 * h * h);
        }
        assert_eq!(c.p_up()[0], 1.0);
        assert_eq!(c.p_up()[c.len() - 1], 0.0);
        assert!((c.tau()[0] - h * h).abs() < 1e-15);
    }

    #[test]
    fn constant_coefficient_holding_time() {
        let h = 0.1;
        let c = chain(&Medium::homogeneous((-1.0, 1.0), 2.0, 3.0).unwrap(), h);
        assert!((c.tau()[7] - h * h * 3.0 / 2.0).abs() < 1e-15);
    }

    #[test]
    fn interface_step_probability_is_lambda() {
        let m = Medium::single_interface((-3.0, 3.0), (1.0, 2.0), (1.0, 1.0), (1.0, 1.0)).unwrap();
        let c = chain(&m, 0.01);
        let k = c.grid().interface_nodes()[0];
        assert!((c.p_up()[k] - 2.0 / 3.0).abs() < 1e-12);
        assert!(c.tau().iter().all(|&t| t > 0.0));
        assert!(c.p_up()[1..c.len() - 1].iter().all(|&p| p > 0.0 && p < 1.0));
    }
}
