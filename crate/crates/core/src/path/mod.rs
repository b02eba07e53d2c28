//! Diffusion paths via the embedded grid chain, plus the exact
//! single-interface skew Brownian oracle.

pub mod chain;
pub mod grid;
pub mod observables;
pub mod simulate;
pub mod skew;

pub use chain::{chain_parameters, ChainModel};
pub use grid::{build_grid, Grid};
pub use observables::{martingale_residual, terminal_mean, upper_fraction, CubicBump};
pub use simulate::{
    path_rng, simulate_exits, simulate_paths, EnsembleMeta, ExitStats, HoldingMode, PathEnsemble,
    SimulationConfig,
};
pub use skew::{skew_density, transmission_probability, RescaledSkew};
