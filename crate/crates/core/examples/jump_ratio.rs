// Predicted vs estimated local-time jump at an interface, plus per-path spread.

use ltlab::harness::focus_band;
use ltlab::localtime::{default_epsilons, estimate_ratio, histogram, per_path_ratios, predicted_ratio};
use ltlab::media::Medium;
use ltlab::path::{build_grid, chain_parameters, simulate_paths, SimulationConfig};
use ltlab::scale::ScaleSpeed;

pub fn run_example() -> ltlab::Result<()> {
    let h = 0.02;
    let m = Medium::single_interface((-3.0, 3.0), (1.0, 2.0), (1.0, 3.0), (1.0, 1.0))?;
    println!("predicted ratio: {}", predicted_ratio(&m, 0));

    let chain = chain_parameters(&ScaleSpeed::new(&m), &build_grid(&m, h)?);
    let eps = default_epsilons(h);
    let cfg = SimulationConfig { focus: focus_band(chain.grid().nodes(), 0.0, eps[0]), ..SimulationConfig::new(0.0, 0.5, 10_000, 9) };
    let ens = simulate_paths(&chain, &cfg)?;

    let r = estimate_ratio(&ens, &m, 0, &eps)?;
    for (e, v) in r.epsilons.iter().zip(&r.estimated) {
        println!("  eps={e:.2}: {v:.4}");
    }
    println!("extrapolated {:.4} ± {:.4} (rel. error {:.2}%)", r.extrapolated, r.half_width, 100.0 * r.relative_error());

    let per_path = per_path_ratios(&ens, &m, 0, eps[0])?;
    let counts = histogram(&per_path, 12, 0.0, 12.0);
    println!("per-path ratios ({} paths visited both sides): {counts:?}", per_path.len());
    Ok(())
}

#[allow(dead_code)]
fn main() -> ltlab::Result<()> {
    run_example()
}
