// Chain simulation: how much mass ends up right of the interface.

use ltlab::media::Medium;
use ltlab::path::{build_grid, chain_parameters, simulate_paths, transmission_probability, upper_fraction, SimulationConfig};
use ltlab::scale::ScaleSpeed;

pub fn run_example() -> ltlab::Result<()> {
    let m = Medium::single_interface((-3.0, 3.0), (1.0, 2.0), (1.0, 1.0), (1.0, 1.0))?;
    let ss = ScaleSpeed::new(&m);
    let chain = chain_parameters(&ss, &build_grid(&m, 0.02)?);

    let k = chain.grid().interface_nodes()[0];
    println!("step-up probability at the interface: {:.12}", chain.p_up()[k]);

    let ens = simulate_paths(&chain, &SimulationConfig::new(0.0, 0.25, 20_000, 42))?;
    let (p, se) = upper_fraction(&ens, &chain, &ss, 0.0)?;
    let alpha = transmission_probability(&m, 0.0)?;
    println!("P(X(0.25) > 0) = {p:.4} ± {se:.4}, alpha = {alpha:.4}");
    assert!((p - alpha).abs() < 5.0 * se);
    Ok(())
}

#[allow(dead_code)]
fn main() -> ltlab::Result<()> {
    run_example()
}
