// One-sided natural local times and their semimartingale / diffusion versions.

use ltlab::localtime::{continuity_probe, convert_lt, default_epsilons, nlt_estimate, smlt_direct, Notion};
use ltlab::media::{Medium, Side};
use ltlab::path::{build_grid, chain_parameters, simulate_paths, SimulationConfig};
use ltlab::scale::ScaleSpeed;

pub fn run_example() -> ltlab::Result<()> {
    let h = 0.02;
    let m = Medium::single_interface((-3.0, 3.0), (1.0, 2.0), (1.0, 3.0), (1.0, 1.0))?;
    let ss = ScaleSpeed::new(&m);
    let chain = chain_parameters(&ss, &build_grid(&m, h)?);
    let ens = simulate_paths(&chain, &SimulationConfig::new(0.0, 0.5, 10_000, 1))?;
    let eps = default_epsilons(h);

    for side in [Side::Left, Side::Right] {
        let nlt = nlt_estimate(&ens, &m, 0.0, side, &eps)?;
        let e = &nlt.extrapolated;
        let smlt = convert_lt(e, Notion::Smlt, &ss)?;
        let dlt = convert_lt(e, Notion::Dlt, &ss)?;
        let direct = smlt_direct(&ens, &ss, 0.0, side, &eps)?.extrapolated;
        println!(
            "{:>5}: nlt {:.4} ± {:.4}  smlt {:.4} (direct {:.4})  dlt {:.4}",
            side.as_str(), e.value, e.stderr, smlt.value, direct.value, dlt.value
        );
    }

    // away from the interface both sides agree; at it only l/m' does
    for x in [0.5, 0.0] {
        let p = continuity_probe(&ens, &ss, x, &eps)?;
        println!(
            "x={x}: nlt jump {:+.4} ± {:.4}, l/m' jump {:+.4} ± {:.4}",
            p.difference, p.difference_stderr, p.normalized_difference, p.normalized_stderr
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> ltlab::Result<()> {
    run_example()
}
