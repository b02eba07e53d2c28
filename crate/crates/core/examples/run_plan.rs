// Run a whole experiment plan from a config document and write its CSV trail.

use ltlab::harness::{parse_config_str, run_checks, write_artifacts};

pub fn run_example() -> ltlab::Result<()> {
    let mut config = parse_config_str(include_str!("symmetric.json"))?;
    config.plan.engine.paths = 4_000;
    let (report, artifacts) = run_checks(&config)?;
    for r in &report.results {
        println!(
            "{:<16} predicted {:.4} observed {:.4} -> {}",
            r.name,
            r.predicted,
            r.observed,
            if r.pass { "pass" } else { "fail" }
        );
    }
    let dir = std::env::temp_dir().join("ltlab-example").join(&report.plan);
    write_artifacts(&dir, &artifacts)?;
    println!("artifacts in {}", dir.display());
    Ok(())
}

#[allow(dead_code)]
fn main() -> ltlab::Result<()> {
    run_example()
}
