use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ltlab::fv::Scheme;
use ltlab::harness::{self, Config, EngineSettings, Table};
use ltlab::localtime::Notion;
use ltlab::path::HoldingMode;
use ltlab::scale::ScaleSpeed;
use ltlab::{Error, Result};

#[derive(Parser)]
#[command(name = "ltlab", version, about = "Interface diffusions: scale/speed, chain simulation, local times, forward solver")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Medium config document (JSON), optionally with an `experiment` section.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file (directory root for `check`, default `out`); stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Args, Clone)]
struct EngineArgs {
    #[arg(long)]
    h: Option<f64>,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    paths: Option<usize>,
    #[arg(long)]
    start: Option<f64>,
    #[arg(long, value_parser = parse_mode)]
    mode: Option<HoldingMode>,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a medium and list violated assumptions.
    Validate,
    /// Tabulate s′, m′ (one-sided) and s on a uniform grid.
    TabulateScale {
        #[arg(long, default_value_t = 601)]
        points: usize,
    },
    /// Simulate the chain and emit per-node occupation.
    Simulate {
        #[command(flatten)]
        engine: EngineArgs,
        /// Keep full traces of the first N paths.
        #[arg(long, default_value_t = 0)]
        trace: usize,
        #[arg(long, default_value = "trace.csv")]
        trace_out: PathBuf,
        /// Write a manifest from which `localtime --ensemble` regenerates the ensemble.
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// One-sided local-time estimates at the given points.
    Localtime {
        #[command(flatten)]
        engine: EngineArgs,
        #[arg(long)]
        ensemble: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', required = true)]
        at: Vec<f64>,
        #[arg(long, value_delimiter = ',')]
        eps: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',', default_value = "nlt,smlt,dlt")]
        notion: Vec<String>,
    },
    /// Predicted vs estimated local-time jump ratios at every interface.
    Ratio {
        #[command(flatten)]
        engine: EngineArgs,
        #[arg(long)]
        ensemble: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        eps: Option<Vec<f64>>,
        /// Also write a histogram of per-path ratios at the first interface.
        #[arg(long)]
        histogram: Option<PathBuf>,
    },
    /// Finite-volume solve of the forward problem.
    Pde {
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        cells: Option<usize>,
        #[arg(long)]
        dt: Option<f64>,
        /// `delta:<x0>` or `csv:<path>`.
        #[arg(long, default_value = "delta:0")]
        init: String,
        #[arg(long)]
        scheme: Option<Scheme>,
    },
    /// Run the plan's checks and write the CSV trail to `<out>/<plan-name>/`.
    Check,
}

fn parse_mode(s: &str) -> std::result::Result<HoldingMode, String> {
    match s {
        "fixed" => Ok(HoldingMode::Fixed),
        "exp" => Ok(HoldingMode::Exp),
        _ => Err(format!("mode must be `fixed` or `exp`, got `{s}`")),
    }
}

fn load(global: &Global) -> Result<Config> {
    let path = global.config.as_deref().ok_or_else(|| Error::Config("--config is required".into()))?;
    let mut cfg = harness::parse_config(path)?;
    if let Some(seed) = global.seed {
        cfg.plan.engine.seed = seed;
    }
    Ok(cfg)
}

fn engine(base: &EngineSettings, a: &EngineArgs) -> EngineSettings {
    EngineSettings {
        h: a.h.unwrap_or(base.h),
        t: a.t.unwrap_or(base.t),
        paths: a.paths.unwrap_or(base.paths),
        start: a.start.unwrap_or(base.start),
        mode: a.mode.unwrap_or(base.mode),
        seed: base.seed,
    }
}

fn emit(table: &Table, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => table.write_to(p),
        None => {
            print!("{}", table.to_csv());
            Ok(())
        }
    }
}

/// Simulation from a manifest, or from the config and flag overrides.
fn ensemble_source(
    global: &Global,
    manifest: Option<&Path>,
    args: &EngineArgs,
    focus: Option<(f64, f64)>,
) -> Result<(ltlab::media::Medium, EngineSettings, harness::Simulation)> {
    if let Some(m) = manifest {
        return harness::load_ensemble(m);
    }
    let cfg = load(global)?;
    let e = engine(&cfg.plan.engine, args);
    let sim = harness::simulate(&cfg.medium, &e, 0, focus)?;
    Ok((cfg.medium, e, sim))
}

fn run(cli: Cli) -> Result<bool> {
    let g = &cli.global;
    let out = g.out.as_deref();
    match &cli.command {
        Command::Validate => {
            let path = g.config.as_deref().ok_or_else(|| Error::Config("--config is required".into()))?;
            let text = std::fs::read_to_string(path)?;
            let report = harness::validate_document(&text)?;
            emit(&harness::validation_table(&report), out)?;
            if !report.is_empty() {
                return Err(Error::Invalid(report));
            }
            // experiment section, if any
            harness::parse_config_str(&text)?;
        }
        Command::TabulateScale { points } => {
            let cfg = load(g)?;
            emit(&harness::scale_table(&ScaleSpeed::new(&cfg.medium), *points), out)?;
        }
        Command::Simulate { engine: args, trace, trace_out, manifest } => {
            let cfg = load(g)?;
            let e = engine(&cfg.plan.engine, args);
            let sim = harness::simulate(&cfg.medium, &e, *trace, None)?;
            emit(&harness::ensemble_table(&sim.ensemble), out)?;
            if *trace > 0 {
                harness::trace_table(&sim.ensemble).write_to(trace_out)?;
            }
            if let Some(m) = manifest {
                std::fs::write(m, serde_json::to_string_pretty(&sim.manifest(&e))?)?;
            }
        }
        Command::Localtime { engine: args, ensemble, at, eps, notion } => {
            let notions = notion.iter().map(|n| n.parse()).collect::<Result<Vec<Notion>>>()?;
            let (_, e, sim) = ensemble_source(g, ensemble.as_deref(), args, None)?;
            let eps = eps.clone().unwrap_or_else(|| ltlab::localtime::default_epsilons(e.h));
            emit(&harness::localtime_table(&sim.ensemble, &sim.scale, at, &eps, &notions)?, out)?;
        }
        Command::Ratio { engine: args, ensemble, eps, histogram } => {
            let base_h = match ensemble {
                Some(_) => None,
                None => Some(engine(&load(g)?.plan.engine, args).h),
            };
            let eps_for = |h: f64| eps.clone().unwrap_or_else(|| ltlab::localtime::default_epsilons(h));
            // per-path tallies need the band before simulating
            let focus = match (histogram, base_h) {
                (Some(_), Some(h)) => load(g)?.medium.interfaces().first().map(|i| (i.x, eps_for(h)[0])),
                _ => None,
            };
            let (medium, e, sim) = ensemble_source(g, ensemble.as_deref(), args, focus)?;
            let eps = eps_for(e.h);
            emit(&harness::ratio_table(&harness::ratio_reports(&sim.ensemble, &medium, &eps)?), out)?;
            if let Some(path) = histogram {
                if sim.ensemble.focus.is_none() {
                    return Err(Error::Config("--histogram needs a config-driven ensemble with an interface".into()));
                }
                harness::ratio_histogram(&sim.ensemble, &medium, 0, eps[0], 50)?.write_to(path)?;
            }
        }
        Command::Pde { t, cells, dt, init, scheme } => {
            let cfg = load(g)?;
            let s = &cfg.plan.solver;
            let run = harness::run_pde(
                &cfg.medium,
                &harness::parse_initial(init)?,
                t.unwrap_or(cfg.plan.engine.t),
                cells.unwrap_or(s.cells),
                dt.unwrap_or(s.dt),
                scheme.unwrap_or(s.scheme),
            )?;
            emit(&run.table(), out)?;
            eprint!("{}", run.summary().to_csv());
        }
        Command::Check => {
            let cfg = load(g)?;
            let (report, artifacts) = harness::run_checks(&cfg)?;
            let dir = out.unwrap_or(Path::new("out")).join(&cfg.plan.name);
            harness::write_artifacts(&dir, &artifacts)?;
            print!("{}", artifacts.report.to_csv());
            return Ok(report.all_pass());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_config() { 2 } else { 1 })
        }
    }
}
