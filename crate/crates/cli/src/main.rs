use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{CommandFactory, FromArgMatches, Parser};
use wsrn_core::experiment::{run_config, run_preset, Preset};
use wsrn_core::{Algorithm, SimConfig, TopologyKind};

/// Task allocation simulator for wireless sensor and robot networks.
///
/// Either runs a named preset or a single configuration built from the flags
/// and writes CSV files into the output directory.
#[derive(Debug, Parser)]
#[command(name = "wsrn", version)]
struct Cli {
    /// Named experiment grid (see the list below).
    #[arg(long, conflicts_with_all = ["algorithm", "n", "r", "sr_mult", "topology", "k", "hopmax", "trace"])]
    preset: Option<String>,

    /// gfgf2a, rfta1, rfta2, rfta2ge, ksaap or bfs.
    #[arg(long)]
    algorithm: Option<String>,

    /// Number of robots.
    #[arg(long, default_value_t = 100)]
    n: usize,

    /// Communication radius.
    #[arg(long, default_value_t = 0.25)]
    r: f64,

    /// Search radius as a multiple of 0.1.
    #[arg(long = "sr-mult", default_value_t = 2)]
    sr_mult: u32,

    /// random or hole.
    #[arg(long, default_value = "random")]
    topology: String,

    /// Hop bound for ksaap.
    #[arg(long)]
    k: Option<usize>,

    /// Tree depth for bfs.
    #[arg(long)]
    hopmax: Option<usize>,

    /// Independent runs (run i uses seed + i).
    #[arg(long, default_value_t = 100)]
    runs: usize,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Output directory, created if missing.
    #[arg(long, default_value = "out")]
    out: PathBuf,

    /// Also dump hop traces and network snapshots.
    #[arg(long)]
    trace: bool,

    /// Worker threads; defaults to all cores.
    #[arg(long)]
    jobs: Option<usize>,
}

fn preset_help() -> String {
    let mut text = String::from("Presets:\n");
    for p in Preset::ALL {
        text.push_str(&format!("  {:<20} {}\n", p.name(), p.description()));
    }
    text
}

fn config_from(cli: &Cli, algorithm: &str) -> anyhow::Result<SimConfig> {
    let mut algorithm: Algorithm = algorithm.parse()?;
    match (&mut algorithm, cli.k, cli.hopmax) {
        (Algorithm::Ksaap { k }, Some(v), _) => *k = v,
        (Algorithm::Bfs { hopmax }, _, Some(v)) => *hopmax = v,
        (Algorithm::Ksaap { .. }, None, Some(_)) | (Algorithm::Bfs { .. }, Some(_), None) => {
            bail!("--k applies to ksaap and --hopmax to bfs")
        }
        (_, None, None) => {}
        _ => bail!("--k and --hopmax only apply to ksaap and bfs"),
    }
    if !(cli.r > 0.0 && cli.r.is_finite()) {
        bail!("--r must be a positive number");
    }
    let mut config = SimConfig::new(algorithm, cli.r);
    config.n = cli.n;
    config.sr_multiplier = cli.sr_mult;
    config.topology = cli.topology.parse::<TopologyKind>()?;
    config.runs = cli.runs;
    config.seed = cli.seed;
    config.validate()?;
    Ok(config)
}

fn run(cli: Cli) -> anyhow::Result<()> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            bail!("--jobs must be at least 1");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()?;
    }
    if cli.runs == 0 {
        bail!("--runs must be at least 1");
    }
    std::fs::create_dir_all(&cli.out)
        .with_context(|| format!("cannot create output directory {}", cli.out.display()))?;
    let written = match (&cli.preset, &cli.algorithm) {
        (Some(name), _) => run_preset(name.parse::<Preset>()?, cli.seed, cli.runs, &cli.out)?,
        (None, Some(algorithm)) => run_config(&config_from(&cli, algorithm)?, cli.trace, &cli.out)?,
        (None, None) => bail!("give --preset or --algorithm"),
    };
    for path in written {
        println!("{}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let matches = Cli::command().after_help(preset_help()).get_matches();
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
