//! Named experiment grids and a runner that writes their CSV files.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use crate::allocation::Algorithm;
use crate::analysis::{monte_carlo_p, sr_sweep, SweepSpec};
use crate::error::{Error, Result};
use crate::output::{
    write_aggregate, write_closest, write_lemma4, write_monte_carlo, write_rounds,
    write_snapshot_edges, write_snapshot_nodes, write_sweeps, write_traces, SweepTable,
};
use crate::simulator::{closest_experiment, simulate, SimConfig, SimState, TopologyKind};
use crate::topology::Topology;

/// Communication radii swept by the grid presets.
pub const R_GRID: [f64; 9] = [0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5, 0.55];
pub const MULTIPLIERS: [u32; 4] = [1, 2, 3, 4];
pub const TOPOLOGIES: [TopologyKind; 2] = [TopologyKind::Random, TopologyKind::RandomWithHole];
pub const MONTE_CARLO_TRIALS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    Fig6_8Rfta1,
    Fig9_10Baselines,
    Fig11_12Rfta2,
    Fig13_14Rfta2ge,
    Fig15_16Comparison,
    Table2Random,
    Table3Hole,
    Lemma1Check,
    Lemma2Sweep,
}

impl Preset {
    pub const ALL: [Preset; 9] = [
        Preset::Fig6_8Rfta1,
        Preset::Fig9_10Baselines,
        Preset::Fig11_12Rfta2,
        Preset::Fig13_14Rfta2ge,
        Preset::Fig15_16Comparison,
        Preset::Table2Random,
        Preset::Table3Hole,
        Preset::Lemma1Check,
        Preset::Lemma2Sweep,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig6_8Rfta1 => "fig6_8_rfta1",
            Preset::Fig9_10Baselines => "fig9_10_baselines",
            Preset::Fig11_12Rfta2 => "fig11_12_rfta2",
            Preset::Fig13_14Rfta2ge => "fig13_14_rfta2ge",
            Preset::Fig15_16Comparison => "fig15_16_comparison",
            Preset::Table2Random => "table2_random",
            Preset::Table3Hole => "table3_hole",
            Preset::Lemma1Check => "lemma1_check",
            Preset::Lemma2Sweep => "lemma2_sweep",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Preset::Fig6_8Rfta1 => {
                "RFTA1 vs plain routing, messages and closest-robot rate over r, both topologies"
            }
            Preset::Fig9_10Baselines => {
                "RFTA2, RFTA2GE, k-SAAP (k=7), BFS (hopmax 7 and 10) at r=0.2, 2SR"
            }
            Preset::Fig11_12Rfta2 => {
                "RFTA2 lifetime and messages over r and SR..4SR, both topologies"
            }
            Preset::Fig13_14Rfta2ge => {
                "RFTA2GE lifetime and messages over r and SR..4SR, both topologies"
            }
            Preset::Fig15_16Comparison => "RFTA2, GFGF2A, RFTA2GE over r at 2SR, both topologies",
            Preset::Table2Random => {
                "energy statistics of GFGF2A, RFTA2, RFTA2GE, random, r=0.25, 2SR"
            }
            Preset::Table3Hole => "energy statistics of GFGF2A, RFTA2, RFTA2GE, hole, r=0.25, 2SR",
            Preset::Lemma1Check => {
                "Monte-Carlo hit rate against the corner bound, N=100, R=0.1..0.4"
            }
            Preset::Lemma2Sweep => "SR..4SR lifetime sweep for RFTA2 and RFTA2GE at r=0.2 and 0.25",
        }
    }

    /// Lifetime configurations of the preset; empty for the non-lifetime ones.
    pub fn lifetime_grid(self, seed: u64, runs: usize) -> Vec<SimConfig<f64>> {
        let make = |algorithm: Algorithm, r: f64, m: u32, topology: TopologyKind| {
            let mut c = SimConfig::new(algorithm, r);
            c.sr_multiplier = m;
            c.topology = topology;
            c.seed = seed;
            c.runs = runs;
            c
        };
        let trio = [Algorithm::Gfgf2a, Algorithm::Rfta2, Algorithm::Rfta2ge];
        let mut grid = Vec::new();
        match self {
            Preset::Fig9_10Baselines => {
                for a in [
                    Algorithm::Rfta2,
                    Algorithm::Rfta2ge,
                    Algorithm::Ksaap { k: 7 },
                    Algorithm::Bfs { hopmax: 7 },
                    Algorithm::Bfs { hopmax: 10 },
                ] {
                    grid.push(make(a, 0.2, 2, TopologyKind::Random));
                }
            }
            Preset::Fig11_12Rfta2 | Preset::Fig13_14Rfta2ge => {
                let a = if self == Preset::Fig11_12Rfta2 {
                    Algorithm::Rfta2
                } else {
                    Algorithm::Rfta2ge
                };
                for topology in TOPOLOGIES {
                    for r in R_GRID {
                        for m in MULTIPLIERS {
                            grid.push(make(a, r, m, topology));
                        }
                    }
                }
            }
            Preset::Fig15_16Comparison => {
                for topology in TOPOLOGIES {
                    for r in R_GRID {
                        for a in trio {
                            grid.push(make(a, r, 2, topology));
                        }
                    }
                }
            }
            Preset::Table2Random => {
                grid.extend(trio.map(|a| make(a, 0.25, 2, TopologyKind::Random)))
            }
            Preset::Table3Hole => {
                grid.extend(trio.map(|a| make(a, 0.25, 2, TopologyKind::RandomWithHole)))
            }
            Preset::Fig6_8Rfta1 | Preset::Lemma1Check | Preset::Lemma2Sweep => {}
        }
        grid
    }
}

impl std::fmt::Display for Preset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s.trim())
            .ok_or_else(|| Error::InvalidConfig(format!("unknown preset '{s}'")))
    }
}

fn create(dir: &Path, name: &str) -> Result<(BufWriter<File>, PathBuf)> {
    let path = dir.join(name);
    let file = File::create(&path)
        .map_err(|e| Error::InvalidConfig(format!("cannot write {}: {e}", path.display())))?;
    Ok((BufWriter::new(file), path))
}

/// Runs a preset and writes `<name>.csv` into `dir`.
pub fn run_preset(preset: Preset, seed: u64, runs: usize, dir: &Path) -> Result<Vec<PathBuf>> {
    let file = format!("{}.csv", preset.name());
    match preset {
        Preset::Fig6_8Rfta1 => {
            let mut reports = Vec::new();
            for topology in TOPOLOGIES {
                for r in R_GRID {
                    let mut c = SimConfig::new(Algorithm::Rfta1, r);
                    c.topology = topology;
                    c.seed = seed;
                    c.runs = runs;
                    reports.push(closest_experiment(&c)?.0);
                }
            }
            let (w, path) = create(dir, &file)?;
            write_closest(w, &reports, seed)?;
            Ok(vec![path])
        }
        Preset::Lemma1Check => {
            let rows: Vec<_> = [0.1, 0.2, 0.3, 0.4]
                .iter()
                .map(|&r| monte_carlo_p(100, r, MONTE_CARLO_TRIALS, seed))
                .collect();
            let (w, path) = create(dir, &file)?;
            write_monte_carlo(w, &rows, seed)?;
            Ok(vec![path])
        }
        Preset::Lemma2Sweep => {
            let mut tables = Vec::new();
            for a in [Algorithm::Rfta2, Algorithm::Rfta2ge] {
                for topology in TOPOLOGIES {
                    for r in [0.2, 0.25] {
                        let mut c = SimConfig::new(a, r);
                        c.topology = topology;
                        c.seed = seed;
                        c.runs = runs;
                        tables.push(SweepTable {
                            algorithm: a.to_string(),
                            topology: topology.to_string(),
                            n: c.n,
                            radius: r,
                            runs,
                            seed,
                            rows: sr_sweep(&SweepSpec::new(c))?,
                        });
                    }
                }
            }
            let (w, path) = create(dir, &file)?;
            write_sweeps(w, &tables)?;
            Ok(vec![path])
        }
        _ => {
            let reports = preset
                .lifetime_grid(seed, runs)
                .iter()
                .map(|c| simulate(c).map(|(rep, _)| rep))
                .collect::<Result<Vec<_>>>()?;
            let (w, path) = create(dir, &file)?;
            write_aggregate(w, &reports)?;
            Ok(vec![path])
        }
    }
}

/// Runs one configuration and writes its aggregate row, every round, the
/// per-run message diagnostics and, with `trace`, hop traces plus the
/// initial and final network of the first run.
pub fn run_config(config: &SimConfig<f64>, trace: bool, dir: &Path) -> Result<Vec<PathBuf>> {
    let mut paths = Vec::new();
    if config.algorithm == Algorithm::Rfta1 {
        let (report, _) = closest_experiment(config)?;
        let (w, path) = create(dir, "closest.csv")?;
        write_closest(w, &[report], config.seed)?;
        return Ok(vec![path]);
    }
    let (report, runs) = simulate(config)?;
    let (w, path) = create(dir, "aggregate.csv")?;
    write_aggregate(w, &[report])?;
    paths.push(path);
    let (w, path) = create(dir, "rounds.csv")?;
    write_rounds(w, &runs, config.seed)?;
    paths.push(path);
    let (w, path) = create(dir, "lemma4.csv")?;
    write_lemma4(w, &runs, config.seed)?;
    paths.push(path);
    if trace {
        let (w, path) = create(dir, "trace.csv")?;
        write_traces(w, &runs, config.seed)?;
        paths.push(path);
        let initial = SimState::new(config, config.seed)?.topology;
        let last = Topology::from_robots(runs[0].robots.clone(), config.radius, initial.hole);
        for (label, t) in [("initial", &initial), ("final", &last)] {
            let (w, path) = create(dir, &format!("snapshot_{label}_nodes.csv"))?;
            write_snapshot_nodes(w, t)?;
            paths.push(path);
            let (w, path) = create(dir, &format!("snapshot_{label}_edges.csv"))?;
            write_snapshot_edges(w, t)?;
            paths.push(path);
        }
    }
    Ok(paths)
}
