//! Lemma checks and parameter sweeps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::allocation::Algorithm;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::simulator::{simulate, RunRecord, SimConfig, Stat};

/// Lower bound on the chance that one of `n - 1` other uniform points in the
/// unit square falls within `r` of a given point: `1 - (1 - πr²/4)^(n-1)`.
/// The quarter disk is the corner case.
pub fn p_lower_bound(n: usize, r: f64) -> f64 {
    assert!(n >= 2, "need at least two points");
    let quarter = (std::f64::consts::PI * r * r / 4.0).min(1.0);
    1.0 - (1.0 - quarter).powi(n as i32 - 1)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarlo {
    pub n: usize,
    pub r: f64,
    pub trials: usize,
    pub empirical: f64,
    pub bound: f64,
}

impl MonteCarlo {
    /// Binomial standard error at the bound.
    pub fn sigma(&self) -> f64 {
        (self.bound * (1.0 - self.bound) / self.trials as f64).sqrt()
    }

    /// Empirical frequency no more than three standard errors under the bound.
    pub fn consistent(&self) -> bool {
        self.empirical >= self.bound - 3.0 * self.sigma()
    }
}

/// Empirical frequency that at least one of `n - 1` uniform points lands
/// within `r` of a first uniform point.
pub fn monte_carlo_p(n: usize, r: f64, trials: usize, seed: u64) -> MonteCarlo {
    assert!(n >= 2 && trials > 0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r2 = r * r;
    let mut hits = 0usize;
    for _ in 0..trials {
        let (x0, y0): (f64, f64) = (rng.gen(), rng.gen());
        let mut hit = false;
        // draw every point so the stream does not depend on the outcome
        for _ in 1..n {
            let (x, y): (f64, f64) = (rng.gen(), rng.gen());
            hit |= (x - x0).powi(2) + (y - y0).powi(2) <= r2;
        }
        hits += usize::from(hit);
    }
    MonteCarlo {
        n,
        r,
        trials,
        empirical: hits as f64 / trials as f64,
        bound: p_lower_bound(n, r),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec<S> {
    pub base: SimConfig<S>,
    pub multipliers: Vec<u32>,
}

impl<S: Scalar> SweepSpec<S> {
    pub fn new(base: SimConfig<S>) -> Self {
        Self {
            base,
            multipliers: vec![1, 2, 3, 4],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub multiplier: u32,
    pub sr: f64,
    pub lifetime: Stat,
    pub msgs_per_round: Stat,
}

/// Mean lifetime for each search-radius multiplier.
pub fn sr_sweep<S: Scalar>(spec: &SweepSpec<S>) -> Result<Vec<SweepRow>> {
    if !matches!(spec.base.algorithm, Algorithm::Rfta2 | Algorithm::Rfta2ge) {
        return Err(Error::InvalidConfig(format!(
            "search radius sweep applies to rfta2 and rfta2ge, not {}",
            spec.base.algorithm
        )));
    }
    spec.multipliers
        .par_iter()
        .map(|&m| {
            let mut c = spec.base.clone();
            c.sr_multiplier = m;
            let (rep, _) = simulate(&c)?;
            Ok(SweepRow {
                multiplier: m,
                sr: rep.sr,
                lifetime: rep.anl,
                msgs_per_round: rep.msgs_per_round,
            })
        })
        .collect()
}

/// Multiplier with the longest mean lifetime; ties go to the smaller one.
pub fn best_multiplier(rows: &[SweepRow]) -> Option<u32> {
    rows.iter()
        .fold(None::<&SweepRow>, |best, row| match best {
            Some(b) if b.lifetime.mean >= row.lifetime.mean => Some(b),
            _ => Some(row),
        })
        .map(|r| r.multiplier)
}

/// Face-count message estimate for one round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lemma4Row {
    pub round: usize,
    pub n: usize,
    pub edges: usize,
    pub connected: bool,
    /// `c - n + 1`, floored at zero.
    pub faces: usize,
    pub average_degree: f64,
    pub measured: u64,
    /// `(F + 1) · deg + 2`
    pub estimate: f64,
}

impl Lemma4Row {
    pub fn new(round: usize, n: usize, edges: usize, connected: bool, measured: u64) -> Self {
        let faces = (edges + 1).saturating_sub(n);
        let average_degree = 2.0 * edges as f64 / n as f64;
        Self {
            round,
            n,
            edges,
            connected,
            faces,
            average_degree,
            measured,
            estimate: (faces as f64 + 1.0) * average_degree + 2.0,
        }
    }

    /// `n - 1 ≤ c < 3n`.
    pub fn edge_bounds_hold(&self) -> bool {
        self.edges + 1 >= self.n && self.edges < 3 * self.n
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lemma4Report {
    pub rows: Vec<Lemma4Row>,
    pub mean_measured: f64,
    pub mean_estimate: f64,
    /// Connected rounds that broke `n - 1 ≤ c < 3n`.
    pub bound_violations: usize,
}

/// Per-round message estimate next to the measured count. Informational only.
pub fn lemma4_diagnostic<S: Scalar>(run: &RunRecord<S>) -> Lemma4Report {
    let rows: Vec<Lemma4Row> = run
        .rounds
        .iter()
        .map(|r| {
            Lemma4Row::new(
                r.round_index,
                run.n,
                r.edge_count,
                r.connected,
                r.result.total_messages,
            )
        })
        .collect();
    let k = rows.len().max(1) as f64;
    Lemma4Report {
        mean_measured: rows.iter().map(|r| r.measured as f64).sum::<f64>() / k,
        mean_estimate: rows.iter().map(|r| r.estimate).sum::<f64>() / k,
        bound_violations: rows
            .iter()
            .filter(|r| r.connected && !r.edge_bounds_hold())
            .count(),
        rows,
    }
}

/// Routing hops against `n · c` for every round of a run: `(worst ratio, violations)`.
pub fn step_bound<S: Scalar>(run: &RunRecord<S>) -> (f64, usize) {
    run.rounds.iter().fold((0.0, 0), |(worst, bad), r| {
        let bound = run.n * r.edge_count;
        let ratio = if bound == 0 {
            f64::INFINITY
        } else {
            r.result.routing_steps as f64 / bound as f64
        };
        let ratio = if r.result.routing_steps == 0 {
            0.0
        } else {
            ratio
        };
        (
            worst.max(ratio),
            bad + usize::from(r.result.routing_steps > bound),
        )
    })
}

/// Largest relative spread `(max - min) / mean` of a set of means.
pub fn relative_spread(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    (max - min) / mean
}
