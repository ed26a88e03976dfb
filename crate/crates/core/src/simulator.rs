//! Round-based lifetime simulation.
//!
//! Each run owns one seeded ChaCha8 stream. Draw order: the deployment
//! (positions, including any redraws), then per round the event `x`, the event
//! `y` and the collecting robot index. The stream never depends on the
//! algorithm, so every algorithm sees the same deployment and event sequence
//! for a given seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::allocation::{allocate, Algorithm, AllocationResult, Outcome};
use crate::energy::{consume, energy_loss, EnergyParams};
use crate::error::{Error, Result};
use crate::geometry::{HandRule, Point};
use crate::scalar::Scalar;
use crate::topology::{
    generate_topology_with, Deployment, Hole, NodeId, Robot, Topology, DEFAULT_MAX_REGENERATIONS,
};

/// Tripwire on run length; energy drain ends every run long before it.
pub const DEFAULT_ROUND_CAP: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TopologyKind {
    Random,
    RandomWithHole,
}

impl std::fmt::Display for TopologyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TopologyKind::Random => "random",
            TopologyKind::RandomWithHole => "hole",
        })
    }
}

impl std::str::FromStr for TopologyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "random" => Ok(TopologyKind::Random),
            "hole" | "random_with_hole" | "random-with-hole" => Ok(TopologyKind::RandomWithHole),
            other => Err(Error::InvalidConfig(format!("unknown topology '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig<S> {
    pub n: usize,
    pub radius: S,
    pub sr_base: S,
    pub sr_multiplier: u32,
    pub topology: TopologyKind,
    pub hole: Hole<S>,
    pub algorithm: Algorithm,
    pub runs: usize,
    /// Run `i` uses seed `seed + i`.
    pub seed: u64,
    pub energy: EnergyParams<S>,
    pub hand_rule: HandRule,
    pub max_regenerations: usize,
    pub round_cap: usize,
}

impl<S: Scalar> SimConfig<S> {
    pub fn new(algorithm: Algorithm, radius: S) -> Self {
        Self {
            n: 100,
            radius,
            sr_base: S::lit(0.1),
            sr_multiplier: 2,
            topology: TopologyKind::Random,
            hole: Hole::default(),
            algorithm,
            runs: 100,
            seed: 0,
            energy: EnergyParams::default(),
            hand_rule: HandRule::Right,
            max_regenerations: DEFAULT_MAX_REGENERATIONS,
            round_cap: DEFAULT_ROUND_CAP,
        }
    }

    pub fn sr(&self) -> S {
        self.sr_base * S::lit(f64::from(self.sr_multiplier))
    }

    pub fn run_seed(&self, run: usize) -> u64 {
        self.seed.wrapping_add(run as u64)
    }

    pub fn deployment(&self) -> Deployment<S> {
        let hole = (self.topology == TopologyKind::RandomWithHole).then_some(self.hole);
        Deployment::new(self.n, self.radius)
            .with_hole(hole)
            .with_initial_energy(self.energy.initial_energy)
            .with_max_regenerations(self.max_regenerations)
    }

    pub fn validate(&self) -> Result<()> {
        self.energy.validate()?;
        if self.n < 2 {
            return Err(Error::InvalidConfig("n must be at least 2".into()));
        }
        if !self.radius.is_positive_finite() {
            return Err(Error::InvalidConfig(
                "communication radius must be positive".into(),
            ));
        }
        if !self.sr_base.is_positive_finite() || self.sr_multiplier == 0 {
            return Err(Error::InvalidConfig(
                "search radius must be positive".into(),
            ));
        }
        if self.runs == 0 {
            return Err(Error::InvalidConfig("runs must be at least 1".into()));
        }
        match self.algorithm {
            Algorithm::Ksaap { k: 0 } | Algorithm::Bfs { hopmax: 0 } => {
                Err(Error::InvalidConfig("hop bound must be at least 1".into()))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoundRecord<S> {
    pub round_index: usize,
    pub event: Point<S>,
    pub collecting_robot: NodeId,
    pub result: AllocationResult,
    /// Metres driven by the winner; zero when the network died.
    pub winner_travel: S,
    pub energy_consumed: S,
    /// Gabriel edges during the round, before the winner moved.
    pub edge_count: usize,
    /// Connectivity during the round, before the winner moved.
    pub connected: bool,
    pub disconnected_after: bool,
}

/// Everything one run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord<S> {
    pub seed: u64,
    /// Successfully allocated rounds.
    pub lifetime: usize,
    pub rounds: Vec<RoundRecord<S>>,
    pub robots: Vec<Robot<S>>,
    pub n: usize,
}

impl<S: Scalar> RunRecord<S> {
    pub fn total_messages(&self) -> u64 {
        self.rounds.iter().map(|r| r.result.total_messages).sum()
    }
}

/// Mutable state of one run.
#[derive(Debug, Clone)]
pub struct SimState<S> {
    pub topology: Topology<S>,
    pub rng: ChaCha8Rng,
    pub round: usize,
    pub dead: bool,
}

impl<S: Scalar> SimState<S> {
    /// Seeds the run stream and draws the deployment from it.
    pub fn new(config: &SimConfig<S>, seed: u64) -> Result<Self> {
        config.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let topology = generate_topology_with(&config.deployment(), &mut rng)?;
        Ok(Self {
            topology,
            rng,
            round: 0,
            dead: false,
        })
    }

    /// Starts from a prepared network; `seed` only feeds later event draws.
    pub fn from_topology(topology: Topology<S>, seed: u64) -> Self {
        Self {
            topology,
            rng: ChaCha8Rng::seed_from_u64(seed),
            round: 0,
            dead: false,
        }
    }
}

/// Plays one event: draw it, allocate, move the winner and rebuild the graph.
pub fn run_round<S: Scalar>(
    state: &mut SimState<S>,
    config: &SimConfig<S>,
) -> Result<RoundRecord<S>> {
    if state.dead {
        return Err(Error::InvalidConfig("network is already dead".into()));
    }
    let event = Point::new(
        state.rng.gen_range(S::zero()..=S::one()),
        state.rng.gen_range(S::zero()..=S::one()),
    );
    let collecting_robot = state.rng.gen_range(0..state.topology.len());
    play_event(state, config, event, collecting_robot)
}

/// Allocates a given event from a given collecting robot and applies the result.
pub fn play_event<S: Scalar>(
    state: &mut SimState<S>,
    config: &SimConfig<S>,
    event: Point<S>,
    collecting_robot: NodeId,
) -> Result<RoundRecord<S>> {
    if state.dead {
        return Err(Error::InvalidConfig("network is already dead".into()));
    }
    let t = &state.topology;
    let edge_count = t.edge_count();
    let connected = t.is_connected();
    let result = allocate(
        config.algorithm,
        collecting_robot,
        event,
        config.sr(),
        t,
        &config.energy,
        config.hand_rule,
    );

    for (sender, count) in result.sent.by_sender() {
        state.topology.robots[sender].messages_sent += count;
    }
    let mut winner_travel = S::zero();
    let mut energy_consumed = S::zero();
    match result.outcome {
        Outcome::Assigned(w) => {
            winner_travel = config
                .energy
                .to_meters(state.topology.position(w).distance(event));
            energy_consumed =
                consume(&mut state.topology.robots[w], winner_travel, &config.energy)?;
            state.topology.update_after_move(w, event);
        }
        Outcome::NetworkDead => state.dead = true,
    }
    let record = RoundRecord {
        round_index: state.round,
        event,
        collecting_robot,
        result,
        winner_travel,
        energy_consumed,
        edge_count,
        connected,
        disconnected_after: !state.topology.is_connected(),
    };
    state.round += 1;
    Ok(record)
}

/// Plays rounds until the network dies.
pub fn run_lifetime<S: Scalar>(config: &SimConfig<S>, seed: u64) -> Result<RunRecord<S>> {
    if config.algorithm == Algorithm::Rfta1 {
        return Err(Error::InvalidConfig(
            "rfta1 has no energy model; use the closest-robot experiment".into(),
        ));
    }
    let mut state = SimState::new(config, seed)?;
    let mut rounds = Vec::new();
    while !state.dead {
        if state.round >= config.round_cap {
            return Err(Error::NonTerminating {
                cap: config.round_cap,
            });
        }
        rounds.push(run_round(&mut state, config)?);
    }
    Ok(RunRecord {
        seed,
        lifetime: rounds.len() - 1,
        rounds,
        robots: state.topology.robots,
        n: config.n,
    })
}

/// All runs of a configuration, returned in seed order whatever the pool size.
pub fn run_all<S: Scalar>(config: &SimConfig<S>) -> Result<Vec<RunRecord<S>>> {
    config.validate()?;
    (0..config.runs)
        .into_par_iter()
        .map(|i| run_lifetime(config, config.run_seed(i)))
        .collect()
}

/// Mean with dispersion. `ci` is the 95 % half-width `1.96 · s / √runs` of
/// the across-run sample.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Stat {
    pub mean: f64,
    pub sd: f64,
    pub ci: f64,
}

/// Sample mean and (n - 1) standard deviation; zero spread for one value.
pub fn mean_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, var.sqrt())
}

impl Stat {
    /// Across-run statistic: one value per run.
    pub fn across(values: &[f64]) -> Self {
        let (mean, sd) = mean_sd(values);
        Self {
            mean,
            sd,
            ci: 1.96 * sd / (values.len() as f64).sqrt(),
        }
    }

    /// Per-robot statistic: `per_run` holds each run's robot values. The mean
    /// averages robots then runs, `sd` is the run-averaged spread over robots
    /// and `ci` comes from the spread of the run means.
    pub fn per_robot(per_run: &[Vec<f64>]) -> Self {
        let summaries: Vec<(f64, f64)> = per_run.iter().map(|v| mean_sd(v)).collect();
        let means: Vec<f64> = summaries.iter().map(|s| s.0).collect();
        let across = Self::across(&means);
        let sd = summaries.iter().map(|s| s.1).sum::<f64>() / summaries.len() as f64;
        Self {
            mean: across.mean,
            sd,
            ci: across.ci,
        }
    }
}

/// Aggregate statistics over the runs of one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SimReport {
    pub algorithm: Algorithm,
    pub topology: TopologyKind,
    pub n: usize,
    pub radius: f64,
    pub sr: f64,
    pub runs: usize,
    pub seed: u64,
    /// Network lifetime in rounds.
    pub anl: Stat,
    /// Messages sent per robot over a run.
    pub ampr: Stat,
    /// Lowest remaining energy in a run, percent, averaged over runs.
    pub min_rre: f64,
    /// Remaining energy, percent.
    pub arre: Stat,
    /// Reactions per robot.
    pub anrr: Stat,
    /// Metres travelled per robot.
    pub atdpr: Stat,
    /// Messages per round, including the final failed round.
    pub msgs_per_round: Stat,
    /// Messages per run.
    pub msgs_per_run: Stat,
    pub lifetimes: Vec<usize>,
}

/// Summarises runs sorted by seed.
pub fn aggregate<S: Scalar>(config: &SimConfig<S>, runs: &[RunRecord<S>]) -> Result<SimReport> {
    if runs.is_empty() {
        return Err(Error::InvalidConfig("cannot aggregate zero runs".into()));
    }
    let mut sorted: Vec<&RunRecord<S>> = runs.iter().collect();
    sorted.sort_by_key(|r| r.seed);
    let per_robot = |f: &dyn Fn(&Robot<S>) -> f64| -> Vec<Vec<f64>> {
        sorted
            .iter()
            .map(|run| run.robots.iter().map(f).collect())
            .collect()
    };
    let e0 = config.energy.initial_energy;
    let percent = |r: &Robot<S>| (S::lit(100.0) * r.energy / e0).as_f64();
    let lifetimes: Vec<usize> = sorted.iter().map(|r| r.lifetime).collect();
    let min_rre = sorted
        .iter()
        .map(|run| run.robots.iter().map(percent).fold(f64::INFINITY, f64::min))
        .sum::<f64>()
        / sorted.len() as f64;
    let per_round: Vec<f64> = sorted
        .iter()
        .map(|r| r.total_messages() as f64 / r.rounds.len().max(1) as f64)
        .collect();
    let per_run: Vec<f64> = sorted.iter().map(|r| r.total_messages() as f64).collect();
    Ok(SimReport {
        algorithm: config.algorithm,
        topology: config.topology,
        n: config.n,
        radius: config.radius.as_f64(),
        sr: config.sr().as_f64(),
        runs: sorted.len(),
        seed: config.seed,
        anl: Stat::across(&lifetimes.iter().map(|&l| l as f64).collect::<Vec<_>>()),
        ampr: Stat::per_robot(&per_robot(&|r| r.messages_sent as f64)),
        min_rre,
        arre: Stat::per_robot(&per_robot(&percent)),
        anrr: Stat::per_robot(&per_robot(&|r| f64::from(r.reactions))),
        atdpr: Stat::per_robot(&per_robot(&|r| r.traveled.as_f64())),
        msgs_per_round: Stat::across(&per_round),
        msgs_per_run: Stat::across(&per_run),
        lifetimes,
    })
}

/// Runs and aggregates a configuration.
pub fn simulate<S: Scalar>(config: &SimConfig<S>) -> Result<(SimReport, Vec<RunRecord<S>>)> {
    let runs = run_all(config)?;
    let report = aggregate(config, &runs)?;
    Ok((report, runs))
}

/// Sum of energy drawn from all robots in a run, recomputed from the rounds.
pub fn energy_from_rounds<S: Scalar>(run: &RunRecord<S>, params: &EnergyParams<S>) -> S {
    run.rounds.iter().fold(S::zero(), |acc, r| {
        acc + energy_loss(r.winner_travel, params)
    })
}

/// One single-shot RFTA1 trial on a fresh network.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosestTrial<S> {
    pub seed: u64,
    pub event: Point<S>,
    pub source: NodeId,
    pub closest: NodeId,
    /// Robot that stopped the routing.
    pub routing_found: NodeId,
    pub rfta1_winner: NodeId,
    pub routing_messages: u64,
    pub rfta1_messages: u64,
    pub routing_steps: usize,
    pub edge_count: usize,
}

impl<S> ClosestTrial<S> {
    pub fn routing_hit(&self) -> bool {
        self.routing_found == self.closest
    }

    pub fn rfta1_hit(&self) -> bool {
        self.rfta1_winner == self.closest
    }
}

/// Robot nearest to `p`, lowest id on ties.
pub fn closest_robot<S: Scalar>(t: &Topology<S>, p: Point<S>) -> NodeId {
    (0..t.len())
        .min_by(|&a, &b| {
            t.position(a)
                .distance_squared(p)
                .partial_cmp(&t.position(b).distance_squared(p))
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.cmp(&b))
        })
        .expect("topology has robots")
}

/// Deploys a network, draws one event and collecting robot with the round
/// draw order, and compares plain routing with RFTA1.
pub fn closest_trial<S: Scalar>(config: &SimConfig<S>, seed: u64) -> Result<ClosestTrial<S>> {
    let mut state = SimState::new(config, seed)?;
    let event = Point::new(
        state.rng.gen_range(S::zero()..=S::one()),
        state.rng.gen_range(S::zero()..=S::one()),
    );
    let t = &state.topology;
    let source = state.rng.gen_range(0..t.len());
    let result = allocate(
        Algorithm::Rfta1,
        source,
        event,
        config.sr(),
        t,
        &config.energy,
        config.hand_rule,
    );
    let route = result.routing.as_ref().expect("rfta1 routes");
    Ok(ClosestTrial {
        seed,
        event,
        source,
        closest: closest_robot(t, event),
        routing_found: route.auctioneer,
        rfta1_winner: result.outcome.winner().expect("rfta1 always assigns"),
        routing_messages: route.messages as u64,
        rfta1_messages: result.total_messages,
        routing_steps: route.steps,
        edge_count: t.edge_count(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosestReport {
    pub topology: TopologyKind,
    pub n: usize,
    pub radius: f64,
    pub sr: f64,
    pub trials: usize,
    pub routing_rate: f64,
    pub rfta1_rate: f64,
    pub routing_msgs: Stat,
    pub rfta1_msgs: Stat,
}

/// `config.runs` single-shot trials, one network each.
pub fn closest_experiment<S: Scalar>(
    config: &SimConfig<S>,
) -> Result<(ClosestReport, Vec<ClosestTrial<S>>)> {
    config.validate()?;
    let trials: Vec<ClosestTrial<S>> = (0..config.runs)
        .into_par_iter()
        .map(|i| closest_trial(config, config.run_seed(i)))
        .collect::<Result<_>>()?;
    let k = trials.len() as f64;
    let rate = |f: fn(&ClosestTrial<S>) -> bool| trials.iter().filter(|t| f(t)).count() as f64 / k;
    let msgs = |f: fn(&ClosestTrial<S>) -> u64| {
        Stat::across(&trials.iter().map(|t| f(t) as f64).collect::<Vec<_>>())
    };
    let report = ClosestReport {
        topology: config.topology,
        n: config.n,
        radius: config.radius.as_f64(),
        sr: config.sr().as_f64(),
        trials: trials.len(),
        routing_rate: rate(ClosestTrial::routing_hit),
        rfta1_rate: rate(ClosestTrial::rfta1_hit),
        routing_msgs: msgs(|t| t.routing_messages),
        rfta1_msgs: msgs(|t| t.rfta1_messages),
    };
    Ok((report, trials))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cfg(algorithm: Algorithm, runs: usize) -> SimConfig<f64> {
        let mut c = SimConfig::new(algorithm, 0.25);
        c.runs = runs;
        c
    }

    #[test]
    fn sample_sd_of_two_lifetimes() {
        let s = Stat::across(&[100.0, 300.0]);
        assert_relative_eq!(s.mean, 200.0);
        assert_relative_eq!(s.sd, 141.421356, epsilon = 1e-5);
        assert_relative_eq!(s.ci, 1.96 * 141.421356 / 2f64.sqrt(), epsilon = 1e-4);
    }

    #[test]
    fn identical_runs_have_no_spread() {
        let s = Stat::across(&[7.0; 5]);
        assert_eq!((s.mean, s.sd, s.ci), (7.0, 0.0, 0.0));
        let p = Stat::per_robot(&[vec![1.0, 3.0], vec![1.0, 3.0]]);
        assert_relative_eq!(p.mean, 2.0);
        assert_relative_eq!(p.sd, 2f64.sqrt());
        assert_eq!(p.ci, 0.0);
    }

    #[test]
    fn sr_is_base_times_multiplier() {
        let mut c = cfg(Algorithm::Rfta2, 1);
        for m in 1..=4 {
            c.sr_multiplier = m;
            assert_relative_eq!(c.sr(), 0.1 * f64::from(m));
        }
    }

    #[test]
    fn topology_kind_parses() {
        assert_eq!(
            "random".parse::<TopologyKind>().unwrap(),
            TopologyKind::Random
        );
        assert_eq!(
            "hole".parse::<TopologyKind>().unwrap(),
            TopologyKind::RandomWithHole
        );
        assert!("torus".parse::<TopologyKind>().is_err());
    }

    #[test]
    fn event_on_a_robot_costs_nothing() {
        let t = Topology::from_positions(
            &[
                Point::new(0.2, 0.2),
                Point::new(0.3, 0.2),
                Point::new(0.4, 0.25),
            ],
            0.2,
            100.0,
        );
        let c = cfg(Algorithm::Gfgf2a, 1);
        let mut state = SimState::from_topology(t, 0);
        let rec = play_event(&mut state, &c, Point::new(0.4, 0.25), 0).unwrap();
        assert_eq!(rec.result.outcome, Outcome::Assigned(2));
        assert_eq!(rec.winner_travel, 0.0);
        assert_eq!(rec.energy_consumed, 0.0);
        assert_eq!(state.topology.robots[2].energy, 100.0);
        assert_eq!(state.topology.robots[2].reactions, 1);
    }

    #[test]
    fn winner_moves_and_pays() {
        let t = Topology::from_positions(&[Point::new(0.2, 0.2), Point::new(0.3, 0.2)], 0.2, 100.0);
        let c = cfg(Algorithm::Rfta2, 1);
        let mut state = SimState::from_topology(t, 0);
        let event = Point::new(0.3, 0.3);
        let rec = play_event(&mut state, &c, event, 0).unwrap();
        // routing ends at robot 1, whose only neighbour is the single bidder
        assert_eq!(rec.result.auctioneer, 1);
        assert_eq!(rec.result.outcome, Outcome::Assigned(0));
        assert_relative_eq!(rec.winner_travel, 2f64.sqrt(), epsilon = 1e-12);
        assert_relative_eq!(rec.energy_consumed, 19.3558 * 2f64.sqrt(), epsilon = 1e-3);
        assert_eq!(state.topology.position(0), event);
        assert_relative_eq!(
            state.topology.robots[0].traveled,
            2f64.sqrt(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn dead_round_changes_no_energy() {
        let t = Topology::from_positions(&[Point::new(0.1, 0.1), Point::new(0.2, 0.1)], 0.2, 1.0);
        let mut c = cfg(Algorithm::Rfta2, 1);
        c.energy.initial_energy = 1.0;
        let mut state = SimState::from_topology(t, 0);
        let before: Vec<f64> = state.topology.robots.iter().map(|r| r.energy).collect();
        let rec = play_event(&mut state, &c, Point::new(0.9, 0.9), 0).unwrap();
        assert_eq!(rec.result.outcome, Outcome::NetworkDead);
        assert!(state.dead);
        let after: Vec<f64> = state.topology.robots.iter().map(|r| r.energy).collect();
        assert_eq!(before, after);
        assert!(play_event(&mut state, &c, Point::new(0.1, 0.1), 0).is_err());
    }

    #[test]
    fn tiny_battery_lifetime_matches_hand_computation() {
        let mut c = cfg(Algorithm::Rfta2, 1);
        c.n = 2;
        c.radius = 1.5;
        c.energy.initial_energy = 1.0;
        let per_meter = 6.25 * 0.76 + 9.79 + 3.66 / 0.76;
        for seed in 0..20 {
            let run = run_lifetime(&c, seed).unwrap();
            assert!(
                run.lifetime <= 1
                    || run
                        .rounds
                        .iter()
                        .all(|r| r.winner_travel * per_meter <= 1.0 + 1e-12)
            );
            let first = &run.rounds[0];
            let reach = (0..2)
                .map(|i| {
                    let p = SimState::new(&c, seed).unwrap().topology.position(i);
                    p.distance(first.event) * 10.0 * per_meter
                })
                .fold(f64::INFINITY, f64::min);
            assert_eq!(run.lifetime >= 1, reach <= 1.0, "seed {seed}");
        }
    }

    #[test]
    fn same_seed_same_run() {
        let c = cfg(Algorithm::Rfta2ge, 1);
        assert_eq!(run_lifetime(&c, 3).unwrap(), run_lifetime(&c, 3).unwrap());
    }

    #[test]
    fn algorithms_share_deployment_and_first_event() {
        let a = run_lifetime(&cfg(Algorithm::Rfta2, 1), 11).unwrap();
        let b = run_lifetime(&cfg(Algorithm::Gfgf2a, 1), 11).unwrap();
        assert_eq!(a.rounds[0].event, b.rounds[0].event);
        assert_eq!(a.rounds[0].collecting_robot, b.rounds[0].collecting_robot);
        assert_eq!(a.rounds[0].edge_count, b.rounds[0].edge_count);
    }

    #[test]
    fn ledgers_balance() {
        let c = cfg(Algorithm::Rfta2, 1);
        let run = run_lifetime(&c, 5).unwrap();
        let spent: f64 = run.robots.iter().map(|r| 100.0 - r.energy).sum();
        let by_round: f64 = run.rounds.iter().map(|r| r.energy_consumed).sum();
        assert_relative_eq!(spent, by_round, epsilon = 1e-9);
        assert_relative_eq!(spent, energy_from_rounds(&run, &c.energy), epsilon = 1e-9);
        let reactions: u32 = run.robots.iter().map(|r| r.reactions).sum();
        assert_eq!(reactions as usize, run.lifetime);
        let sent: u64 = run.robots.iter().map(|r| r.messages_sent).sum();
        assert_eq!(sent, run.total_messages());
    }

    #[test]
    fn rfta1_is_not_a_lifetime_algorithm() {
        assert!(matches!(
            run_lifetime(&cfg(Algorithm::Rfta1, 1), 0),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn round_cap_trips() {
        let mut c = cfg(Algorithm::Rfta2, 1);
        c.round_cap = 1;
        assert!(matches!(
            run_lifetime(&c, 0),
            Err(Error::NonTerminating { cap: 1 })
        ));
    }

    #[test]
    fn report_is_independent_of_pool_size() {
        let c = cfg(Algorithm::Rfta2, 6);
        let one = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let four = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap();
        let a = one.install(|| simulate(&c)).unwrap();
        let b = four.install(|| simulate(&c)).unwrap();
        assert_eq!(a, b);
        let seeds: Vec<u64> = a.1.iter().map(|r| r.seed).collect();
        assert_eq!(seeds, (0..6).collect::<Vec<_>>());
    }

    #[test]
    fn ampr_times_n_is_messages_per_run() {
        let c = cfg(Algorithm::Rfta2, 4);
        let (rep, _) = simulate(&c).unwrap();
        assert_relative_eq!(
            rep.ampr.mean * c.n as f64,
            rep.msgs_per_run.mean,
            epsilon = 1e-9
        );
        let mean_life = rep.lifetimes.iter().sum::<usize>() as f64 / 4.0;
        assert_relative_eq!(rep.anl.mean, mean_life);
    }

    #[test]
    fn aggregate_sorts_by_seed() {
        let c = cfg(Algorithm::Gfgf2a, 3);
        let mut runs = run_all(&c).unwrap();
        let forward = aggregate(&c, &runs).unwrap();
        runs.reverse();
        assert_eq!(forward, aggregate(&c, &runs).unwrap());
        assert!(aggregate(&c, &[]).is_err());
    }

    #[test]
    fn closest_robot_matches_scan() {
        let t =
            generate_topology_with(&Deployment::new(30, 0.3), &mut ChaCha8Rng::seed_from_u64(2))
                .unwrap();
        let p = Point::new(0.37, 0.61);
        let best = closest_robot(&t, p);
        for i in 0..t.len() {
            assert!(t.position(best).distance(p) <= t.position(i).distance(p));
        }
    }

    #[test]
    fn rfta1_never_does_worse_than_routing() {
        let mut c = cfg(Algorithm::Rfta1, 40);
        c.sr_multiplier = 1;
        let (rep, trials) = closest_experiment(&c).unwrap();
        assert!(rep.rfta1_rate >= rep.routing_rate);
        for t in &trials {
            assert!(t.rfta1_messages >= t.routing_messages);
            if t.routing_hit() {
                assert!(t.rfta1_hit());
            }
        }
    }

    #[test]
    fn single_precision_runs() {
        let mut c = SimConfig::<f32>::new(Algorithm::Rfta2, 0.25);
        c.runs = 2;
        let (rep, _) = simulate(&c).unwrap();
        assert!(rep.anl.mean > 0.0);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let mut c = cfg(Algorithm::Ksaap { k: 0 }, 1);
        assert!(c.validate().is_err());
        c.algorithm = Algorithm::Rfta2;
        c.runs = 0;
        assert!(c.validate().is_err());
        c.runs = 1;
        c.sr_multiplier = 0;
        assert!(c.validate().is_err());
    }
}
