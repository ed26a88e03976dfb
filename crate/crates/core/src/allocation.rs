//! Auction phase and task assignment.
//!
//! Routing-based allocators (GFGF2A, RFTA1, RFTA2, RFTA2GE) first route the
//! event to an auctioneer near it; the hop-bounded baselines (k-SAAP, BFS)
//! auction directly from the collecting robot. Every message is a unicast and
//! is charged to its sender.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::energy::{can_afford, remaining_after, EnergyParams};
use crate::error::Error;
use crate::geometry::{HandRule, Point};
use crate::routing::{gfgf2_route, RoutingOutcome, StopReason};
use crate::scalar::Scalar;
use crate::topology::{NodeId, Topology};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Gfgf2a,
    Rfta1,
    Rfta2,
    Rfta2ge,
    Ksaap { k: usize },
    Bfs { hopmax: usize },
}

impl Algorithm {
    /// Whether the algorithm starts with a search-radius routing phase.
    pub fn uses_routing(self) -> bool {
        !matches!(self, Algorithm::Ksaap { .. } | Algorithm::Bfs { .. })
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algorithm::Gfgf2a => f.write_str("gfgf2a"),
            Algorithm::Rfta1 => f.write_str("rfta1"),
            Algorithm::Rfta2 => f.write_str("rfta2"),
            Algorithm::Rfta2ge => f.write_str("rfta2ge"),
            Algorithm::Ksaap { k } => write!(f, "ksaap{k}"),
            Algorithm::Bfs { hopmax } => write!(f, "bfs{hopmax}"),
        }
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    /// Accepts `gfgf2a`, `rfta1`, `rfta2`, `rfta2ge`, `ksaap[K]`, `bfs[H]`
    /// (defaults k = 7, hopmax = 7).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase().replace(['-', '_'], "");
        let parse_suffix = |rest: &str, default: usize| -> Result<usize, Error> {
            if rest.is_empty() {
                return Ok(default);
            }
            match rest.parse::<usize>() {
                Ok(v) if v >= 1 => Ok(v),
                _ => Err(Error::InvalidConfig(format!(
                    "bad hop bound in algorithm '{s}'"
                ))),
            }
        };
        match lower.as_str() {
            "gfgf2a" => Ok(Algorithm::Gfgf2a),
            "rfta1" => Ok(Algorithm::Rfta1),
            "rfta2" => Ok(Algorithm::Rfta2),
            "rfta2ge" => Ok(Algorithm::Rfta2ge),
            other => {
                if let Some(rest) = other.strip_prefix("ksaap") {
                    Ok(Algorithm::Ksaap {
                        k: parse_suffix(rest, 7)?,
                    })
                } else if let Some(rest) = other.strip_prefix("bfs") {
                    Ok(Algorithm::Bfs {
                        hopmax: parse_suffix(rest, 7)?,
                    })
                } else {
                    Err(Error::InvalidConfig(format!("unknown algorithm '{s}'")))
                }
            }
        }
    }
}

/// A robot's offer for the task.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bid<S> {
    pub bidder: NodeId,
    /// Remaining energy after the task (energy auctions) or distance to the
    /// event (distance auction).
    pub value: S,
    pub hops_to_auctioneer: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Winner(NodeId),
    NetworkDead,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Assigned(NodeId),
    NetworkDead,
}

impl Outcome {
    pub fn winner(self) -> Option<NodeId> {
        match self {
            Outcome::Assigned(w) => Some(w),
            Outcome::NetworkDead => None,
        }
    }
}

/// Per-sender message counter for one allocation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MessageTally {
    by_sender: BTreeMap<NodeId, u64>,
    total: u64,
}

impl MessageTally {
    pub fn send(&mut self, from: NodeId, count: u64) {
        if count == 0 {
            return;
        }
        *self.by_sender.entry(from).or_default() += count;
        self.total += count;
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn by_sender(&self) -> impl Iterator<Item = (NodeId, u64)> + '_ {
        self.by_sender.iter().map(|(&k, &v)| (k, v))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AllocationResult {
    pub outcome: Outcome,
    /// Robot that ran the auction (the collecting robot for the baselines).
    pub auctioneer: NodeId,
    pub routing_messages: u64,
    pub auction_messages: u64,
    pub total_messages: u64,
    pub routing_steps: usize,
    pub bids: usize,
    pub routing: Option<RoutingOutcome>,
    pub sent: MessageTally,
}

impl AllocationResult {
    pub fn stop_reason(&self) -> Option<StopReason> {
        self.routing.as_ref().map(|r| r.stop_reason)
    }

    fn finish(
        outcome: Outcome,
        auctioneer: NodeId,
        routing: Option<RoutingOutcome>,
        routing_tally: MessageTally,
        auction_tally: MessageTally,
        bids: usize,
    ) -> Self {
        let routing_messages = routing_tally.total();
        let auction_messages = auction_tally.total();
        let mut sent = routing_tally;
        for (from, count) in auction_tally.by_sender() {
            sent.send(from, count);
        }
        Self {
            outcome,
            auctioneer,
            routing_messages,
            auction_messages,
            total_messages: routing_messages + auction_messages,
            routing_steps: routing.as_ref().map_or(0, |r| r.steps),
            bids,
            routing,
            sent,
        }
    }
}

/// Shared inputs of one allocation.
#[derive(Debug, Clone, Copy)]
pub struct TaskContext<'a, S> {
    pub topology: &'a Topology<S>,
    pub event: Point<S>,
    pub params: &'a EnergyParams<S>,
}

impl<S: Scalar> TaskContext<'_, S> {
    pub fn travel_meters(&self, robot: NodeId) -> S {
        self.params
            .to_meters(self.topology.position(robot).distance(self.event))
    }

    pub fn affordable(&self, robot: NodeId) -> bool {
        can_afford(
            self.topology.robots[robot].energy,
            self.travel_meters(robot),
            self.params,
        )
    }

    /// Energy bid of `robot`, if it can afford the task.
    pub fn energy_bid(&self, robot: NodeId, hops: u32) -> Option<Bid<S>> {
        self.affordable(robot).then(|| Bid {
            bidder: robot,
            value: remaining_after(
                self.topology.robots[robot].energy,
                self.travel_meters(robot),
                self.params,
            ),
            hops_to_auctioneer: hops,
        })
    }
}

/// Result of an auction phase on its own.
#[derive(Debug, Clone, PartialEq)]
pub struct Auction {
    pub auctioneer: NodeId,
    pub outcome: Outcome,
    pub sent: MessageTally,
    pub bids: usize,
}

impl Auction {
    fn after(self, route: RoutingOutcome) -> AllocationResult {
        let routing = routing_tally(&route);
        AllocationResult::finish(
            self.outcome,
            self.auctioneer,
            Some(route),
            routing,
            self.sent,
            self.bids,
        )
    }
}

fn routing_tally(route: &RoutingOutcome) -> MessageTally {
    let mut tally = MessageTally::default();
    for w in route.hop_trace.windows(2) {
        tally.send(w[0], 1);
    }
    tally
}

/// Highest bid value; ties go to the lower id.
fn best_bid<S: Scalar>(bids: &[Bid<S>]) -> Option<Bid<S>> {
    bids.iter().copied().reduce(|best, b| {
        if b.value > best.value || (b.value == best.value && b.bidder < best.bidder) {
            b
        } else {
            best
        }
    })
}

/// Auctioneer's four-way decision over energy bids.
///
/// Several bids: most remaining energy wins. One bid: that bidder. No bids:
/// the auctioneer takes the task if it can afford it, otherwise the network
/// is dead.
pub fn rfta2_decide<S: Scalar>(
    auctioneer: NodeId,
    bids: &[Bid<S>],
    auctioneer_can_afford: bool,
) -> Decision {
    match bids {
        [] if auctioneer_can_afford => Decision::Winner(auctioneer),
        [] => Decision::NetworkDead,
        [only] => Decision::Winner(only.bidder),
        many => Decision::Winner(best_bid(many).expect("non-empty").bidder),
    }
}

/// Routing followed by a one-hop distance auction; no energy is involved.
pub fn rfta1_allocate<S: Scalar>(
    source: NodeId,
    event: Point<S>,
    sr: S,
    t: &Topology<S>,
    rule: HandRule,
) -> AllocationResult {
    let route = gfgf2_route(source, event, sr, t, rule);
    rfta1_auction(route.auctioneer, event, t).after(route)
}

/// Distance auction: neighbours strictly closer to the event than the
/// auctioneer bid, the closest robot wins.
pub fn rfta1_auction<S: Scalar>(auctioneer: NodeId, event: Point<S>, t: &Topology<S>) -> Auction {
    let mut tally = MessageTally::default();
    tally.send(auctioneer, t.degree(auctioneer) as u64);

    let own = t.position(auctioneer).distance(event);
    let mut winner = (own, auctioneer);
    let mut bids = 0;
    for &v in t.neighbors(auctioneer) {
        let d = t.position(v).distance(event);
        if d < own {
            tally.send(v, 1);
            bids += 1;
            if d < winner.0 || (d == winner.0 && v < winner.1) {
                winner = (d, v);
            }
        }
    }
    if winner.1 != auctioneer {
        tally.send(auctioneer, 1);
    }
    Auction {
        auctioneer,
        outcome: Outcome::Assigned(winner.1),
        sent: tally,
        bids,
    }
}

/// Routing followed by a one-hop remaining-energy auction.
pub fn rfta2_allocate<S: Scalar>(
    source: NodeId,
    event: Point<S>,
    sr: S,
    t: &Topology<S>,
    params: &EnergyParams<S>,
    rule: HandRule,
) -> AllocationResult {
    let route = gfgf2_route(source, event, sr, t, rule);
    rfta2_auction(route.auctioneer, event, t, params).after(route)
}

/// One-hop remaining-energy auction run by `auctioneer`.
pub fn rfta2_auction<S: Scalar>(
    auctioneer: NodeId,
    event: Point<S>,
    t: &Topology<S>,
    params: &EnergyParams<S>,
) -> Auction {
    let ctx = TaskContext {
        topology: t,
        event,
        params,
    };
    let mut tally = MessageTally::default();
    tally.send(auctioneer, t.degree(auctioneer) as u64);

    let bids: Vec<Bid<S>> = t
        .neighbors(auctioneer)
        .iter()
        .filter_map(|&v| ctx.energy_bid(v, 1))
        .collect();
    for b in &bids {
        tally.send(b.bidder, 1);
    }
    let outcome = match rfta2_decide(auctioneer, &bids, ctx.affordable(auctioneer)) {
        Decision::Winner(w) => {
            if w != auctioneer {
                tally.send(auctioneer, 1);
            }
            Outcome::Assigned(w)
        }
        Decision::NetworkDead => Outcome::NetworkDead,
    };
    Auction {
        auctioneer,
        outcome,
        sent: tally,
        bids: bids.len(),
    }
}

/// RFTA2 with the auction extended to the auctioneer's two-hop neighbourhood.
///
/// Every one-hop neighbour forwards the call to all of its neighbours except
/// the auctioneer. A two-hop robot reached through several forwarders bids
/// once, relayed by its lowest-id forwarder (two messages per such bid).
pub fn rfta2ge_allocate<S: Scalar>(
    source: NodeId,
    event: Point<S>,
    sr: S,
    t: &Topology<S>,
    params: &EnergyParams<S>,
    rule: HandRule,
) -> AllocationResult {
    let route = gfgf2_route(source, event, sr, t, rule);
    rfta2ge_auction(route.auctioneer, event, t, params).after(route)
}

/// Two-hop remaining-energy auction run by `auctioneer`.
pub fn rfta2ge_auction<S: Scalar>(
    auctioneer: NodeId,
    event: Point<S>,
    t: &Topology<S>,
    params: &EnergyParams<S>,
) -> Auction {
    let ctx = TaskContext {
        topology: t,
        event,
        params,
    };
    let one_hop = t.neighbors(auctioneer);
    let mut tally = MessageTally::default();
    tally.send(auctioneer, one_hop.len() as u64);

    let mut bids: Vec<Bid<S>> = one_hop
        .iter()
        .filter_map(|&v| ctx.energy_bid(v, 1))
        .collect();
    for b in &bids {
        tally.send(b.bidder, 1);
    }

    // neighbour lists are sorted, so the first forwarder seen is the lowest id
    let mut relay: BTreeMap<NodeId, NodeId> = BTreeMap::new();
    for &f in one_hop {
        for &w in t.neighbors(f) {
            if w == auctioneer {
                continue;
            }
            tally.send(f, 1);
            if one_hop.binary_search(&w).is_err() {
                relay.entry(w).or_insert(f);
            }
        }
    }
    for (&w, &f) in &relay {
        if let Some(bid) = ctx.energy_bid(w, 2) {
            tally.send(w, 1);
            tally.send(f, 1);
            bids.push(bid);
        }
    }

    let outcome = match rfta2_decide(auctioneer, &bids, ctx.affordable(auctioneer)) {
        Decision::Winner(w) => {
            if w != auctioneer {
                tally.send(auctioneer, 1);
                if let Some(&f) = relay.get(&w) {
                    tally.send(f, 1);
                }
            }
            Outcome::Assigned(w)
        }
        Decision::NetworkDead => Outcome::NetworkDead,
    };
    Auction {
        auctioneer,
        outcome,
        sent: tally,
        bids: bids.len(),
    }
}

/// Routing only: the robot that stops the routing takes the task if it can.
pub fn gfgf2a_allocate<S: Scalar>(
    source: NodeId,
    event: Point<S>,
    sr: S,
    t: &Topology<S>,
    params: &EnergyParams<S>,
    rule: HandRule,
) -> AllocationResult {
    let ctx = TaskContext {
        topology: t,
        event,
        params,
    };
    let route = gfgf2_route(source, event, sr, t, rule);
    let found = route.auctioneer;
    let outcome = if ctx.affordable(found) {
        Outcome::Assigned(found)
    } else {
        Outcome::NetworkDead
    };
    let routing = routing_tally(&route);
    AllocationResult::finish(
        outcome,
        found,
        Some(route),
        routing,
        MessageTally::default(),
        0,
    )
}

/// Breadth-first tree rooted at `root`, cut at `depth` hops. Parents are the
/// first discoverer in FIFO order with ascending neighbour ids.
#[derive(Debug, Clone)]
struct HopTree {
    /// Nodes in discovery order; `order[0]` is the root.
    order: Vec<NodeId>,
    parent: BTreeMap<NodeId, NodeId>,
    depth: BTreeMap<NodeId, usize>,
}

impl HopTree {
    fn build<S: Scalar>(t: &Topology<S>, root: NodeId, max_depth: usize) -> Self {
        let mut order = vec![root];
        let mut parent = BTreeMap::new();
        let mut depth = BTreeMap::from([(root, 0)]);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let du = depth[&u];
            if du == max_depth {
                continue;
            }
            for &v in t.neighbors(u) {
                if let std::collections::btree_map::Entry::Vacant(e) = depth.entry(v) {
                    e.insert(du + 1);
                    parent.insert(v, u);
                    order.push(v);
                    queue.push_back(v);
                }
            }
        }
        Self {
            order,
            parent,
            depth,
        }
    }

    /// Senders along the tree path from the root down to `node`.
    fn path_senders(&self, node: NodeId) -> Vec<NodeId> {
        let mut senders = Vec::new();
        let mut v = node;
        while let Some(&p) = self.parent.get(&v) {
            senders.push(p);
            v = p;
        }
        senders
    }

    /// Per-node best bid over its subtree, filled leaves-first.
    fn aggregate<S: Scalar>(&self, own: &BTreeMap<NodeId, Bid<S>>) -> BTreeMap<NodeId, Bid<S>> {
        let mut best: BTreeMap<NodeId, Bid<S>> = BTreeMap::new();
        for &v in self.order.iter().rev() {
            let mut candidate = best.get(&v).copied();
            if let Some(&b) = own.get(&v) {
                candidate = best_bid(
                    &[candidate, Some(b)]
                        .into_iter()
                        .flatten()
                        .collect::<Vec<_>>(),
                );
            }
            if let Some(c) = candidate {
                best.insert(v, c);
                if let Some(&p) = self.parent.get(&v) {
                    let merged = best_bid(
                        &[best.get(&p).copied(), Some(c)]
                            .into_iter()
                            .flatten()
                            .collect::<Vec<_>>(),
                    );
                    best.insert(p, merged.expect("non-empty"));
                }
            }
        }
        best
    }
}

/// Hop-bounded auction aggregation run by the collecting robot.
///
/// The call floods to every robot within `k` hops: each reached robot closer
/// than `k` hops forwards once to all neighbours except its tree parent.
/// Affordable robots bid; relays merge their subtree's best bid and send one
/// message to their parent. The winner is told along the tree path. The
/// decision follows [`rfta2_decide`] with the collecting robot as auctioneer.
pub fn ksaap_allocate<S: Scalar>(
    source: NodeId,
    event: Point<S>,
    k: usize,
    t: &Topology<S>,
    params: &EnergyParams<S>,
) -> AllocationResult {
    let ctx = TaskContext {
        topology: t,
        event,
        params,
    };
    let tree = HopTree::build(t, source, k);
    let mut tally = MessageTally::default();
    for &v in &tree.order {
        if tree.depth[&v] < k {
            let excluded = usize::from(tree.parent.contains_key(&v));
            tally.send(v, (t.degree(v) - excluded) as u64);
        }
    }
    let own: BTreeMap<NodeId, Bid<S>> = tree.order[1..]
        .iter()
        .filter_map(|&v| ctx.energy_bid(v, tree.depth[&v] as u32).map(|b| (v, b)))
        .collect();
    let subtree_best = tree.aggregate(&own);
    for &v in &tree.order[1..] {
        if subtree_best.contains_key(&v) {
            tally.send(v, 1);
        }
    }
    let bids: Vec<Bid<S>> = own.values().copied().collect();
    let outcome = match rfta2_decide(source, &bids, ctx.affordable(source)) {
        Decision::Winner(w) => {
            for s in tree.path_senders(w) {
                tally.send(s, 1);
            }
            Outcome::Assigned(w)
        }
        Decision::NetworkDead => Outcome::NetworkDead,
    };
    AllocationResult::finish(
        outcome,
        source,
        None,
        MessageTally::default(),
        tally,
        bids.len(),
    )
}

/// Depth-bounded breadth-first tree auction rooted at the collecting robot.
///
/// One message per tree edge builds the tree and one per tree edge carries
/// the aggregated bids back; every tree robot, the root included, competes
/// on remaining energy. The assignment travels down the tree path.
pub fn bfs_allocate<S: Scalar>(
    source: NodeId,
    event: Point<S>,
    hopmax: usize,
    t: &Topology<S>,
    params: &EnergyParams<S>,
) -> AllocationResult {
    let ctx = TaskContext {
        topology: t,
        event,
        params,
    };
    let tree = HopTree::build(t, source, hopmax);
    let mut tally = MessageTally::default();
    for (&child, &parent) in &tree.parent {
        tally.send(parent, 1);
        tally.send(child, 1);
    }
    let bids: Vec<Bid<S>> = tree
        .order
        .iter()
        .filter_map(|&v| ctx.energy_bid(v, tree.depth[&v] as u32))
        .collect();
    let outcome = match best_bid(&bids) {
        Some(b) => {
            for s in tree.path_senders(b.bidder) {
                tally.send(s, 1);
            }
            Outcome::Assigned(b.bidder)
        }
        None => Outcome::NetworkDead,
    };
    AllocationResult::finish(
        outcome,
        source,
        None,
        MessageTally::default(),
        tally,
        bids.len(),
    )
}

/// Runs `algorithm` for one event.
pub fn allocate<S: Scalar>(
    algorithm: Algorithm,
    source: NodeId,
    event: Point<S>,
    sr: S,
    t: &Topology<S>,
    params: &EnergyParams<S>,
    rule: HandRule,
) -> AllocationResult {
    match algorithm {
        Algorithm::Gfgf2a => gfgf2a_allocate(source, event, sr, t, params, rule),
        Algorithm::Rfta1 => rfta1_allocate(source, event, sr, t, rule),
        Algorithm::Rfta2 => rfta2_allocate(source, event, sr, t, params, rule),
        Algorithm::Rfta2ge => rfta2ge_allocate(source, event, sr, t, params, rule),
        Algorithm::Ksaap { k } => ksaap_allocate(source, event, k, t, params),
        Algorithm::Bfs { hopmax } => bfs_allocate(source, event, hopmax, t, params),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{generate_topology, Deployment, Robot};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type P = Point<f64>;

    fn p(x: f64, y: f64) -> P {
        Point::new(x, y)
    }

    fn params() -> EnergyParams<f64> {
        EnergyParams::default()
    }

    /// Auctioneer 0 at the centre with leaves 1, 2, 3 at 120 degree spacing.
    fn star(extra: &[P]) -> Vec<P> {
        let mut pos = vec![p(0.5, 0.5)];
        for k in 0..3 {
            let a = std::f64::consts::TAU * k as f64 / 3.0;
            pos.push(p(0.5 + 0.1 * a.cos(), 0.5 + 0.1 * a.sin()));
        }
        pos.extend_from_slice(extra);
        pos
    }

    fn with_energies(pos: &[P], energies: &[f64], r: f64) -> Topology<f64> {
        let robots = pos
            .iter()
            .zip(energies)
            .enumerate()
            .map(|(id, (&q, &e))| Robot::new(id, q, e))
            .collect();
        Topology::from_robots(robots, r, None)
    }

    fn bid(bidder: NodeId, value: f64) -> Bid<f64> {
        Bid {
            bidder,
            value,
            hops_to_auctioneer: 1,
        }
    }

    fn random_state(seed: u64) -> Topology<f64> {
        let mut t = generate_topology(&Deployment::<f64>::new(60, 0.25), seed).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabc);
        for r in &mut t.robots {
            r.energy = rng.gen_range(0.0..100.0);
        }
        t
    }

    fn assert_ledger(res: &AllocationResult) {
        assert_eq!(
            res.total_messages,
            res.routing_messages + res.auction_messages
        );
        assert_eq!(
            res.sent.by_sender().map(|(_, c)| c).sum::<u64>(),
            res.total_messages
        );
    }

    #[test]
    fn decide_four_cases() {
        assert_eq!(
            rfta2_decide(0, &[bid(2, 40.0), bid(5, 55.0)], true),
            Decision::Winner(5)
        );
        assert_eq!(
            rfta2_decide(0, &[bid(2, 40.0), bid(5, 55.0)], false),
            Decision::Winner(5)
        );
        assert_eq!(rfta2_decide(0, &[bid(3, 1.0)], true), Decision::Winner(3));
        assert_eq!(rfta2_decide(0, &[bid(3, 1.0)], false), Decision::Winner(3));
        assert_eq!(rfta2_decide::<f64>(0, &[], true), Decision::Winner(0));
        assert_eq!(rfta2_decide::<f64>(0, &[], false), Decision::NetworkDead);
        // equal bids go to the lower id
        assert_eq!(
            rfta2_decide(0, &[bid(7, 9.0), bid(4, 9.0)], true),
            Decision::Winner(4)
        );
    }

    #[test]
    fn star_is_a_star() {
        let t = with_energies(&star(&[]), &[100.0; 4], 0.15);
        assert_eq!(t.edges(), vec![(0, 1), (0, 2), (0, 3)]);
    }

    #[test]
    fn rfta1_without_closer_neighbours_keeps_auctioneer() {
        let t = with_energies(&star(&[]), &[100.0; 4], 0.15);
        let res = rfta1_allocate(0, p(0.49, 0.5), 0.1, &t, HandRule::Right);
        assert_eq!(res.outcome, Outcome::Assigned(0));
        assert_eq!(res.routing_messages, 0);
        assert_eq!(res.auction_messages, 3);
        assert_eq!(res.bids, 0);
        assert_ledger(&res);
    }

    #[test]
    fn rfta1_closer_neighbour_wins() {
        let t = with_energies(&star(&[]), &[100.0; 4], 0.15);
        let auction = rfta1_auction(0, p(0.58, 0.5), &t);
        assert_eq!(auction.outcome, Outcome::Assigned(1));
        assert_eq!(auction.sent.total(), 3 + 1 + 1);
        assert_eq!(auction.bids, 1);
    }

    #[test]
    fn rfta1_greedy_reaches_the_dead_end_first() {
        // leaf 1 is closer than the centre, so routing goes there and nobody outbids it
        let t = with_energies(&star(&[]), &[100.0; 4], 0.15);
        let res = rfta1_allocate(0, p(0.58, 0.5), 0.1, &t, HandRule::Right);
        assert_eq!(res.auctioneer, 1);
        assert_eq!(res.outcome, Outcome::Assigned(1));
        assert_eq!((res.routing_messages, res.auction_messages), (1, 1));
        assert_ledger(&res);
    }

    #[test]
    fn rfta2_single_affordable_neighbour_wins() {
        let t = with_energies(&star(&[]), &[100.0, 0.0, 100.0, 0.0], 0.15);
        let res = rfta2_allocate(0, p(0.5, 0.52), 0.1, &t, &params(), HandRule::Right);
        assert_eq!(res.outcome, Outcome::Assigned(2));
        assert_eq!(res.auction_messages, 5);
        assert_eq!(
            res.sent.by_sender().collect::<Vec<_>>(),
            vec![(0, 4), (2, 1)]
        );
        assert_ledger(&res);
    }

    #[test]
    fn rfta2_exhausted_neighbours_leave_task_to_auctioneer() {
        let t = with_energies(&star(&[]), &[100.0, 0.0, 0.0, 0.0], 0.15);
        let res = rfta2_allocate(0, p(0.5, 0.52), 0.1, &t, &params(), HandRule::Right);
        assert_eq!(res.outcome, Outcome::Assigned(0));
        assert_eq!(res.auction_messages, 3);

        let dead = with_energies(&star(&[]), &[1.0, 0.0, 0.0, 0.0], 0.15);
        let res = rfta2_allocate(0, p(0.5, 0.52), 0.1, &dead, &params(), HandRule::Right);
        assert_eq!(res.outcome, Outcome::NetworkDead);
        assert_eq!(res.auction_messages, 3);
    }

    #[test]
    fn rfta2_on_fresh_network_picks_closest_bidder() {
        for seed in 0..20 {
            let t = generate_topology(&Deployment::<f64>::new(80, 0.25), seed).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..10 {
                let event = p(rng.gen(), rng.gen());
                let source = rng.gen_range(0..t.len());
                let res = rfta2_allocate(source, event, 0.2, &t, &params(), HandRule::Right);
                let a = res.auctioneer;
                let winner = res.outcome.winner().unwrap();
                let closest = t
                    .neighbors(a)
                    .iter()
                    .copied()
                    .filter(|&v| {
                        t.position(v).distance(event) * 10.0 * params().loss_per_meter() <= 100.0
                    })
                    .min_by(|&x, &y| {
                        let dx = t.position(x).distance(event);
                        let dy = t.position(y).distance(event);
                        dx.partial_cmp(&dy).unwrap().then(x.cmp(&y))
                    });
                assert_eq!(winner, closest.unwrap_or(a));
                assert_ledger(&res);
            }
        }
    }

    #[test]
    fn rfta2ge_two_hop_bid_is_relayed() {
        // pendant node 4 hangs off leaf 1 and is the only robot with energy
        let pos = star(&[p(0.7, 0.5)]);
        let t = with_energies(&pos, &[0.0, 0.0, 0.0, 0.0, 100.0], 0.15);
        assert_eq!(t.neighbors(4), &[1]);
        let res = rfta2ge_allocate(0, p(0.5, 0.52), 0.1, &t, &params(), HandRule::Right);
        assert_eq!(res.outcome, Outcome::Assigned(4));
        // 3 calls + 1 forward + 2 for the relayed bid + 2 for the relayed award
        assert_eq!(res.auction_messages, 8);
        assert_eq!(
            res.sent.by_sender().collect::<Vec<_>>(),
            vec![(0, 4), (1, 3), (4, 1)]
        );
        let plain = rfta2_allocate(0, p(0.5, 0.52), 0.1, &t, &params(), HandRule::Right);
        assert_eq!(plain.outcome, Outcome::NetworkDead);
    }

    #[test]
    fn rfta2ge_without_second_ring_matches_rfta2() {
        // acute triangle: both neighbours of the auctioneer see each other
        let pos = [p(0.5, 0.5), p(0.6, 0.52), p(0.55, 0.6)];
        let t = with_energies(&pos, &[100.0, 60.0, 80.0], 0.2);
        assert_eq!(t.edge_count(), 3);
        let event = p(0.52, 0.5);
        let ge = rfta2ge_allocate(0, event, 0.1, &t, &params(), HandRule::Right);
        let plain = rfta2_allocate(0, event, 0.1, &t, &params(), HandRule::Right);
        assert_eq!(ge.outcome, plain.outcome);
        assert_eq!(ge.auction_messages, plain.auction_messages + 2);
    }

    #[test]
    fn rfta2ge_pool_dominates_rfta2() {
        let ctx_remaining = |t: &Topology<f64>, event: P, w: NodeId| {
            remaining_after(
                t.robots[w].energy,
                t.position(w).distance(event) * 10.0,
                &params(),
            )
        };
        for seed in 0..20 {
            let t = random_state(seed);
            let mut rng = ChaCha8Rng::seed_from_u64(seed + 100);
            for _ in 0..10 {
                let event = p(rng.gen(), rng.gen());
                let source = rng.gen_range(0..t.len());
                let a = rfta2_allocate(source, event, 0.2, &t, &params(), HandRule::Right);
                let b = rfta2ge_allocate(source, event, 0.2, &t, &params(), HandRule::Right);
                assert_eq!(a.auctioneer, b.auctioneer);
                assert!(b.bids >= a.bids);
                assert_ledger(&b);
                if let (Some(wa), Some(wb)) = (a.outcome.winner(), b.outcome.winner()) {
                    if a.bids > 0 {
                        assert!(ctx_remaining(&t, event, wb) >= ctx_remaining(&t, event, wa));
                    }
                } else if a.outcome.winner().is_some() {
                    panic!("larger pool cannot kill the network");
                }
            }
        }
    }

    #[test]
    fn gfgf2a_assigns_found_robot_or_dies() {
        let t = with_energies(&star(&[]), &[100.0; 4], 0.15);
        let res = gfgf2a_allocate(1, p(0.5, 0.49), 0.05, &t, &params(), HandRule::Right);
        assert_eq!(res.outcome, Outcome::Assigned(0));
        assert_eq!(res.total_messages, 1);
        assert_eq!(res.auction_messages, 0);

        let t = with_energies(&star(&[]), &[1.0, 100.0, 100.0, 100.0], 0.15);
        let res = gfgf2a_allocate(1, p(0.5, 0.45), 0.06, &t, &params(), HandRule::Right);
        assert_eq!(res.auctioneer, 0);
        assert_eq!(res.outcome, Outcome::NetworkDead);
    }

    #[test]
    fn gfgf2a_on_fresh_network_takes_routing_result() {
        let t = generate_topology(&Deployment::<f64>::new(100, 0.2), 8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let event = p(rng.gen(), rng.gen());
            let source = rng.gen_range(0..t.len());
            let res = gfgf2a_allocate(source, event, 0.2, &t, &params(), HandRule::Right);
            let route = gfgf2_route(source, event, 0.2, &t, HandRule::Right);
            if res.outcome != Outcome::NetworkDead {
                assert_eq!(res.outcome, Outcome::Assigned(route.auctioneer));
            }
            assert_eq!(res.total_messages, route.steps as u64);
        }
    }

    #[test]
    fn ksaap_with_one_hop_equals_rfta2_auction() {
        for seed in 0..20 {
            let t = random_state(seed);
            let mut rng = ChaCha8Rng::seed_from_u64(seed + 7);
            for _ in 0..10 {
                let event = p(rng.gen(), rng.gen());
                let source = rng.gen_range(0..t.len());
                let k = ksaap_allocate(source, event, 1, &t, &params());
                let r = rfta2_auction(source, event, &t, &params());
                assert_eq!(k.outcome, r.outcome);
                assert_eq!(k.auction_messages, r.sent.total());
                assert_eq!(k.bids, r.bids);
                assert_ledger(&k);
            }
        }
    }

    /// Ten robots on a line 0.1 apart; only `rich` has energy.
    fn chain(rich: NodeId) -> Topology<f64> {
        let pos: Vec<P> = (0..10).map(|i| p(0.05 + 0.1 * i as f64, 0.5)).collect();
        let energies: Vec<f64> = (0..10)
            .map(|i| if i == rich { 100.0 } else { 0.0 })
            .collect();
        with_energies(&pos, &energies, 0.12)
    }

    #[test]
    fn ksaap_cannot_see_past_k_hops() {
        let t = chain(8);
        let event = p(0.8, 0.55);
        assert_eq!(
            ksaap_allocate(0, event, 7, &t, &params()).outcome,
            Outcome::NetworkDead
        );
        let reach = ksaap_allocate(0, event, 8, &t, &params());
        assert_eq!(reach.outcome, Outcome::Assigned(8));
        // 8 calls down the line, 8 aggregated replies, 8 award hops
        assert_eq!(reach.auction_messages, 24);
    }

    #[test]
    fn bfs_with_full_depth_finds_global_best() {
        for seed in 0..10 {
            let t = random_state(seed);
            let mut rng = ChaCha8Rng::seed_from_u64(seed + 3);
            let event = p(rng.gen(), rng.gen());
            let res = bfs_allocate(0, event, t.len(), &t, &params());
            let oracle = (0..t.len())
                .map(|v| {
                    (
                        remaining_after(
                            t.robots[v].energy,
                            t.position(v).distance(event) * 10.0,
                            &params(),
                        ),
                        v,
                    )
                })
                .filter(|&(rem, _)| rem >= 0.0)
                .max_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(b.1.cmp(&a.1)))
                .map(|(_, v)| v);
            assert_eq!(res.outcome.winner(), oracle);
            assert_ledger(&res);
        }
    }

    #[test]
    fn bfs_with_one_hop_uses_source_and_neighbours() {
        for seed in 0..10 {
            let t = random_state(seed);
            let event = p(0.3, 0.7);
            let source = 5;
            let res = bfs_allocate(source, event, 1, &t, &params());
            let mut pool = vec![source];
            pool.extend_from_slice(t.neighbors(source));
            let oracle = pool
                .into_iter()
                .map(|v| {
                    (
                        remaining_after(
                            t.robots[v].energy,
                            t.position(v).distance(event) * 10.0,
                            &params(),
                        ),
                        v,
                    )
                })
                .filter(|&(rem, _)| rem >= 0.0)
                .max_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(b.1.cmp(&a.1)))
                .map(|(_, v)| v);
            assert_eq!(res.outcome.winner(), oracle);
            let deg = t.degree(source) as u64;
            let award = u64::from(res.outcome.winner().is_some_and(|w| w != source));
            assert_eq!(res.auction_messages, 2 * deg + award);
        }
    }

    #[test]
    fn winner_rescaling_energy_units_is_stable() {
        // expressing energies in another unit scales both budgets and costs
        for seed in 0..10 {
            let t = random_state(seed);
            let mut scaled = t.clone();
            for r in &mut scaled.robots {
                r.energy *= 3.0;
            }
            let p1 = params();
            let p3 = EnergyParams {
                coordinate_scale: 30.0,
                initial_energy: 300.0,
                ..p1
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..10 {
                let event = p(rng.gen(), rng.gen());
                let source = rng.gen_range(0..t.len());
                for alg in [
                    Algorithm::Rfta2,
                    Algorithm::Rfta2ge,
                    Algorithm::Ksaap { k: 3 },
                    Algorithm::Bfs { hopmax: 3 },
                ] {
                    let a = allocate(alg, source, event, 0.2, &t, &p1, HandRule::Right);
                    let b = allocate(alg, source, event, 0.2, &scaled, &p3, HandRule::Right);
                    assert_eq!(a.outcome, b.outcome, "{alg}");
                }
            }
        }
    }

    #[test]
    fn every_assigned_winner_can_afford() {
        for seed in 0..10 {
            let t = random_state(seed);
            let mut rng = ChaCha8Rng::seed_from_u64(seed + 50);
            for _ in 0..20 {
                let event = p(rng.gen(), rng.gen());
                let source = rng.gen_range(0..t.len());
                for alg in [
                    Algorithm::Gfgf2a,
                    Algorithm::Rfta2,
                    Algorithm::Rfta2ge,
                    Algorithm::Ksaap { k: 7 },
                    Algorithm::Bfs { hopmax: 7 },
                ] {
                    let res = allocate(alg, source, event, 0.2, &t, &params(), HandRule::Right);
                    assert_ledger(&res);
                    if let Some(w) = res.outcome.winner() {
                        let ctx = TaskContext {
                            topology: &t,
                            event,
                            params: &params(),
                        };
                        assert!(ctx.affordable(w), "{alg}");
                    }
                }
            }
        }
    }

    #[test]
    fn algorithm_names_round_trip() {
        for alg in [
            Algorithm::Gfgf2a,
            Algorithm::Rfta1,
            Algorithm::Rfta2,
            Algorithm::Rfta2ge,
            Algorithm::Ksaap { k: 7 },
            Algorithm::Bfs { hopmax: 10 },
        ] {
            assert_eq!(alg.to_string().parse::<Algorithm>().unwrap(), alg);
        }
        assert_eq!(
            "k-SAAP".parse::<Algorithm>().unwrap(),
            Algorithm::Ksaap { k: 7 }
        );
        assert_eq!(
            "BFS".parse::<Algorithm>().unwrap(),
            Algorithm::Bfs { hopmax: 7 }
        );
        assert!("auction".parse::<Algorithm>().is_err());
        assert!("bfs0".parse::<Algorithm>().is_err());
    }
}
