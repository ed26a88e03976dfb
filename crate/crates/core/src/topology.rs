//! Robot deployment, unit-disk graph construction and Gabriel planarization.

use std::collections::VecDeque;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::scalar::Scalar;

pub type NodeId = usize;

/// Positions closer than this are treated as coincident and separated.
pub const COINCIDENCE_EPS: f64 = 1e-9;

/// Default number of whole-deployment redraws before giving up on connectivity.
pub const DEFAULT_MAX_REGENERATIONS: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct Robot<S> {
    pub id: NodeId,
    pub position: Point<S>,
    /// Remaining movement energy in joules.
    pub energy: S,
    /// Metres travelled while performing tasks.
    pub traveled: S,
    pub reactions: u32,
    pub messages_sent: u64,
}

impl<S: Scalar> Robot<S> {
    pub fn new(id: NodeId, position: Point<S>, energy: S) -> Self {
        Self {
            id,
            position,
            energy,
            traveled: S::zero(),
            reactions: 0,
            messages_sent: 0,
        }
    }
}

/// Circular region left empty at deployment time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hole<S> {
    pub center: Point<S>,
    pub radius: S,
}

impl<S: Scalar> Hole<S> {
    pub fn contains(&self, p: Point<S>) -> bool {
        self.center.distance(p) < self.radius
    }
}

impl<S: Scalar> Default for Hole<S> {
    /// Centred disk of radius 0.25, about a fifth of the field.
    fn default() -> Self {
        Self {
            center: Point::new(S::lit(0.5), S::lit(0.5)),
            radius: S::lit(0.25),
        }
    }
}

/// Parameters for drawing a connected random deployment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Deployment<S> {
    pub n: usize,
    pub radius: S,
    pub hole: Option<Hole<S>>,
    pub initial_energy: S,
    pub max_regenerations: usize,
}

impl<S: Scalar> Deployment<S> {
    pub fn new(n: usize, radius: S) -> Self {
        Self {
            n,
            radius,
            hole: None,
            initial_energy: S::lit(100.0),
            max_regenerations: DEFAULT_MAX_REGENERATIONS,
        }
    }

    pub fn with_hole(mut self, hole: Option<Hole<S>>) -> Self {
        self.hole = hole;
        self
    }

    pub fn with_initial_energy(mut self, energy: S) -> Self {
        self.initial_energy = energy;
        self
    }

    pub fn with_max_regenerations(mut self, cap: usize) -> Self {
        self.max_regenerations = cap;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidConfig(format!(
                "need at least 2 robots, got {}",
                self.n
            )));
        }
        // radii beyond sqrt 2 behave exactly like sqrt 2 in the unit square
        if !self.radius.is_positive_finite() {
            return Err(Error::InvalidConfig(format!(
                "communication radius {} must be positive",
                self.radius
            )));
        }
        if !self.initial_energy.is_positive_finite() {
            return Err(Error::InvalidConfig(
                "initial energy must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// The planarized communication graph over the current robot positions.
#[derive(Debug, Clone, PartialEq)]
pub struct Topology<S> {
    pub robots: Vec<Robot<S>>,
    pub radius: S,
    pub hole: Option<Hole<S>>,
    adjacency: Vec<Vec<NodeId>>,
    connected: bool,
}

impl<S: Scalar> Topology<S> {
    /// Builds the Gabriel graph over the given robots.
    pub fn from_robots(robots: Vec<Robot<S>>, radius: S, hole: Option<Hole<S>>) -> Self {
        let mut topology = Self {
            robots,
            radius,
            hole,
            adjacency: Vec::new(),
            connected: false,
        };
        topology.rebuild();
        topology
    }

    /// Convenience constructor placing robots at `positions` with equal energy.
    pub fn from_positions(positions: &[Point<S>], radius: S, energy: S) -> Self {
        let robots = positions
            .iter()
            .enumerate()
            .map(|(id, &p)| Robot::new(id, p, energy))
            .collect();
        Self::from_robots(robots, radius, None)
    }

    pub fn len(&self) -> usize {
        self.robots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.robots.is_empty()
    }

    pub fn position(&self, id: NodeId) -> Point<S> {
        self.robots[id].position
    }

    pub fn positions(&self) -> Vec<Point<S>> {
        self.robots.iter().map(|r| r.position).collect()
    }

    pub fn neighbors(&self, id: NodeId) -> &[NodeId] {
        &self.adjacency[id]
    }

    pub fn degree(&self, id: NodeId) -> usize {
        self.adjacency[id].len()
    }

    pub fn adjacency(&self) -> &[Vec<NodeId>] {
        &self.adjacency
    }

    /// Number of undirected Gabriel edges.
    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Undirected edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(NodeId, NodeId)> {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
            .collect()
    }

    pub fn average_degree(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        2.0 * self.edge_count() as f64 / self.len() as f64
    }

    /// Connectivity as of the last rebuild.
    pub fn is_connected(&self) -> bool {
        self.connected
    }

    /// Moves `mover` to `destination` and recomputes the graph from scratch.
    /// Returns whether the network is still connected.
    pub fn update_after_move(&mut self, mover: NodeId, destination: Point<S>) -> bool {
        let others: Vec<Point<S>> = self
            .robots
            .iter()
            .filter(|r| r.id != mover)
            .map(|r| r.position)
            .collect();
        self.robots[mover].position = separate_from(destination, &others);
        self.rebuild();
        self.connected
    }

    fn rebuild(&mut self) {
        let positions = self.positions();
        let udg = unit_disk_graph(&positions, self.radius);
        self.adjacency = gabriel_reduce(&positions, &udg);
        self.connected = is_connected(&self.adjacency);
    }
}

/// Draws a connected deployment from `rng`, redrawing every position until
/// the Gabriel graph is connected.
pub fn generate_topology_with<S: Scalar, R: Rng>(
    deployment: &Deployment<S>,
    rng: &mut R,
) -> Result<Topology<S>> {
    deployment.validate()?;
    for _ in 0..deployment.max_regenerations.max(1) {
        let mut positions: Vec<Point<S>> = Vec::with_capacity(deployment.n);
        while positions.len() < deployment.n {
            let candidate = Point::new(
                rng.gen_range(S::zero()..=S::one()),
                rng.gen_range(S::zero()..=S::one()),
            );
            if deployment.hole.is_some_and(|h| h.contains(candidate)) {
                continue;
            }
            let placed = separate_from(candidate, &positions);
            positions.push(placed);
        }
        let robots = positions
            .into_iter()
            .enumerate()
            .map(|(id, p)| Robot::new(id, p, deployment.initial_energy))
            .collect();
        let topology = Topology::from_robots(robots, deployment.radius, deployment.hole);
        if topology.is_connected() {
            return Ok(topology);
        }
    }
    Err(Error::ConnectivityUnreachable {
        attempts: deployment.max_regenerations.max(1),
        radius: deployment.radius.as_f64(),
    })
}

/// Seeded variant of [`generate_topology_with`].
pub fn generate_topology<S: Scalar>(deployment: &Deployment<S>, seed: u64) -> Result<Topology<S>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    generate_topology_with(deployment, &mut rng)
}

fn separate_from<S: Scalar>(mut p: Point<S>, others: &[Point<S>]) -> Point<S> {
    let eps = S::lit(COINCIDENCE_EPS);
    while others.iter().any(|&q| p.distance(q) < eps) {
        p.x = p.x + eps;
    }
    p
}

/// Every pair within `radius` (inclusive), neighbour lists sorted by id.
pub fn unit_disk_graph<S: Scalar>(positions: &[Point<S>], radius: S) -> Vec<Vec<NodeId>> {
    let n = positions.len();
    let r2 = radius * radius;
    let mut adjacency = vec![Vec::new(); n];
    for u in 0..n {
        for v in (u + 1)..n {
            if positions[u].distance_squared(positions[v]) <= r2 {
                adjacency[u].push(v);
                adjacency[v].push(u);
            }
        }
    }
    adjacency
}

/// Keeps a unit-disk edge `(u, v)` iff no other node lies strictly inside the
/// disk with diameter `uv`.
///
/// Any such witness is closer to `u` than `v` is, so only the nearer part of
/// `u`'s neighbour list needs to be scanned.
pub fn gabriel_reduce<S: Scalar>(positions: &[Point<S>], udg: &[Vec<NodeId>]) -> Vec<Vec<NodeId>> {
    let n = positions.len();
    let mut adjacency = vec![Vec::new(); n];
    let mut by_distance: Vec<(S, NodeId)> = Vec::new();
    for u in 0..n {
        let pu = positions[u];
        by_distance.clear();
        by_distance.extend(
            udg[u]
                .iter()
                .map(|&v| (pu.distance_squared(positions[v]), v)),
        );
        by_distance.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
        for (i, &(duv, v)) in by_distance.iter().enumerate() {
            if v < u {
                continue;
            }
            let pv = positions[v];
            let witnessed = by_distance[..i]
                .iter()
                .any(|&(duw, w)| duw < duv && inside_diametral_disk(pu, pv, positions[w]));
            if !witnessed {
                adjacency[u].push(v);
                adjacency[v].push(u);
            }
        }
    }
    for list in &mut adjacency {
        list.sort_unstable();
    }
    adjacency
}

/// Strict interior test: the angle `u w v` is obtuse.
fn inside_diametral_disk<S: Scalar>(u: Point<S>, v: Point<S>, w: Point<S>) -> bool {
    (u.x - w.x) * (v.x - w.x) + (u.y - w.y) * (v.y - w.y) < S::zero()
}

/// Whether a traversal from node 0 reaches every node.
pub fn is_connected(adjacency: &[Vec<NodeId>]) -> bool {
    if adjacency.is_empty() {
        return true;
    }
    let mut seen = vec![false; adjacency.len()];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    let mut reached = 1;
    while let Some(u) = queue.pop_front() {
        for &v in &adjacency[u] {
            if !seen[v] {
                seen[v] = true;
                reached += 1;
                queue.push_back(v);
            }
        }
    }
    reached == adjacency.len()
}
