//! Greedy-face-greedy routing towards an event location with a search-radius
//! stop criterion.
//!
//! Routing starts greedy. At a local minimum it switches to a face walk with a
//! fixed hand rule; the walk changes face when an edge crosses the segment from
//! the face-entry node to the event closer to the event than any earlier
//! crossing, and returns to greedy once it reaches a node closer to the event
//! than the entry node. Greedy hops ignore the search radius; the radius is
//! checked where greedy gets stuck and at every node the face walk reaches.
//! Routing stops at the first such node inside the radius, or when the walk is
//! about to repeat a directed edge.

use std::collections::HashSet;
use std::fmt;

use crate::geometry::{
    in_search_radius, next_face_neighbor, proper_intersection_point, HandRule, Point,
};
use crate::scalar::Scalar;
use crate::topology::{NodeId, Topology};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Greedy,
    Face,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Greedy => "greedy",
            Mode::Face => "face",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StopReason {
    InsideSr,
    LoopDetected,
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StopReason::InsideSr => "inside_sr",
            StopReason::LoopDetected => "loop_detected",
        })
    }
}

/// In-flight routing state.
#[derive(Debug, Clone)]
pub struct RoutingMessage<S> {
    pub event: Point<S>,
    pub sr: S,
    pub mode: Mode,
    pub current: NodeId,
    pub rule: HandRule,
    /// Position of the node where greedy last failed.
    pub face_entry_point: Option<Point<S>>,
    pub face_entry_distance: Option<S>,
    /// Distance to the event of the closest crossing seen in this face phase.
    pub best_crossing_distance: Option<S>,
    pub visited_directed_edges: HashSet<(NodeId, NodeId)>,
    pub hop_trace: Vec<NodeId>,
    /// Mode in which each entry of `hop_trace` was reached.
    pub mode_trace: Vec<Mode>,
    pub steps: usize,
    arrived_from: Option<NodeId>,
    /// Set after crossing onto a new face: the walk restarts along the
    /// crossing edge in the opposite direction.
    pending_reversal: Option<NodeId>,
}

impl<S: Scalar> RoutingMessage<S> {
    pub fn new(source: NodeId, event: Point<S>, sr: S, rule: HandRule) -> Self {
        Self {
            event,
            sr,
            mode: Mode::Greedy,
            current: source,
            rule,
            face_entry_point: None,
            face_entry_distance: None,
            best_crossing_distance: None,
            visited_directed_edges: HashSet::new(),
            hop_trace: vec![source],
            mode_trace: vec![Mode::Greedy],
            steps: 0,
            arrived_from: None,
            pending_reversal: None,
        }
    }

    fn hop(&mut self, next: NodeId) {
        self.arrived_from = Some(self.current);
        self.current = next;
        self.hop_trace.push(next);
        self.mode_trace.push(self.mode);
        self.steps += 1;
    }

    fn enter_face_mode(&mut self, t: &Topology<S>) {
        let here = t.position(self.current);
        let d = here.distance(self.event);
        self.mode = Mode::Face;
        self.face_entry_point = Some(here);
        self.face_entry_distance = Some(d);
        self.best_crossing_distance = Some(d);
        self.arrived_from = None;
        self.pending_reversal = None;
    }

    fn enter_greedy_mode(&mut self) {
        self.mode = Mode::Greedy;
        self.face_entry_point = None;
        self.face_entry_distance = None;
        self.best_crossing_distance = None;
        self.arrived_from = None;
        self.pending_reversal = None;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoutingOutcome {
    pub auctioneer: NodeId,
    pub stop_reason: StopReason,
    pub steps: usize,
    /// One unicast per hop.
    pub messages: usize,
    pub hop_trace: Vec<NodeId>,
    pub mode_trace: Vec<Mode>,
}

/// Neighbour strictly closer to `event` than `current`, nearest first, lower
/// id on ties. `None` marks a local minimum.
pub fn greedy_next<S: Scalar>(current: NodeId, event: Point<S>, t: &Topology<S>) -> Option<NodeId> {
    let mut best_distance = t.position(current).distance_squared(event);
    let mut best = None;
    for &v in t.neighbors(current) {
        let d = t.position(v).distance_squared(event);
        if d < best_distance {
            best_distance = d;
            best = Some(v);
        }
    }
    best
}

/// Result of one face-walk decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceStep {
    Forward {
        next: NodeId,
        face_changed: bool,
    },
    /// The next edge was already traversed in this direction.
    Revisit {
        next: NodeId,
    },
    /// The current node has no neighbours.
    Isolated,
}

/// Chooses and records the next face-walk hop from `msg.current`.
///
/// The traversed directed edge is added to the visited set; a revisit is
/// reported without moving.
pub fn face_next<S: Scalar>(msg: &mut RoutingMessage<S>, t: &Topology<S>) -> FaceStep {
    debug_assert_eq!(msg.mode, Mode::Face);
    let current = msg.current;
    let here = t.position(current);
    let next = match msg.pending_reversal.take() {
        Some(back) => back,
        None => {
            let reference = msg.arrived_from.map_or(msg.event, |prev| t.position(prev));
            let candidates = t.neighbors(current).iter().map(|&v| (v, t.position(v)));
            match next_face_neighbor(here, reference, candidates, msg.rule) {
                Some(v) => v,
                None => return FaceStep::Isolated,
            }
        }
    };
    if msg.visited_directed_edges.contains(&(current, next)) {
        return FaceStep::Revisit { next };
    }
    let mut face_changed = false;
    let entry = msg.face_entry_point.expect("face mode has an entry point");
    let there = t.position(next);
    if let Some(cross) = proper_intersection_point(here, there, entry, msg.event) {
        let d = cross.distance(msg.event);
        let best = msg
            .best_crossing_distance
            .expect("face mode has a best crossing");
        if d < best {
            msg.best_crossing_distance = Some(d);
            msg.pending_reversal = Some(current);
            face_changed = true;
        }
    }
    msg.visited_directed_edges.insert((current, next));
    msg.hop(next);
    FaceStep::Forward { next, face_changed }
}

/// Routes from `source` until a greedy dead end or a face-walk node lies inside
/// the search radius, or the face walk loops. The stopping node becomes the
/// auctioneer.
pub fn gfgf2_route<S: Scalar>(
    source: NodeId,
    event: Point<S>,
    sr: S,
    t: &Topology<S>,
    rule: HandRule,
) -> RoutingOutcome {
    let mut msg = RoutingMessage::new(source, event, sr, rule);
    let stop_reason = loop {
        let current = msg.current;
        let here = t.position(current);
        let inside = in_search_radius(here, event, sr);
        if msg.mode == Mode::Face {
            if inside {
                break StopReason::InsideSr;
            }
            if msg.arrived_from.is_some()
                && here.distance(event) < msg.face_entry_distance.expect("face mode has entry")
            {
                msg.enter_greedy_mode();
            }
        }
        if msg.mode == Mode::Greedy {
            if let Some(next) = greedy_next(current, event, t) {
                msg.hop(next);
                continue;
            }
            if inside {
                break StopReason::InsideSr;
            }
            msg.enter_face_mode(t);
        }
        match face_next(&mut msg, t) {
            FaceStep::Forward { .. } => {}
            FaceStep::Revisit { .. } | FaceStep::Isolated => break StopReason::LoopDetected,
        }
    };
    RoutingOutcome {
        auctioneer: msg.current,
        stop_reason,
        steps: msg.steps,
        messages: msg.steps,
        hop_trace: msg.hop_trace,
        mode_trace: msg.mode_trace,
    }
}
