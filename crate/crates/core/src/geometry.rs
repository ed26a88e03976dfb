//! Planar primitives used by topology construction and face traversal.

use std::cmp::Ordering;

use crate::scalar::Scalar;

/// Guard on orientation determinants; values within it count as collinear.
pub const ORIENTATION_EPS: f64 = 1e-12;

/// A position in the unit square.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point<S> {
    pub x: S,
    pub y: S,
}

impl<S: Scalar> Point<S> {
    pub fn new(x: S, y: S) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: Self) -> S {
        distance(self, other)
    }

    pub fn distance_squared(self, other: Self) -> S {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn midpoint(self, other: Self) -> Self {
        let half = S::lit(0.5);
        Self::new((self.x + other.x) * half, (self.y + other.y) * half)
    }

    pub fn in_unit_square(self) -> bool {
        self.x >= S::zero() && self.x <= S::one() && self.y >= S::zero() && self.y <= S::one()
    }
}

/// Euclidean distance.
pub fn distance<S: Scalar>(a: Point<S>, b: Point<S>) -> S {
    (a.x - b.x).hypot(a.y - b.y)
}

/// Closed-disk membership test around an event.
pub fn in_search_radius<S: Scalar>(p: Point<S>, event: Point<S>, sr: S) -> bool {
    distance(p, event) <= sr
}

/// Sign of the turn a -> b -> c: positive for counter-clockwise, negative for
/// clockwise, zero when |det| is within [`ORIENTATION_EPS`].
pub fn orientation<S: Scalar>(a: Point<S>, b: Point<S>, c: Point<S>) -> i8 {
    let det = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    if det > S::lit(ORIENTATION_EPS) {
        1
    } else if det < -S::lit(ORIENTATION_EPS) {
        -1
    } else {
        0
    }
}

/// True iff the two segments cross at a single interior point of both.
/// Shared endpoints, touching and collinear overlap all return false.
pub fn segments_properly_intersect<S: Scalar>(
    a1: Point<S>,
    a2: Point<S>,
    b1: Point<S>,
    b2: Point<S>,
) -> bool {
    let o1 = orientation(a1, a2, b1);
    let o2 = orientation(a1, a2, b2);
    let o3 = orientation(b1, b2, a1);
    let o4 = orientation(b1, b2, a2);
    o1 * o2 < 0 && o3 * o4 < 0
}

/// Crossing point of two properly intersecting segments.
pub fn proper_intersection_point<S: Scalar>(
    a1: Point<S>,
    a2: Point<S>,
    b1: Point<S>,
    b2: Point<S>,
) -> Option<Point<S>> {
    if !segments_properly_intersect(a1, a2, b1, b2) {
        return None;
    }
    let rx = a2.x - a1.x;
    let ry = a2.y - a1.y;
    let sx = b2.x - b1.x;
    let sy = b2.y - b1.y;
    let denom = rx * sy - ry * sx;
    let t = ((b1.x - a1.x) * sy - (b1.y - a1.y) * sx) / denom;
    Some(Point::new(a1.x + t * rx, a1.y + t * ry))
}

/// Which way a face walk rotates around a node to pick the next edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HandRule {
    /// Clockwise from the reference direction.
    #[default]
    Right,
    /// Counter-clockwise from the reference direction.
    Left,
}

/// Clockwise angle swept from direction `reference` to direction `target`,
/// both seen from `origin`, in `(0, 2π]`.
pub fn clockwise_angle<S: Scalar>(origin: Point<S>, reference: Point<S>, target: Point<S>) -> S {
    let two_pi = S::TAU();
    let ref_angle = (reference.y - origin.y).atan2(reference.x - origin.x);
    let tgt_angle = (target.y - origin.y).atan2(target.x - origin.x);
    let mut sweep = ref_angle - tgt_angle;
    while sweep <= S::zero() {
        sweep = sweep + two_pi;
    }
    while sweep > two_pi {
        sweep = sweep - two_pi;
    }
    sweep
}

/// Picks the next node of a face walk around `current`.
///
/// `reference` is the node the walk arrived from, or the event location for the
/// first step of a face phase. Neighbours are ranked by clockwise sweep from the
/// reference direction and the right-hand rule takes the first one; the
/// left-hand rule sweeps counter-clockwise instead. Either way a neighbour
/// lying exactly on the reference ray ranks last, so a dead end returns the
/// node it came from. Equal angles resolve to the lower id.
pub fn next_face_neighbor<S, I>(
    current: Point<S>,
    reference: Point<S>,
    neighbors: I,
    rule: HandRule,
) -> Option<usize>
where
    S: Scalar,
    I: IntoIterator<Item = (usize, Point<S>)>,
{
    let two_pi = S::TAU();
    neighbors
        .into_iter()
        .map(|(id, p)| {
            let cw = clockwise_angle(current, reference, p);
            let sweep = match rule {
                HandRule::Right => cw,
                // counter-clockwise sweep, again with the reference ray last
                HandRule::Left if cw >= two_pi => cw,
                HandRule::Left => two_pi - cw,
            };
            (sweep, id)
        })
        .min_by(|a, b| {
            a.0.partial_cmp(&b.0)
                .unwrap_or(Ordering::Equal)
                .then(a.1.cmp(&b.1))
        })
        .map(|(_, id)| id)
}
