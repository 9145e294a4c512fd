//! Exact integer predicates on lattice points and segments.
//!
//! Everything here is integer arithmetic with wide intermediates; there is no
//! rounding anywhere. These predicates back all planarity checking.

use std::fmt;

/// A point of the integer grid. Larger `y` means higher.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint {
    pub x: i64,
    pub y: i64,
}

impl LatticePoint {
    pub const fn new(x: i64, y: i64) -> Self {
        LatticePoint { x, y }
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// A closed segment between two distinct lattice points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segment {
    pub a: LatticePoint,
    pub b: LatticePoint,
}

impl Segment {
    /// Rejects degenerate (zero-length) segments.
    pub fn new(a: LatticePoint, b: LatticePoint) -> Result<Self, DegenerateSegment> {
        if a == b {
            Err(DegenerateSegment(a))
        } else {
            Ok(Segment { a, b })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("degenerate segment at {0}")]
pub struct DegenerateSegment(pub LatticePoint);

/// Sign of the cross product `(q - p) x (r - p)`.
///
/// `+1` for a counterclockwise turn, `-1` for clockwise, `0` iff collinear.
/// Intermediates are 128-bit, so any coordinates up to well past `2^30` are
/// exact.
pub fn orientation(p: LatticePoint, q: LatticePoint, r: LatticePoint) -> i32 {
    let v = (q.x - p.x) as i128 * (r.y - p.y) as i128 - (q.y - p.y) as i128 * (r.x - p.x) as i128;
    match v {
        0 => 0,
        v if v > 0 => 1,
        _ => -1,
    }
}

fn dot(o: LatticePoint, u: LatticePoint, v: LatticePoint) -> i128 {
    (u.x - o.x) as i128 * (v.x - o.x) as i128 + (u.y - o.y) as i128 * (v.y - o.y) as i128
}

/// True iff `p` lies strictly between the endpoints of `s`.
pub fn point_in_segment_interior(p: LatticePoint, s: Segment) -> bool {
    orientation(s.a, s.b, p) == 0 && dot(s.a, p, s.b) > 0 && dot(s.b, p, s.a) > 0
}

/// True iff `p` lies on the closed segment `s`.
pub fn point_on_segment(p: LatticePoint, s: Segment) -> bool {
    orientation(s.a, s.b, p) == 0 && dot(s.a, p, s.b) >= 0 && dot(s.b, p, s.a) >= 0
}

/// True iff the closed segments share any point that is not a common endpoint.
///
/// Collinear overlap of positive length is a conflict; touching only at a
/// shared endpoint is not. An endpoint of one segment lying in the interior of
/// the other (a T-junction) is a conflict.
pub fn segments_conflict(s1: Segment, s2: Segment) -> bool {
    let collinear = orientation(s1.a, s1.b, s2.a) == 0 && orientation(s1.a, s1.b, s2.b) == 0;
    if collinear {
        // Project everything onto s1's direction; overlap of positive length
        // is a conflict, a single shared projection point is an endpoint of
        // both segments and therefore fine.
        let lo1 = 0i128;
        let hi1 = dot(s1.a, s1.b, s1.b);
        let t2a = dot(s1.a, s2.a, s1.b);
        let t2b = dot(s1.a, s2.b, s1.b);
        let (lo2, hi2) = if t2a <= t2b { (t2a, t2b) } else { (t2b, t2a) };
        lo1.max(lo2) < hi1.min(hi2)
    } else {
        segments_intersect(s1, s2) && !share_endpoint(s1, s2)
    }
}

fn share_endpoint(s1: Segment, s2: Segment) -> bool {
    s1.a == s2.a || s1.a == s2.b || s1.b == s2.a || s1.b == s2.b
}

/// Closed-segment intersection test for the non-collinear case.
fn segments_intersect(s1: Segment, s2: Segment) -> bool {
    let d1 = orientation(s1.a, s1.b, s2.a);
    let d2 = orientation(s1.a, s1.b, s2.b);
    let d3 = orientation(s2.a, s2.b, s1.a);
    let d4 = orientation(s2.a, s2.b, s1.b);
    if d1 != d2 && d3 != d4 {
        return true;
    }
    (d1 == 0 && point_on_segment(s2.a, s1))
        || (d2 == 0 && point_on_segment(s2.b, s1))
        || (d3 == 0 && point_on_segment(s1.a, s2))
        || (d4 == 0 && point_on_segment(s1.b, s2))
}
