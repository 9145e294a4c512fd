//! Certificate checking for tree drawings.
//!
//! These are exactly the polynomial checks behind the NP-membership argument:
//! pairwise edge crossings, the rotation system, upwardness, plus occupancy
//! accounting used by the reduction.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::geometry::{
    point_in_segment_interior, segments_conflict, LatticePoint, Segment,
};
use crate::report::{CheckResult, VerifyReport};
use crate::tree::{NodeId, RootedOrderedTree};

/// Injective (checked, not assumed) map from nodes to lattice points.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GridEmbedding {
    positions: BTreeMap<NodeId, LatticePoint>,
}

/// Bounding-box dimensions of a grid, both at least 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridDims {
    pub width: i64,
    pub height: i64,
}

impl GridDims {
    pub fn new(width: i64, height: i64) -> Self {
        assert!(width >= 1 && height >= 1, "dims must be positive");
        GridDims { width, height }
    }

    pub fn cells(&self) -> i64 {
        self.width * self.height
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("no position for node {0}")]
    MissingPosition(NodeId),
    #[error("embedding is empty")]
    EmptyEmbedding,
    #[error("embedding exceeds dims: needs {needed_w}x{needed_h}, given {given_w}x{given_h}")]
    ExceedsDims {
        needed_w: i64,
        needed_h: i64,
        given_w: i64,
        given_h: i64,
    },
    #[error("bad embedding file: line {line}: {msg}")]
    Format { line: usize, msg: String },
}

impl GridEmbedding {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, id: NodeId, p: LatticePoint) {
        self.positions.insert(id, p);
    }

    pub fn get(&self, id: NodeId) -> Option<LatticePoint> {
        self.positions.get(&id).copied()
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, LatticePoint)> + '_ {
        self.positions.iter().map(|(&id, &p)| (id, p))
    }

    pub fn points(&self) -> impl Iterator<Item = LatticePoint> + '_ {
        self.positions.values().copied()
    }

    /// Smallest corner of the bounding box.
    pub fn min_corner(&self) -> Result<LatticePoint, VerifyError> {
        if self.is_empty() {
            return Err(VerifyError::EmptyEmbedding);
        }
        let x = self.points().map(|p| p.x).min().unwrap();
        let y = self.points().map(|p| p.y).min().unwrap();
        Ok(LatticePoint::new(x, y))
    }

    pub fn translated(&self, dx: i64, dy: i64) -> GridEmbedding {
        let mut out = GridEmbedding::new();
        for (id, p) in self.iter() {
            out.insert(id, LatticePoint::new(p.x + dx, p.y + dy));
        }
        out
    }

    /// File format: header line `embedding v1`, then `<id> <x> <y>` per node.
    pub fn to_text(&self) -> String {
        let mut out = String::from("embedding v1\n");
        for (id, p) in self.iter() {
            writeln!(out, "{} {} {}", id.0, p.x, p.y).unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<GridEmbedding, VerifyError> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, "embedding v1")) => {}
            _ => {
                return Err(VerifyError::Format {
                    line: 1,
                    msg: "missing 'embedding v1' header".into(),
                })
            }
        }
        let mut e = GridEmbedding::new();
        for (i, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let parse = |s: Option<&str>, what: &str| -> Result<i64, VerifyError> {
                s.and_then(|v| v.parse().ok()).ok_or(VerifyError::Format {
                    line: i + 1,
                    msg: format!("bad {what}"),
                })
            };
            let id = parse(parts.next(), "node id")?;
            let x = parse(parts.next(), "x coordinate")?;
            let y = parse(parts.next(), "y coordinate")?;
            if parts.next().is_some() {
                return Err(VerifyError::Format {
                    line: i + 1,
                    msg: "trailing fields".into(),
                });
            }
            e.insert(NodeId(id as usize), LatticePoint::new(x, y));
        }
        Ok(e)
    }
}

/// Bounding-box width/height of the used portion of the grid.
pub fn dims_of(e: &GridEmbedding) -> Result<GridDims, VerifyError> {
    if e.is_empty() {
        return Err(VerifyError::EmptyEmbedding);
    }
    let xs: Vec<i64> = e.points().map(|p| p.x).collect();
    let ys: Vec<i64> = e.points().map(|p| p.y).collect();
    Ok(GridDims::new(
        xs.iter().max().unwrap() - xs.iter().min().unwrap() + 1,
        ys.iter().max().unwrap() - ys.iter().min().unwrap() + 1,
    ))
}

/// The individual checks `verify` can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Check {
    Injective,
    Bounds,
    Planar,
    Upward,
    WeaklyUpward,
    Rotation,
    EdgeThroughVertex,
    Occupancy,
}

impl Check {
    pub const ALL: [Check; 8] = [
        Check::Injective,
        Check::Bounds,
        Check::Planar,
        Check::Upward,
        Check::WeaklyUpward,
        Check::Rotation,
        Check::EdgeThroughVertex,
        Check::Occupancy,
    ];

    /// Default set for plain (non-upward) drawings.
    pub const DEFAULT: [Check; 4] = [
        Check::Injective,
        Check::Bounds,
        Check::Planar,
        Check::EdgeThroughVertex,
    ];

    /// Full set asserted for encoded reduction drawings.
    pub const UPWARD_FULL: [Check; 6] = [
        Check::Injective,
        Check::Bounds,
        Check::Planar,
        Check::Upward,
        Check::Rotation,
        Check::EdgeThroughVertex,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Check::Injective => "injective",
            Check::Bounds => "bounds",
            Check::Planar => "planar",
            Check::Upward => "upward",
            Check::WeaklyUpward => "weakly_upward",
            Check::Rotation => "rotation",
            Check::EdgeThroughVertex => "edge_through_vertex",
            Check::Occupancy => "occupancy",
        }
    }

    pub fn from_name(name: &str) -> Option<Check> {
        Check::ALL.iter().copied().find(|c| c.name() == name)
    }
}

/// Runs the requested checks; bounds are translation-invariant (only the
/// bounding box is compared against `dims`).
pub fn verify(
    t: &RootedOrderedTree,
    e: &GridEmbedding,
    dims: GridDims,
    checks: &[Check],
) -> Result<VerifyReport, VerifyError> {
    verify_impl(t, e, dims, checks, None)
}

/// Like [`verify`] but bounds (and occupancy) are anchored: every point must
/// lie in `[anchor.x, anchor.x+w-1] x [anchor.y, anchor.y+h-1]`.
pub fn verify_anchored(
    t: &RootedOrderedTree,
    e: &GridEmbedding,
    dims: GridDims,
    checks: &[Check],
    anchor: LatticePoint,
) -> Result<VerifyReport, VerifyError> {
    verify_impl(t, e, dims, checks, Some(anchor))
}

fn verify_impl(
    t: &RootedOrderedTree,
    e: &GridEmbedding,
    dims: GridDims,
    checks: &[Check],
    anchor: Option<LatticePoint>,
) -> Result<VerifyReport, VerifyError> {
    let pos = |id: NodeId| e.get(id).ok_or(VerifyError::MissingPosition(id));
    for id in t.ids() {
        pos(id)?;
    }
    let mut report = VerifyReport::new();
    for &check in checks {
        let result = match check {
            Check::Injective => check_injective(t, e),
            Check::Bounds => check_bounds(t, e, dims, anchor),
            Check::Planar => check_planar(t, e),
            Check::Upward => check_upward(t, e, true),
            Check::WeaklyUpward => check_upward(t, e, false),
            Check::Rotation => check_rotation(t, e),
            Check::EdgeThroughVertex => check_edge_through_vertex(t, e),
            Check::Occupancy => check_occupancy(e, dims),
        };
        report.push(result);
    }
    Ok(report)
}

fn check_injective(t: &RootedOrderedTree, e: &GridEmbedding) -> CheckResult {
    let mut seen: BTreeMap<LatticePoint, NodeId> = BTreeMap::new();
    for id in t.ids() {
        let p = e.get(id).unwrap();
        if let Some(&other) = seen.get(&p) {
            return CheckResult::fail(
                "injective",
                format!("nodes {other} and {id} share point {p}"),
            );
        }
        seen.insert(p, id);
    }
    CheckResult::pass("injective")
}

fn check_bounds(
    t: &RootedOrderedTree,
    e: &GridEmbedding,
    dims: GridDims,
    anchor: Option<LatticePoint>,
) -> CheckResult {
    match anchor {
        None => match dims_of(e) {
            Ok(d) if d.width <= dims.width && d.height <= dims.height => {
                CheckResult::pass("bounds")
            }
            Ok(d) => CheckResult::fail(
                "bounds",
                format!(
                    "bounding box {}x{} exceeds {}x{}",
                    d.width, d.height, dims.width, dims.height
                ),
            ),
            Err(_) => CheckResult::fail("bounds", "empty embedding"),
        },
        Some(a) => {
            for id in t.ids() {
                let p = e.get(id).unwrap();
                if p.x < a.x || p.x >= a.x + dims.width || p.y < a.y || p.y >= a.y + dims.height {
                    return CheckResult::fail(
                        "bounds",
                        format!("node {id} at {p} outside anchored grid"),
                    );
                }
            }
            CheckResult::pass("bounds")
        }
    }
}

fn embedded_edges(
    t: &RootedOrderedTree,
    e: &GridEmbedding,
) -> Result<Vec<(NodeId, NodeId, Segment)>, (NodeId, NodeId)> {
    let mut out = Vec::new();
    for (parent, child) in t.edges() {
        let a = e.get(parent).unwrap();
        let b = e.get(child).unwrap();
        match Segment::new(a, b) {
            Ok(s) => out.push((parent, child, s)),
            Err(_) => return Err((parent, child)),
        }
    }
    Ok(out)
}

fn check_planar(t: &RootedOrderedTree, e: &GridEmbedding) -> CheckResult {
    let edges = match embedded_edges(t, e) {
        Ok(v) => v,
        Err((p, c)) => {
            return CheckResult::fail("planar", format!("edge ({p},{c}) has zero length"))
        }
    };
    // Naive all-pairs, as in the certificate argument.
    for i in 0..edges.len() {
        for j in (i + 1)..edges.len() {
            if segments_conflict(edges[i].2, edges[j].2) {
                return CheckResult::fail(
                    "planar",
                    format!(
                        "edges ({},{}) and ({},{}) intersect",
                        edges[i].0, edges[i].1, edges[j].0, edges[j].1
                    ),
                );
            }
        }
    }
    CheckResult::pass("planar")
}

/// Sweep-accelerated planarity conflict search; must agree with the naive
/// all-pairs loop in `verify` (tested), intended for large drawings.
pub fn planar_conflicts_fast(t: &RootedOrderedTree, e: &GridEmbedding) -> bool {
    let edges = match embedded_edges(t, e) {
        Ok(v) => v,
        Err(_) => return true,
    };
    let mut segs: Vec<Segment> = edges.into_iter().map(|(_, _, s)| s).collect();
    segs.sort_by_key(|s| s.a.x.min(s.b.x));
    for i in 0..segs.len() {
        let max_x = segs[i].a.x.max(segs[i].b.x);
        for j in (i + 1)..segs.len() {
            if segs[j].a.x.min(segs[j].b.x) > max_x {
                break;
            }
            if segments_conflict(segs[i], segs[j]) {
                return true;
            }
        }
    }
    false
}

fn check_upward(t: &RootedOrderedTree, e: &GridEmbedding, strict: bool) -> CheckResult {
    let name = if strict { "upward" } else { "weakly_upward" };
    for (parent, child) in t.edges() {
        let yp = e.get(parent).unwrap().y;
        let yc = e.get(child).unwrap().y;
        let ok = if strict { yp > yc } else { yp >= yc };
        if !ok {
            return CheckResult::fail(
                name,
                format!("child {child} (y={yc}) not below parent {parent} (y={yp})"),
            );
        }
    }
    CheckResult::pass(name)
}

fn check_edge_through_vertex(t: &RootedOrderedTree, e: &GridEmbedding) -> CheckResult {
    let edges = match embedded_edges(t, e) {
        Ok(v) => v,
        Err((p, c)) => {
            return CheckResult::fail(
                "edge_through_vertex",
                format!("edge ({p},{c}) has zero length"),
            )
        }
    };
    let points: Vec<(NodeId, LatticePoint)> = t.ids().map(|id| (id, e.get(id).unwrap())).collect();
    for &(p, c, s) in &edges {
        for &(id, q) in &points {
            if point_in_segment_interior(q, s) {
                return CheckResult::fail(
                    "edge_through_vertex",
                    format!("edge ({p},{c}) passes through node {id} at {q}"),
                );
            }
        }
    }
    CheckResult::pass("edge_through_vertex")
}

/// Region index for CCW angular order starting at `base`.
fn ccw_region(base: LatticePoint, w: LatticePoint) -> u8 {
    let cross = base.x as i128 * w.y as i128 - base.y as i128 * w.x as i128;
    let dot = base.x as i128 * w.x as i128 + base.y as i128 * w.y as i128;
    if cross == 0 {
        if dot > 0 {
            0
        } else {
            2
        }
    } else if cross > 0 {
        1
    } else {
        3
    }
}

fn same_direction(u: LatticePoint, v: LatticePoint) -> bool {
    let cross = u.x as i128 * v.y as i128 - u.y as i128 * v.x as i128;
    let dot = u.x as i128 * v.x as i128 + u.y as i128 * v.y as i128;
    cross == 0 && dot > 0
}

/// Compares direction vectors by counterclockwise angle starting at `base`.
pub(crate) fn cmp_ccw(base: LatticePoint, u: LatticePoint, v: LatticePoint) -> Ordering {
    let (ru, rv) = (ccw_region(base, u), ccw_region(base, v));
    if ru != rv {
        return ru.cmp(&rv);
    }
    let cross = u.x as i128 * v.y as i128 - u.y as i128 * v.x as i128;
    // Within one open half-plane region, smaller CCW angle first.
    match cross.cmp(&0) {
        Ordering::Greater => Ordering::Less,
        Ordering::Less => Ordering::Greater,
        Ordering::Equal => Ordering::Equal,
    }
}

fn check_rotation(t: &RootedOrderedTree, e: &GridEmbedding) -> CheckResult {
    for id in t.ids() {
        let here = e.get(id).unwrap();
        let dir = |other: NodeId| {
            let p = e.get(other).unwrap();
            LatticePoint::new(p.x - here.x, p.y - here.y)
        };
        let mut dirs: Vec<LatticePoint> = Vec::with_capacity(3);
        if let Some(p) = t.parent(id) {
            dirs.push(dir(p));
        }
        let left = t.left(id).map(dir);
        let right = t.right(id).map(dir);
        dirs.extend(left);
        dirs.extend(right);
        if dirs.iter().any(|d| d.x == 0 && d.y == 0) {
            return CheckResult::fail("rotation", format!("zero-length edge at node {id}"));
        }
        for i in 0..dirs.len() {
            for j in (i + 1)..dirs.len() {
                if same_direction(dirs[i], dirs[j]) {
                    return CheckResult::fail(
                        "rotation",
                        format!("two incident edges at node {id} leave in the same direction"),
                    );
                }
            }
        }
        // The circular order (parent, left, right) is only constraining with
        // all three edges present.
        if let (Some(p), Some(l), Some(r)) = (t.parent(id).map(dir), left, right) {
            if cmp_ccw(p, l, r) != Ordering::Less {
                return CheckResult::fail(
                    "rotation",
                    format!("children of node {id} are not in (parent, left, right) CCW order"),
                );
            }
        }
    }
    CheckResult::pass("rotation")
}

fn check_occupancy(e: &GridEmbedding, dims: GridDims) -> CheckResult {
    match occupancy(e, dims) {
        Ok(unused) if unused.is_empty() => CheckResult::pass("occupancy"),
        Ok(unused) => CheckResult::fail(
            "occupancy",
            format!("{} unused grid points, first {}", unused.len(), unused[0]),
        ),
        Err(err) => CheckResult::fail("occupancy", err.to_string()),
    }
}

/// Unused points of the `dims` grid anchored at the embedding's min corner,
/// in row-major order (y ascending, then x ascending).
pub fn occupancy(e: &GridEmbedding, dims: GridDims) -> Result<Vec<LatticePoint>, VerifyError> {
    let min = e.min_corner()?;
    let actual = dims_of(e)?;
    if actual.width > dims.width || actual.height > dims.height {
        return Err(VerifyError::ExceedsDims {
            needed_w: actual.width,
            needed_h: actual.height,
            given_w: dims.width,
            given_h: dims.height,
        });
    }
    let used: std::collections::HashSet<LatticePoint> = e.points().collect();
    let mut unused = Vec::new();
    for y in min.y..min.y + dims.height {
        for x in min.x..min.x + dims.width {
            let p = LatticePoint::new(x, y);
            if !used.contains(&p) {
                unused.push(p);
            }
        }
    }
    Ok(unused)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::{parse_tree, perfect_binary_tree};

    fn p(x: i64, y: i64) -> LatticePoint {
        LatticePoint::new(x, y)
    }

    fn embed(points: &[(usize, i64, i64)]) -> GridEmbedding {
        let mut e = GridEmbedding::new();
        for &(id, x, y) in points {
            e.insert(NodeId(id), p(x, y));
        }
        e
    }

    #[test]
    fn dims_examples() {
        assert_eq!(
            dims_of(&embed(&[(0, 0, 0)])).unwrap(),
            GridDims::new(1, 1)
        );
        assert_eq!(
            dims_of(&embed(&[(0, 1, 2), (1, 2, 1), (2, 2, 2)])).unwrap(),
            GridDims::new(2, 2)
        );
        assert_eq!(
            dims_of(&embed(&[(0, 0, 0), (1, 4, 1)])).unwrap(),
            GridDims::new(5, 2)
        );
        assert!(matches!(
            dims_of(&GridEmbedding::new()),
            Err(VerifyError::EmptyEmbedding)
        ));
    }

    #[test]
    fn base_drawing_passes() {
        // Root at (2,1), children at (1,2) and (2,2).
        let t = perfect_binary_tree(1).unwrap();
        let e = embed(&[(0, 2, 1), (1, 1, 2), (2, 2, 2)]);
        let r = verify(
            &t,
            &e,
            GridDims::new(2, 2),
            &[Check::Injective, Check::Bounds, Check::Planar],
        )
        .unwrap();
        assert!(r.all_passed(), "{r}");
        // The same drawing is not upward: children are above the root.
        let r = verify(&t, &e, GridDims::new(2, 2), &[Check::Upward]).unwrap();
        assert!(!r.all_passed());
    }

    #[test]
    fn injectivity_failure() {
        let t = parse_tree("(0 (1 . .) .)").unwrap();
        let e = embed(&[(0, 0, 0), (1, 0, 0)]);
        let r = verify(&t, &e, GridDims::new(2, 2), &[Check::Injective]).unwrap();
        assert!(!r.all_passed());
    }

    #[test]
    fn missing_position_is_error() {
        let t = perfect_binary_tree(1).unwrap();
        let e = embed(&[(0, 0, 0)]);
        assert!(matches!(
            verify(&t, &e, GridDims::new(2, 2), &[Check::Planar]),
            Err(VerifyError::MissingPosition(_))
        ));
    }

    #[test]
    fn occupancy_base_drawing() {
        let e = embed(&[(0, 2, 1), (1, 1, 2), (2, 2, 2)]);
        assert_eq!(occupancy(&e, GridDims::new(2, 2)).unwrap(), vec![p(1, 1)]);
        let single = embed(&[(0, 5, 7)]);
        assert!(occupancy(&single, GridDims::new(1, 1)).unwrap().is_empty());
    }

    #[test]
    fn occupancy_exceeds_dims() {
        let e = embed(&[(0, 0, 0), (1, 3, 0)]);
        assert!(occupancy(&e, GridDims::new(2, 2)).is_err());
    }

    #[test]
    fn rotation_upward_cherry() {
        // Parent above, left child below-left, right child below-right.
        let t = parse_tree("(0 (1 (2 . .) (3 . .)) .)").unwrap();
        let e = embed(&[(0, 1, 3), (1, 1, 2), (2, 0, 1), (3, 2, 1)]);
        let r = verify(&t, &e, GridDims::new(3, 3), &[Check::Rotation]).unwrap();
        assert!(r.all_passed(), "{r}");
        // Swapping the children breaks the prescribed circular order.
        let e = embed(&[(0, 1, 3), (1, 1, 2), (2, 2, 1), (3, 0, 1)]);
        let r = verify(&t, &e, GridDims::new(3, 3), &[Check::Rotation]).unwrap();
        assert!(!r.all_passed());
    }

    #[test]
    fn upward_implies_weakly_upward() {
        let t = parse_tree("(0 (1 . .) (2 . .))").unwrap();
        let e = embed(&[(0, 1, 2), (1, 0, 1), (2, 2, 1)]);
        let r = verify(
            &t,
            &e,
            GridDims::new(3, 2),
            &[Check::Upward, Check::WeaklyUpward],
        )
        .unwrap();
        assert!(r.all_passed(), "{r}");
    }

    #[test]
    fn edge_through_vertex_detected() {
        let t = parse_tree("(0 (1 . .) (2 . .))").unwrap();
        // Edge (0,2) from (0,0) to (2,0) passes through node 1 at (1,0).
        let e = embed(&[(0, 0, 0), (1, 1, 0), (2, 2, 0)]);
        let r = verify(&t, &e, GridDims::new(3, 1), &[Check::EdgeThroughVertex]).unwrap();
        assert!(!r.all_passed());
    }

    #[test]
    fn embedding_text_round_trip() {
        let e = embed(&[(0, 2, 1), (1, 1, 2), (2, 2, 2)]);
        let text = e.to_text();
        assert_eq!(text, "embedding v1\n0 2 1\n1 1 2\n2 2 2\n");
        assert_eq!(GridEmbedding::from_text(&text).unwrap(), e);
        assert!(GridEmbedding::from_text("nope\n").is_err());
    }

    #[test]
    fn fast_planar_agrees_on_conflict() {
        let t = parse_tree("(0 (1 (2 . .) .) (3 . .))").unwrap();
        // Edge (1,2) crosses edge (0,3).
        let e = embed(&[(0, 0, 2), (1, 2, 2), (2, 1, 0), (3, 1, 1)]);
        let naive = !verify(&t, &e, GridDims::new(3, 3), &[Check::Planar])
            .unwrap()
            .all_passed();
        assert_eq!(planar_conflicts_fast(&t, &e), naive);
    }
}
