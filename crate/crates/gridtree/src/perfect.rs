//! Recursive square-grid drawings of perfect binary trees.
//!
//! Two tile shapes `F` and `G` draw `T_k` (k odd) on the side-`2^((k+1)/2)`
//! square, differing only in which corner point stays unused. Each tile is
//! assembled from four transformed `(k-2)`-tiles, two connector nodes on the
//! points the top quadrants leave free, and the root on the point the
//! bottom-right quadrant leaves free. Coordinates in this module are 1-based:
//! tiles live on `[1, side]^2`.

use crate::geometry::LatticePoint;
use crate::report::{CheckResult, VerifyReport};
use crate::tree::{perfect_binary_tree, NodeId, RootedOrderedTree, TreeError};
use crate::verify::{verify, Check, GridDims, GridEmbedding};

/// Which corner a tile leaves unused: `F` frees `(side/2, 1)`, `G` frees
/// `(1, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TileKind {
    F,
    G,
}

/// A drawing of `T_k` on the `[1, side]^2` grid with exactly one unused point.
#[derive(Debug, Clone)]
pub struct TileDrawing {
    pub kind: TileKind,
    pub k: u32,
    pub side: i64,
    pub tree: RootedOrderedTree,
    pub embedding: GridEmbedding,
    pub unused: LatticePoint,
}

#[derive(Debug, thiserror::Error)]
pub enum PerfectError {
    #[error("k must be odd and >= 1, got {0}")]
    BadK(u32),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("construction self-check failed: {0}")]
    Construction(String),
}

/// Positions of `T_k` in preorder, plus the single unused grid point.
struct TilePoints {
    points: Vec<LatticePoint>,
    unused: LatticePoint,
}

#[derive(Clone, Copy)]
struct Transform {
    mirror_x: bool,
    mirror_y: bool,
    dx: i64,
    dy: i64,
    /// Side length of the quadrant being transformed.
    side: i64,
}

impl Transform {
    fn apply(&self, p: LatticePoint) -> LatticePoint {
        let x = if self.mirror_x { self.side + 1 - p.x } else { p.x };
        let y = if self.mirror_y { self.side + 1 - p.y } else { p.y };
        LatticePoint::new(x + self.dx, y + self.dy)
    }
}

fn build_points(kind: TileKind, k: u32) -> Result<TilePoints, PerfectError> {
    if k == 1 {
        // Both tiles are the path (1,2) - (2,1) - (2,2) with the root in the
        // corner; the point (1,1) stays free.
        return Ok(TilePoints {
            points: vec![
                LatticePoint::new(2, 1),
                LatticePoint::new(1, 2),
                LatticePoint::new(2, 2),
            ],
            unused: LatticePoint::new(1, 1),
        });
    }
    let half: i64 = 1 << ((k - 1) / 2); // quadrant side
    let quarter = half / 2;
    let sub = |kind| build_points(kind, k - 2);

    // (sub-tile kind, transform) per quadrant.
    let xf = |mirror_x, mirror_y, dx, dy| Transform {
        mirror_x,
        mirror_y,
        dx,
        dy,
        side: half,
    };
    let (tl, bl, tr, br, left_conn) = match kind {
        TileKind::F => (
            (sub(TileKind::F)?, xf(true, false, 0, half)),
            (sub(TileKind::G)?, xf(true, false, 0, 0)),
            (sub(TileKind::F)?, xf(false, false, half, half)),
            (sub(TileKind::G)?, xf(false, true, half, 0)),
            LatticePoint::new(quarter + 1, half + 1),
        ),
        TileKind::G => (
            (sub(TileKind::F)?, xf(false, false, 0, half)),
            (sub(TileKind::G)?, xf(false, false, 0, 0)),
            (sub(TileKind::F)?, xf(false, false, half, half)),
            (sub(TileKind::G)?, xf(false, true, half, 0)),
            LatticePoint::new(quarter, half + 1),
        ),
    };
    let right_conn = LatticePoint::new(half + quarter, half + 1);
    let root = LatticePoint::new(half + 1, half);

    // Each connector and the root must land exactly on the point its
    // quadrant left free.
    let expect = |name: &str, got: LatticePoint, want: LatticePoint| {
        if got == want {
            Ok(())
        } else {
            Err(PerfectError::Construction(format!(
                "{name} at {want} does not match quadrant free point {got}"
            )))
        }
    };
    expect("left connector", tl.1.apply(tl.0.unused), left_conn)?;
    expect("right connector", tr.1.apply(tr.0.unused), right_conn)?;
    expect("root", br.1.apply(br.0.unused), root)?;
    let unused = bl.1.apply(bl.0.unused);
    let want_unused = match kind {
        TileKind::F => LatticePoint::new(half, 1),
        TileKind::G => LatticePoint::new(1, 1),
    };
    expect("unused point", unused, want_unused)?;

    // Preorder of T_k: root, left connector with its two quadrant subtrees
    // (top then bottom), then the right connector likewise.
    let n = (1usize << (k + 1)) - 1;
    let mut points = Vec::with_capacity(n);
    points.push(root);
    for (conn, top, bottom) in [(left_conn, &tl, &bl), (right_conn, &tr, &br)] {
        points.push(conn);
        for (tile, t) in [top, bottom] {
            points.extend(tile.points.iter().map(|&p| t.apply(p)));
        }
    }
    debug_assert_eq!(points.len(), n);
    Ok(TilePoints { points, unused })
}

/// Builds the `F_k` or `G_k` tile drawing of `T_k` (k odd).
pub fn build_tile(kind: TileKind, k: u32) -> Result<TileDrawing, PerfectError> {
    if k % 2 == 0 || k < 1 {
        return Err(PerfectError::BadK(k));
    }
    let tp = build_points(kind, k)?;
    let tree = perfect_binary_tree(k)?;
    let mut embedding = GridEmbedding::new();
    for (i, &p) in tp.points.iter().enumerate() {
        embedding.insert(NodeId(i), p);
    }
    Ok(TileDrawing {
        kind,
        k,
        side: 1 << ((k + 1) / 2),
        tree,
        embedding,
        unused: tp.unused,
    })
}

/// Embeds `T_k` on the `2^((k+1)/2)` square grid with exactly one free point.
pub fn embed_perfect(k: u32) -> Result<(RootedOrderedTree, GridEmbedding), PerfectError> {
    let tile = build_tile(TileKind::F, k)?;
    Ok((tile.tree, tile.embedding))
}

/// `T_k` plus an extra parent of the root, filling the square grid entirely.
///
/// The parent sits on the tile's free point; its edge is checked against the
/// whole drawing at build time.
pub fn embed_perfect_with_parent(
    k: u32,
) -> Result<(RootedOrderedTree, GridEmbedding), PerfectError> {
    let tile = build_tile(TileKind::F, k)?;
    let n = tile.tree.len();

    // New root (id 0) whose left child is the old root; old ids shift by one,
    // which preserves preorder numbering.
    fn copy(
        builder: &mut crate::tree::TreeBuilder,
        src: &RootedOrderedTree,
        old: NodeId,
        new: NodeId,
        map: &mut [NodeId],
    ) {
        map[old.0] = new;
        if let Some(l) = src.left(old) {
            let nl = builder.add_left(new, crate::tree::Role::Plain);
            copy(builder, src, l, nl, map);
        }
        if let Some(r) = src.right(old) {
            let nr = builder.add_right(new, crate::tree::Role::Plain);
            copy(builder, src, r, nr, map);
        }
    }
    let mut builder = crate::tree::TreeBuilder::new();
    let new_root = builder.add_root(crate::tree::Role::Plain);
    let child = builder.add_left(new_root, crate::tree::Role::Plain);
    let mut map: Vec<NodeId> = vec![NodeId(usize::MAX); n];
    copy(&mut builder, &tile.tree, tile.tree.root(), child, &mut map);
    let (tree, order) = builder.finish();

    let mut embedding = GridEmbedding::new();
    embedding.insert(order[new_root.0], tile.unused);
    for old in tile.tree.ids() {
        embedding.insert(order[map[old.0].0], tile.embedding.get(old).unwrap());
    }

    // The parent edge must not break the drawing.
    let side = tile.side;
    let report = verify(
        &tree,
        &embedding,
        GridDims::new(side, side),
        &[
            Check::Injective,
            Check::Bounds,
            Check::Planar,
            Check::EdgeThroughVertex,
            Check::Occupancy,
        ],
    )
    .map_err(|e| PerfectError::Construction(e.to_string()))?;
    if !report.all_passed() {
        return Err(PerfectError::Construction(format!(
            "parent placement broke the drawing:\n{report}"
        )));
    }
    Ok((tree, embedding))
}

/// Pass/fail for the four tile properties plus planarity and bounds.
pub fn check_tile_properties(tile: &TileDrawing) -> VerifyReport {
    let mut report = VerifyReport::new();
    let half = tile.side / 2;
    let root_pos = tile.embedding.get(tile.tree.root());

    // (i) root at (2^((k-1)/2) + 1, 2^((k-1)/2)).
    let want_root = LatticePoint::new(half + 1, half);
    report.push(match root_pos {
        Some(p) if p == want_root => CheckResult::pass("property_i"),
        Some(p) => CheckResult::fail("property_i", format!("root at {p}, want {want_root}")),
        None => CheckResult::fail("property_i", "root has no position"),
    });

    // (ii) only root-incident edges may enter the open strip between
    // x = half and x = half + 1.
    let mut strip_ok = true;
    let mut strip_detail = String::new();
    for (parent, child) in tile.tree.edges() {
        if parent == tile.tree.root() || child == tile.tree.root() {
            continue;
        }
        let (Some(a), Some(b)) = (tile.embedding.get(parent), tile.embedding.get(child)) else {
            continue;
        };
        let (lo, hi) = (a.x.min(b.x), a.x.max(b.x));
        if lo <= half && hi >= half + 1 {
            strip_ok = false;
            strip_detail = format!("edge ({parent},{child}) crosses the central strip");
            break;
        }
    }
    report.push(if strip_ok {
        CheckResult::pass("property_ii")
    } else {
        CheckResult::fail("property_ii", strip_detail)
    });

    // (iii)/(iv): the declared corner point is the single unused point.
    let want_unused = match tile.kind {
        TileKind::F => LatticePoint::new(half, 1),
        TileKind::G => LatticePoint::new(1, 1),
    };
    let name = match tile.kind {
        TileKind::F => "property_iii",
        TileKind::G => "property_iv",
    };
    let used: std::collections::HashSet<LatticePoint> = tile.embedding.points().collect();
    let mut unused_points = Vec::new();
    for y in 1..=tile.side {
        for x in 1..=tile.side {
            let p = LatticePoint::new(x, y);
            if !used.contains(&p) {
                unused_points.push(p);
            }
        }
    }
    report.push(if unused_points == [want_unused] {
        CheckResult::pass(name)
    } else {
        CheckResult::fail(
            name,
            format!("unused points {unused_points:?}, want exactly [{want_unused}]"),
        )
    });

    let dims = GridDims::new(tile.side, tile.side);
    match verify(
        &tile.tree,
        &tile.embedding,
        dims,
        &[Check::Injective, Check::Planar, Check::EdgeThroughVertex],
    ) {
        Ok(sub) => report.checks.extend(sub.checks),
        Err(e) => report.push(CheckResult::fail("planar", e.to_string())),
    }
    // Absolute bounds: every point inside [1, side]^2.
    let in_bounds = tile
        .embedding
        .points()
        .all(|p| p.x >= 1 && p.x <= tile.side && p.y >= 1 && p.y <= tile.side);
    report.push(if in_bounds {
        CheckResult::pass("bounds")
    } else {
        CheckResult::fail("bounds", "point outside the tile square")
    });
    report
}

/// Divide-and-conquer baseline layout with `O(n log n)` area.
///
/// The root goes at `(0, 0)`; the smaller subtree is placed directly below,
/// the larger to the right in the root's row, so width is at most `n` and
/// height at most `floor(lg n) + 1` (area <= 2 n lg n for n >= 2).
pub fn hv_layout(t: &RootedOrderedTree) -> GridEmbedding {
    let mut sizes = vec![1usize; t.len()];
    for id in t.preorder().into_iter().rev() {
        for c in t.children(id) {
            sizes[id.0] += sizes[c.0];
        }
    }
    let mut e = GridEmbedding::new();
    // Returns the width of the placed subtree.
    fn place(
        t: &RootedOrderedTree,
        sizes: &[usize],
        e: &mut GridEmbedding,
        id: NodeId,
        ox: i64,
        oy: i64,
    ) -> i64 {
        e.insert(id, LatticePoint::new(ox, oy));
        match (t.left(id), t.right(id)) {
            (None, None) => 1,
            (Some(c), None) | (None, Some(c)) => place(t, sizes, e, c, ox, oy - 1).max(1),
            (Some(l), Some(r)) => {
                let (below, beside) = if sizes[l.0] <= sizes[r.0] { (l, r) } else { (r, l) };
                let wb = place(t, sizes, e, below, ox, oy - 1);
                let shift = wb.max(1);
                let wr = place(t, sizes, e, beside, ox + shift, oy);
                shift + wr
            }
        }
    }
    place(t, &sizes, &mut e, t.root(), 0, 0);
    e
}
