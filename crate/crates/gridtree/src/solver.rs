//! Exhaustive search for planar straight-line grid placements of small trees.
//!
//! `solve` and `count_embeddings` run a backtracking search over anchored
//! placements (absolute coordinates in the given grid, no quotient by
//! translation), placing nodes in preorder so every non-root node is attached
//! to an already-placed parent. `oracle_enumerate` is the deliberately dumb
//! reference: try every injective map and keep what the verifier accepts.

use std::time::Instant;

use crate::geometry::{point_in_segment_interior, segments_conflict, LatticePoint, Segment};
use crate::tree::{NodeId, RootedOrderedTree};
use crate::verify::{verify_anchored, Check, GridDims, GridEmbedding};

/// Search caps; the backtracking cap can be raised via `GRIDTREE_NODE_CAP`.
pub const SOLVE_NODE_CAP: usize = 14;
pub const SOLVE_CELL_CAP: i64 = 25;
pub const ORACLE_NODE_CAP: usize = 7;
pub const ORACLE_CELL_CAP: i64 = 12;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("tree has {nodes} nodes, cap is {cap} (set GRIDTREE_NODE_CAP to raise)")]
    TooManyNodes { nodes: usize, cap: usize },
    #[error("grid has {cells} cells, cap is {cap}")]
    TooManyCells { cells: i64, cap: i64 },
}

/// Which drawing conventions the search enforces.
#[derive(Debug, Clone, Copy, Default)]
pub struct SolveOptions {
    /// Children strictly below parents.
    pub upward: bool,
    /// Fixed rotation system (parent, left, right) in CCW order.
    pub rotation: bool,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    /// First embedding found in scan order, if any.
    pub embedding: Option<GridEmbedding>,
    /// Number of embeddings; 0 or 1 in decision mode.
    pub count: u64,
    /// Placement attempts made.
    pub expanded: u64,
    pub time_ms: u128,
}

impl SolveResult {
    pub fn stats(&self) -> String {
        format!("expanded={} time_ms={}", self.expanded, self.time_ms)
    }
}

fn node_cap() -> usize {
    std::env::var("GRIDTREE_NODE_CAP")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(SOLVE_NODE_CAP)
}

struct Search<'a> {
    tree: &'a RootedOrderedTree,
    dims: GridDims,
    opts: SolveOptions,
    order: Vec<NodeId>,
    subtree_sizes: Vec<usize>,
    pos: Vec<Option<LatticePoint>>,
    occupied: Vec<bool>,
    free_below: Vec<i64>,
    count: u64,
    expanded: u64,
    first: Option<GridEmbedding>,
    stop_at_first: bool,
}

impl<'a> Search<'a> {
    fn new(
        tree: &'a RootedOrderedTree,
        dims: GridDims,
        opts: SolveOptions,
        stop_at_first: bool,
    ) -> Search<'a> {
        let order = tree.preorder();
        let subtree_sizes = tree.ids().map(|id| tree.subtree_size(id)).collect();
        Search {
            tree,
            dims,
            opts,
            order,
            subtree_sizes,
            pos: vec![None; tree.len()],
            occupied: vec![false; dims.cells() as usize],
            // Free cells strictly below each row, for upward capacity pruning.
            free_below: (0..dims.height).map(|y| y * dims.width).collect(),
            count: 0,
            expanded: 0,
            first: None,
            stop_at_first: false,
        }
        .with_stop(stop_at_first)
    }

    fn with_stop(mut self, stop: bool) -> Self {
        self.stop_at_first = stop;
        self
    }

    fn cell(&self, p: LatticePoint) -> usize {
        (p.y * self.dims.width + p.x) as usize
    }

    fn placement_ok(&self, id: NodeId, p: LatticePoint) -> bool {
        let parent = self.tree.parent(id);
        if let Some(par) = parent {
            let pp = self.pos[par.0].unwrap();
            if self.opts.upward && p.y >= pp.y {
                return false;
            }
            let new_edge = match Segment::new(pp, p) {
                Ok(s) => s,
                Err(_) => return false,
            };
            for other in self.tree.ids() {
                let Some(q) = self.pos[other.0] else { continue };
                if other != id && other != par && point_in_segment_interior(q, new_edge) {
                    return false;
                }
            }
            for (a, b) in self.tree.edges() {
                let (Some(pa), Some(pb)) = (self.pos[a.0], self.pos[b.0]) else {
                    continue;
                };
                if (a, b) == (par, id) {
                    continue;
                }
                let seg = Segment::new(pa, pb).unwrap();
                if segments_conflict(new_edge, seg) {
                    return false;
                }
                if point_in_segment_interior(p, seg) {
                    return false;
                }
            }
        }
        if self.opts.rotation {
            // Rotation order is checked at each node that just became fully
            // placed (same-direction overlaps already fail planarity).
            for node in parent.into_iter().chain([id]) {
                if !self.node_complete_with(node, id, p) {
                    continue;
                }
                if !self.rotation_ok_at(node, id, p) {
                    return false;
                }
            }
        }
        true
    }

    fn pos_with(&self, node: NodeId, placed: NodeId, p: LatticePoint) -> Option<LatticePoint> {
        if node == placed {
            Some(p)
        } else {
            self.pos[node.0]
        }
    }

    fn node_complete_with(&self, node: NodeId, placed: NodeId, p: LatticePoint) -> bool {
        self.tree
            .parent(node)
            .into_iter()
            .chain(self.tree.children(node))
            .chain([node])
            .all(|n| self.pos_with(n, placed, p).is_some())
    }

    fn rotation_ok_at(&self, node: NodeId, placed: NodeId, p: LatticePoint) -> bool {
        let here = self.pos_with(node, placed, p).unwrap();
        let dir = |n: NodeId| {
            let q = self.pos_with(n, placed, p).unwrap();
            LatticePoint::new(q.x - here.x, q.y - here.y)
        };
        match (
            self.tree.parent(node).map(dir),
            self.tree.left(node).map(dir),
            self.tree.right(node).map(dir),
        ) {
            (Some(par), Some(l), Some(r)) => {
                crate::verify::cmp_ccw(par, l, r) == std::cmp::Ordering::Less
            }
            _ => true,
        }
    }

    /// Candidate cells in scan order: top row first, x ascending.
    fn run(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            self.count += 1;
            if self.first.is_none() {
                let mut e = GridEmbedding::new();
                for id in self.tree.ids() {
                    e.insert(id, self.pos[id.0].unwrap());
                }
                self.first = Some(e);
            }
            return self.stop_at_first;
        }
        let id = self.order[depth];
        let parent = self.tree.parent(id);
        let need_below = (self.subtree_sizes[id.0] - 1) as i64;
        for y in (0..self.dims.height).rev() {
            if let (true, Some(par)) = (self.opts.upward, parent) {
                if y >= self.pos[par.0].unwrap().y {
                    continue;
                }
            }
            if self.opts.upward && self.free_below[y as usize] < need_below {
                continue;
            }
            for x in 0..self.dims.width {
                let p = LatticePoint::new(x, y);
                if self.occupied[self.cell(p)] {
                    continue;
                }
                self.expanded += 1;
                if !self.placement_ok(id, p) {
                    continue;
                }
                let cell = self.cell(p);
                self.pos[id.0] = Some(p);
                self.occupied[cell] = true;
                for row in (y + 1)..self.dims.height {
                    self.free_below[row as usize] -= 1;
                }
                let done = self.run(depth + 1);
                self.pos[id.0] = None;
                self.occupied[cell] = false;
                for row in (y + 1)..self.dims.height {
                    self.free_below[row as usize] += 1;
                }
                if done {
                    return true;
                }
            }
        }
        false
    }
}

fn check_caps(t: &RootedOrderedTree, dims: GridDims) -> Result<(), SolveError> {
    let cap = node_cap();
    if t.len() > cap {
        return Err(SolveError::TooManyNodes {
            nodes: t.len(),
            cap,
        });
    }
    let cell_cap = SOLVE_CELL_CAP.max((cap * cap) as i64 / 7);
    if dims.cells() > cell_cap {
        return Err(SolveError::TooManyCells {
            cells: dims.cells(),
            cap: cell_cap,
        });
    }
    Ok(())
}

/// Decides whether `t` fits in `dims` under `opts`; returns the first
/// embedding found (deterministic in scan order).
pub fn solve(
    t: &RootedOrderedTree,
    dims: GridDims,
    opts: SolveOptions,
) -> Result<SolveResult, SolveError> {
    run_search(t, dims, opts, true)
}

/// Counts all anchored embeddings (absolute placements, not up to shift).
pub fn count_embeddings(
    t: &RootedOrderedTree,
    dims: GridDims,
    opts: SolveOptions,
) -> Result<SolveResult, SolveError> {
    run_search(t, dims, opts, false)
}

fn run_search(
    t: &RootedOrderedTree,
    dims: GridDims,
    opts: SolveOptions,
    stop_at_first: bool,
) -> Result<SolveResult, SolveError> {
    check_caps(t, dims)?;
    let started = Instant::now();
    let mut search = Search::new(t, dims, opts, stop_at_first);
    search.run(0);
    Ok(SolveResult {
        embedding: search.first,
        count: search.count,
        expanded: search.expanded,
        time_ms: started.elapsed().as_millis(),
    })
}

fn oracle_checks(opts: SolveOptions) -> Vec<Check> {
    let mut checks = Check::DEFAULT.to_vec();
    if opts.upward {
        checks.push(Check::Upward);
    }
    if opts.rotation {
        checks.push(Check::Rotation);
    }
    checks
}

/// Counts anchored embeddings by trying every injective node-to-cell map and
/// asking the verifier. Slow by design; exists to cross-check the search.
pub fn oracle_enumerate(
    t: &RootedOrderedTree,
    dims: GridDims,
    opts: SolveOptions,
) -> Result<u64, SolveError> {
    Ok(oracle_enumerate_modes(t, dims, &[opts])?[0])
}

/// One enumeration pass evaluated against several option sets at once.
pub fn oracle_enumerate_modes(
    t: &RootedOrderedTree,
    dims: GridDims,
    modes: &[SolveOptions],
) -> Result<Vec<u64>, SolveError> {
    if t.len() > ORACLE_NODE_CAP {
        return Err(SolveError::TooManyNodes {
            nodes: t.len(),
            cap: ORACLE_NODE_CAP,
        });
    }
    if dims.cells() > ORACLE_CELL_CAP {
        return Err(SolveError::TooManyCells {
            cells: dims.cells(),
            cap: ORACLE_CELL_CAP,
        });
    }
    let cells: Vec<LatticePoint> = (0..dims.height)
        .flat_map(|y| (0..dims.width).map(move |x| LatticePoint::new(x, y)))
        .collect();
    let check_sets: Vec<Vec<Check>> = modes.iter().map(|&o| oracle_checks(o)).collect();
    let mut counts = vec![0u64; modes.len()];
    let nodes: Vec<NodeId> = t.ids().collect();
    let mut chosen = vec![0usize; nodes.len()];
    let mut used = vec![false; cells.len()];

    fn rec(
        t: &RootedOrderedTree,
        dims: GridDims,
        cells: &[LatticePoint],
        nodes: &[NodeId],
        chosen: &mut [usize],
        used: &mut [bool],
        depth: usize,
        check_sets: &[Vec<Check>],
        counts: &mut [u64],
    ) {
        if depth == nodes.len() {
            let mut e = GridEmbedding::new();
            for (i, &id) in nodes.iter().enumerate() {
                e.insert(id, cells[chosen[i]]);
            }
            // Shared base checks run once; upward/rotation verdicts are
            // memoized across the requested option sets.
            let anchor = LatticePoint::new(0, 0);
            let passes = |set: &[Check]| {
                verify_anchored(t, &e, dims, set, anchor).unwrap().all_passed()
            };
            if !passes(&Check::DEFAULT) {
                return;
            }
            let mut upward_ok = None;
            let mut rotation_ok = None;
            for (set, count) in check_sets.iter().zip(counts.iter_mut()) {
                let mut ok = true;
                if set.contains(&Check::Upward) {
                    ok &= *upward_ok.get_or_insert_with(|| passes(&[Check::Upward]));
                }
                if ok && set.contains(&Check::Rotation) {
                    ok &= *rotation_ok.get_or_insert_with(|| passes(&[Check::Rotation]));
                }
                if ok {
                    *count += 1;
                }
            }
            return;
        }
        for c in 0..cells.len() {
            if used[c] {
                continue;
            }
            used[c] = true;
            chosen[depth] = c;
            rec(t, dims, cells, nodes, chosen, used, depth + 1, check_sets, counts);
            used[c] = false;
        }
    }
    rec(
        t,
        dims,
        &cells,
        &nodes,
        &mut chosen,
        &mut used,
        0,
        &check_sets,
        &mut counts,
    );
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::{parse_tree, perfect_binary_tree};
    use crate::verify::verify;

    #[test]
    fn single_node_counts_cells() {
        let t = parse_tree("(0 . .)").unwrap();
        let r = count_embeddings(&t, GridDims::new(2, 3), SolveOptions::default()).unwrap();
        assert_eq!(r.count, 6);
    }

    #[test]
    fn found_embedding_verifies() {
        let t = perfect_binary_tree(2).unwrap();
        let opts = SolveOptions {
            upward: true,
            rotation: true,
        };
        let r = solve(&t, GridDims::new(4, 3), opts).unwrap();
        let e = r.embedding.expect("T_2 fits upward in 4x3");
        let report = verify(&t, &e, GridDims::new(4, 3), &Check::UPWARD_FULL).unwrap();
        assert!(report.all_passed(), "{report}");
    }

    #[test]
    fn infeasible_when_grid_too_small() {
        // 7 nodes cannot fit on 6 cells.
        let t = perfect_binary_tree(2).unwrap();
        let r = solve(&t, GridDims::new(2, 3), SolveOptions::default()).unwrap();
        assert!(r.embedding.is_none());
        assert_eq!(r.count, 0);
    }

    #[test]
    fn upward_path_on_column() {
        // A 3-edge left path in a 1x4 grid: only the single vertical stack.
        let t = parse_tree("(0 (1 (2 (3 . .) .) .) .)").unwrap();
        let opts = SolveOptions {
            upward: true,
            rotation: false,
        };
        let r = count_embeddings(&t, GridDims::new(1, 4), opts).unwrap();
        assert_eq!(r.count, 1);
        // Without upwardness the path can also start at the bottom.
        let r = count_embeddings(&t, GridDims::new(1, 4), SolveOptions::default()).unwrap();
        assert_eq!(r.count, 2);
    }

    #[test]
    fn matches_oracle_small() {
        let trees = [
            "(0 . .)",
            "(0 (1 . .) .)",
            "(0 (1 . .) (2 . .))",
            "(0 (1 (2 . .) .) (3 . .))",
            "(0 . (1 . (2 . .)))",
        ];
        let modes = [
            SolveOptions { upward: false, rotation: false },
            SolveOptions { upward: true, rotation: false },
            SolveOptions { upward: false, rotation: true },
            SolveOptions { upward: true, rotation: true },
        ];
        for text in trees {
            let t = parse_tree(text).unwrap();
            let dims = GridDims::new(3, 3);
            let oracle = oracle_enumerate_modes(&t, dims, &modes).unwrap();
            for (opts, expect) in modes.iter().zip(oracle) {
                let got = count_embeddings(&t, dims, *opts).unwrap().count;
                assert_eq!(got, expect, "{text} {opts:?}");
            }
        }
    }

    #[test]
    fn caps_enforced() {
        let t = perfect_binary_tree(3).unwrap();
        assert!(matches!(
            solve(&t, GridDims::new(4, 4), SolveOptions::default()),
            Err(SolveError::TooManyNodes { .. })
        ));
        let small = parse_tree("(0 . .)").unwrap();
        assert!(matches!(
            oracle_enumerate(&small, GridDims::new(5, 5), SolveOptions::default()),
            Err(SolveError::TooManyCells { .. })
        ));
    }
}
