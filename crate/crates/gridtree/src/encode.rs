//! Forward direction of the reduction: turning a satisfying assignment into
//! an upward planar grid embedding of the gadget tree.
//!
//! Placement sweeps rows top to bottom. Within a row, already-placed vertices
//! are handled left to right, and each assigns its children (left slot first)
//! to the leftmost free point of the row immediately below. Three kinds of
//! vertices override the default:
//! * the two paths under a variable node `v_i` shift according to the truth
//!   value, putting the true path one row higher than the false path,
//! * literal leaves drop one to three rows depending on which literals of
//!   their clause are satisfied,
//! * the top tree is placed directly above the subtree roots.

use std::collections::HashMap;

use crate::cnf::Assignment;
use crate::geometry::LatticePoint;
use crate::reduce::ReductionOutput;
use crate::tree::{NodeId, Role};
use crate::verify::GridEmbedding;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum EncodeError {
    #[error("assignment has {got} values, expected {expected}")]
    AssignmentLength { got: usize, expected: usize },
    #[error("assignment does not satisfy the formula")]
    Unsatisfied,
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("embedding is missing a position for node {0}")]
    MissingPosition(NodeId),
    #[error("cannot decode variable {var}: both paths start at the same height")]
    AmbiguousVariable { var: usize },
}

struct Canvas {
    width: i64,
    height: i64,
    occupied: Vec<bool>,
    pos: HashMap<NodeId, LatticePoint>,
    by_row: Vec<Vec<NodeId>>,
}

impl Canvas {
    fn new(width: i64, height: i64) -> Canvas {
        Canvas {
            width,
            height,
            occupied: vec![false; (width * height) as usize],
            pos: HashMap::new(),
            by_row: vec![Vec::new(); height as usize],
        }
    }

    fn is_free(&self, x: i64, y: i64) -> bool {
        x >= 0 && x < self.width && y >= 0 && y < self.height
            && !self.occupied[(y * self.width + x) as usize]
    }

    fn place(&mut self, node: NodeId, x: i64, y: i64) -> Result<(), EncodeError> {
        if !self.is_free(x, y) {
            return Err(EncodeError::Construction(format!(
                "node {node} cannot go to ({x}, {y}): out of grid or occupied"
            )));
        }
        self.occupied[(y * self.width + x) as usize] = true;
        self.pos.insert(node, LatticePoint { x, y });
        self.by_row[y as usize].push(node);
        Ok(())
    }

    fn leftmost_free(&self, y: i64) -> Option<i64> {
        (0..self.width).find(|&x| self.is_free(x, y))
    }
}

/// Produces the intended drawing for a satisfying assignment.
///
/// The assignment covers the original variables; padding variables introduced
/// by `reduce` are taken as false (they are unconstrained).
pub fn encode_assignment(
    r: &ReductionOutput,
    a: &Assignment,
) -> Result<GridEmbedding, EncodeError> {
    if a.values.len() != r.meta.orig_n {
        return Err(EncodeError::AssignmentLength {
            got: a.values.len(),
            expected: r.meta.orig_n,
        });
    }
    if !r.formula.satisfied_by(a) {
        return Err(EncodeError::Unsatisfied);
    }
    let mut values = a.values.clone();
    values.resize(r.meta.n, false);
    let padded = Assignment { values };
    debug_assert!(r.padded.satisfied_by(&padded));

    let (n, m) = (r.meta.n, r.meta.m);
    let root_row = (5 * n + 4 * m) as i64;
    let top_depth = r.meta.top_depth as i64;
    let mut canvas = Canvas::new(r.width, r.height);
    let tree = &r.tree;

    // Subtree roots go at (s-1, root_row); top-tree vertices sit above the
    // horizontal span of the subtree roots below them.
    let mut root_x: HashMap<NodeId, i64> = HashMap::new();
    for (s, &id) in r.meta.subtree_roots.iter().enumerate() {
        root_x.insert(id, s as i64);
    }
    fn top_place(
        tree: &crate::tree::RootedOrderedTree,
        id: NodeId,
        depth: i64,
        root_row: i64,
        top_depth: i64,
        root_x: &HashMap<NodeId, i64>,
        canvas: &mut Canvas,
    ) -> Result<(i64, i64), EncodeError> {
        if let Some(&x) = root_x.get(&id) {
            canvas.place(id, x, root_row)?;
            return Ok((x, x));
        }
        let mut span: Option<(i64, i64)> = None;
        for child in tree.children(id) {
            let (lo, hi) =
                top_place(tree, child, depth + 1, root_row, top_depth, root_x, canvas)?;
            span = Some(match span {
                None => (lo, hi),
                Some((a, b)) => (a.min(lo), b.max(hi)),
            });
        }
        let (lo, hi) = span.ok_or_else(|| {
            EncodeError::Construction(format!("top-tree node {id} has no descendant roots"))
        })?;
        canvas.place(id, (lo + hi) / 2, root_row + top_depth - depth)?;
        Ok((lo, hi))
    }
    top_place(tree, tree.root(), 0, root_row, top_depth, &root_x, &mut canvas)?;

    // Literal position and truth values per clause, for the leaf case split.
    let truth = |var: usize| padded.get(var);

    for y in (1..=root_row).rev() {
        let mut row = canvas.by_row[y as usize].clone();
        row.sort_by_key(|id| canvas.pos[id].x);
        for v in row {
            let p = canvas.pos[&v];
            for child in [tree.left(v), tree.right(v)].into_iter().flatten() {
                let target = match tree.role(child) {
                    // Truth rule: the satisfied path starts one row higher,
                    // directly below v_i; the other starts two rows down.
                    Role::Pt { var, index: 1 } => {
                        if truth(var) {
                            (p.x, p.y - 1)
                        } else {
                            (p.x - 1, p.y - 2)
                        }
                    }
                    Role::Pf { var, index: 1 } => {
                        if truth(var) {
                            (p.x + 1, p.y - 2)
                        } else {
                            (p.x, p.y - 1)
                        }
                    }
                    Role::LiteralLeaf { var, clause } => {
                        let lits = &r.padded.clauses[clause - 1];
                        let pos = lits
                            .iter()
                            .position(|l| l.var == var)
                            .expect("literal leaf matches a clause literal");
                        let b: Vec<bool> =
                            lits.iter().map(|l| truth(l.var) == l.positive).collect();
                        let (b1, b2, b3) = (b[0], b[1], b[2]);
                        match pos {
                            0 => {
                                if b1 && !b2 && !b3 {
                                    (p.x + 1, p.y - 1)
                                } else if b1 {
                                    (p.x + 1, p.y - 3)
                                } else {
                                    (p.x + 1, p.y - 2)
                                }
                            }
                            1 => {
                                if b2 && !b3 {
                                    (p.x + 1, p.y - 1)
                                } else if b2 {
                                    (p.x + 1, p.y - 2)
                                } else if b1 && !b2 && !b3 {
                                    (p.x, p.y - 1)
                                } else {
                                    (p.x + 1, p.y - 1)
                                }
                            }
                            _ => {
                                if b3 {
                                    (p.x, p.y - 1)
                                } else if b1 && !b2 {
                                    (p.x - 1, p.y - 2)
                                } else {
                                    (p.x - 1, p.y - 1)
                                }
                            }
                        }
                    }
                    _ => {
                        let x = canvas.leftmost_free(p.y - 1).ok_or_else(|| {
                            EncodeError::Construction(format!(
                                "row {} is full while placing node {child}",
                                p.y - 1
                            ))
                        })?;
                        (x, p.y - 1)
                    }
                };
                canvas.place(child, target.0, target.1)?;
            }
        }
    }

    if canvas.pos.len() != tree.len() {
        return Err(EncodeError::Construction(format!(
            "placed {} of {} nodes",
            canvas.pos.len(),
            tree.len()
        )));
    }
    let mut e = GridEmbedding::new();
    for (&id, &pt) in &canvas.pos {
        e.insert(id, pt);
    }
    Ok(e)
}

/// Reads the assignment back off an embedding: a variable is true iff its
/// true path starts higher than its false path.
pub fn decode_assignment(
    r: &ReductionOutput,
    e: &GridEmbedding,
) -> Result<Assignment, EncodeError> {
    let mut values = Vec::with_capacity(r.meta.orig_n);
    for i in 1..=r.meta.orig_n {
        let pt = e
            .get(r.meta.pt_roots[i - 1])
            .ok_or(EncodeError::MissingPosition(r.meta.pt_roots[i - 1]))?;
        let pf = e
            .get(r.meta.pf_roots[i - 1])
            .ok_or(EncodeError::MissingPosition(r.meta.pf_roots[i - 1]))?;
        if pt.y == pf.y {
            return Err(EncodeError::AmbiguousVariable { var: i });
        }
        values.push(pt.y > pf.y);
    }
    Ok(Assignment { values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::{brute_force_sat, parse_dimacs};
    use crate::reduce::reduce;
    use crate::verify::{dims_of, occupancy, verify, Check, GridDims};

    fn embed(text: &str, values: Vec<bool>) -> (ReductionOutput, GridEmbedding) {
        let f = parse_dimacs(text).unwrap();
        let r = reduce(&f).unwrap();
        let e = encode_assignment(&r, &Assignment { values }).unwrap();
        (r, e)
    }

    fn assert_valid(r: &ReductionOutput, e: &GridEmbedding) {
        let dims = GridDims::new(r.width, r.height);
        let report = verify(&r.tree, e, dims, &Check::UPWARD_FULL).unwrap();
        assert!(report.all_passed(), "{report}");
        let actual = dims_of(e).unwrap();
        assert!(actual.width <= r.width && actual.height <= r.height);
        // Rows below the top tree are completely filled.
        let free = occupancy(e, dims).unwrap();
        let root_row = (5 * r.meta.n + 4 * r.meta.m) as i64;
        for p in &free {
            assert!(p.y > root_row, "free point {p} below subtree roots");
        }
        assert_eq!(
            free.len() as i64,
            r.width * r.height - e.len() as i64,
            "free point accounting"
        );
    }

    #[test]
    fn single_clause_all_assignments() {
        // n=3, m=1 (padded to 3x3); every satisfying assignment must encode
        // to a valid upward drawing and decode back.
        let text = "p cnf 3 1\n1 -2 3 0\n";
        let f = parse_dimacs(text).unwrap();
        for bits in 0u32..8 {
            let values: Vec<bool> = (0..3).map(|i| bits >> i & 1 == 1).collect();
            let a = Assignment { values: values.clone() };
            if !f.satisfied_by(&a) {
                let r = reduce(&f).unwrap();
                assert_eq!(
                    encode_assignment(&r, &a).unwrap_err(),
                    EncodeError::Unsatisfied
                );
                continue;
            }
            let (r, e) = embed(text, values.clone());
            assert_valid(&r, &e);
            let back = decode_assignment(&r, &e).unwrap();
            assert_eq!(back.values, values);
        }
    }

    #[test]
    fn mixed_instance_round_trip() {
        let text = "p cnf 4 2\n1 2 3 0\n-2 -3 4 0\n";
        let f = parse_dimacs(text).unwrap();
        let a = brute_force_sat(&f).unwrap().unwrap();
        let (r, e) = embed(text, a.values.clone());
        assert_valid(&r, &e);
        assert_eq!(decode_assignment(&r, &e).unwrap().values, a.values);
    }

    #[test]
    fn more_clauses_than_variables() {
        let text = "p cnf 3 4\n1 2 3 0\n-1 2 3 0\n1 -2 3 0\n1 2 -3 0\n";
        let f = parse_dimacs(text).unwrap();
        let a = brute_force_sat(&f).unwrap().unwrap();
        let (r, e) = embed(text, a.values.clone());
        assert_valid(&r, &e);
        assert_eq!(decode_assignment(&r, &e).unwrap().values, a.values);
    }

    #[test]
    fn wrong_length_rejected() {
        let f = parse_dimacs("p cnf 3 1\n1 2 3 0\n").unwrap();
        let r = reduce(&f).unwrap();
        let a = Assignment { values: vec![true, true] };
        assert!(matches!(
            encode_assignment(&r, &a),
            Err(EncodeError::AssignmentLength { got: 2, expected: 3 })
        ));
    }
}
