//! Acceptance gate: one test per criterion, each printing a pass line.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::time::Instant;

use num::rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gridtree::cnf::{brute_force_sat, CnfFormula, Literal};
use gridtree::encode::{decode_assignment, encode_assignment};
use gridtree::geometry::{segments_conflict, LatticePoint, Segment};
use gridtree::perfect::{build_tile, check_tile_properties, embed_perfect, embed_perfect_with_parent, TileKind};
use gridtree::reduce::reduce;
use gridtree::solver::{count_embeddings, oracle_enumerate_modes, SolveOptions};
use gridtree::tree::{NodeId, Role, RootedOrderedTree, TreeBuilder};
use gridtree::verify::{dims_of, occupancy, verify, Check, GridDims, GridEmbedding};

const ODD_KS: [u32; 6] = [1, 3, 5, 7, 9, 11];

#[test]
fn criterion_1_perfect_tree_tiles() {
    for k in ODD_KS {
        let side = 1i64 << ((k + 1) / 2);
        let (t, e) = embed_perfect(k).unwrap();
        assert_eq!(t.len(), (1usize << (k + 1)) - 1, "k={k} node count");
        assert_eq!(dims_of(&e).unwrap(), GridDims::new(side, side), "k={k} bounding box");
        let report = verify(
            &t,
            &e,
            GridDims::new(side, side),
            &[Check::Injective, Check::Bounds, Check::Planar, Check::EdgeThroughVertex],
        )
        .unwrap();
        assert!(report.all_passed(), "k={k}: {report}");
        // Exactly one unused point, at the midpoint of the bottom row.
        let unused = occupancy(&e, GridDims::new(side, side)).unwrap();
        assert_eq!(unused, vec![LatticePoint::new(side / 2, 1)], "k={k} unused point");
        // Structural properties of both tile kinds.
        for kind in [TileKind::F, TileKind::G] {
            let tile = build_tile(kind, k).unwrap();
            let props = check_tile_properties(&tile);
            assert!(props.all_passed(), "k={k} {kind:?}: {props}");
        }
    }
    println!("criterion 1 (perfect tree on square grid, k=1..11): pass");
}

#[test]
fn criterion_2_with_parent_fills_grid() {
    for k in ODD_KS {
        let side = 1i64 << ((k + 1) / 2);
        let (t, e) = embed_perfect_with_parent(k).unwrap();
        assert_eq!(t.len(), 1usize << (k + 1), "k={k} node count");
        let report = verify(
            &t,
            &e,
            GridDims::new(side, side),
            &[
                Check::Injective,
                Check::Bounds,
                Check::Planar,
                Check::EdgeThroughVertex,
                Check::Occupancy,
            ],
        )
        .unwrap();
        assert!(report.all_passed(), "k={k}: {report}");
        assert!(occupancy(&e, GridDims::new(side, side)).unwrap().is_empty());
    }
    println!("criterion 2 (full-grid variant, k=1..11): pass");
}

fn random_formula(rng: &mut ChaCha8Rng) -> CnfFormula {
    let n = rng.gen_range(3..=5usize);
    let m = rng.gen_range(1..=4usize);
    let mut clauses = Vec::with_capacity(m);
    for _ in 0..m {
        let mut vars: Vec<usize> = (1..=n).collect();
        for i in (1..vars.len()).rev() {
            let j = rng.gen_range(0..=i);
            vars.swap(i, j);
        }
        let mut lits: Vec<Literal> = vars[..3]
            .iter()
            .map(|&var| Literal {
                var,
                positive: rng.gen_bool(0.5),
            })
            .collect();
        lits.sort_by_key(|l| l.var);
        clauses.push([lits[0], lits[1], lits[2]]);
    }
    CnfFormula {
        num_vars: n,
        clauses,
    }
}

#[test]
fn criterion_3_reduction_forward() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6472_6177);
    let mut encoded = 0usize;
    let mut tried = 0usize;
    while tried < 24 {
        let f = random_formula(&mut rng);
        tried += 1;
        let Some(a) = brute_force_sat(&f).unwrap() else {
            continue;
        };
        let r = reduce(&f).unwrap();
        let e = encode_assignment(&r, &a).unwrap();
        let dims = GridDims::new(r.width, r.height);
        let report = verify(&r.tree, &e, dims, &Check::UPWARD_FULL).unwrap();
        assert!(report.all_passed(), "formula {f:?}: {report}");

        // (star) rows 0..5n+4m of the grid are completely occupied.
        let (n, m) = (r.meta.n, r.meta.m);
        let top_row = (5 * n + 4 * m) as i64;
        for p in occupancy(&e, dims).unwrap() {
            assert!(p.y > top_row, "free point {p} in the packed rows, {f:?}");
        }

        // Literal leaves of clause j sit only in its three rows.
        for &(var, clause, id) in &r.meta.literal_leaves {
            let y = e.get(id).unwrap().y;
            let base = 4 * (m - clause) as i64;
            assert!(
                y >= base + 1 && y <= base + 3,
                "leaf for x{var} in c{clause} at y={y}, band {}..{}",
                base + 1,
                base + 3
            );
        }

        let back = decode_assignment(&r, &e).unwrap();
        assert!(f.satisfied_by(&back), "decoded assignment unsatisfying");
        assert_eq!(back.values, a.values, "decode round trip");
        encoded += 1;
    }
    assert!(tried >= 20, "need at least 20 formulas, got {tried}");
    assert!(encoded >= 10, "too few satisfiable instances: {encoded}/{tried}");
    println!("criterion 3 (reduction forward direction, {encoded} satisfiable of {tried} formulas): pass");
}

#[test]
fn criterion_4_dimension_formulas() {
    for (n, m) in [(3, 1), (3, 3), (4, 2), (5, 4), (3, 4), (4, 4)] {
        // Fixed shape: clause over the first three variables, alternating signs.
        let clauses = (0..m)
            .map(|j| {
                let lits: Vec<Literal> = (1..=3)
                    .map(|v| Literal {
                        var: v,
                        positive: (v + j) % 2 == 0,
                    })
                    .collect();
                [lits[0], lits[1], lits[2]]
            })
            .collect();
        let f = CnfFormula {
            num_vars: n,
            clauses,
        };
        let r = reduce(&f).unwrap();
        let (pn, pm) = (r.meta.n, r.meta.m);
        assert_eq!(pn, pm);
        assert_eq!(r.width, (4 * pm + 4) as i64, "w formula");
        let lg = (4 * pm + 4).next_power_of_two().trailing_zeros() as usize;
        assert_eq!(r.height, (lg + 5 * pn + 4 * pm + 1) as i64, "h formula");

        // Independent walk: sum subtree sizes hanging under the top tree.
        let mut below = 0usize;
        for &root in &r.meta.subtree_roots {
            below += r.tree.subtree_size(root);
        }
        assert_eq!(below, (5 * pn + 4 * pm + 1) * (4 * pm + 4), "below-top count");
        // Cross-check: everything not labeled TopTree.
        let not_top = r
            .tree
            .ids()
            .filter(|&id| r.tree.role(id) != Role::TopTree)
            .count();
        assert_eq!(below, not_top);
    }
    println!("criterion 4 (dimension and count formulas): pass");
}

/// All binary tree shapes with exactly `n` nodes, via the text grammar.
fn all_trees(n: usize) -> Vec<RootedOrderedTree> {
    fn gen(n: usize) -> Vec<String> {
        if n == 0 {
            return vec![".".to_string()];
        }
        let mut out = Vec::new();
        for left in 0..n {
            let right = n - 1 - left;
            for l in gen(left) {
                for r in gen(right) {
                    out.push(format!("(0 {l} {r})"));
                }
            }
        }
        out
    }
    gen(n)
        .into_iter()
        .map(|s| gridtree::tree::parse_tree(&s).unwrap())
        .collect()
}

#[test]
fn criterion_5_solver_oracle_equivalence() {
    let modes = [
        SolveOptions { upward: false, rotation: false },
        SolveOptions { upward: true, rotation: false },
        SolveOptions { upward: false, rotation: true },
        SolveOptions { upward: true, rotation: true },
    ];
    let grids: Vec<GridDims> = (1..=9i64)
        .flat_map(|w| (1..=9i64).map(move |h| (w, h)))
        .filter(|&(w, h)| w * h <= 9)
        .map(|(w, h)| GridDims::new(w, h))
        .collect();
    let mut cases = 0usize;
    for n in 1..=6usize {
        for t in all_trees(n) {
            for &dims in &grids {
                if dims.cells() < n as i64 {
                    continue;
                }
                let oracle = oracle_enumerate_modes(&t, dims, &modes).unwrap();
                for (opts, expect) in modes.iter().zip(oracle) {
                    let got = count_embeddings(&t, dims, *opts).unwrap().count;
                    assert_eq!(
                        got, expect,
                        "tree {} on {}x{} with {opts:?}",
                        gridtree::tree::serialize_tree(&t),
                        dims.width,
                        dims.height
                    );
                }
                cases += 1;
            }
        }
    }
    println!("criterion 5 (solver matches oracle on {cases} tree/grid cases, 4 modes each): pass");
}

/// Rational-arithmetic reference for segment conflicts.
fn rational_conflict(s1: Segment, s2: Segment) -> bool {
    type R = Ratio<i64>;
    let r = |v: i64| R::from_integer(v);
    let (a1, b1, a2, b2) = (s1.a, s1.b, s2.a, s2.b);
    let d1 = (b1.x - a1.x, b1.y - a1.y);
    let d2 = (b2.x - a2.x, b2.y - a2.y);
    let denom = d1.0 * d2.1 - d1.1 * d2.0;
    if denom != 0 {
        // Unique line intersection at parameters t (on s1) and u (on s2).
        let t = R::new((a2.x - a1.x) * d2.1 - (a2.y - a1.y) * d2.0, denom);
        let u = R::new((a2.x - a1.x) * d1.1 - (a2.y - a1.y) * d1.0, denom);
        let zero = r(0);
        let one = r(1);
        if t < zero || t > one || u < zero || u > one {
            return false;
        }
        let px = r(a1.x) + t * r(d1.0);
        let py = r(a1.y) + t * r(d1.1);
        let is_end = |p: LatticePoint| px == r(p.x) && py == r(p.y);
        let shared = (is_end(a1) || is_end(b1)) && (is_end(a2) || is_end(b2));
        return !shared;
    }
    // Parallel: no conflict unless collinear with positive-length overlap.
    let cross = d1.0 * (a2.y - a1.y) - d1.1 * (a2.x - a1.x);
    if cross != 0 {
        return false;
    }
    let proj = |p: LatticePoint| r(d1.0 * (p.x - a1.x) + d1.1 * (p.y - a1.y));
    let (mut lo1, mut hi1) = (proj(a1), proj(b1));
    if lo1 > hi1 {
        std::mem::swap(&mut lo1, &mut hi1);
    }
    let (mut lo2, mut hi2) = (proj(a2), proj(b2));
    if lo2 > hi2 {
        std::mem::swap(&mut lo2, &mut hi2);
    }
    lo1.max(lo2) < hi1.min(hi2)
}

#[test]
fn criterion_6_geometry_oracle() {
    let points: Vec<LatticePoint> = (0..5)
        .flat_map(|x| (0..5).map(move |y| LatticePoint::new(x, y)))
        .collect();
    let mut segments = Vec::new();
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            segments.push(Segment::new(points[i], points[j]).unwrap());
        }
    }
    let mut pairs = 0u64;
    for &s1 in &segments {
        for &s2 in &segments {
            assert_eq!(
                segments_conflict(s1, s2),
                rational_conflict(s1, s2),
                "{s1:?} vs {s2:?}"
            );
            pairs += 1;
        }
    }
    assert!(pairs >= 90_000, "expected ~9e4 pairs, got {pairs}");
    println!("criterion 6 (geometry predicate vs rational oracle, {pairs} pairs): pass");
}

fn staircase_path(k: usize, rng: &mut ChaCha8Rng) -> (RootedOrderedTree, GridEmbedding) {
    let mut builder = TreeBuilder::new();
    let mut cur = builder.add_root(Role::Plain);
    for _ in 1..k {
        cur = builder.add_left(cur, Role::Plain);
    }
    let (tree, _) = builder.finish();
    let mut e = GridEmbedding::new();
    let mut x = 0i64;
    for i in 0..k {
        e.insert(NodeId(i), LatticePoint::new(x, -(i as i64)));
        x += rng.gen_range(1..=3i64);
    }
    (tree, e)
}

#[test]
fn criterion_7_verify_is_quadratic() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7469_6d65);
    let sizes = [1000usize, 2000, 4000, 8000];
    // Warm up allocator and code paths.
    {
        let (t, e) = staircase_path(500, &mut rng);
        let d = dims_of(&e).unwrap();
        verify(&t, &e, d, &[Check::Planar]).unwrap();
    }
    let mut samples = Vec::new();
    for &k in &sizes {
        let (t, e) = staircase_path(k, &mut rng);
        let d = dims_of(&e).unwrap();
        // Minimum over repetitions filters scheduler preemption spikes.
        let mut best = f64::INFINITY;
        for _ in 0..5 {
            let started = Instant::now();
            let report =
                verify(&t, &e, d, &[Check::Planar, Check::EdgeThroughVertex]).unwrap();
            let secs = started.elapsed().as_secs_f64();
            assert!(report.all_passed(), "k={k}: {report}");
            best = best.min(secs);
        }
        samples.push((k as f64, best.max(1e-6)));
    }
    // Least-squares slope of ln t against ln k.
    let logs: Vec<(f64, f64)> = samples.iter().map(|&(k, t)| (k.ln(), t.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let slope = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / logs.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum::<f64>();
    assert!(
        (slope - 2.0).abs() <= 0.3,
        "fitted exponent {slope:.2} outside 2.0 +/- 0.3 (samples {samples:?})"
    );
    println!("criterion 7 (verify quadratic fit, exponent {slope:.2}): pass");
}
