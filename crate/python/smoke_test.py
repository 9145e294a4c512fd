#!/usr/bin/env python3
"""Smoke test for the gridtree_py extension module.

Builds nothing itself: expects `cargo build -p gridtree-py` to have produced
the cdylib under target/. Run from anywhere:

    cargo build -p gridtree-py
    python3 python/smoke_test.py
"""

import shutil
import sys
import sysconfig
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def load_module():
    suffix = sysconfig.get_config_var("EXT_SUFFIX") or ".so"
    candidates = [
        ROOT / "target" / profile / name
        for profile in ("debug", "release")
        for name in ("libgridtree_py.so", "libgridtree_py.dylib", "gridtree_py.dll")
    ]
    built = next((c for c in candidates if c.exists()), None)
    if built is None:
        sys.exit("cdylib not found; run `cargo build -p gridtree-py` first")
    tmp = Path(tempfile.mkdtemp(prefix="gridtree_py_"))
    shutil.copy2(built, tmp / f"gridtree_py{suffix}")
    sys.path.insert(0, str(tmp))
    import gridtree_py

    return gridtree_py


def main():
    gt = load_module()

    # Perfect tree tiles: T_5 on an 8x8 grid, one unused point.
    tree, emb = gt.embed_perfect(5)
    checks = gt.verify(tree, emb, width=8, height=8,
                       checks=["injective", "bounds", "planar", "edge_through_vertex"])
    assert all(ok for _, ok, _ in checks), checks
    assert len(emb.strip().splitlines()) - 1 == 63

    # With the extra parent the grid is filled completely.
    tree_p, emb_p = gt.embed_perfect(5, with_parent=True)
    occ = gt.verify(tree_p, emb_p, width=8, height=8, checks=["occupancy"])
    assert occ[0][1], occ

    # Reduction round trip on a satisfiable instance.
    dimacs = "p cnf 3 2\n1 -2 3 0\n-1 2 3 0\n"
    assignment = gt.brute_force_sat(dimacs)
    assert assignment is not None
    meta = gt.reduce(dimacs)
    drawing = gt.encode(meta, assignment)
    assert gt.decode(meta, drawing) == assignment

    # Exhaustive solver on a cherry.
    result = gt.solve("(0 (1 . .) (2 . .))", 3, 2, upward=True, rotation=True)
    assert result["embeddable"], result
    svg = gt.render_svg("(0 (1 . .) (2 . .))", result["embedding"])
    assert svg.startswith("<svg ") and svg.rstrip().endswith("</svg>")

    print("smoke test passed")


if __name__ == "__main__":
    main()
