//! Python bindings for the gridtree library.
//!
//! The API is text-based: trees, embeddings, CNF instances, and reduction
//! meta data travel as the same strings the CLI reads and writes, so Python
//! callers interoperate with files produced by the `gridtree` binary.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use gridtree::cnf::{self, Assignment};
use gridtree::encode::{decode_assignment, encode_assignment};
use gridtree::perfect;
use gridtree::reduce::ReductionOutput;
use gridtree::solver::{self, SolveOptions};
use gridtree::svg::{self, RenderOptions};
use gridtree::tree::{parse_tree, serialize_tree};
use gridtree::verify::{dims_of, Check, GridDims, GridEmbedding};

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Tile embedding of the perfect binary tree T_k (odd k).
/// Returns (tree_text, embedding_text).
#[pyfunction]
#[pyo3(signature = (k, with_parent = false))]
fn embed_perfect(k: u32, with_parent: bool) -> PyResult<(String, String)> {
    let (t, e) = if with_parent {
        perfect::embed_perfect_with_parent(k).map_err(err)?
    } else {
        perfect::embed_perfect(k).map_err(err)?
    };
    Ok((serialize_tree(&t), e.to_text()))
}

/// Divide-and-conquer baseline layout for T_k (any k).
#[pyfunction]
fn hv_layout(k: u32) -> PyResult<(String, String)> {
    let t = gridtree::tree::perfect_binary_tree(k).map_err(err)?;
    let e = perfect::hv_layout(&t);
    Ok((serialize_tree(&t), e.to_text()))
}

/// Runs verifier checks; returns a list of (check, passed, detail) tuples.
#[pyfunction]
#[pyo3(signature = (tree_text, embedding_text, width = None, height = None, checks = None))]
fn verify(
    tree_text: &str,
    embedding_text: &str,
    width: Option<i64>,
    height: Option<i64>,
    checks: Option<Vec<String>>,
) -> PyResult<Vec<(String, bool, String)>> {
    let t = parse_tree(tree_text).map_err(err)?;
    let e = GridEmbedding::from_text(embedding_text).map_err(err)?;
    let actual = dims_of(&e).map_err(err)?;
    let dims = GridDims::new(
        width.unwrap_or(actual.width),
        height.unwrap_or(actual.height),
    );
    let checks: Vec<Check> = match checks {
        None => Check::DEFAULT.to_vec(),
        Some(names) => names
            .iter()
            .map(|n| {
                Check::from_name(n).ok_or_else(|| err(format!("unknown check '{n}'")))
            })
            .collect::<PyResult<_>>()?,
    };
    let report = gridtree::verify::verify(&t, &e, dims, &checks).map_err(err)?;
    Ok(report
        .checks
        .iter()
        .map(|c| (c.name.clone(), c.passed, c.detail.clone()))
        .collect())
}

/// Builds the hardness-reduction gadget for a DIMACS 3SAT instance.
/// Returns the meta text consumed by `encode`/`decode`.
#[pyfunction]
fn reduce(dimacs_text: &str) -> PyResult<String> {
    let f = cnf::parse_dimacs(dimacs_text).map_err(err)?;
    let out = gridtree::reduce::reduce(&f).map_err(err)?;
    Ok(out.to_meta_text())
}

/// Encodes a satisfying assignment as an embedding of the gadget tree.
#[pyfunction]
fn encode(meta_text: &str, assignment: Vec<bool>) -> PyResult<String> {
    let out = ReductionOutput::from_meta_text(meta_text).map_err(err)?;
    let a = Assignment { values: assignment };
    let e = encode_assignment(&out, &a).map_err(err)?;
    Ok(e.to_text())
}

/// Reads an assignment back off a gadget-tree embedding.
#[pyfunction]
fn decode(meta_text: &str, embedding_text: &str) -> PyResult<Vec<bool>> {
    let out = ReductionOutput::from_meta_text(meta_text).map_err(err)?;
    let e = GridEmbedding::from_text(embedding_text).map_err(err)?;
    Ok(decode_assignment(&out, &e).map_err(err)?.values)
}

/// Exhaustive embedding search on a small grid.
/// Returns a dict with keys embeddable, count, expanded, time_ms, embedding.
#[pyfunction]
#[pyo3(signature = (tree_text, width, height, upward = false, rotation = false, count_all = false))]
fn solve<'py>(
    py: Python<'py>,
    tree_text: &str,
    width: i64,
    height: i64,
    upward: bool,
    rotation: bool,
    count_all: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let t = parse_tree(tree_text).map_err(err)?;
    let dims = GridDims::new(width, height);
    let opts = SolveOptions { upward, rotation };
    let result = if count_all {
        solver::count_embeddings(&t, dims, opts)
    } else {
        solver::solve(&t, dims, opts)
    }
    .map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("embeddable", result.count > 0)?;
    d.set_item("count", result.count)?;
    d.set_item("expanded", result.expanded)?;
    d.set_item("time_ms", result.time_ms as u64)?;
    d.set_item("embedding", result.embedding.as_ref().map(|e| e.to_text()))?;
    Ok(d)
}

/// Renders an embedding as an SVG document.
#[pyfunction]
#[pyo3(signature = (tree_text, embedding_text, scale = 24, dots = false))]
fn render_svg(
    tree_text: &str,
    embedding_text: &str,
    scale: i64,
    dots: bool,
) -> PyResult<String> {
    let t = parse_tree(tree_text).map_err(err)?;
    let e = GridEmbedding::from_text(embedding_text).map_err(err)?;
    let opts = RenderOptions {
        scale,
        lattice_dots: dots,
        dims: None,
    };
    svg::render_svg(&t, &e, opts).map_err(err)
}

/// Brute-force satisfiability check; returns an assignment or None.
#[pyfunction]
fn brute_force_sat(dimacs_text: &str) -> PyResult<Option<Vec<bool>>> {
    let f = cnf::parse_dimacs(dimacs_text).map_err(err)?;
    Ok(cnf::brute_force_sat(&f).map_err(err)?.map(|a| a.values))
}

#[pymodule]
fn gridtree_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(embed_perfect, m)?)?;
    m.add_function(wrap_pyfunction!(hv_layout, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(reduce, m)?)?;
    m.add_function(wrap_pyfunction!(encode, m)?)?;
    m.add_function(wrap_pyfunction!(decode, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(render_svg, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_sat, m)?)?;
    Ok(())
}
