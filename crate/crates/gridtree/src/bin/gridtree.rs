//! Command-line driver for the gridtree library.
//!
//! Exit codes: 0 success / decision yes, 1 decision no (failed verification,
//! no embedding, unsatisfiable), 2 usage or input error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gridtree::cnf::{brute_force_sat, parse_dimacs, Assignment};
use gridtree::encode::{decode_assignment, encode_assignment};
use gridtree::perfect::{embed_perfect, embed_perfect_with_parent, hv_layout};
use gridtree::reduce::{reduce, ReductionOutput};
use gridtree::solver::{count_embeddings, solve, SolveOptions};
use gridtree::svg::{render_svg, RenderOptions};
use gridtree::tree::{parse_tree, perfect_binary_tree, serialize_tree};
use gridtree::verify::{dims_of, verify, Check, GridDims, GridEmbedding};

#[derive(Parser)]
#[command(name = "gridtree", version, about = "Compact grid embeddings of trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Embed the perfect binary tree T_k on a near-square grid.
    Perfect(PerfectArgs),
    /// Check an embedding file against a tree file.
    Verify(VerifyArgs),
    /// Build the hardness-reduction gadget tree from a DIMACS 3SAT file.
    Reduce(ReduceArgs),
    /// Encode a satisfying assignment as an upward drawing of a gadget tree.
    Encode(EncodeArgs),
    /// Read an assignment back off a gadget-tree embedding.
    Decode(DecodeArgs),
    /// Exhaustively search for an embedding on a small grid.
    Solve(SolveArgs),
    /// Render a tree embedding as SVG.
    Render(RenderArgs),
}

#[derive(Args)]
struct PerfectArgs {
    /// Tree depth; must be odd for the tile construction.
    #[arg(long)]
    k: u32,
    /// Add an extra parent above the root, filling the grid completely.
    #[arg(long, conflicts_with = "hv")]
    with_parent: bool,
    /// Use the divide-and-conquer baseline layout instead of the tiles
    /// (any k, larger area).
    #[arg(long)]
    hv: bool,
    /// Output file for the tree text; stdout if omitted.
    #[arg(long)]
    tree: Option<PathBuf>,
    /// Output file for the embedding text; stdout if omitted.
    #[arg(long)]
    embedding: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    tree: PathBuf,
    #[arg(long)]
    embedding: PathBuf,
    /// Grid width the drawing must fit in; bounding box if omitted.
    #[arg(long)]
    width: Option<i64>,
    #[arg(long)]
    height: Option<i64>,
    /// Comma-separated checks: injective, bounds, planar, upward,
    /// weakly_upward, rotation, edge_through_vertex, occupancy.
    #[arg(long, value_delimiter = ',')]
    checks: Vec<String>,
}

#[derive(Args)]
struct ReduceArgs {
    /// DIMACS CNF input (three distinct-variable literals per clause).
    #[arg(long)]
    cnf: PathBuf,
    /// Output file for the gadget tree text.
    #[arg(long)]
    tree: Option<PathBuf>,
    /// Output file for the reduction meta data.
    #[arg(long)]
    meta: PathBuf,
    /// Also report satisfiability via the brute-force oracle.
    #[arg(long)]
    sat_check: bool,
}

#[derive(Args)]
struct EncodeArgs {
    /// Meta file produced by `reduce`.
    #[arg(long)]
    meta: PathBuf,
    /// Comma-separated 0/1 values in variable order, for example 1,0,1.
    #[arg(long)]
    assignment: String,
    /// Output file for the embedding; stdout if omitted.
    #[arg(long)]
    embedding: Option<PathBuf>,
}

#[derive(Args)]
struct DecodeArgs {
    #[arg(long)]
    meta: PathBuf,
    #[arg(long)]
    embedding: PathBuf,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    tree: PathBuf,
    #[arg(long)]
    width: i64,
    #[arg(long)]
    height: i64,
    /// Require children strictly below parents.
    #[arg(long)]
    upward: bool,
    /// Enforce the (parent, left, right) CCW rotation system.
    #[arg(long)]
    rotation: bool,
    /// Count all anchored embeddings instead of stopping at the first.
    #[arg(long)]
    count: bool,
    /// Write the first embedding found.
    #[arg(long)]
    embedding: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long)]
    tree: PathBuf,
    #[arg(long)]
    embedding: PathBuf,
    /// Output SVG file; stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Draw a dot on every lattice point of the grid.
    #[arg(long)]
    dots: bool,
    /// Pixels per grid unit.
    #[arg(long, default_value_t = 24)]
    scale: i64,
    /// Grid size for the dot background, defaults to the bounding box.
    #[arg(long)]
    width: Option<i64>,
    #[arg(long)]
    height: Option<i64>,
}

fn read(path: &PathBuf) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn emit(path: &Option<PathBuf>, content: &str) -> Result<(), String> {
    match path {
        Some(p) => std::fs::write(p, content)
            .map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn parse_assignment(s: &str) -> Result<Assignment, String> {
    let mut values = Vec::new();
    for tok in s.split(',') {
        match tok.trim() {
            "0" => values.push(false),
            "1" => values.push(true),
            other => return Err(format!("bad assignment value '{other}', expected 0 or 1")),
        }
    }
    Ok(Assignment { values })
}

/// Ok(true) = decision yes, Ok(false) = decision no.
fn run(cli: Cli) -> Result<bool, String> {
    match cli.command {
        Command::Perfect(a) => {
            let (tree, embedding) = if a.hv {
                let t = perfect_binary_tree(a.k).map_err(|e| e.to_string())?;
                let e = hv_layout(&t);
                (t, e)
            } else if a.with_parent {
                embed_perfect_with_parent(a.k).map_err(|e| e.to_string())?
            } else {
                embed_perfect(a.k).map_err(|e| e.to_string())?
            };
            let dims = dims_of(&embedding).map_err(|e| e.to_string())?;
            emit(&a.tree, &format!("{}\n", serialize_tree(&tree)))?;
            emit(&a.embedding, &embedding.to_text())?;
            eprintln!("nodes={} width={} height={}", tree.len(), dims.width, dims.height);
            Ok(true)
        }
        Command::Verify(a) => {
            let tree = parse_tree(&read(&a.tree)?).map_err(|e| e.to_string())?;
            let embedding =
                GridEmbedding::from_text(&read(&a.embedding)?).map_err(|e| e.to_string())?;
            let actual = dims_of(&embedding).map_err(|e| e.to_string())?;
            let dims = GridDims::new(
                a.width.unwrap_or(actual.width),
                a.height.unwrap_or(actual.height),
            );
            let checks: Vec<Check> = if a.checks.is_empty() {
                Check::DEFAULT.to_vec()
            } else {
                a.checks
                    .iter()
                    .map(|name| {
                        Check::from_name(name).ok_or_else(|| format!("unknown check '{name}'"))
                    })
                    .collect::<Result<_, _>>()?
            };
            let report = verify(&tree, &embedding, dims, &checks).map_err(|e| e.to_string())?;
            print!("{report}");
            Ok(report.all_passed())
        }
        Command::Reduce(a) => {
            let formula = parse_dimacs(&read(&a.cnf)?).map_err(|e| e.to_string())?;
            let out = reduce(&formula).map_err(|e| e.to_string())?;
            if a.tree.is_some() {
                emit(&a.tree, &format!("{}\n", serialize_tree(&out.tree)))?;
            }
            std::fs::write(&a.meta, out.to_meta_text())
                .map_err(|e| format!("cannot write {}: {e}", a.meta.display()))?;
            println!(
                "n={} m={} padded_n={} padded_m={} width={} height={} nodes={}",
                out.meta.orig_n,
                out.meta.orig_m,
                out.meta.n,
                out.meta.m,
                out.width,
                out.height,
                out.tree.len()
            );
            if a.sat_check {
                let sat = brute_force_sat(&formula).map_err(|e| e.to_string())?;
                match sat {
                    Some(assignment) => {
                        let bits: Vec<&str> = assignment
                            .values
                            .iter()
                            .map(|&b| if b { "1" } else { "0" })
                            .collect();
                        println!("sat assignment={}", bits.join(","));
                        Ok(true)
                    }
                    None => {
                        println!("unsat");
                        Ok(false)
                    }
                }
            } else {
                Ok(true)
            }
        }
        Command::Encode(a) => {
            let out =
                ReductionOutput::from_meta_text(&read(&a.meta)?).map_err(|e| e.to_string())?;
            let assignment = parse_assignment(&a.assignment)?;
            let embedding =
                encode_assignment(&out, &assignment).map_err(|e| e.to_string())?;
            emit(&a.embedding, &embedding.to_text())?;
            eprintln!("nodes={} width={} height={}", embedding.len(), out.width, out.height);
            Ok(true)
        }
        Command::Decode(a) => {
            let out =
                ReductionOutput::from_meta_text(&read(&a.meta)?).map_err(|e| e.to_string())?;
            let embedding =
                GridEmbedding::from_text(&read(&a.embedding)?).map_err(|e| e.to_string())?;
            let assignment = decode_assignment(&out, &embedding).map_err(|e| e.to_string())?;
            let bits: Vec<&str> = assignment
                .values
                .iter()
                .map(|&b| if b { "1" } else { "0" })
                .collect();
            println!("assignment={}", bits.join(","));
            let satisfies = out.formula.satisfied_by(&assignment);
            println!("satisfies={satisfies}");
            Ok(satisfies)
        }
        Command::Solve(a) => {
            let tree = parse_tree(&read(&a.tree)?).map_err(|e| e.to_string())?;
            let dims = GridDims::new(a.width, a.height);
            let opts = SolveOptions {
                upward: a.upward,
                rotation: a.rotation,
            };
            let result = if a.count {
                count_embeddings(&tree, dims, opts)
            } else {
                solve(&tree, dims, opts)
            }
            .map_err(|e| e.to_string())?;
            if a.count {
                println!("count={}", result.count);
            } else {
                println!(
                    "embeddable={}",
                    if result.embedding.is_some() { "yes" } else { "no" }
                );
            }
            println!("{}", result.stats());
            if let (Some(e), Some(_)) = (&result.embedding, &a.embedding) {
                emit(&a.embedding, &e.to_text())?;
            }
            Ok(result.count > 0)
        }
        Command::Render(a) => {
            let tree = parse_tree(&read(&a.tree)?).map_err(|e| e.to_string())?;
            let embedding =
                GridEmbedding::from_text(&read(&a.embedding)?).map_err(|e| e.to_string())?;
            let dims = match (a.width, a.height) {
                (Some(w), Some(h)) => Some(GridDims::new(w, h)),
                _ => None,
            };
            let opts = RenderOptions {
                scale: a.scale,
                lattice_dots: a.dots,
                dims,
            };
            let svg = render_svg(&tree, &embedding, opts).map_err(|e| e.to_string())?;
            emit(&a.out, &svg)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
