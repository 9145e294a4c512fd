//! Minimal deterministic SVG output for drawings.
//!
//! The y axis is flipped so larger grid y renders higher on screen, matching
//! the upward-drawing convention. Output depends only on the inputs, so files
//! can be golden-tested byte for byte.

use std::fmt::Write as _;

use crate::tree::{Role, RootedOrderedTree};
use crate::verify::{GridDims, GridEmbedding, VerifyError};

#[derive(Debug, Clone, Copy)]
pub struct RenderOptions {
    /// Pixels per grid unit.
    pub scale: i64,
    /// Draw a dot on every lattice point of the bounding grid.
    pub lattice_dots: bool,
    /// Grid to draw dots for; defaults to the embedding's bounding box.
    pub dims: Option<GridDims>,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            scale: 24,
            lattice_dots: false,
            dims: None,
        }
    }
}

fn role_color(role: Role) -> &'static str {
    match role {
        Role::VarSpine { .. } | Role::Pt { .. } | Role::Pf { .. } => "#c0392b",
        Role::LiteralLeaf { .. } | Role::VarBumpLeaf { .. } => "#e67e22",
        Role::BlueSpine { .. } | Role::BlueClauseLeaf { .. } | Role::LastSubtreeSpine { .. } => {
            "#2980b9"
        }
        Role::TopTree => "#555555",
        Role::Plain => "#222222",
    }
}

/// Renders the drawing as a standalone SVG document.
pub fn render_svg(
    t: &RootedOrderedTree,
    e: &GridEmbedding,
    opts: RenderOptions,
) -> Result<String, VerifyError> {
    for id in t.ids() {
        if e.get(id).is_none() {
            return Err(VerifyError::MissingPosition(id));
        }
    }
    let min = e.min_corner()?;
    let actual = crate::verify::dims_of(e)?;
    let dims = opts.dims.unwrap_or(actual);
    let s = opts.scale;
    let margin = s;
    let width = (dims.width - 1) * s + 2 * margin;
    let height = (dims.height - 1) * s + 2 * margin;
    // Flip: grid y up, SVG y down.
    let px = |x: i64| (x - min.x) * s + margin;
    let py = |y: i64| height - ((y - min.y) * s + margin);

    let mut out = String::new();
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\">"
    )
    .unwrap();
    writeln!(out, "  <rect width=\"{width}\" height=\"{height}\" fill=\"white\"/>").unwrap();
    if opts.lattice_dots {
        for y in min.y..min.y + dims.height {
            for x in min.x..min.x + dims.width {
                writeln!(
                    out,
                    "  <circle cx=\"{}\" cy=\"{}\" r=\"1\" fill=\"#cccccc\"/>",
                    px(x),
                    py(y)
                )
                .unwrap();
            }
        }
    }
    for (parent, child) in t.edges() {
        let a = e.get(parent).unwrap();
        let b = e.get(child).unwrap();
        writeln!(
            out,
            "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#444444\" stroke-width=\"1\"/>",
            px(a.x),
            py(a.y),
            px(b.x),
            py(b.y)
        )
        .unwrap();
    }
    for (id, p) in e.iter() {
        let color = if id.0 < t.len() {
            role_color(t.role(id))
        } else {
            "#222222"
        };
        writeln!(
            out,
            "  <circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"{color}\"/>",
            px(p.x),
            py(p.y)
        )
        .unwrap();
    }
    writeln!(out, "</svg>").unwrap();
    Ok(out)
}
