//! Compact straight-line grid embeddings of trees.
//!
//! The crate has three main parts:
//! * [`perfect`]: recursive F/G tile drawings placing a perfect binary tree on
//!   a square grid with at most one unused point, plus an H-V baseline layout.
//! * [`reduce`] / [`encode`]: a 3SAT-to-upward-tree-embedding gadget
//!   generator with an assignment encoder and decoder.
//! * [`solver`]: an exhaustive backtracking decision procedure for upward (or
//!   unrestricted) planar straight-line placement on a small grid.
//!
//! [`verify`] is the certificate checker tying everything together.

pub mod cnf;
pub mod encode;
pub mod geometry;
pub mod perfect;
pub mod reduce;
pub mod report;
pub mod solver;
pub mod svg;
pub mod tree;
pub mod verify;

pub use geometry::{LatticePoint, Segment};
pub use report::VerifyReport;
pub use tree::{NodeId, RootedOrderedTree};
pub use verify::{GridDims, GridEmbedding};
