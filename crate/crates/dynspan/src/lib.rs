//! Fully dynamic 3- and 5-spanners of an undirected graph under edge
//! insertions and deletions, with worst-case (not amortized) per-update cost.
//!
//! The construction is layered:
//!
//! * [`graph`] — the current graph, its fixed node order, and an orientation
//!   of every edge.
//! * [`clustering`] — radius-1 clustering around sampled centers, maintained
//!   in time proportional to the maximum out-degree.
//! * [`partial`] — one engine instance: a sparse spanner part `A` covering
//!   edges at high-degree nodes plus a low-out-degree part `B`, with at most
//!   four `B` changes per update.
//! * [`reduction`] — splits an oriented graph into groups of out-degree at
//!   most `s` and runs one engine instance per group.
//! * [`recursive`] — chains reduction levels through their `B` change logs,
//!   with a full spanner instance at the bottom.
//! * [`extension`] — two alternating growing/shrinking instances turn the
//!   update-bounded stack into one for arbitrary update sequences.
//! * [`weighted`] — weight binning on top of the unweighted pipeline.
//! * [`oracle`] — brute-force recomputation and bounded-depth BFS used to
//!   verify every maintained structure at desk scale.
//! * [`harness`] — update-stream generators, replay drivers, metrics, and
//!   the scaling benchmark.

pub mod clustering;
pub mod extension;
pub mod graph;
pub mod harness;
pub mod oracle;
pub mod partial;
pub mod recursive;
pub mod reduction;
pub mod sampling;
pub mod weighted;

pub use graph::{Arc, ArcEvent, DynOrientedGraph, NodeId, Op, UpdateError, UpdateEvent};
pub use partial::StretchMode;
pub use recursive::Variant;
