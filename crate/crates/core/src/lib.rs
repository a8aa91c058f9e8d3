//! Plane outside-obstacle representations of biconnected graphs.
//!
//! The crate decides whether a biconnected graph can be drawn crossing-free
//! with straight-line edges so that a single polygonal obstacle placed in the
//! unbounded face blocks exactly the non-edges, and constructs a certified
//! witness when it can:
//!
//! * [`graph`] — simple graphs, rotation systems, face traversal.
//! * [`recognize`] — the inner-chordal plane recognizer and construction tree.
//! * [`orient`] — chord orientations: validity, the linear-time tree DP, the
//!   greedy outerplanar construction and an exhaustive oracle.
//! * [`embed`] — exact rational straight-line drawings realizing a valid
//!   orientation, and the reverse direction (orientations from drawings).
//! * [`geometry`] — exact predicates, the drawing verifier, obstacle
//!   construction and a visibility-graph oracle.
//!
//! All geometric verdicts are computed with exact rational arithmetic; no
//! floating point is used on any decision path.

pub mod embed;
pub mod geometry;
pub mod graph;
pub mod orient;
pub mod recognize;

pub use graph::{Edge, EmbeddedGraph, Face, Graph, Vertex};
