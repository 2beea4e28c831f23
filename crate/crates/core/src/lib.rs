//! Selects a heavy subgraph of a vertex- and edge-weighted graph and draws it
//! inside a prescribed rectangular area.
//!
//! Two pipelines are provided:
//! - [`force`]: a force-directed algorithm for general undirected graphs that
//!   presses the drawing into a shrinking frame and removes the most stressed
//!   vertices and edges until everything fits.
//! - [`layered`]: a layered (Sugiyama-style) algorithm for directed
//!   calculation graphs, with importance-driven removal, weighted crossing
//!   minimization and orthogonal or Bézier edge routing.
//!
//! [`render`] turns either result into deterministic SVG, [`corpus`] and
//! [`experiment`] provide seeded synthetic inputs and experiment tables.

#![forbid(unsafe_code)]

pub mod bezier;
pub mod corpus;
pub mod experiment;
pub mod force;
pub mod geometry;
pub mod graph;
pub mod layered;
pub mod layout;
pub mod metrics;
pub mod render;

pub use geometry::{Point, Rect, Segment};
pub use graph::{parse_graph, Edge, GraphError, Vertex, WeightedGraph};
pub use layout::{DrawingArea, DrawnEdge, EdgeGeometry, Layout};
pub use metrics::{compute_metrics, CrossingWeightMode, RunMetrics};
