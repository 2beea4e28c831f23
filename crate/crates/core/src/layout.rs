//! Geometric output of a pipeline run: vertex centers plus per-edge geometry.

use std::collections::BTreeMap;

use crate::geometry::{Point, Rect, Segment};
use crate::graph::WeightedGraph;

/// The prescribed target rectangle; the final drawing occupies
/// `[0, width] x [0, height]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrawingArea {
    pub width: f64,
    pub height: f64,
}

impl DrawingArea {
    pub fn new(width: f64, height: f64) -> DrawingArea {
        DrawingArea { width, height }
    }

    pub fn rect(&self) -> Rect {
        Rect::new(
            Point::new(self.width / 2.0, self.height / 2.0),
            self.width,
            self.height,
        )
    }

    /// Ids of vertices whose label box cannot fit the area at all.
    pub fn oversized_vertices(&self, g: &WeightedGraph) -> Vec<String> {
        g.vertices()
            .iter()
            .filter(|v| v.width > self.width || v.height > self.height)
            .map(|v| v.id.clone())
            .collect()
    }
}

/// How a single edge is drawn.
#[derive(Debug, Clone, PartialEq)]
pub enum EdgeGeometry {
    Straight,
    /// Quadratic Bézier with one control point.
    Quadratic { control: Point },
    /// Orthogonal polyline through the listed waypoints (ports included).
    Orthogonal { points: Vec<Point> },
    /// Chain of cubic Bézier hops, one per inter-layer gap.
    CubicChain { segments: Vec<[Point; 4]> },
}

/// Per-edge drawing record.
#[derive(Debug, Clone, PartialEq)]
pub struct DrawnEdge {
    pub src: String,
    pub dst: String,
    pub geometry: EdgeGeometry,
    /// Stroke width in cm; `None` means the renderer's hairline default.
    pub stroke_width: Option<f64>,
    /// Directed edge whose drawing direction was flipped to keep the
    /// layered drawing left-to-right.
    pub reverted: bool,
}

/// Vertex center positions plus edge geometry for a drawn subgraph.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Layout {
    pub positions: BTreeMap<String, Point>,
    pub edges: Vec<DrawnEdge>,
}

impl Layout {
    pub fn position(&self, id: &str) -> Option<Point> {
        self.positions.get(id).copied()
    }

    pub fn vertex_rect(&self, g: &WeightedGraph, id: &str) -> Option<Rect> {
        let v = g.vertex(id)?;
        let c = self.position(id)?;
        Some(Rect::new(c, v.width, v.height))
    }

    /// Straight segment between the endpoint centers of an edge.
    pub fn edge_segment(&self, src: &str, dst: &str) -> Option<Segment> {
        Some(Segment::new(self.position(src)?, self.position(dst)?))
    }

    /// Piecewise-linear rendering of an edge used for crossing counts:
    /// the exact segments for straight/orthogonal edges, the bend polygon
    /// for Bézier geometry (whose crossings match by construction).
    pub fn edge_polyline(&self, e: &DrawnEdge) -> Vec<Segment> {
        match &e.geometry {
            EdgeGeometry::Straight | EdgeGeometry::Quadratic { .. } => self
                .edge_segment(&e.src, &e.dst)
                .into_iter()
                .collect(),
            EdgeGeometry::Orthogonal { points } => points
                .windows(2)
                .map(|w| Segment::new(w[0], w[1]))
                .collect(),
            EdgeGeometry::CubicChain { segments } => segments
                .iter()
                .flat_map(|s| {
                    [
                        Segment::new(s[0], s[1]),
                        Segment::new(s[1], s[2]),
                        Segment::new(s[2], s[3]),
                    ]
                })
                .filter(|s| s.len() > 0.0)
                .collect(),
        }
    }
}
