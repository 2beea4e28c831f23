//! Drawing-quality metrics: retained weight fractions and edge crossings.

use serde::Serialize;

use crate::geometry::segments_cross_properly;
use crate::graph::WeightedGraph;
use crate::layout::Layout;

/// How the weight of a crossing between edges `e`, `e'` is scored.
/// `Product` penalizes heavy-heavy crossings hardest and is the default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossingWeightMode {
    Product,
    Sum,
}

impl CrossingWeightMode {
    pub fn combine(self, w1: f64, w2: f64) -> f64 {
        match self {
            CrossingWeightMode::Product => w1 * w2,
            CrossingWeightMode::Sum => w1 + w2,
        }
    }
}

/// Retained counts/weights and crossing statistics for one pipeline run.
#[derive(Debug, Clone, Serialize)]
pub struct RunMetrics {
    pub vertices_in: usize,
    pub vertices_out: usize,
    pub vertex_fraction: f64,
    pub vertex_weight_in: f64,
    pub vertex_weight_out: f64,
    pub vertex_weight_fraction: f64,
    pub edges_in: usize,
    pub edges_out: usize,
    pub edge_fraction: f64,
    pub edge_weight_in: f64,
    pub edge_weight_out: f64,
    pub edge_weight_fraction: f64,
    pub crossings: usize,
    pub crossing_weight: f64,
    pub crossing_weight_mode: CrossingWeightMode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_seconds: Option<f64>,
}

impl RunMetrics {
    /// Human-readable summary; fractions printed as percentages with one
    /// decimal, matching the reporting style of the experiment tables.
    pub fn summary(&self) -> String {
        let mut s = format!(
            "vertices: {}/{} ({:.1} %), vertex weight: {:.1} % | edges: {}/{} ({:.1} %), edge weight: {:.1} % | crossings: {} (weight {:.2})",
            self.vertices_out,
            self.vertices_in,
            100.0 * self.vertex_fraction,
            100.0 * self.vertex_weight_fraction,
            self.edges_out,
            self.edges_in,
            100.0 * self.edge_fraction,
            100.0 * self.edge_weight_fraction,
            self.crossings,
            self.crossing_weight,
        );
        if let Some(t) = self.runtime_seconds {
            s.push_str(&format!(" | runtime: {t:.2} s"));
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NotASubgraph;

impl std::fmt::Display for NotASubgraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "output graph is not a subgraph of the input")
    }
}

impl std::error::Error for NotASubgraph {}

/// Counts crossings over all unordered edge pairs by exhaustive segment-pair
/// testing of each edge's drawn polyline. Pairs sharing a graph endpoint are
/// skipped; a collinear port overlap is not a crossing either.
pub fn count_crossings(
    output: &WeightedGraph,
    layout: &Layout,
    mode: CrossingWeightMode,
) -> (usize, f64) {
    let mut count = 0usize;
    let mut weight = 0.0f64;
    let polylines: Vec<(usize, Vec<crate::geometry::Segment>)> = layout
        .edges
        .iter()
        .enumerate()
        .map(|(i, e)| (i, layout.edge_polyline(e)))
        .collect();
    for i in 0..polylines.len() {
        for j in (i + 1)..polylines.len() {
            let e1 = &layout.edges[polylines[i].0];
            let e2 = &layout.edges[polylines[j].0];
            if e1.src == e2.src || e1.src == e2.dst || e1.dst == e2.src || e1.dst == e2.dst {
                continue;
            }
            let mut pair_crossings = 0usize;
            for s1 in &polylines[i].1 {
                for s2 in &polylines[j].1 {
                    if segments_cross_properly(s1, s2) {
                        pair_crossings += 1;
                    }
                }
            }
            if pair_crossings > 0 {
                count += pair_crossings;
                let w1 = edge_weight(output, &e1.src, &e1.dst);
                let w2 = edge_weight(output, &e2.src, &e2.dst);
                weight += pair_crossings as f64 * mode.combine(w1, w2);
            }
        }
    }
    (count, weight)
}

fn edge_weight(g: &WeightedGraph, src: &str, dst: &str) -> f64 {
    g.edges()
        .iter()
        .find(|e| {
            (e.src == src && e.dst == dst) || (!g.directed && e.src == dst && e.dst == src)
        })
        .map(|e| e.weight)
        .unwrap_or(0.0)
}

/// Compares the drawn output against the input graph it was selected from.
pub fn compute_metrics(
    input: &WeightedGraph,
    output: &WeightedGraph,
    layout: &Layout,
    runtime_seconds: Option<f64>,
    mode: CrossingWeightMode,
) -> Result<RunMetrics, NotASubgraph> {
    if !output.is_subgraph_of(input) {
        return Err(NotASubgraph);
    }
    let (crossings, crossing_weight) = count_crossings(output, layout, mode);
    let frac = |a: f64, b: f64| if b == 0.0 { 1.0 } else { a / b };
    Ok(RunMetrics {
        vertices_in: input.vertex_count(),
        vertices_out: output.vertex_count(),
        vertex_fraction: frac(output.vertex_count() as f64, input.vertex_count() as f64),
        vertex_weight_in: input.total_vertex_weight(),
        vertex_weight_out: output.total_vertex_weight(),
        vertex_weight_fraction: frac(output.total_vertex_weight(), input.total_vertex_weight()),
        edges_in: input.edge_count(),
        edges_out: output.edge_count(),
        edge_fraction: frac(output.edge_count() as f64, input.edge_count() as f64),
        edge_weight_in: input.total_edge_weight(),
        edge_weight_out: output.total_edge_weight(),
        edge_weight_fraction: frac(output.total_edge_weight(), input.total_edge_weight()),
        crossings,
        crossing_weight,
        crossing_weight_mode: mode,
        runtime_seconds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use crate::graph::parse_graph;
    use crate::layout::{DrawnEdge, EdgeGeometry};

    fn straight(src: &str, dst: &str) -> DrawnEdge {
        DrawnEdge {
            src: src.into(),
            dst: dst.into(),
            geometry: EdgeGeometry::Straight,
            stroke_width: None,
            reverted: false,
        }
    }

    #[test]
    fn identity_output_has_unit_fractions() {
        let g = parse_graph("graph undirected\nv a 2 1 1\nv b 3 1 1\ne a b 5").unwrap();
        let mut layout = Layout::default();
        layout.positions.insert("a".into(), Point::new(0.0, 0.0));
        layout.positions.insert("b".into(), Point::new(3.0, 0.0));
        layout.edges.push(straight("a", "b"));
        let m = compute_metrics(&g, &g, &layout, None, CrossingWeightMode::Product).unwrap();
        assert_eq!(m.vertex_fraction, 1.0);
        assert_eq!(m.vertex_weight_fraction, 1.0);
        assert_eq!(m.edge_weight_fraction, 1.0);
        assert_eq!(m.crossings, 0);
    }

    #[test]
    fn single_crossing_pair_uses_product_convention() {
        let g = parse_graph(
            "graph undirected\nv a 1 1 1\nv b 1 1 1\nv c 1 1 1\nv d 1 1 1\ne a b 2\ne c d 3",
        )
        .unwrap();
        let mut layout = Layout::default();
        layout.positions.insert("a".into(), Point::new(0.0, 0.0));
        layout.positions.insert("b".into(), Point::new(2.0, 2.0));
        layout.positions.insert("c".into(), Point::new(0.0, 2.0));
        layout.positions.insert("d".into(), Point::new(2.0, 0.0));
        layout.edges.push(straight("a", "b"));
        layout.edges.push(straight("c", "d"));
        let m = compute_metrics(&g, &g, &layout, None, CrossingWeightMode::Product).unwrap();
        assert_eq!(m.crossings, 1);
        assert_eq!(m.crossing_weight, 6.0);
        let m = compute_metrics(&g, &g, &layout, None, CrossingWeightMode::Sum).unwrap();
        assert_eq!(m.crossing_weight, 5.0);
    }

    #[test]
    fn non_subgraph_is_rejected() {
        let g = parse_graph("graph undirected\nv a 2 1 1").unwrap();
        let h = parse_graph("graph undirected\nv a 2 1 1\nv b 1 1 1").unwrap();
        let layout = Layout::default();
        assert!(compute_metrics(&g, &h, &layout, None, CrossingWeightMode::Product).is_err());
    }
}
