//! Weight-based preprocessing: drop vertices that have no realistic chance of
//! appearing in the final drawing.

use std::collections::HashSet;

use super::ForceParams;
use crate::graph::WeightedGraph;
use crate::layout::DrawingArea;

/// Number of vertices the preprocessing keeps at least: an estimate of how
/// many label boxes fit the area when each one claims `l_unit * c_pre` of
/// margin around the smallest box.
pub fn preprocess_keep_count(graph: &WeightedGraph, area: &DrawingArea, params: &ForceParams) -> usize {
    if graph.vertex_count() == 0 {
        return 0;
    }
    let h_min = graph
        .vertices()
        .iter()
        .map(|v| v.height)
        .fold(f64::INFINITY, f64::min);
    let w_min = graph
        .vertices()
        .iter()
        .map(|v| v.width)
        .fold(f64::INFINITY, f64::min);
    let cell = (params.l_unit * params.c_pre + h_min) * (params.l_unit * params.c_pre + w_min);
    ((area.height * area.width) / cell).ceil() as usize
}

/// Keeps the heaviest vertices (ties by lexicographic id) up to the keep
/// count, dropping the rest together with their incident edges. Identity when
/// the graph is already small enough.
pub fn preprocess_by_weight(
    graph: &WeightedGraph,
    area: &DrawingArea,
    params: &ForceParams,
) -> WeightedGraph {
    let keep_count = preprocess_keep_count(graph, area, params);
    if graph.vertex_count() <= keep_count {
        return graph.clone();
    }
    let mut order: Vec<(&str, f64)> = graph
        .vertices()
        .iter()
        .map(|v| (v.id.as_str(), v.weight))
        .collect();
    order.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then_with(|| a.0.cmp(b.0)));
    let keep: HashSet<String> = order
        .into_iter()
        .take(keep_count)
        .map(|(id, _)| id.to_string())
        .collect();
    graph.induced_subgraph(&keep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{parse_graph, Vertex};

    #[test]
    fn keep_count_matches_hand_arithmetic() {
        // H = 29.7, W = 21, l_unit = 2, c_pre = 0.7, h_min = 0.5, w_min = 1.5
        // => 623.7 / (1.9 * 2.9) ~ 113.2, keep 114.
        let mut g = WeightedGraph::new(false);
        g.add_vertex(Vertex {
            id: "a".into(),
            weight: 1.0,
            width: 1.5,
            height: 0.5,
            label: "a".into(),
        })
        .unwrap();
        let params = ForceParams {
            c_pre: 0.7,
            ..ForceParams::with_l_unit(2.0)
        };
        let area = DrawingArea::new(21.0, 29.7);
        assert_eq!(preprocess_keep_count(&g, &area, &params), 114);
    }

    #[test]
    fn small_graph_is_identity() {
        let g = parse_graph("graph undirected\nv a 5 1 1\nv b 1 1 1\ne a b 1").unwrap();
        let params = ForceParams::with_l_unit(2.0);
        let area = DrawingArea::new(29.7, 21.0);
        assert_eq!(preprocess_by_weight(&g, &area, &params), g);
    }

    #[test]
    fn equal_weights_keep_lexicographically_smallest() {
        let mut g = WeightedGraph::new(false);
        for id in ["d", "c", "b", "a"] {
            g.add_vertex(Vertex {
                id: id.into(),
                weight: 1.0,
                width: 4.0,
                height: 4.0,
                label: id.into(),
            })
            .unwrap();
        }
        // Tiny area: cell is (0.7+4)^2 > area => keep 1.
        let params = ForceParams {
            l_unit: 1.0,
            c_pre: 0.7,
            ..ForceParams::with_l_unit(1.0)
        };
        let area = DrawingArea::new(4.2, 4.2);
        let kept = preprocess_by_weight(&g, &area, &params);
        assert_eq!(kept.vertex_count(), 1);
        assert_eq!(kept.vertices()[0].id, "a");
    }
}
