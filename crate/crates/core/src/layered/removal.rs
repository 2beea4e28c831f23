//! Importance-driven removal: single vertices per layer until heights fit,
//! whole layers until the width fits, and edges until crossings meet a
//! budget. Every removed vertex transfers path weight to bridging edges and
//! is pooled for possible reinsertion.

use std::collections::HashSet;

use super::{CalcGraph, EdgeId, Item, LayerStructure, LayeredError, LayeredParams, WorkEdge};
use crate::graph::Vertex;
use crate::layout::DrawingArea;

/// Importance of a vertex: weight per cm of height.
pub fn vertex_importance(v: &Vertex) -> f64 {
    v.weight / v.height
}

/// Importance of a layer: total weight per cm of width (widest vertex).
pub fn layer_importance(layer: &[Item], graph: &CalcGraph) -> f64 {
    let mut total = 0.0;
    let mut width = 0.0f64;
    for it in layer {
        if let Some(id) = it.as_real() {
            let v = graph.vertex(id).expect("layer item exists");
            total += v.weight;
            width = width.max(v.width);
        }
    }
    if width == 0.0 {
        return f64::INFINITY;
    }
    total / width
}

/// Importance of an edge: its weight over the total weight of the edges
/// crossing it in the current orders; `+inf` for crossing-free edges, which
/// are never removed.
pub fn edge_importance(structure: &LayerStructure, graph: &CalcGraph, edge: EdgeId) -> f64 {
    let crossers = super::ordering::crossing_partners(structure, graph, edge);
    if crossers.is_empty() {
        return f64::INFINITY;
    }
    let own = graph.edge(edge).expect("edge exists").weight;
    let total: f64 = crossers
        .iter()
        .map(|id| graph.edge(*id).expect("crossing edge exists").weight)
        .sum();
    own / total
}

/// On removing `v`, every in/out edge pair (u,v),(v,w) boosts the bridging
/// edge (u,w) by `min(w(u,v), w(v,w))`, creating it as a synthetic working
/// edge when absent. Call before detaching `v` from the graph.
pub fn transfer_weight(graph: &mut CalcGraph, v: &str) {
    let ins: Vec<(String, f64)> = graph
        .in_edges(v)
        .map(|e| (e.src.clone(), e.weight))
        .collect();
    let outs: Vec<(String, f64)> = graph
        .out_edges(v)
        .map(|e| (e.dst.clone(), e.weight))
        .collect();
    for (u, w_in) in &ins {
        for (w, w_out) in &outs {
            if u == w {
                continue;
            }
            let boost = w_in.min(*w_out);
            if let Some(e) = graph.edges.iter_mut().find(|e| e.src == *u && e.dst == *w) {
                e.weight += boost;
            } else {
                graph.push_edge(u.clone(), w.clone(), boost, false, true);
            }
        }
    }
}

/// Vertices (and their incident working edges) removed along the way, kept
/// for the reinsertion stage.
#[derive(Debug, Clone, Default)]
pub struct RemovalPool {
    pub vertices: Vec<Vertex>,
    pub dead_edges: Vec<WorkEdge>,
}

impl RemovalPool {
    fn pool_vertex(&mut self, graph: &CalcGraph, id: &str) {
        if let Some(v) = graph.vertex(id) {
            self.vertices.push(v.clone());
        }
        for e in graph.edges.iter().filter(|e| e.src == id || e.dst == id) {
            if !self.dead_edges.iter().any(|d| d.id == e.id) {
                self.dead_edges.push(e.clone());
            }
        }
    }
}

/// Removes one vertex everywhere: pool, weight transfer, graph, structure.
pub(crate) fn remove_vertex_everywhere(
    structure: &mut LayerStructure,
    graph: &mut CalcGraph,
    pool: &mut RemovalPool,
    id: &str,
) {
    pool.pool_vertex(graph, id);
    transfer_weight(graph, id);
    graph.remove_vertex(id);
    let alive: HashSet<EdgeId> = graph.edges.iter().map(|e| e.id).collect();
    for layer in &mut structure.layers {
        layer.retain(|it| match it {
            Item::Real(r) => r != id,
            Item::Dummy { edge } => alive.contains(edge),
        });
    }
}

/// Removes every vertex that lost its path from the start vertex, pooling
/// all of them. Applied after each deliberate removal.
pub(crate) fn cascade_unreachable(
    structure: &mut LayerStructure,
    graph: &mut CalcGraph,
    pool: &mut RemovalPool,
    log: &mut Vec<String>,
) {
    loop {
        let reachable = graph.reachable();
        let doomed: Vec<String> = graph
            .vertices
            .iter()
            .filter(|v| !reachable.contains(&v.id))
            .map(|v| v.id.clone())
            .collect();
        if doomed.is_empty() {
            return;
        }
        for id in &doomed {
            remove_vertex_everywhere(structure, graph, pool, id);
        }
        log.push(format!(
            "reachability cascade removed {} vertices",
            doomed.len()
        ));
    }
}

/// Height of a layer before dummies exist: vertex heights plus uniform
/// vertex gaps.
fn plain_layer_height(layer: &[Item], graph: &CalcGraph, params: &LayeredParams) -> f64 {
    let heights: Vec<f64> = layer
        .iter()
        .filter_map(|it| it.as_real())
        .map(|id| graph.vertex(id).expect("item exists").height)
        .collect();
    if heights.is_empty() {
        return 0.0;
    }
    heights.iter().sum::<f64>() + params.gap_vv * (heights.len() - 1) as f64
}

/// Lowest-importance removable real vertex of a layer (never the start
/// vertex); ties prefer the lower weight, then the smaller id.
fn pick_least_important(layer: &[Item], graph: &CalcGraph) -> Option<String> {
    let mut best: Option<(f64, f64, &str)> = None;
    for it in layer {
        let Some(id) = it.as_real() else { continue };
        if id == graph.start {
            continue;
        }
        let v = graph.vertex(id).expect("item exists");
        let i = vertex_importance(v);
        let cand = (i, v.weight, id);
        best = Some(match best {
            None => cand,
            Some(cur) => {
                if i < cur.0
                    || (i == cur.0 && v.weight < cur.1)
                    || (i == cur.0 && v.weight == cur.1 && id < cur.2)
                {
                    cand
                } else {
                    cur
                }
            }
        });
    }
    best.map(|(_, _, id)| id.to_string())
}

/// Shrinks every layer (left to right) to the area height by removing its
/// least important vertices; each removal transfers weight and cascades
/// reachability into later layers.
pub fn remove_vertices_for_height(
    structure: &mut LayerStructure,
    graph: &mut CalcGraph,
    area: &DrawingArea,
    params: &LayeredParams,
    pool: &mut RemovalPool,
    log: &mut Vec<String>,
) -> Result<(), LayeredError> {
    for li in 0..structure.layers.len() {
        loop {
            let h = plain_layer_height(&structure.layers[li], graph, params);
            if h <= area.height {
                break;
            }
            let Some(victim) = pick_least_important(&structure.layers[li], graph) else {
                return Err(LayeredError::StartInfeasible(format!(
                    "layer {li} cannot fit height {} even after removals",
                    area.height
                )));
            };
            let imp = vertex_importance(graph.vertex(&victim).unwrap());
            log.push(format!(
                "height: removed {victim} from layer {li} (importance {imp:.4})"
            ));
            remove_vertex_everywhere(structure, graph, pool, &victim);
        }
        cascade_unreachable(structure, graph, pool, log);
    }
    Ok(())
}

fn layer_width(layer: &[Item], graph: &CalcGraph) -> f64 {
    layer
        .iter()
        .filter_map(|it| it.as_real())
        .map(|id| graph.vertex(id).expect("item exists").width)
        .fold(0.0, f64::max)
}

fn total_width(structure: &LayerStructure, graph: &CalcGraph, params: &LayeredParams) -> f64 {
    let widths: Vec<f64> = structure
        .layers
        .iter()
        .filter(|l| !l.is_empty())
        .map(|l| layer_width(l, graph))
        .collect();
    if widths.is_empty() {
        return 0.0;
    }
    widths.iter().sum::<f64>() + params.layer_gap * (widths.len() - 1) as f64
}

/// Removes whole layers of lowest importance (the start layer is exempt)
/// until the total width fits; ties resolve left to right.
pub fn remove_layers_for_width(
    structure: &mut LayerStructure,
    graph: &mut CalcGraph,
    area: &DrawingArea,
    params: &LayeredParams,
    pool: &mut RemovalPool,
    log: &mut Vec<String>,
) -> Result<(), LayeredError> {
    loop {
        structure.prune_empty();
        if total_width(structure, graph, params) <= area.width {
            return Ok(());
        }
        let start_layer = structure.layer_of(&graph.start);
        let mut best: Option<(f64, usize)> = None;
        for (li, layer) in structure.layers.iter().enumerate() {
            if Some(li) == start_layer {
                continue;
            }
            let imp = layer_importance(layer, graph);
            let better = match best {
                None => true,
                Some((cur, _)) => imp < cur,
            };
            if better {
                best = Some((imp, li));
            }
        }
        let Some((imp, li)) = best else {
            return Err(LayeredError::StartInfeasible(format!(
                "start layer alone exceeds the area width {}",
                area.width
            )));
        };
        let victims: Vec<String> = structure.layers[li]
            .iter()
            .filter_map(|it| it.as_real().map(str::to_string))
            .collect();
        log.push(format!(
            "width: removed layer {li} with {} vertices (importance {imp:.4})",
            victims.len()
        ));
        for id in &victims {
            remove_vertex_everywhere(structure, graph, pool, id);
        }
        structure.layers.remove(li);
        cascade_unreachable(structure, graph, pool, log);
    }
}

/// Removes minimum-importance edges until the structural crossing count is
/// within the budget. Crossing-free edges (infinite importance) are never
/// picked.
pub fn remove_edges_to_budget(
    structure: &mut LayerStructure,
    graph: &mut CalcGraph,
    budget: usize,
    params: &LayeredParams,
    log: &mut Vec<String>,
) {
    loop {
        let (count, _) =
            super::ordering::count_structure_crossings(structure, graph, params.crossing_weight_mode);
        if count <= budget {
            return;
        }
        let mut best: Option<(f64, f64, EdgeId)> = None;
        for e in &graph.edges {
            if e.synthetic {
                continue;
            }
            let imp = edge_importance(structure, graph, e.id);
            if !imp.is_finite() {
                continue;
            }
            let key = (imp, e.weight, e.id);
            best = Some(match best {
                None => key,
                Some(cur) => {
                    if imp < cur.0
                        || (imp == cur.0 && e.weight < cur.1)
                        || (imp == cur.0 && e.weight == cur.1 && e.id < cur.2)
                    {
                        key
                    } else {
                        cur
                    }
                }
            });
        }
        let Some((imp, _, victim)) = best else { return };
        let e = graph.edge(victim).unwrap();
        log.push(format!(
            "crossings: removed edge {} -> {} (importance {imp:.4})",
            e.src, e.dst
        ));
        graph.remove_edge(victim);
        for layer in &mut structure.layers {
            layer.retain(|it| !matches!(it, Item::Dummy { edge } if *edge == victim));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;

    fn calc(text: &str) -> CalcGraph {
        CalcGraph::from_graph(&parse_graph(text).unwrap()).unwrap()
    }

    #[test]
    fn vertex_importance_is_weight_per_height() {
        let v = Vertex {
            id: "a".into(),
            weight: 10.0,
            width: 1.0,
            height: 2.0,
            label: "a".into(),
        };
        assert_eq!(vertex_importance(&v), 5.0);
        // Doubling both leaves it unchanged.
        let w = Vertex {
            weight: 20.0,
            height: 4.0,
            ..v.clone()
        };
        assert_eq!(vertex_importance(&w), 5.0);
        // Taller at equal weight: less important.
        let t = Vertex {
            height: 3.0,
            ..v.clone()
        };
        assert!(vertex_importance(&t) < vertex_importance(&v));
    }

    #[test]
    fn layer_importance_uses_widest_vertex() {
        let g = calc(
            "graph directed\nstart a\nv a 4 1.5 1\nv b 6 2.0 1\ne a b 1",
        );
        let layer = vec![Item::Real("a".into()), Item::Real("b".into())];
        assert_eq!(layer_importance(&layer, &g), 5.0);
        let single = vec![Item::Real("a".into())];
        let v = g.vertex("a").unwrap();
        assert!((layer_importance(&single, &g) - v.weight / v.width).abs() < 1e-12);
    }

    #[test]
    fn transfer_boosts_existing_and_creates_missing() {
        let mut g = calc(
            "graph directed\nstart u\nv u 1 1 1\nv v 1 1 1\nv w 1 1 1\n\
             e u v 3\ne v w 5\ne u w 1",
        );
        transfer_weight(&mut g, "v");
        let uw = g
            .edges
            .iter()
            .find(|e| e.src == "u" && e.dst == "w")
            .unwrap();
        assert_eq!(uw.weight, 4.0);
        assert!(!uw.synthetic);

        let mut g2 = calc(
            "graph directed\nstart u\nv u 1 1 1\nv v 1 1 1\nv w 1 1 1\ne u v 3\ne v w 5",
        );
        transfer_weight(&mut g2, "v");
        let uw = g2
            .edges
            .iter()
            .find(|e| e.src == "u" && e.dst == "w")
            .unwrap();
        assert_eq!(uw.weight, 3.0);
        assert!(uw.synthetic);

        // No successors: nothing happens.
        let mut g3 = calc("graph directed\nstart u\nv u 1 1 1\nv v 1 1 1\ne u v 3");
        let edges_before = g3.edges.len();
        transfer_weight(&mut g3, "v");
        assert_eq!(g3.edges.len(), edges_before);
    }

    #[test]
    fn height_removal_takes_one_vertex_and_fits() {
        // Heights 2,2,2 with gap 0.5 sum to 7 > 5; one removal fits.
        let mut g = calc(
            "graph directed\nstart s\nv s 9 1 2\nv a 5 1 2\nv b 1 1 2\nv t 1 1 1\n\
             e s t 1\ne a t 1\ne b t 1\ne s a 1\ne s b 1",
        );
        // Wire a,b reachable from s directly so the cascade spares them.
        let mut structure = LayerStructure {
            layers: vec![
                vec![
                    Item::Real("s".into()),
                    Item::Real("a".into()),
                    Item::Real("b".into()),
                ],
                vec![Item::Real("t".into())],
            ],
        };
        let params = LayeredParams::default();
        let area = DrawingArea::new(10.0, 5.0);
        let mut pool = RemovalPool::default();
        let mut log = Vec::new();
        remove_vertices_for_height(&mut structure, &mut g, &area, &params, &mut pool, &mut log)
            .unwrap();
        // b (weight 1, height 2) is the least important and goes first.
        assert_eq!(structure.layers[0].len(), 2);
        assert!(pool.vertices.iter().any(|v| v.id == "b"));
        assert!(g.vertex("b").is_none());
        assert!(plain_layer_height(&structure.layers[0], &g, &params) <= 5.0);
    }

    #[test]
    fn height_removal_cascades_to_descendants() {
        // c is only reachable through b; removing b must drop c too.
        let mut g = calc(
            "graph directed\nstart s\nv s 9 1 2\nv b 1 1 2\nv a 5 1 2\nv c 4 1 1\ne s a 1\ne s b 1\ne b c 1",
        );
        let mut structure = LayerStructure {
            layers: vec![
                vec![
                    Item::Real("s".into()),
                    Item::Real("a".into()),
                    Item::Real("b".into()),
                ],
                vec![Item::Real("c".into())],
            ],
        };
        let params = LayeredParams::default();
        let area = DrawingArea::new(10.0, 5.0);
        let mut pool = RemovalPool::default();
        let mut log = Vec::new();
        remove_vertices_for_height(&mut structure, &mut g, &area, &params, &mut pool, &mut log)
            .unwrap();
        assert!(g.vertex("b").is_none());
        assert!(g.vertex("c").is_none(), "c must cascade with b");
        assert!(structure.layers[1].is_empty());
    }

    #[test]
    fn height_removal_is_identity_when_fitting() {
        let mut g = calc("graph directed\nstart s\nv s 1 1 1\nv t 1 1 1\ne s t 1");
        let mut structure = LayerStructure {
            layers: vec![vec![Item::Real("s".into())], vec![Item::Real("t".into())]],
        };
        let before = structure.clone();
        let params = LayeredParams::default();
        let area = DrawingArea::new(10.0, 5.0);
        let mut pool = RemovalPool::default();
        let mut log = Vec::new();
        remove_vertices_for_height(&mut structure, &mut g, &area, &params, &mut pool, &mut log)
            .unwrap();
        assert_eq!(structure, before);
        assert!(pool.vertices.is_empty());
    }

    #[test]
    fn width_removal_arithmetic() {
        // Widths 2,2,2 with gap 1 sum to 8 > 6; one layer must go.
        let mut g = calc(
            "graph directed\nstart s\nv s 9 2 1\nv a 1 2 1\nv b 5 2 1\n\
             e s a 1\ne s b 1\ne a b 1",
        );
        let mut structure = LayerStructure {
            layers: vec![
                vec![Item::Real("s".into())],
                vec![Item::Real("a".into())],
                vec![Item::Real("b".into())],
            ],
        };
        let params = LayeredParams::default();
        let area = DrawingArea::new(6.0, 10.0);
        let mut pool = RemovalPool::default();
        let mut log = Vec::new();
        remove_layers_for_width(&mut structure, &mut g, &area, &params, &mut pool, &mut log)
            .unwrap();
        assert_eq!(structure.layers.len(), 2);
        // Layer {a} has the lowest importance (weight 1 over width 2).
        assert!(g.vertex("a").is_none());
        assert!(g.vertex("b").is_some(), "b stays reachable via s->b");
    }

    #[test]
    fn width_removal_identity_when_fitting() {
        let mut g = calc("graph directed\nstart s\nv s 1 1 1\nv t 1 1 1\ne s t 1");
        let mut structure = LayerStructure {
            layers: vec![vec![Item::Real("s".into())], vec![Item::Real("t".into())]],
        };
        let before = structure.clone();
        let params = LayeredParams::default();
        let area = DrawingArea::new(10.0, 5.0);
        let mut pool = RemovalPool::default();
        let mut log = Vec::new();
        remove_layers_for_width(&mut structure, &mut g, &area, &params, &mut pool, &mut log)
            .unwrap();
        assert_eq!(structure, before);
    }
}
