//! Layered pipeline for directed calculation graphs: cycle breaking, layer
//! assignment, importance-driven removal, weighted crossing minimization,
//! reinsertion, and orthogonal or cubic-Bézier edge routing, all constrained
//! to the prescribed drawing area.

mod coords;
mod cycles;
mod layering;
mod ordering;
mod removal;
mod routing;

pub use coords::{apply_gaps_and_repair, assign_coordinates, reinsert_vertices};
pub use cycles::{break_cycles, CycleMode, CycleObjective};
pub use layering::{
    assign_layers, insert_dummies, longest_path_length, structure_is_proper, LayeringMethod,
};
pub use ordering::{count_structure_crossings, minimize_crossings, CrossingMethod};
pub use removal::{
    edge_importance, layer_importance, remove_edges_to_budget, remove_layers_for_width,
    remove_vertices_for_height, transfer_weight, vertex_importance,
};
pub use routing::{route_edges, to_cubic_bezier, RoutingPlan};

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;
use std::time::Instant;

use crate::graph::{Vertex, WeightedGraph};
use crate::layout::{DrawingArea, Layout};
use crate::metrics::{compute_metrics, CrossingWeightMode, RunMetrics};

/// Port placement on vertex sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PortMode {
    /// One shared port per vertex side.
    Single,
    /// An own port per edge, ordered by the target's vertical position.
    PerEdge,
}

/// Tuning parameters of the layered pipeline. Lengths are in cm.
#[derive(Debug, Clone, PartialEq)]
pub struct LayeredParams {
    /// Horizontal gap between adjacent layers.
    pub layer_gap: f64,
    /// Vertical gap between two vertices in a layer.
    pub gap_vv: f64,
    /// Vertical gap involving an edge (dummy) item.
    pub gap_ee: f64,
    /// Vertical gap between two dummies that continue in parallel.
    pub gap_parallel: f64,
    /// Maximum tolerated crossings before edges are removed; `None` disables
    /// the edge-removal stage.
    pub crossing_budget: Option<usize>,
    /// Stroke width = coeff * w(e)^(1/3), clamped to [min, max].
    pub edge_width_coeff: f64,
    pub edge_width_min: f64,
    pub edge_width_max: f64,
    pub port_mode: PortMode,
    pub crossing_method: CrossingMethod,
    /// Rounds of alternating left-to-right / right-to-left sweeps.
    pub sweeps: usize,
    pub cycle_mode: CycleMode,
    pub cycle_objective: CycleObjective,
    /// Branch node budget of the exact cycle breaker before it falls back.
    pub cycle_node_budget: usize,
    /// Preprocessing weight cutoff; 0 disables the preprocessing.
    pub threshold: f64,
    pub layering: LayeringMethod,
    /// Iterations of the 1-D vertical-segment relaxation.
    pub relax_iterations: usize,
    /// Draw inter-layer hops as cubic Bézier curves instead of orthogonal
    /// polylines.
    pub bezier: bool,
    pub crossing_weight_mode: CrossingWeightMode,
    pub seed: u64,
}

impl Default for LayeredParams {
    fn default() -> LayeredParams {
        LayeredParams {
            layer_gap: 1.0,
            gap_vv: 0.5,
            gap_ee: 0.25,
            gap_parallel: 0.1,
            crossing_budget: None,
            edge_width_coeff: 0.05,
            edge_width_min: 0.02,
            edge_width_max: 0.3,
            port_mode: PortMode::PerEdge,
            crossing_method: CrossingMethod::AdjacentExchangeWeighted,
            sweeps: 4,
            cycle_mode: CycleMode::Exact,
            cycle_objective: CycleObjective::Weight,
            cycle_node_budget: 1_000_000,
            threshold: 0.0,
            layering: LayeringMethod::CoffmanGraham,
            relax_iterations: 100,
            bezier: false,
            crossing_weight_mode: CrossingWeightMode::Product,
            seed: 1,
        }
    }
}

/// Stable identifier of a working edge; survives removals and reorderings.
pub type EdgeId = u64;

/// Edge of the working graph, stored in left-to-right drawing orientation.
#[derive(Debug, Clone, PartialEq)]
pub struct WorkEdge {
    pub id: EdgeId,
    pub src: String,
    pub dst: String,
    pub weight: f64,
    /// The input edge runs dst -> src; it is drawn reversed.
    pub reverted: bool,
    /// Created by weight transfer; not part of the input graph.
    pub synthetic: bool,
}

/// Working graph of the layered pipeline. Unlike the input graph it allows
/// parallel edges (an original edge plus a reverted antiparallel one) and
/// synthetic transfer edges.
#[derive(Debug, Clone, Default)]
pub struct CalcGraph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<WorkEdge>,
    pub start: String,
    next_edge_id: EdgeId,
}

impl CalcGraph {
    pub fn from_graph(g: &WeightedGraph) -> Result<CalcGraph, LayeredError> {
        if !g.directed {
            return Err(LayeredError::NotDirected);
        }
        let start = g.start.clone().ok_or(LayeredError::MissingStart)?;
        let mut cg = CalcGraph {
            vertices: g.vertices().to_vec(),
            edges: Vec::new(),
            start,
            next_edge_id: 0,
        };
        for e in g.edges() {
            cg.push_edge(e.src.clone(), e.dst.clone(), e.weight, false, false);
        }
        Ok(cg)
    }

    pub fn push_edge(
        &mut self,
        src: String,
        dst: String,
        weight: f64,
        reverted: bool,
        synthetic: bool,
    ) -> EdgeId {
        let id = self.next_edge_id;
        self.next_edge_id += 1;
        self.edges.push(WorkEdge {
            id,
            src,
            dst,
            weight,
            reverted,
            synthetic,
        });
        id
    }

    pub fn vertex(&self, id: &str) -> Option<&Vertex> {
        self.vertices.iter().find(|v| v.id == id)
    }

    pub fn edge(&self, id: EdgeId) -> Option<&WorkEdge> {
        self.edges.iter().find(|e| e.id == id)
    }

    pub fn edge_mut(&mut self, id: EdgeId) -> Option<&mut WorkEdge> {
        self.edges.iter_mut().find(|e| e.id == id)
    }

    pub fn out_edges<'a>(&'a self, v: &'a str) -> impl Iterator<Item = &'a WorkEdge> + 'a {
        self.edges.iter().filter(move |e| e.src == v)
    }

    pub fn in_edges<'a>(&'a self, v: &'a str) -> impl Iterator<Item = &'a WorkEdge> + 'a {
        self.edges.iter().filter(move |e| e.dst == v)
    }

    /// Vertices reachable from the start vertex. Synthetic transfer edges are
    /// pure weight bookkeeping and never carry reachability: a vertex only
    /// counts as connected through edges that are actually drawn.
    pub fn reachable(&self) -> HashSet<String> {
        let mut seen: HashSet<String> = HashSet::new();
        if !self.vertices.iter().any(|v| v.id == self.start) {
            return seen;
        }
        let mut queue = VecDeque::new();
        seen.insert(self.start.clone());
        queue.push_back(self.start.clone());
        while let Some(u) = queue.pop_front() {
            for e in self.edges.iter().filter(|e| e.src == u && !e.synthetic) {
                if seen.insert(e.dst.clone()) {
                    queue.push_back(e.dst.clone());
                }
            }
        }
        seen
    }

    /// Edges that appear in the drawing (everything except synthetic
    /// transfer edges).
    pub fn drawn_edges(&self) -> impl Iterator<Item = &WorkEdge> + '_ {
        self.edges.iter().filter(|e| !e.synthetic)
    }

    pub fn is_acyclic(&self) -> bool {
        let mut indeg: BTreeMap<&str, usize> =
            self.vertices.iter().map(|v| (v.id.as_str(), 0)).collect();
        for e in &self.edges {
            *indeg.get_mut(e.dst.as_str()).unwrap() += 1;
        }
        let mut queue: VecDeque<&str> = indeg
            .iter()
            .filter(|(_, d)| **d == 0)
            .map(|(v, _)| *v)
            .collect();
        let mut seen = 0;
        while let Some(u) = queue.pop_front() {
            seen += 1;
            for e in self.edges.iter().filter(|e| e.src == u) {
                let d = indeg.get_mut(e.dst.as_str()).unwrap();
                *d -= 1;
                if *d == 0 {
                    queue.push_back(e.dst.as_str());
                }
            }
        }
        seen == self.vertices.len()
    }

    /// Deterministic topological order (Kahn, smallest id first).
    pub fn topo_order(&self) -> Vec<String> {
        let mut indeg: BTreeMap<&str, usize> =
            self.vertices.iter().map(|v| (v.id.as_str(), 0)).collect();
        for e in &self.edges {
            *indeg.get_mut(e.dst.as_str()).unwrap() += 1;
        }
        let mut ready: Vec<&str> = indeg
            .iter()
            .filter(|(_, d)| **d == 0)
            .map(|(v, _)| *v)
            .collect();
        ready.sort_unstable();
        let mut order = Vec::with_capacity(self.vertices.len());
        while let Some(u) = ready.pop() {
            order.push(u.to_string());
            let mut newly = Vec::new();
            for e in self.edges.iter().filter(|e| e.src == u) {
                let d = indeg.get_mut(e.dst.as_str()).unwrap();
                *d -= 1;
                if *d == 0 {
                    newly.push(e.dst.as_str());
                }
            }
            ready.extend(newly);
            ready.sort_unstable();
            ready.reverse();
            ready.dedup();
            ready.reverse();
        }
        order
    }

    /// Drops a vertex with its incident edges.
    pub fn remove_vertex(&mut self, id: &str) {
        self.vertices.retain(|v| v.id != id);
        self.edges.retain(|e| e.src != id && e.dst != id);
    }

    pub fn remove_edge(&mut self, id: EdgeId) {
        self.edges.retain(|e| e.id != id);
    }
}

/// One slot in a layer: a real vertex or a dummy carrying an edge through.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Item {
    Real(String),
    Dummy { edge: EdgeId },
}

impl Item {
    pub fn as_real(&self) -> Option<&str> {
        match self {
            Item::Real(id) => Some(id),
            Item::Dummy { .. } => None,
        }
    }
}

/// Ordered layers (left to right) of vertically ordered items (top to bottom).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LayerStructure {
    pub layers: Vec<Vec<Item>>,
}

impl LayerStructure {
    pub fn layer_of(&self, id: &str) -> Option<usize> {
        self.layers
            .iter()
            .position(|layer| layer.iter().any(|it| it.as_real() == Some(id)))
    }

    pub fn real_count(&self) -> usize {
        self.layers
            .iter()
            .map(|l| l.iter().filter(|it| it.as_real().is_some()).count())
            .sum()
    }

    pub fn real_ids(&self) -> Vec<String> {
        self.layers
            .iter()
            .flat_map(|l| l.iter().filter_map(|it| it.as_real().map(str::to_string)))
            .collect()
    }

    /// Position of an item within its layer, keyed by identity.
    pub fn position_in_layer(&self, layer: usize, item: &Item) -> Option<usize> {
        self.layers[layer].iter().position(|it| it == item)
    }

    /// Drops empty layers.
    pub fn prune_empty(&mut self) {
        self.layers.retain(|l| !l.is_empty());
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LayeredError {
    NotDirected,
    MissingStart,
    /// The start vertex alone cannot satisfy the area constraint.
    StartInfeasible(String),
    EmptyAfterPreprocess,
}

impl fmt::Display for LayeredError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LayeredError::NotDirected => write!(f, "layered mode needs a directed graph"),
            LayeredError::MissingStart => write!(f, "layered mode needs a `start` vertex"),
            LayeredError::StartInfeasible(why) => {
                write!(f, "start vertex cannot be drawn: {why}")
            }
            LayeredError::EmptyAfterPreprocess => {
                write!(f, "preprocessing removed every vertex")
            }
        }
    }
}

impl std::error::Error for LayeredError {}

/// Result of a full layered-pipeline run.
#[derive(Debug, Clone)]
pub struct LayeredResult {
    pub subgraph: WeightedGraph,
    pub layout: Layout,
    pub metrics: RunMetrics,
    pub structure: LayerStructure,
    pub routing: RoutingPlan,
    /// Drawn edges whose input orientation was reversed.
    pub reverted_edges: Vec<(String, String)>,
    pub log: Vec<String>,
}

/// Runs the whole layered pipeline on a directed graph with a start vertex.
pub fn run_layered_pipeline(
    input: &WeightedGraph,
    area: &DrawingArea,
    params: &LayeredParams,
) -> Result<LayeredResult, LayeredError> {
    let started = Instant::now();
    let mut log: Vec<String> = Vec::new();
    let mut graph = CalcGraph::from_graph(input)?;

    let start_vertex = graph
        .vertex(&graph.start.clone())
        .ok_or(LayeredError::MissingStart)?
        .clone();
    if start_vertex.height > area.height {
        return Err(LayeredError::StartInfeasible(format!(
            "height {} exceeds the area height {}",
            start_vertex.height, area.height
        )));
    }
    if start_vertex.width > area.width {
        return Err(LayeredError::StartInfeasible(format!(
            "width {} exceeds the area width {}",
            start_vertex.width, area.width
        )));
    }

    // Input hygiene: anything unreachable from the start can never be drawn.
    drop_unreachable(&mut graph, &mut log, "input");

    if params.threshold > 0.0 {
        let before_v = graph.vertices.len();
        let before_e = graph.edges.len();
        let start = graph.start.clone();
        graph
            .vertices
            .retain(|v| v.weight >= params.threshold || v.id == start);
        let kept: HashSet<String> = graph.vertices.iter().map(|v| v.id.clone()).collect();
        graph.edges.retain(|e| {
            e.weight >= params.threshold && kept.contains(&e.src) && kept.contains(&e.dst)
        });
        drop_unreachable(&mut graph, &mut log, "preprocess");
        log.push(format!(
            "preprocess (threshold {}): kept {}/{} vertices, {}/{} edges",
            params.threshold,
            graph.vertices.len(),
            before_v,
            graph.edges.len(),
            before_e
        ));
    }
    if graph.vertices.is_empty() {
        return Err(LayeredError::EmptyAfterPreprocess);
    }

    let reverted = break_cycles(
        &mut graph,
        params.cycle_mode,
        params.cycle_objective,
        params.cycle_node_budget,
        &mut log,
    );
    if !reverted.is_empty() {
        log.push(format!("reverted {} edges to break cycles", reverted.len()));
    }
    debug_assert!(graph.is_acyclic());

    let k = longest_path_length(&graph);
    let n_max = graph.vertices.len().div_ceil(k.max(1));
    let mut structure = assign_layers(&graph, params.layering, n_max);

    let mut pool = removal::RemovalPool::default();
    remove_vertices_for_height(&mut structure, &mut graph, area, params, &mut pool, &mut log)?;
    remove_layers_for_width(&mut structure, &mut graph, area, params, &mut pool, &mut log)?;
    structure.prune_empty();
    insert_dummies(&mut structure, &graph);

    minimize_crossings(&mut structure, &graph, params.crossing_method, params.sweeps);
    if let Some(budget) = params.crossing_budget {
        remove_edges_to_budget(&mut structure, &mut graph, budget, params, &mut log);
        drop_unreachable_structured(&mut structure, &mut graph, &mut log);
    }
    apply_gaps_and_repair(&mut structure, &mut graph, area, params, &mut pool, &mut log)?;
    reinsert_vertices(&mut structure, &mut graph, area, params, &mut pool, &mut log);
    structure.prune_empty();

    let positions = assign_coordinates(&structure, &graph, area, params);
    let (routing, mut layout) = route_edges(&structure, &graph, &positions, area, params);
    if params.bezier {
        to_cubic_bezier(&mut layout, &routing, &structure, &graph, &positions, area, params);
    }

    // The returned subgraph projects onto the input: retained vertices plus
    // retained non-synthetic edges with their original weights/orientation.
    let kept: HashSet<String> = graph.vertices.iter().map(|v| v.id.clone()).collect();
    let mut subgraph = input.induced_subgraph(&kept);
    let drawn_original: HashSet<(String, String)> = graph
        .edges
        .iter()
        .filter(|e| !e.synthetic)
        .map(|e| {
            if e.reverted {
                (e.dst.clone(), e.src.clone())
            } else {
                (e.src.clone(), e.dst.clone())
            }
        })
        .collect();
    let to_drop: Vec<(String, String)> = subgraph
        .edges()
        .iter()
        .filter(|e| !drawn_original.contains(&(e.src.clone(), e.dst.clone())))
        .map(|e| (e.src.clone(), e.dst.clone()))
        .collect();
    for (src, dst) in to_drop {
        subgraph.remove_edge(&src, &dst);
    }

    let mut metrics = compute_metrics(
        input,
        &subgraph,
        &layout,
        Some(started.elapsed().as_secs_f64()),
        params.crossing_weight_mode,
    )
    .expect("layered output is a subgraph of its input");
    // Crossing weight uses the working weights (boosted by transfer and
    // including synthetic edges), which the generic lookup cannot see.
    let (crossings, crossing_weight) =
        routing::count_routed_crossings(&routing, &graph, params.crossing_weight_mode);
    metrics.crossings = crossings;
    metrics.crossing_weight = crossing_weight;

    let reverted_edges: Vec<(String, String)> = graph
        .edges
        .iter()
        .filter(|e| e.reverted)
        .map(|e| (e.src.clone(), e.dst.clone()))
        .collect();
    for (src, dst) in &reverted_edges {
        log.push(format!("edge {dst} -> {src} drawn reverted as {src} -> {dst}"));
    }

    Ok(LayeredResult {
        subgraph,
        layout,
        metrics,
        structure,
        routing,
        reverted_edges,
        log,
    })
}

fn drop_unreachable(graph: &mut CalcGraph, log: &mut Vec<String>, stage: &str) {
    let reachable = graph.reachable();
    let doomed: Vec<String> = graph
        .vertices
        .iter()
        .filter(|v| !reachable.contains(&v.id))
        .map(|v| v.id.clone())
        .collect();
    for id in &doomed {
        graph.remove_vertex(id);
    }
    if !doomed.is_empty() {
        log.push(format!(
            "{stage}: dropped {} vertices unreachable from {}",
            doomed.len(),
            graph.start
        ));
    }
}

/// Reachability cleanup that also maintains the layer structure.
pub(crate) fn drop_unreachable_structured(
    structure: &mut LayerStructure,
    graph: &mut CalcGraph,
    log: &mut Vec<String>,
) {
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
        graph.remove_vertex(id);
    }
    let alive: HashSet<EdgeId> = graph.edges.iter().map(|e| e.id).collect();
    for layer in &mut structure.layers {
        layer.retain(|it| match it {
            Item::Real(id) => !doomed.contains(id),
            Item::Dummy { edge } => alive.contains(edge),
        });
    }
    log.push(format!(
        "reachability: dropped {} vertices cut off from {}",
        doomed.len(),
        graph.start
    ));
}
