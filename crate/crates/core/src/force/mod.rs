//! Force-directed pipeline for general graphs: iterative equilibria inside a
//! shrinking frame, with stress-driven removal of vertices and edges until the
//! drawing fits the prescribed area.

mod equilibrium;
mod forces;
mod frame;
mod preprocess;
mod stress;

pub use equilibrium::{
    compute_equilibrium, force_snapshot, initial_equilibrium, relax_equilibrium, warm_equilibrium,
    ActiveForces, EquilibriumResult, ForceSnapshot,
};
pub use forces::{
    force_attractive, force_edge_repulsion, force_frame_virtual, force_gravity, force_repulsive,
};
pub use frame::{shrink_frame, Frame};
pub use preprocess::{preprocess_by_weight, preprocess_keep_count};
pub use stress::{
    edge_stress, removal_step, vertex_pressure, vertex_stress, PressureReport, RemovalKind,
};

use std::collections::BTreeMap;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::geometry::{Point, Rect};
use crate::graph::WeightedGraph;
use crate::layout::{DrawingArea, DrawnEdge, EdgeGeometry, Layout};
use crate::metrics::{compute_metrics, CrossingWeightMode, RunMetrics};

/// Tuning parameters of the force pipeline. Lengths are in cm.
#[derive(Debug, Clone, PartialEq)]
pub struct ForceParams {
    /// Desired edge length; the central density control.
    pub l_unit: f64,
    /// Weights of the individual forces in the total force vector.
    pub alpha_repulsive: f64,
    pub alpha_attractive: f64,
    pub alpha_gravity: f64,
    pub alpha_edge: f64,
    pub alpha_frame: f64,
    /// Degree offset in the vertex stress denominator.
    pub c_deg: f64,
    /// Average-edge-length factor deciding vertex vs. edge removal.
    pub c_len: f64,
    /// Removal threshold on the minimum edge length (boundary distance).
    pub l_adj: f64,
    /// Removal threshold on the minimum nonadjacent vertex distance.
    pub l_nadj: f64,
    /// Preprocessing keep-count factor.
    pub c_pre: f64,
    /// Scale factor of a vertex's inner region for the edge-repulsion test.
    pub inner_fraction: f64,
    pub shrink_steps: usize,
    /// Per-iteration decay of the movement cap.
    pub cooling: f64,
    /// Convergence threshold on the maximum displacement per iteration.
    pub eps_move: f64,
    pub max_iterations: usize,
    /// Iteration budget of the warm relaxation after each removal; 0 batches
    /// all removals of one shrink step against static positions.
    pub relax_iterations: usize,
    /// Apply gravity only while computing the very first equilibrium.
    pub gravity_initial_only: bool,
    /// Compute every equilibrium twice: first without, then with the
    /// vertex-edge repulsion.
    pub two_phase_equilibrium: bool,
    /// Run the keep-N-heaviest preprocessing before the first equilibrium.
    pub preprocess: bool,
    pub crossing_weight_mode: CrossingWeightMode,
    pub seed: u64,
}

impl ForceParams {
    pub fn with_l_unit(l_unit: f64) -> ForceParams {
        ForceParams {
            l_unit,
            alpha_repulsive: 0.01,
            alpha_attractive: 0.01,
            alpha_gravity: 0.005,
            alpha_edge: 0.0075,
            alpha_frame: 0.01,
            c_deg: 0.5,
            c_len: 0.9,
            l_adj: 0.1 * l_unit,
            l_nadj: 0.15 * l_unit,
            c_pre: 0.7,
            inner_fraction: 0.5,
            shrink_steps: 25,
            cooling: 0.99,
            eps_move: 1e-3,
            max_iterations: 500,
            relax_iterations: 20,
            gravity_initial_only: true,
            two_phase_equilibrium: false,
            preprocess: true,
            crossing_weight_mode: CrossingWeightMode::Product,
            seed: 1,
        }
    }
}

impl Default for ForceParams {
    fn default() -> ForceParams {
        ForceParams::with_l_unit(2.0)
    }
}

/// One entry of the pipeline's removal log.
#[derive(Debug, Clone, PartialEq)]
pub struct RemovalEvent {
    pub shrink_step: usize,
    pub kind: RemovalKind,
    pub id: String,
    pub stress: f64,
}

impl std::fmt::Display for RemovalEvent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let kind = match self.kind {
            RemovalKind::Vertex => "vertex",
            RemovalKind::Edge => "edge",
        };
        write!(
            f,
            "step {}: removed {} {} (stress {:.6})",
            self.shrink_step, kind, self.id, self.stress
        )
    }
}

/// Result of a full force-pipeline run.
#[derive(Debug, Clone)]
pub struct ForceResult {
    pub subgraph: WeightedGraph,
    pub layout: Layout,
    pub metrics: RunMetrics,
    pub removals: Vec<RemovalEvent>,
    pub log: Vec<String>,
}

/// The input was reduced to nothing; carries the metrics of the empty result.
#[derive(Debug, Clone)]
pub struct EmptyResult {
    pub metrics: RunMetrics,
}

impl std::fmt::Display for EmptyResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "no vertex of the input fits the drawing area")
    }
}

impl std::error::Error for EmptyResult {}

pub(crate) fn positions_to_rects(
    graph: &WeightedGraph,
    positions: &BTreeMap<String, Point>,
) -> Vec<(String, Rect)> {
    graph
        .vertices()
        .iter()
        .map(|v| {
            let c = positions[&v.id];
            (v.id.clone(), Rect::new(c, v.width, v.height))
        })
        .collect()
}

/// Guard of the removal loop: does the current drawing violate the minimum
/// edge length or the minimum nonadjacent vertex distance? Both distances are
/// measured between rectangle boundaries.
pub fn removal_guard(
    graph: &WeightedGraph,
    positions: &BTreeMap<String, Point>,
    params: &ForceParams,
) -> bool {
    let rects = positions_to_rects(graph, positions);
    let rect_of: BTreeMap<&str, &Rect> =
        rects.iter().map(|(id, r)| (id.as_str(), r)).collect();
    for e in graph.edges() {
        let d = rect_of[e.src.as_str()].boundary_distance(rect_of[e.dst.as_str()]);
        if d < params.l_adj {
            return true;
        }
    }
    for i in 0..rects.len() {
        for j in (i + 1)..rects.len() {
            let (a, ra) = &rects[i];
            let (b, rb) = &rects[j];
            if graph.has_edge(a, b) || graph.has_edge(b, a) {
                continue;
            }
            if ra.boundary_distance(rb) < params.l_nadj {
                return true;
            }
        }
    }
    false
}

/// Mean edge length of the current drawing, measured like the removal
/// thresholds between the endpoint rectangles' boundaries; 0 for an edgeless
/// graph (which forces the vertex-removal branch). Center distances would be
/// bounded below by the label widths, which at desk-scale label sizes keeps
/// the mean above `c_len * l_unit` forever and starves every vertex removal.
pub fn average_edge_length(graph: &WeightedGraph, positions: &BTreeMap<String, Point>) -> f64 {
    if graph.edge_count() == 0 {
        return 0.0;
    }
    let total: f64 = graph
        .edges()
        .iter()
        .map(|e| {
            let u = graph.vertex(&e.src).expect("edge endpoint exists");
            let v = graph.vertex(&e.dst).expect("edge endpoint exists");
            Rect::new(positions[&e.src], u.width, u.height)
                .boundary_distance(&Rect::new(positions[&e.dst], v.width, v.height))
        })
        .sum();
    total / graph.edge_count() as f64
}

/// Seeded random start inside a square at the natural spread of the graph:
/// roughly one `l_unit x l_unit` cell plus box room per vertex. An arbitrary
/// (tangled) start is part of the contract; untangling is what the
/// equilibrium phases are for.
fn seeded_positions(
    graph: &WeightedGraph,
    params: &ForceParams,
    rng: &mut StdRng,
) -> BTreeMap<String, Point> {
    let n = graph.vertex_count().max(1);
    let avg_diag = graph
        .vertices()
        .iter()
        .map(|v| v.width.hypot(v.height))
        .sum::<f64>()
        / n as f64;
    let side = (n as f64).sqrt() * (params.l_unit + avg_diag) * 0.8;
    graph
        .vertices()
        .iter()
        .map(|v| {
            let x = rng.random_range(0.0..side);
            let y = rng.random_range(0.0..side);
            (v.id.clone(), Point::new(x, y))
        })
        .collect()
}

fn centroid(positions: &BTreeMap<String, Point>) -> Point {
    let n = positions.len().max(1) as f64;
    let sum = positions
        .values()
        .fold(Point::ZERO, |acc, p| acc.add(*p));
    sum.scale(1.0 / n)
}

fn drop_oversized(
    graph: &mut WeightedGraph,
    area: &DrawingArea,
    log: &mut Vec<String>,
) {
    for id in area.oversized_vertices(graph) {
        log.push(format!(
            "vertex {id} exceeds the drawing area and cannot be drawn; removed"
        ));
        graph.remove_vertex(&id);
    }
}

fn equilibrium_passes(
    graph: &WeightedGraph,
    positions: BTreeMap<String, Point>,
    frame: Option<&Frame>,
    params: &ForceParams,
    gravity: bool,
    gravity_center: Point,
    rng: &mut StdRng,
) -> EquilibriumResult {
    let base = ActiveForces {
        repulsive: true,
        attractive: true,
        gravity,
        edge_repulsion: !params.two_phase_equilibrium,
    };
    let first = warm_equilibrium(
        graph,
        positions,
        frame,
        params,
        base,
        gravity_center,
        rng,
    );
    if !params.two_phase_equilibrium {
        return first;
    }
    warm_equilibrium(
        graph,
        positions_from(first),
        frame,
        params,
        ActiveForces {
            edge_repulsion: true,
            ..base
        },
        gravity_center,
        rng,
    )
}

/// The very first equilibrium: long schedule, no frame, gravity active; the
/// two-phase flag applies here like everywhere else.
fn initial_passes(
    graph: &WeightedGraph,
    positions: BTreeMap<String, Point>,
    params: &ForceParams,
    gravity_center: Point,
    rng: &mut StdRng,
) -> EquilibriumResult {
    let base = ActiveForces {
        repulsive: true,
        attractive: true,
        gravity: true,
        edge_repulsion: !params.two_phase_equilibrium,
    };
    let first = initial_equilibrium(graph, positions, params, base, gravity_center, rng);
    if !params.two_phase_equilibrium {
        return first;
    }
    initial_equilibrium(
        graph,
        positions_from(first),
        params,
        ActiveForces {
            edge_repulsion: true,
            ..base
        },
        gravity_center,
        rng,
    )
}

fn positions_from(r: EquilibriumResult) -> BTreeMap<String, Point> {
    r.positions
}

/// Runs the whole force pipeline on an undirected graph.
///
/// Preprocess (optional), one free equilibrium with gravity, then shrink the
/// bounding-box frame towards the area over `shrink_steps` steps; at each step
/// vertices are pushed back inside, an equilibrium is computed, and vertices
/// or edges are removed while the drawing is too dense. After the final step
/// the removal loop and equilibrium alternate until the drawing is clean.
pub fn run_force_pipeline(
    input: &WeightedGraph,
    area: &DrawingArea,
    params: &ForceParams,
) -> Result<ForceResult, EmptyResult> {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(params.seed);
    let mut log: Vec<String> = Vec::new();
    let mut removals: Vec<RemovalEvent> = Vec::new();

    let mut graph = input.clone();
    drop_oversized(&mut graph, area, &mut log);
    if params.preprocess {
        let before = graph.vertex_count();
        graph = preprocess_by_weight(&graph, area, params);
        if graph.vertex_count() < before {
            log.push(format!(
                "preprocessing kept the {} heaviest of {} vertices",
                graph.vertex_count(),
                before
            ));
        }
    }
    if graph.vertex_count() == 0 {
        return Err(empty_result(input, started));
    }

    let mut positions = seeded_positions(&graph, params, &mut rng);
    let spread_center = centroid(&positions);
    let eq = initial_passes(&graph, positions, params, spread_center, &mut rng);
    positions = eq.positions;

    let mut frame = Frame::bounding(&graph, &positions, area);
    let initial_frame = frame.clone();

    for step in 1..=params.shrink_steps {
        frame = shrink_frame(&initial_frame, area, step, params.shrink_steps);
        frame.push_inside(&graph, &mut positions);
        let gravity = !params.gravity_initial_only;
        let eq = equilibrium_passes(
            &graph,
            positions,
            Some(&frame),
            params,
            gravity,
            frame.rect.center,
            &mut rng,
        );
        positions = eq.positions;
        let mut snapshot = eq.forces;
        // Removal loop. An edge removal leaves every position in place, so
        // only the stress bookkeeping refreshes; a vertex removal perturbs
        // its neighborhood and earns one short relaxation before the guard
        // is consulted again.
        while removal_guard(&graph, &positions, params) {
            let removal = removal_step(&graph, &positions, &snapshot, params);
            let was_vertex = removal.kind == RemovalKind::Vertex;
            apply_removal(&mut graph, &mut positions, &removal, step, &mut removals);
            if graph.vertex_count() == 0 {
                return Err(empty_result(input, started));
            }
            if params.relax_iterations > 0 {
                let relax = relax_equilibrium(
                    &graph,
                    positions,
                    Some(&frame),
                    params,
                    ActiveForces {
                        repulsive: true,
                        attractive: true,
                        gravity: gravity && !params.gravity_initial_only,
                        edge_repulsion: false,
                    },
                    frame.rect.center,
                    &mut rng,
                );
                positions = relax.positions;
            }
            if was_vertex {
                snapshot = equilibrium::force_snapshot(
                    &graph,
                    &positions,
                    Some(&frame),
                    params,
                    ActiveForces {
                        repulsive: true,
                        attractive: true,
                        gravity: gravity && !params.gravity_initial_only,
                        edge_repulsion: true,
                    },
                    frame.rect.center,
                    &mut rng,
                );
            }
        }
        let eq = equilibrium_passes(
            &graph,
            positions,
            Some(&frame),
            params,
            gravity,
            frame.rect.center,
            &mut rng,
        );
        positions = eq.positions;
    }

    // The final equilibrium may have re-tightened the drawing; alternate
    // removal and relaxation until the guard is satisfied by the final state.
    let mut snapshot = equilibrium::force_snapshot(
        &graph,
        &positions,
        Some(&frame),
        params,
        ActiveForces {
            repulsive: true,
            attractive: true,
            gravity: !params.gravity_initial_only,
            edge_repulsion: true,
        },
        frame.rect.center,
        &mut rng,
    );
    while removal_guard(&graph, &positions, params) {
        let removal = removal_step(&graph, &positions, &snapshot, params);
        let was_vertex = removal.kind == RemovalKind::Vertex;
        apply_removal(
            &mut graph,
            &mut positions,
            &removal,
            params.shrink_steps,
            &mut removals,
        );
        if graph.vertex_count() == 0 {
            return Err(empty_result(input, started));
        }
        if was_vertex {
            if params.relax_iterations > 0 {
                let relax = relax_equilibrium(
                    &graph,
                    positions,
                    Some(&frame),
                    params,
                    ActiveForces {
                        repulsive: true,
                        attractive: true,
                        gravity: !params.gravity_initial_only,
                        edge_repulsion: false,
                    },
                    frame.rect.center,
                    &mut rng,
                );
                positions = relax.positions;
            }
            snapshot = equilibrium::force_snapshot(
                &graph,
                &positions,
                Some(&frame),
                params,
                ActiveForces {
                    repulsive: true,
                    attractive: true,
                    gravity: !params.gravity_initial_only,
                    edge_repulsion: true,
                },
                frame.rect.center,
                &mut rng,
            );
        }
    }

    // Translate so the final frame coincides with [0,W] x [0,H].
    let offset = Point::new(
        area.width / 2.0 - frame.rect.center.x,
        area.height / 2.0 - frame.rect.center.y,
    );
    for p in positions.values_mut() {
        *p = p.add(offset);
    }

    let layout = Layout {
        positions: positions.clone(),
        edges: graph
            .edges()
            .iter()
            .map(|e| DrawnEdge {
                src: e.src.clone(),
                dst: e.dst.clone(),
                geometry: EdgeGeometry::Straight,
                stroke_width: None,
                reverted: false,
            })
            .collect(),
    };
    let metrics = compute_metrics(
        input,
        &graph,
        &layout,
        Some(started.elapsed().as_secs_f64()),
        params.crossing_weight_mode,
    )
    .expect("pipeline output is a subgraph of its input");
    for r in &removals {
        log.push(r.to_string());
    }
    Ok(ForceResult {
        subgraph: graph,
        layout,
        metrics,
        removals,
        log,
    })
}

fn apply_removal(
    graph: &mut WeightedGraph,
    positions: &mut BTreeMap<String, Point>,
    removal: &stress::Removal,
    step: usize,
    removals: &mut Vec<RemovalEvent>,
) {
    match removal.kind {
        RemovalKind::Vertex => {
            graph.remove_vertex(&removal.id);
            positions.remove(&removal.id);
        }
        RemovalKind::Edge => {
            let (src, dst) = removal
                .edge
                .clone()
                .expect("edge removal carries its endpoints");
            graph.remove_edge(&src, &dst);
        }
    }
    removals.push(RemovalEvent {
        shrink_step: step,
        kind: removal.kind,
        id: removal.id.clone(),
        stress: removal.stress,
    });
}

fn empty_result(input: &WeightedGraph, started: Instant) -> EmptyResult {
    let empty = WeightedGraph::new(input.directed);
    let metrics = compute_metrics(
        input,
        &empty,
        &Layout::default(),
        Some(started.elapsed().as_secs_f64()),
        CrossingWeightMode::Product,
    )
    .expect("empty graph is a subgraph");
    EmptyResult { metrics }
}

/// Lays the graph out with the full shrink schedule but without any removals,
/// then reports whether the result satisfies the containment and separation
/// requirements. This is the feasibility check used by the subset oracle.
pub fn layout_attempt(
    graph: &WeightedGraph,
    area: &DrawingArea,
    params: &ForceParams,
) -> (Layout, bool) {
    let mut rng = StdRng::seed_from_u64(params.seed);
    if graph.vertex_count() == 0 {
        return (Layout::default(), true);
    }
    if !area.oversized_vertices(graph).is_empty() {
        return (Layout::default(), false);
    }
    let mut positions = seeded_positions(graph, params, &mut rng);
    let spread_center = centroid(&positions);
    let eq = initial_passes(graph, positions, params, spread_center, &mut rng);
    positions = eq.positions;
    let mut frame = Frame::bounding(graph, &positions, area);
    let initial_frame = frame.clone();
    for step in 1..=params.shrink_steps {
        frame = shrink_frame(&initial_frame, area, step, params.shrink_steps);
        frame.push_inside(graph, &mut positions);
        let eq = equilibrium_passes(
            graph,
            positions,
            Some(&frame),
            params,
            !params.gravity_initial_only,
            frame.rect.center,
            &mut rng,
        );
        positions = eq.positions;
    }
    let feasible = !removal_guard(graph, &positions, params);
    let offset = Point::new(
        area.width / 2.0 - frame.rect.center.x,
        area.height / 2.0 - frame.rect.center.y,
    );
    for p in positions.values_mut() {
        *p = p.add(offset);
    }
    let layout = Layout {
        positions,
        edges: graph
            .edges()
            .iter()
            .map(|e| DrawnEdge {
                src: e.src.clone(),
                dst: e.dst.clone(),
                geometry: EdgeGeometry::Straight,
                stroke_width: None,
                reverted: false,
            })
            .collect(),
    };
    (layout, feasible)
}
