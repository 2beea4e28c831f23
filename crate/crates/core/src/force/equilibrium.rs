//! Cooled force iteration. Positions move along the weighted total force,
//! capped by a decaying temperature, and are clipped so every vertex rectangle
//! stays inside the active frame.

use std::collections::BTreeMap;

use rand::rngs::StdRng;
use rand::Rng;

use super::forces::{
    force_attractive, force_edge_repulsion, force_frame_virtual, force_gravity, force_repulsive,
};
use super::{ForceParams, Frame};
use crate::geometry::{Point, Rect, Segment};
use crate::graph::WeightedGraph;

/// Which forces contribute to the motion in one equilibrium computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ActiveForces {
    pub repulsive: bool,
    pub attractive: bool,
    pub gravity: bool,
    pub edge_repulsion: bool,
}

/// Per-vertex force vectors of the final iteration (weighted, including the
/// virtual frame force), as consumed by the pressure computation.
pub type ForceSnapshot = BTreeMap<String, Vec<Point>>;

#[derive(Debug, Clone)]
pub struct EquilibriumResult {
    pub positions: BTreeMap<String, Point>,
    pub forces: ForceSnapshot,
    pub converged: bool,
    pub iterations: usize,
}

/// Index-based view of the graph for the inner iteration loop.
struct Workspace<'g> {
    ids: Vec<&'g str>,
    sizes: Vec<(f64, f64)>,
    edges: Vec<(usize, usize)>,
    pos: Vec<Point>,
}

impl<'g> Workspace<'g> {
    fn new(graph: &'g WeightedGraph, positions: &BTreeMap<String, Point>) -> Workspace<'g> {
        let ids: Vec<&str> = graph.vertices().iter().map(|v| v.id.as_str()).collect();
        let index: BTreeMap<&str, usize> =
            ids.iter().enumerate().map(|(i, id)| (*id, i)).collect();
        Workspace {
            sizes: graph
                .vertices()
                .iter()
                .map(|v| (v.width, v.height))
                .collect(),
            edges: graph
                .edges()
                .iter()
                .map(|e| (index[e.src.as_str()], index[e.dst.as_str()]))
                .collect(),
            pos: ids.iter().map(|id| positions[*id]).collect(),
            ids,
        }
    }

    /// Nudges exactly coincident vertices apart so force directions are
    /// defined: the lexicographically larger vertex moves 1e-6 cm in a seeded
    /// random direction.
    fn separate_coincident(&mut self, rng: &mut StdRng) {
        for i in 0..self.pos.len() {
            for j in (i + 1)..self.pos.len() {
                if self.pos[i] == self.pos[j] {
                    let angle = rng.random_range(0.0..std::f64::consts::TAU);
                    let larger = if self.ids[i] > self.ids[j] { i } else { j };
                    self.pos[larger] = self.pos[larger]
                        .add(Point::new(angle.cos(), angle.sin()).scale(1e-6));
                }
            }
        }
    }

    /// Accumulates the weighted total motion force per vertex. The virtual
    /// frame force is excluded: it never moves vertices.
    fn total_forces(
        &self,
        params: &ForceParams,
        active: ActiveForces,
        gravity_center: Point,
        rng: &mut StdRng,
    ) -> Vec<Point> {
        let n = self.pos.len();
        let mut total = vec![Point::ZERO; n];
        if active.repulsive {
            for i in 0..n {
                for j in (i + 1)..n {
                    let f = force_repulsive(self.pos[j], self.pos[i], params.l_unit)
                        .scale(params.alpha_repulsive);
                    total[i] = total[i].add(f);
                    total[j] = total[j].sub(f);
                }
            }
        }
        if active.attractive {
            for &(a, b) in &self.edges {
                let f = force_attractive(self.pos[a], self.pos[b], params.l_unit)
                    .scale(params.alpha_attractive);
                total[b] = total[b].add(f);
                total[a] = total[a].sub(f);
            }
        }
        if active.gravity {
            for i in 0..n {
                total[i] = total[i].add(
                    force_gravity(self.pos[i], gravity_center).scale(params.alpha_gravity),
                );
            }
        }
        if active.edge_repulsion {
            // Box prefilter: the force needs the segment inside the vertex
            // rectangle, so anything outside the fattened segment bbox is out.
            let boxes: Vec<(f64, f64, f64, f64)> = self
                .edges
                .iter()
                .map(|&(a, b)| {
                    (
                        self.pos[a].x.min(self.pos[b].x),
                        self.pos[a].x.max(self.pos[b].x),
                        self.pos[a].y.min(self.pos[b].y),
                        self.pos[a].y.max(self.pos[b].y),
                    )
                })
                .collect();
            for i in 0..n {
                let (w, h) = self.sizes[i];
                let rect = Rect::new(self.pos[i], w, h);
                let (px, py) = (self.pos[i].x, self.pos[i].y);
                for (ei, &(a, b)) in self.edges.iter().enumerate() {
                    if a == i || b == i {
                        continue;
                    }
                    let (minx, maxx, miny, maxy) = boxes[ei];
                    if px + w / 2.0 < minx
                        || px - w / 2.0 > maxx
                        || py + h / 2.0 < miny
                        || py - h / 2.0 > maxy
                    {
                        continue;
                    }
                    let seg = Segment::new(self.pos[a], self.pos[b]);
                    let f = force_edge_repulsion(
                        &rect,
                        &seg,
                        params.l_unit,
                        params.inner_fraction,
                        || perpendicular_tie(&seg, rng),
                    )
                    .scale(params.alpha_edge);
                    total[i] = total[i].add(f);
                }
            }
        }
        total
    }
}

/// Random perpendicular side of a segment, for the degenerate case of an edge
/// passing exactly through a vertex center.
fn perpendicular_tie(seg: &Segment, rng: &mut StdRng) -> Point {
    let along = seg.b.sub(seg.a);
    if along.norm() == 0.0 {
        return Point::new(1.0, 0.0);
    }
    let perp = Point::new(-along.y, along.x).scale(1.0 / along.norm());
    if rng.random_range(0..2) == 0 {
        perp
    } else {
        perp.scale(-1.0)
    }
}

/// Evaluates all active forces at the given positions. Returns, per vertex,
/// the list of weighted per-source vectors, with the virtual frame force
/// appended when a frame is present. Used for the pressure computation.
pub fn force_snapshot(
    graph: &WeightedGraph,
    positions: &BTreeMap<String, Point>,
    frame: Option<&Frame>,
    params: &ForceParams,
    active: ActiveForces,
    gravity_center: Point,
    rng: &mut StdRng,
) -> ForceSnapshot {
    let ws = Workspace::new(graph, positions);
    let n = ws.pos.len();
    let mut out: Vec<Vec<Point>> = vec![Vec::new(); n];
    if active.repulsive {
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                out[i].push(
                    force_repulsive(ws.pos[j], ws.pos[i], params.l_unit)
                        .scale(params.alpha_repulsive),
                );
            }
        }
    }
    if active.attractive {
        for &(a, b) in &ws.edges {
            out[b].push(
                force_attractive(ws.pos[a], ws.pos[b], params.l_unit)
                    .scale(params.alpha_attractive),
            );
            out[a].push(
                force_attractive(ws.pos[b], ws.pos[a], params.l_unit)
                    .scale(params.alpha_attractive),
            );
        }
    }
    if active.gravity {
        for i in 0..n {
            out[i].push(force_gravity(ws.pos[i], gravity_center).scale(params.alpha_gravity));
        }
    }
    if active.edge_repulsion {
        for i in 0..n {
            let rect = Rect::new(ws.pos[i], ws.sizes[i].0, ws.sizes[i].1);
            for &(a, b) in &ws.edges {
                if a == i || b == i {
                    continue;
                }
                let seg = Segment::new(ws.pos[a], ws.pos[b]);
                let f = force_edge_repulsion(
                    &rect,
                    &seg,
                    params.l_unit,
                    params.inner_fraction,
                    || perpendicular_tie(&seg, rng),
                )
                .scale(params.alpha_edge);
                if f != Point::ZERO {
                    out[i].push(f);
                }
            }
        }
    }
    if let Some(frame) = frame {
        for i in 0..n {
            out[i].push(
                force_frame_virtual(ws.pos[i], &frame.rect, params.l_unit)
                    .scale(params.alpha_frame),
            );
        }
    }
    ws.ids
        .iter()
        .zip(out)
        .map(|(id, forces)| (id.to_string(), forces))
        .collect()
}

/// Iterates the cooled force step until the maximum displacement falls below
/// `eps_move` or the iteration budget is exhausted. When a frame is given,
/// every intermediate position keeps the vertex rectangle fully inside it
/// (movements are clipped, never rescaled).
pub fn compute_equilibrium(
    graph: &WeightedGraph,
    positions: BTreeMap<String, Point>,
    frame: Option<&Frame>,
    params: &ForceParams,
    active: ActiveForces,
    gravity_center: Point,
    rng: &mut StdRng,
) -> EquilibriumResult {
    equilibrate(
        graph,
        positions,
        frame,
        params,
        active,
        gravity_center,
        rng,
        params.l_unit,
        params.max_iterations,
        params.cooling,
    )
}

/// Long-schedule equilibrium for the very first (cold, tangled) layout: four
/// times the iteration budget with the cooling profile stretched to match,
/// so the random start can actually untangle before the frame goes to work.
pub fn initial_equilibrium(
    graph: &WeightedGraph,
    positions: BTreeMap<String, Point>,
    params: &ForceParams,
    active: ActiveForces,
    gravity_center: Point,
    rng: &mut StdRng,
) -> EquilibriumResult {
    equilibrate(
        graph,
        positions,
        None,
        params,
        active,
        gravity_center,
        rng,
        params.l_unit,
        params.max_iterations * 4,
        params.cooling.powf(0.25),
    )
}

/// Warm equilibrium for the shrink steps: the frame only moved by a step's
/// worth, so the temperature starts at a fraction of the unit length instead
/// of rescrambling the whole drawing.
pub fn warm_equilibrium(
    graph: &WeightedGraph,
    positions: BTreeMap<String, Point>,
    frame: Option<&Frame>,
    params: &ForceParams,
    active: ActiveForces,
    gravity_center: Point,
    rng: &mut StdRng,
) -> EquilibriumResult {
    equilibrate(
        graph,
        positions,
        frame,
        params,
        active,
        gravity_center,
        rng,
        params.l_unit / 3.0,
        params.max_iterations,
        params.cooling,
    )
}

/// Short, gentle relaxation between two removals: just enough motion to let
/// the neighborhood absorb the change without re-scrambling anything.
pub fn relax_equilibrium(
    graph: &WeightedGraph,
    positions: BTreeMap<String, Point>,
    frame: Option<&Frame>,
    params: &ForceParams,
    active: ActiveForces,
    gravity_center: Point,
    rng: &mut StdRng,
) -> EquilibriumResult {
    equilibrate(
        graph,
        positions,
        frame,
        params,
        active,
        gravity_center,
        rng,
        params.l_unit / 20.0,
        params.relax_iterations,
        params.cooling,
    )
}

#[allow(clippy::too_many_arguments)]
fn equilibrate(
    graph: &WeightedGraph,
    positions: BTreeMap<String, Point>,
    frame: Option<&Frame>,
    params: &ForceParams,
    active: ActiveForces,
    gravity_center: Point,
    rng: &mut StdRng,
    start_temperature: f64,
    max_iterations: usize,
    cooling: f64,
) -> EquilibriumResult {
    let mut ws = Workspace::new(graph, &positions);
    let mut converged = false;
    let mut iterations = 0;
    let mut temperature = start_temperature;
    for _ in 0..max_iterations {
        iterations += 1;
        ws.separate_coincident(rng);
        // One full force evaluation per iteration; moves applied vertex by
        // vertex in index order (in-place sweeps untangle local crowding
        // much faster than synchronized updates and stay deterministic).
        let total = ws.total_forces(params, active, gravity_center, rng);
        let mut max_move = 0.0f64;
        for i in 0..ws.pos.len() {
            let step = total[i].clamp_len(temperature);
            let proposed = ws.pos[i].add(step);
            let new_pos = match frame {
                Some(fr) => fr.clamp_center(proposed, ws.sizes[i].0, ws.sizes[i].1),
                None => proposed,
            };
            max_move = max_move.max(new_pos.dist(ws.pos[i]));
            ws.pos[i] = new_pos;
            if let Some(fr) = frame {
                debug_assert!(
                    fr.rect
                        .contains_rect(&Rect::new(new_pos, ws.sizes[i].0, ws.sizes[i].1)),
                    "vertex {} escaped the frame",
                    ws.ids[i]
                );
            }
        }
        temperature *= cooling;
        if max_move < params.eps_move {
            converged = true;
            break;
        }
    }
    let final_positions: BTreeMap<String, Point> = ws
        .ids
        .iter()
        .zip(&ws.pos)
        .map(|(id, p)| (id.to_string(), *p))
        .collect();
    let forces = force_snapshot(
        graph,
        &final_positions,
        frame,
        params,
        active,
        gravity_center,
        rng,
    );
    EquilibriumResult {
        positions: final_positions,
        forces,
        converged,
        iterations,
    }
}
