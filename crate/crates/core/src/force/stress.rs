//! Pressure and stress: who gets removed when the drawing is too dense.

use std::collections::BTreeMap;

use super::equilibrium::ForceSnapshot;
use super::{average_edge_length, ForceParams};
use crate::geometry::{segments_cross_properly, Point, Segment};
use crate::graph::WeightedGraph;

/// Octant decomposition of the forces applied to one vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct PressureReport {
    /// Magnitude of the summed force vector per octant.
    pub octant_lengths: [f64; 8],
    pub pressure: f64,
}

fn octant_of(v: Point) -> usize {
    let mut angle = v.y.atan2(v.x);
    if angle < 0.0 {
        angle += std::f64::consts::TAU;
    }
    let idx = (angle / (std::f64::consts::TAU / 8.0)) as usize;
    idx.min(7)
}

/// Pressure of a vertex: force vectors are summed per octant; each octant
/// length is compared with the three roughly opposite octants, and the
/// pressure is the maximum over those pairwise minima.
pub fn vertex_pressure(forces: &[Point]) -> PressureReport {
    let mut sums = [Point::ZERO; 8];
    for f in forces {
        if f.norm() == 0.0 {
            continue;
        }
        sums[octant_of(*f)] = sums[octant_of(*f)].add(*f);
    }
    let lengths: [f64; 8] = std::array::from_fn(|i| sums[i].norm());
    let mut pressure = 0.0f64;
    for i in 0..8 {
        for off in [3, 4, 5] {
            pressure = pressure.max(lengths[i].min(lengths[(i + off) % 8]));
        }
    }
    PressureReport {
        octant_lengths: lengths,
        pressure,
    }
}

/// Stress of a vertex: pressure normalized by weight and degree.
pub fn vertex_stress(pressure: f64, weight: f64, degree: usize, c_deg: f64) -> f64 {
    pressure / (weight * (degree as f64 + c_deg))
}

/// Stress of an edge: total weight of the edges crossing it, times their
/// number, divided by its own weight.
pub fn edge_stress(
    graph: &WeightedGraph,
    positions: &BTreeMap<String, Point>,
    src: &str,
    dst: &str,
) -> f64 {
    let own = Segment::new(positions[src], positions[dst]);
    let own_weight = graph
        .edges()
        .iter()
        .find(|e| e.src == src && e.dst == dst)
        .map(|e| e.weight)
        .expect("edge exists");
    let mut crossing_weight = 0.0;
    let mut crossing_count = 0usize;
    for e in graph.edges() {
        if (e.src == src && e.dst == dst)
            || e.src == src
            || e.dst == src
            || e.src == dst
            || e.dst == dst
        {
            continue;
        }
        let other = Segment::new(positions[&e.src], positions[&e.dst]);
        if segments_cross_properly(&own, &other) {
            crossing_weight += e.weight;
            crossing_count += 1;
        }
    }
    crossing_weight * crossing_count as f64 / own_weight
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RemovalKind {
    Vertex,
    Edge,
}

/// One removal decision: the chosen item and its stress.
#[derive(Debug, Clone, PartialEq)]
pub struct Removal {
    pub kind: RemovalKind,
    /// Vertex id, or `src->dst` for an edge.
    pub id: String,
    pub edge: Option<(String, String)>,
    pub stress: f64,
}

/// Decides what to remove while the drawing is too dense: a vertex when the
/// average edge length is at most `l_unit * c_len`, otherwise an edge. The
/// arg-max-stress item wins; ties prefer the lower weight, then the
/// lexicographically smaller id.
pub fn removal_step(
    graph: &WeightedGraph,
    positions: &BTreeMap<String, Point>,
    forces: &ForceSnapshot,
    params: &ForceParams,
) -> Removal {
    let avg = average_edge_length(graph, positions);
    let remove_vertex = avg <= params.l_unit * params.c_len || graph.edge_count() == 0;
    if remove_vertex {
        let mut best: Option<(f64, f64, &str)> = None;
        for v in graph.vertices() {
            let p = vertex_pressure(&forces[&v.id]).pressure;
            let s = vertex_stress(p, v.weight, graph.degree(&v.id), params.c_deg);
            let candidate = (s, v.weight, v.id.as_str());
            best = Some(match best {
                None => candidate,
                Some(cur) => {
                    if s > cur.0
                        || (s == cur.0 && v.weight < cur.1)
                        || (s == cur.0 && v.weight == cur.1 && v.id.as_str() < cur.2)
                    {
                        candidate
                    } else {
                        cur
                    }
                }
            });
        }
        let (stress, _, id) = best.expect("removal_step called on a nonempty graph");
        Removal {
            kind: RemovalKind::Vertex,
            id: id.to_string(),
            edge: None,
            stress,
        }
    } else {
        let mut best: Option<(f64, f64, (String, String))> = None;
        for e in graph.edges() {
            let s = edge_stress(graph, positions, &e.src, &e.dst);
            let key = (e.src.clone(), e.dst.clone());
            best = Some(match best {
                None => (s, e.weight, key),
                Some(cur) => {
                    if s > cur.0
                        || (s == cur.0 && e.weight < cur.1)
                        || (s == cur.0 && e.weight == cur.1 && key < cur.2)
                    {
                        (s, e.weight, key)
                    } else {
                        cur
                    }
                }
            });
        }
        let (stress, _, (src, dst)) = best.expect("graph has edges in this branch");
        Removal {
            kind: RemovalKind::Edge,
            id: format!("{src}->{dst}"),
            edge: Some((src, dst)),
            stress,
        }
    }
}
