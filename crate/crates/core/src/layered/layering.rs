//! Layer assignment for the acyclic working graph.

use std::collections::BTreeMap;

use super::{CalcGraph, Item, LayerStructure};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LayeringMethod {
    /// Coffman-Graham with capacity `n_max`, filling leftmost layers first.
    CoffmanGraham,
    /// Graham list scheduling by descending vertex weight.
    ListScheduling,
    /// Longest-path layering: minimum number of layers, no capacity.
    MinLayers,
}

/// Number of vertices on a longest directed path.
pub fn longest_path_length(graph: &CalcGraph) -> usize {
    let order = graph.topo_order();
    let mut best: BTreeMap<String, usize> = BTreeMap::new();
    let mut k = 0;
    for u in order {
        let len = graph
            .in_edges(&u)
            .map(|e| best[e.src.as_str()] + 1)
            .max()
            .unwrap_or(1);
        k = k.max(len);
        best.insert(u, len);
    }
    k
}

/// Assigns every vertex to a layer; edges always point to a strictly later
/// layer. The within-layer order is the insertion order of the method and is
/// refined later by crossing minimization.
pub fn assign_layers(graph: &CalcGraph, method: LayeringMethod, n_max: usize) -> LayerStructure {
    let layers = match method {
        LayeringMethod::CoffmanGraham => coffman_graham(graph, n_max),
        LayeringMethod::ListScheduling => list_scheduling(graph, n_max),
        LayeringMethod::MinLayers => min_layers(graph),
    };
    LayerStructure {
        layers: layers
            .into_iter()
            .map(|l| l.into_iter().map(Item::Real).collect())
            .collect(),
    }
}

/// Coffman-Graham, mirrored so the leftmost layers fill up first: labels are
/// computed from the sinks, layers from the sources.
fn coffman_graham(graph: &CalcGraph, n_max: usize) -> Vec<Vec<String>> {
    let n = graph.vertices.len();
    let mut label: BTreeMap<&str, usize> = BTreeMap::new();

    // Phase 1: label 1..n. A vertex is eligible once all its out-neighbors
    // are labeled; among eligible vertices the lexicographically smallest
    // decreasing sequence of out-neighbor labels wins (ties by id).
    while label.len() < n {
        let mut candidate: Option<(&str, Vec<usize>)> = None;
        for v in &graph.vertices {
            if label.contains_key(v.id.as_str()) {
                continue;
            }
            if !graph
                .out_edges(&v.id)
                .all(|e| label.contains_key(e.dst.as_str()))
            {
                continue;
            }
            let mut seq: Vec<usize> = graph
                .out_edges(&v.id)
                .map(|e| label[e.dst.as_str()])
                .collect();
            seq.sort_unstable_by(|a, b| b.cmp(a));
            let better = match &candidate {
                None => true,
                Some((cur_id, cur_seq)) => {
                    seq < *cur_seq || (seq == *cur_seq && v.id.as_str() < *cur_id)
                }
            };
            if better {
                candidate = Some((v.id.as_str(), seq));
            }
        }
        let (chosen, _) = candidate.expect("acyclic graph always has an eligible vertex");
        label.insert(chosen, label.len() + 1);
    }

    // Phase 2: fill layers left to right. A vertex is ready when all its
    // in-neighbors sit in strictly earlier layers; the largest label goes
    // first, layers respect the capacity.
    let mut layer_of: BTreeMap<&str, usize> = BTreeMap::new();
    let mut layers: Vec<Vec<String>> = Vec::new();
    let mut current = 0usize;
    while layer_of.len() < n {
        let ready: Vec<&str> = graph
            .vertices
            .iter()
            .map(|v| v.id.as_str())
            .filter(|v| !layer_of.contains_key(v))
            .filter(|v| {
                graph
                    .in_edges(v)
                    .all(|e| layer_of.get(e.src.as_str()).map_or(false, |l| *l < current))
            })
            .collect();
        let room = layers.get(current).map_or(n_max, |l: &Vec<String>| n_max - l.len());
        if ready.is_empty() || room == 0 {
            current += 1;
            continue;
        }
        let chosen = ready
            .iter()
            .max_by(|a, b| label[**a].cmp(&label[**b]))
            .copied()
            .unwrap();
        if layers.len() <= current {
            layers.push(Vec::new());
        }
        layers[current].push(chosen.to_string());
        layer_of.insert(chosen, current);
    }
    layers
}

/// Graham list scheduling: vertices in a fixed priority list (descending
/// weight, ties by id) are placed greedily into the earliest layer after all
/// their predecessors, respecting the capacity.
fn list_scheduling(graph: &CalcGraph, n_max: usize) -> Vec<Vec<String>> {
    let order = graph.topo_order();
    let mut list: Vec<&str> = order.iter().map(String::as_str).collect();
    let weight: BTreeMap<&str, f64> = graph
        .vertices
        .iter()
        .map(|v| (v.id.as_str(), v.weight))
        .collect();
    list.sort_by(|a, b| {
        weight[b]
            .partial_cmp(&weight[a])
            .unwrap()
            .then_with(|| a.cmp(b))
    });
    let mut layer_of: BTreeMap<&str, usize> = BTreeMap::new();
    let mut layers: Vec<Vec<String>> = Vec::new();
    let mut remaining: Vec<&str> = list;
    while !remaining.is_empty() {
        let mut placed_any = false;
        let mut still: Vec<&str> = Vec::new();
        for v in remaining.clone() {
            let preds_placed = graph.in_edges(v).all(|e| layer_of.contains_key(e.src.as_str()));
            if !preds_placed {
                still.push(v);
                continue;
            }
            let min_layer = graph
                .in_edges(v)
                .map(|e| layer_of[e.src.as_str()] + 1)
                .max()
                .unwrap_or(0);
            let mut target = min_layer;
            loop {
                if layers.len() <= target {
                    layers.resize_with(target + 1, Vec::new);
                }
                if layers[target].len() < n_max {
                    layers[target].push(v.to_string());
                    layer_of.insert(v, target);
                    placed_any = true;
                    break;
                }
                target += 1;
            }
        }
        assert!(placed_any, "list scheduling made no progress");
        remaining = still;
    }
    layers
}

/// Longest-path layering: layer(v) = 1 + max layer of its predecessors.
fn min_layers(graph: &CalcGraph) -> Vec<Vec<String>> {
    let order = graph.topo_order();
    let mut layer_of: BTreeMap<String, usize> = BTreeMap::new();
    let mut layers: Vec<Vec<String>> = Vec::new();
    for u in order {
        let l = graph
            .in_edges(&u)
            .map(|e| layer_of[e.src.as_str()] + 1)
            .max()
            .unwrap_or(0);
        if layers.len() <= l {
            layers.resize_with(l + 1, Vec::new);
        }
        layers[l].push(u.clone());
        layer_of.insert(u, l);
    }
    layers
}

/// Replaces every multi-layer edge span by a chain of dummy items in the
/// intermediate layers. Dummies append below the existing items; crossing
/// minimization sorts them out.
pub fn insert_dummies(structure: &mut LayerStructure, graph: &CalcGraph) {
    // Drop stale dummies first: spans may have changed.
    for layer in &mut structure.layers {
        layer.retain(|it| it.as_real().is_some());
    }
    let layer_of: BTreeMap<&str, usize> = structure
        .layers
        .iter()
        .enumerate()
        .flat_map(|(i, l)| l.iter().filter_map(move |it| it.as_real().map(|id| (id, i))))
        .collect();
    let spans: Vec<(super::EdgeId, usize, usize)> = graph
        .drawn_edges()
        .filter_map(|e| {
            let ls = *layer_of.get(e.src.as_str())?;
            let ld = *layer_of.get(e.dst.as_str())?;
            debug_assert!(ls < ld, "edge {} -> {} does not point rightwards", e.src, e.dst);
            Some((e.id, ls, ld))
        })
        .collect();
    for (id, ls, ld) in spans {
        for layer in structure.layers.iter_mut().take(ld).skip(ls + 1) {
            layer.push(Item::Dummy { edge: id });
        }
    }
}

/// Every edge (and every dummy chain hop) connects consecutive layers.
pub fn structure_is_proper(structure: &LayerStructure, graph: &CalcGraph) -> bool {
    let layer_of: BTreeMap<&str, usize> = structure
        .layers
        .iter()
        .enumerate()
        .flat_map(|(i, l)| l.iter().filter_map(move |it| it.as_real().map(|id| (id, i))))
        .collect();
    graph.drawn_edges().all(|e| {
        let (Some(&ls), Some(&ld)) = (layer_of.get(e.src.as_str()), layer_of.get(e.dst.as_str()))
        else {
            return true;
        };
        if ls >= ld {
            return false;
        }
        // Each intermediate layer must carry exactly one dummy of this edge.
        (ls + 1..ld).all(|li| {
            structure.layers[li]
                .iter()
                .filter(|it| matches!(it, Item::Dummy { edge } if *edge == e.id))
                .count()
                == 1
        })
    })
}
