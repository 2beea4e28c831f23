//! Making the working graph acyclic by reverting a cheap set of edges.

use std::collections::{BTreeMap, HashSet};

use super::{CalcGraph, EdgeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycleMode {
    /// Branch-and-bound over cycle covers; optimal at desk scale.
    Exact,
    /// Deterministic DFS back-edge reversal.
    Heuristic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycleObjective {
    Count,
    Weight,
}

impl CycleObjective {
    fn cost(&self, weight: f64) -> f64 {
        match self {
            CycleObjective::Count => 1.0,
            CycleObjective::Weight => weight,
        }
    }
}

/// Reverts a set of edges so the graph becomes acyclic and returns their ids.
///
/// Exact mode finds a minimum (count or total weight) set; if its branch
/// budget runs out it falls back to the heuristic with a log entry. Reverting
/// a minimum removal set is safe: a minimum set is inclusion-minimal, and
/// reversing a minimal feedback set cannot close a new cycle.
pub fn break_cycles(
    graph: &mut CalcGraph,
    mode: CycleMode,
    objective: CycleObjective,
    node_budget: usize,
    log: &mut Vec<String>,
) -> Vec<EdgeId> {
    if graph.is_acyclic() {
        return Vec::new();
    }
    let chosen = match mode {
        CycleMode::Exact => match exact_feedback_set(graph, objective, node_budget) {
            Some(set) => set,
            None => {
                log.push("exact cycle breaking exceeded its node budget; using the heuristic".into());
                heuristic_feedback_set(graph)
            }
        },
        CycleMode::Heuristic => heuristic_feedback_set(graph),
    };
    for id in &chosen {
        let e = graph.edge_mut(*id).expect("chosen edge exists");
        std::mem::swap(&mut e.src, &mut e.dst);
        e.reverted = !e.reverted;
    }
    debug_assert!(graph.is_acyclic(), "reverting the feedback set left a cycle");
    chosen
}

/// Finds some directed cycle avoiding `removed` edges, as a list of edge ids.
fn find_cycle(graph: &CalcGraph, removed: &HashSet<EdgeId>) -> Option<Vec<EdgeId>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        White,
        Gray,
        Black,
    }
    let mut marks: BTreeMap<&str, Mark> = graph
        .vertices
        .iter()
        .map(|v| (v.id.as_str(), Mark::White))
        .collect();
    // stack of (vertex, edge taken to reach it)
    fn dfs<'a>(
        graph: &'a CalcGraph,
        removed: &HashSet<EdgeId>,
        marks: &mut BTreeMap<&'a str, Mark>,
        path: &mut Vec<(&'a str, EdgeId)>,
        u: &'a str,
    ) -> Option<Vec<EdgeId>> {
        marks.insert(u, Mark::Gray);
        for e in graph.edges.iter().filter(|e| e.src == u) {
            if removed.contains(&e.id) {
                continue;
            }
            match marks[e.dst.as_str()] {
                Mark::Gray => {
                    // collect edges from dst forward in the path, then e
                    let mut cycle = Vec::new();
                    let pos = path.iter().position(|(v, _)| *v == e.dst);
                    if let Some(pos) = pos {
                        for (_, eid) in &path[pos + 1..] {
                            cycle.push(*eid);
                        }
                    }
                    cycle.push(e.id);
                    return Some(cycle);
                }
                Mark::White => {
                    path.push((e.dst.as_str(), e.id));
                    if let Some(c) = dfs(graph, removed, marks, path, e.dst.as_str()) {
                        return Some(c);
                    }
                    path.pop();
                }
                Mark::Black => {}
            }
        }
        marks.insert(u, Mark::Black);
        None
    }
    let ids: Vec<&str> = graph.vertices.iter().map(|v| v.id.as_str()).collect();
    for root in ids {
        if marks[root] == Mark::White {
            // The root's sentinel edge id never enters a cycle: a cycle is
            // closed strictly below the root or not at all.
            let mut path = vec![(root, EdgeId::MAX)];
            if let Some(c) = dfs(graph, removed, &mut marks, &mut path, root) {
                return Some(c);
            }
        }
    }
    None
}

/// Minimum feedback set by branching over the edges of a found cycle: every
/// cycle must lose at least one edge, and branch `i` removes edge `i` while
/// protecting edges `0..i` from removal deeper in the subtree.
fn exact_feedback_set(
    graph: &CalcGraph,
    objective: CycleObjective,
    node_budget: usize,
) -> Option<Vec<EdgeId>> {
    let weight_of: BTreeMap<EdgeId, f64> = graph
        .edges
        .iter()
        .map(|e| (e.id, objective.cost(e.weight)))
        .collect();
    let initial = heuristic_feedback_set(graph);
    let mut best_cost: f64 = initial.iter().map(|id| weight_of[id]).sum();
    let mut best: Vec<EdgeId> = initial;
    let mut nodes = 0usize;

    fn branch(
        graph: &CalcGraph,
        weight_of: &BTreeMap<EdgeId, f64>,
        removed: &mut HashSet<EdgeId>,
        protected: &mut HashSet<EdgeId>,
        cost: f64,
        best_cost: &mut f64,
        best: &mut Vec<EdgeId>,
        nodes: &mut usize,
        node_budget: usize,
    ) -> bool {
        *nodes += 1;
        if *nodes > node_budget {
            return false;
        }
        if cost >= *best_cost {
            return true;
        }
        match find_cycle(graph, removed) {
            None => {
                *best_cost = cost;
                *best = removed.iter().copied().collect();
                best.sort_unstable();
                true
            }
            Some(cycle) => {
                // Branch i removes edge i of the cycle and forbids removal of
                // the earlier cycle edges deeper down; only protections made
                // here are undone here.
                let mut own_protected = Vec::new();
                let mut ok = true;
                for eid in cycle {
                    if protected.contains(&eid) {
                        continue;
                    }
                    removed.insert(eid);
                    ok = branch(
                        graph,
                        weight_of,
                        removed,
                        protected,
                        cost + weight_of[&eid],
                        best_cost,
                        best,
                        nodes,
                        node_budget,
                    );
                    removed.remove(&eid);
                    if !ok {
                        break;
                    }
                    protected.insert(eid);
                    own_protected.push(eid);
                }
                for eid in own_protected {
                    protected.remove(&eid);
                }
                ok
            }
        }
    }

    let mut removed = HashSet::new();
    let mut protected = HashSet::new();
    let finished = branch(
        graph,
        &weight_of,
        &mut removed,
        &mut protected,
        0.0,
        &mut best_cost,
        &mut best,
        &mut nodes,
        node_budget,
    );
    if finished {
        Some(best)
    } else {
        None
    }
}

/// DFS back-edge collection. Roots and neighbors are visited by descending
/// vertex weight (ties by id), starting at the start vertex, so the heaviest
/// calculation paths keep their direction.
fn heuristic_feedback_set(graph: &CalcGraph) -> Vec<EdgeId> {
    let mut order: Vec<&str> = graph.vertices.iter().map(|v| v.id.as_str()).collect();
    order.sort_by(|a, b| {
        let wa = graph.vertex(a).unwrap().weight;
        let wb = graph.vertex(b).unwrap().weight;
        wb.partial_cmp(&wa).unwrap().then_with(|| a.cmp(b))
    });
    if let Some(pos) = order.iter().position(|v| *v == graph.start) {
        order.remove(pos);
        order.insert(0, graph.start.as_str());
    }

    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        White,
        Gray,
        Black,
    }
    let mut marks: BTreeMap<&str, Mark> = graph
        .vertices
        .iter()
        .map(|v| (v.id.as_str(), Mark::White))
        .collect();
    let mut back_edges = Vec::new();

    fn visit<'a>(
        graph: &'a CalcGraph,
        u: &'a str,
        marks: &mut BTreeMap<&'a str, Mark>,
        back_edges: &mut Vec<EdgeId>,
    ) {
        marks.insert(u, Mark::Gray);
        let mut edges: Vec<(EdgeId, &'a str, f64)> = graph
            .edges
            .iter()
            .filter(|e| e.src == u)
            .map(|e| (e.id, e.dst.as_str(), graph.vertex(&e.dst).unwrap().weight))
            .collect();
        edges.sort_by(|a, b| b.2.partial_cmp(&a.2).unwrap().then_with(|| a.1.cmp(b.1)));
        for (id, dst, _) in &edges {
            match marks[dst] {
                Mark::Gray => back_edges.push(*id),
                Mark::White => visit(graph, dst, marks, back_edges),
                Mark::Black => {}
            }
        }
        marks.insert(u, Mark::Black);
    }

    for root in order {
        if marks[root] == Mark::White {
            visit(graph, root, &mut marks, &mut back_edges);
        }
    }
    back_edges.sort_unstable();
    back_edges
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;

    fn calc(text: &str) -> CalcGraph {
        CalcGraph::from_graph(&parse_graph(text).unwrap()).unwrap()
    }

    #[test]
    fn dag_reverts_nothing() {
        let mut g = calc(
            "graph directed\nstart s\nv s 1 1 1\nv a 1 1 1\nv b 1 1 1\ne s a 1\ne s b 1\ne a b 1",
        );
        let mut log = Vec::new();
        let reverted = break_cycles(
            &mut g,
            CycleMode::Exact,
            CycleObjective::Weight,
            1_000_000,
            &mut log,
        );
        assert!(reverted.is_empty());
    }

    #[test]
    fn triangle_reverts_lightest_edge_by_weight() {
        let mut g = calc(
            "graph directed\nstart a\nv a 1 1 1\nv b 1 1 1\nv c 1 1 1\ne a b 1\ne b c 2\ne c a 3",
        );
        let mut log = Vec::new();
        let reverted = break_cycles(
            &mut g,
            CycleMode::Exact,
            CycleObjective::Weight,
            1_000_000,
            &mut log,
        );
        assert_eq!(reverted.len(), 1);
        let e = g.edge(reverted[0]).unwrap();
        assert_eq!(e.weight, 1.0);
        // Drawn direction is flipped: originally a->b, now b->a.
        assert_eq!((e.src.as_str(), e.dst.as_str()), ("b", "a"));
        assert!(e.reverted);
        assert!(g.is_acyclic());
    }

    #[test]
    fn heuristic_always_yields_acyclic() {
        let mut g = calc(
            "graph directed\nstart s\nv s 5 1 1\nv a 4 1 1\nv b 3 1 1\nv c 2 1 1\n\
             e s a 1\ne a b 1\ne b s 1\ne b c 1\ne c a 1",
        );
        let mut log = Vec::new();
        let reverted = break_cycles(
            &mut g,
            CycleMode::Heuristic,
            CycleObjective::Count,
            0,
            &mut log,
        );
        assert!(!reverted.is_empty());
        assert!(g.is_acyclic());
    }

    /// Independent oracle: smallest removal set by exhaustive bitmask search.
    fn brute_force_min(graph: &CalcGraph, objective: CycleObjective) -> f64 {
        let m = graph.edges.len();
        assert!(m <= 16, "oracle only works for small graphs");
        let mut best = f64::INFINITY;
        for mask in 0u32..(1 << m) {
            let removed: HashSet<EdgeId> = graph
                .edges
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, e)| e.id)
                .collect();
            let mut test = graph.clone();
            test.edges.retain(|e| !removed.contains(&e.id));
            if test.is_acyclic() {
                let cost: f64 = graph
                    .edges
                    .iter()
                    .filter(|e| removed.contains(&e.id))
                    .map(|e| objective.cost(e.weight))
                    .sum();
                best = best.min(cost);
            }
        }
        best
    }

    #[test]
    fn exact_matches_bitmask_oracle_on_random_graphs() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        for seed in 0..15u64 {
            let mut rng = StdRng::seed_from_u64(seed);
            let n = rng.random_range(4..=8);
            let mut text = String::from("graph directed\nstart v0\n");
            for i in 0..n {
                text.push_str(&format!("v v{i} {} 1 1\n", rng.random_range(1..=9)));
            }
            let mut edges = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    if i != j && rng.random_range(0.0..1.0) < 0.3 && edges.len() < 14 {
                        edges.push((i, j, rng.random_range(1..=9)));
                    }
                }
            }
            for (i, j, w) in &edges {
                text.push_str(&format!("e v{i} v{j} {w}\n"));
            }
            let graph = calc(&text);
            for objective in [CycleObjective::Count, CycleObjective::Weight] {
                let oracle = brute_force_min(&graph, objective);
                let mut g = graph.clone();
                let mut log = Vec::new();
                let reverted =
                    break_cycles(&mut g, CycleMode::Exact, objective, 1_000_000, &mut log);
                let cost: f64 = reverted
                    .iter()
                    .map(|id| objective.cost(g.edge(*id).unwrap().weight))
                    .sum();
                assert!(g.is_acyclic());
                assert_eq!(cost, oracle, "seed {seed}: exact {cost} vs oracle {oracle}");
            }
        }
    }
}
