//! Seeded synthetic graph generators standing in for the real collaboration
//! and calculation datasets: same shape (heavy-tailed weights, fixed label
//! boxes, a single calculation source), fully reproducible.

use std::fmt;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::graph::{Edge, Vertex, WeightedGraph};

/// What kind of graph to generate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphKind {
    /// Undirected coauthor-style graph: preferential attachment, weights
    /// correlated with degree.
    CollabLike,
    /// Directed calculation-style graph: layered DAG from a single start
    /// vertex plus a configurable fraction of cycle-producing back edges.
    CalcLike,
}

/// Weight distribution of the generated vertices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightDistribution {
    /// Pareto tail with the given exponent (heavy tails at 2.0).
    PowerLaw { exponent: f64 },
    Uniform { lo: f64, hi: f64 },
}

/// Specification of one synthetic corpus; equal specs generate equal graphs.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusSpec {
    pub seed: u64,
    pub count: usize,
    pub vertices: usize,
    /// Mean number of edges per vertex (attachment count / forward density).
    pub edges_per_vertex: f64,
    pub weights: WeightDistribution,
    /// Mean label length in characters; box sizes follow.
    pub label_length_mean: f64,
    pub kind: GraphKind,
    /// Fraction of extra backward edges closing cycles (calc-like only).
    pub back_edge_fraction: f64,
}

impl Default for CorpusSpec {
    fn default() -> CorpusSpec {
        CorpusSpec {
            seed: 1,
            count: 1,
            vertices: 100,
            edges_per_vertex: 2.5,
            weights: WeightDistribution::PowerLaw { exponent: 2.0 },
            label_length_mean: 5.0,
            kind: GraphKind::CollabLike,
            back_edge_fraction: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvalidSpec(pub String);

impl fmt::Display for InvalidSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid corpus spec: {}", self.0)
    }
}

impl std::error::Error for InvalidSpec {}

fn draw_weight(dist: WeightDistribution, rng: &mut StdRng) -> f64 {
    match dist {
        WeightDistribution::PowerLaw { exponent } => {
            // Pareto with x_min = 1: x = u^(-1/(alpha-1)), capped so a single
            // freak draw cannot dominate a whole corpus.
            let u: f64 = rng.random_range(1e-6..1.0);
            u.powf(-1.0 / (exponent - 1.0)).min(1e4)
        }
        WeightDistribution::Uniform { lo, hi } => rng.random_range(lo..hi),
    }
}

fn label_for(rng: &mut StdRng, mean_len: f64) -> String {
    let len = (mean_len + rng.random_range(-2.0..3.0)).round().max(2.0) as usize;
    let first: char = rng.random_range(b'A'..=b'Z') as char;
    let mut s = String::with_capacity(len);
    s.push(first);
    for _ in 1..len {
        s.push(rng.random_range(b'a'..=b'z') as char);
    }
    s
}

/// Label box from the label text: 10pt-ish glyph metrics plus padding.
fn label_box(label: &str) -> (f64, f64) {
    let width = 0.18 * label.chars().count() as f64 + 0.25;
    (width, 0.5)
}

fn collab_like(spec: &CorpusSpec, rng: &mut StdRng) -> WeightedGraph {
    let n = spec.vertices;
    let mut g = WeightedGraph::new(false);
    let mut degrees: Vec<usize> = vec![0; n];
    let ids: Vec<String> = (0..n).map(|i| format!("a{i:04}")).collect();
    // Vertices get placeholder weights first; degree correlation comes after
    // the topology is fixed.
    let labels: Vec<String> = (0..n).map(|_| label_for(rng, spec.label_length_mean)).collect();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); n];
    let m = spec.edges_per_vertex.max(1.0).round() as usize;
    for v in 1..n {
        let attach = m.min(v);
        let mut targets: Vec<usize> = Vec::new();
        let mut attempts = 0;
        while targets.len() < attach && attempts < 50 {
            attempts += 1;
            // First link by sublinear preferential attachment (coauthorship
            // hubs grow, but not linearly); further links mostly close
            // triangles inside the first target's neighborhood, giving the
            // paper-writing cliques of real coauthor graphs.
            let closing = !targets.is_empty()
                && !adjacency[targets[0]].is_empty()
                && rng.random_range(0.0..1.0) < 0.85;
            let chosen = if closing {
                let peers = &adjacency[targets[0]];
                peers[rng.random_range(0..peers.len())]
            } else {
                let masses: Vec<f64> = degrees[..v]
                    .iter()
                    .map(|d| ((d + 1) as f64).powf(0.6))
                    .collect();
                let total: f64 = masses.iter().sum();
                let mut ball = rng.random_range(0.0..total);
                let mut chosen = v - 1;
                for (u, mass) in masses.iter().enumerate() {
                    if ball < *mass {
                        chosen = u;
                        break;
                    }
                    ball -= mass;
                }
                chosen
            };
            // Degree cap: even prolific authors have a bounded circle of
            // regular coauthors at desk scale.
            if chosen < v && !targets.contains(&chosen) && degrees[chosen] < 12 {
                targets.push(chosen);
            }
        }
        for u in targets {
            edges.push((u, v));
            degrees[u] += 1;
            degrees[v] += 1;
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
    }
    for i in 0..n {
        // Heavy-tailed productivity correlated with the coauthor count; the
        // heavy community is the densely interlinked early core.
        let tail = draw_weight(spec.weights, rng);
        let weight = 1.0 + tail * (1.0 + degrees[i] as f64) / 4.0;
        let (w, h) = label_box(&labels[i]);
        g.add_vertex(Vertex {
            id: ids[i].clone(),
            weight: (weight * 100.0).round() / 100.0,
            width: w,
            height: h,
            label: labels[i].clone(),
        })
        .expect("generated vertex is valid");
    }
    for (u, v) in edges {
        let wu = g.vertex(&ids[u]).unwrap().weight;
        let wv = g.vertex(&ids[v]).unwrap().weight;
        let cap = wu.min(wv).max(1.0);
        let weight = (rng.random_range(1.0..(1.0 + cap)) * 100.0).round() / 100.0;
        g.add_edge(Edge {
            src: ids[u].clone(),
            dst: ids[v].clone(),
            weight,
        })
        .expect("generated edge is valid");
    }
    g
}

fn calc_like(spec: &CorpusSpec, rng: &mut StdRng) -> WeightedGraph {
    let n = spec.vertices;
    let mut g = WeightedGraph::new(true);
    // Rough layer profile of a calculation: one task, widening middle,
    // narrowing results.
    let depth = ((n as f64).sqrt().round() as usize).clamp(2, 24);
    let mut layer_of: Vec<usize> = vec![0];
    for i in 1..n {
        let t = i as f64 / n as f64;
        let bulge = 1.0 - (2.0 * t - 1.0).powi(2);
        let l = 1 + ((depth - 1) as f64 * (t * 0.55 + 0.45 * bulge * rng.random_range(0.0..1.0)))
            .round() as usize;
        layer_of.push(l.min(depth - 1).max(1));
    }
    let ids: Vec<String> = (0..n).map(|i| format!("t{i:04}")).collect();
    for i in 0..n {
        let tail = draw_weight(spec.weights, rng);
        // Earlier terms are visited by more students.
        let depth_decay = 1.0 / (1.0 + layer_of[i] as f64).sqrt();
        let weight = (1.0 + tail * (1.0 + 20.0 * depth_decay) * 100.0).round() / 100.0;
        let label = format!(
            "{}{}",
            label_for(rng, spec.label_length_mean.min(6.0)),
            i % 10
        );
        let (w, h) = label_box(&label);
        g.add_vertex(Vertex {
            id: ids[i].clone(),
            weight,
            width: w,
            height: h,
            label,
        })
        .expect("generated vertex is valid");
    }
    // Forward edges keep every vertex reachable from the start.
    for i in 1..n {
        let li = layer_of[i];
        let earlier: Vec<usize> = (0..i).filter(|j| layer_of[*j] < li).collect();
        let fallback = 0usize;
        let parent = if earlier.is_empty() {
            fallback
        } else {
            earlier[rng.random_range(0..earlier.len())]
        };
        let wv = g.vertex(&ids[i]).unwrap().weight;
        let wp = g.vertex(&ids[parent]).unwrap().weight;
        let weight = (rng.random_range(1.0..(1.0 + wv.min(wp).max(1.0))) * 100.0).round() / 100.0;
        g.add_edge(Edge {
            src: ids[parent].clone(),
            dst: ids[i].clone(),
            weight,
        })
        .expect("generated edge is valid");
    }
    // Extra forward density.
    let extra = ((spec.edges_per_vertex - 1.0).max(0.0) * n as f64) as usize;
    let mut added = 0;
    let mut attempts = 0;
    while added < extra && attempts < extra * 20 {
        attempts += 1;
        let i = rng.random_range(0..n);
        let j = rng.random_range(0..n);
        if layer_of[i] >= layer_of[j] || g.has_edge(&ids[i], &ids[j]) {
            continue;
        }
        let wi = g.vertex(&ids[i]).unwrap().weight;
        let wj = g.vertex(&ids[j]).unwrap().weight;
        let weight = (rng.random_range(1.0..(1.0 + wi.min(wj).max(1.0))) * 100.0).round() / 100.0;
        g.add_edge(Edge {
            src: ids[i].clone(),
            dst: ids[j].clone(),
            weight,
        })
        .expect("generated edge is valid");
        added += 1;
    }
    // Back edges close cycles (students returning to earlier forms).
    let backs = (spec.back_edge_fraction * g.edge_count() as f64).round() as usize;
    let mut added = 0;
    let mut attempts = 0;
    while added < backs && attempts < backs * 40 + 40 {
        attempts += 1;
        let i = rng.random_range(0..n);
        let j = rng.random_range(0..n);
        if layer_of[i] <= layer_of[j] || g.has_edge(&ids[i], &ids[j]) {
            continue;
        }
        let weight = (rng.random_range(1.0f64..3.0) * 100.0).round() / 100.0;
        g.add_edge(Edge {
            src: ids[i].clone(),
            dst: ids[j].clone(),
            weight,
        })
        .expect("generated edge is valid");
        added += 1;
    }
    g.start = Some(ids[0].clone());
    g
}

/// Generates `spec.count` graphs; graph `i` uses seed `spec.seed + i`.
pub fn generate_corpus(spec: &CorpusSpec) -> Result<Vec<WeightedGraph>, InvalidSpec> {
    if spec.vertices == 0 {
        return Err(InvalidSpec("vertex count must be at least 1".into()));
    }
    if spec.count == 0 {
        return Err(InvalidSpec("corpus must contain at least one graph".into()));
    }
    if let WeightDistribution::PowerLaw { exponent } = spec.weights {
        if exponent <= 1.0 {
            return Err(InvalidSpec("power-law exponent must exceed 1".into()));
        }
    }
    if spec.back_edge_fraction < 0.0 || spec.back_edge_fraction >= 1.0 {
        return Err(InvalidSpec("back-edge fraction must be in [0, 1)".into()));
    }
    let mut graphs = Vec::with_capacity(spec.count);
    for i in 0..spec.count {
        let mut rng = StdRng::seed_from_u64(spec.seed.wrapping_add(i as u64));
        graphs.push(match spec.kind {
            GraphKind::CollabLike => collab_like(spec, &mut rng),
            GraphKind::CalcLike => calc_like(spec, &mut rng),
        });
    }
    Ok(graphs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_vertices_is_rejected() {
        let spec = CorpusSpec {
            vertices: 0,
            ..CorpusSpec::default()
        };
        assert!(generate_corpus(&spec).is_err());
    }

    #[test]
    fn same_seed_gives_identical_graphs() {
        let spec = CorpusSpec {
            vertices: 60,
            count: 2,
            ..CorpusSpec::default()
        };
        let a = generate_corpus(&spec).unwrap();
        let b = generate_corpus(&spec).unwrap();
        assert_eq!(a, b);
        assert_eq!(a[0].serialize(), b[0].serialize());
        // Different seeds within the corpus differ.
        assert_ne!(a[0], a[1]);
    }

    #[test]
    fn calc_without_back_edges_is_acyclic() {
        let spec = CorpusSpec {
            kind: GraphKind::CalcLike,
            vertices: 80,
            back_edge_fraction: 0.0,
            ..CorpusSpec::default()
        };
        let g = &generate_corpus(&spec).unwrap()[0];
        assert!(g.directed);
        let cg = crate::layered::CalcGraph::from_graph(g).unwrap();
        assert!(cg.is_acyclic());
        // Everything reachable from the start.
        let s = g.start.clone().unwrap();
        assert_eq!(g.reachable_from(&s).unwrap().len(), g.vertex_count());
    }

    #[test]
    fn calc_with_back_edges_contains_a_cycle() {
        let spec = CorpusSpec {
            kind: GraphKind::CalcLike,
            vertices: 80,
            back_edge_fraction: 0.15,
            ..CorpusSpec::default()
        };
        let g = &generate_corpus(&spec).unwrap()[0];
        let cg = crate::layered::CalcGraph::from_graph(g).unwrap();
        assert!(!cg.is_acyclic());
    }

    #[test]
    fn collab_weights_are_heavy_tailed() {
        let spec = CorpusSpec {
            vertices: 200,
            ..CorpusSpec::default()
        };
        let g = &generate_corpus(&spec).unwrap()[0];
        let mut weights: Vec<f64> = g.vertices().iter().map(|v| v.weight).collect();
        weights.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let total: f64 = weights.iter().sum();
        let top_decile: f64 = weights[..20].iter().sum();
        assert!(
            top_decile > 0.35 * total,
            "top 10% of vertices should carry most weight, got {:.2}",
            top_decile / total
        );
    }
}
