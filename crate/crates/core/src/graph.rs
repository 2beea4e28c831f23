//! Weighted graph model and the line-oriented input format.
//!
//! A graph file looks like:
//!
//! ```text
//! # comment
//! graph undirected
//! v alice 12 2.4 0.6 Alice Smith
//! v bob 3 1.8 0.6 Bob
//! e alice bob 2
//! ```
//!
//! Directed graphs additionally carry a `start <id>` line naming the vertex
//! every drawn vertex must stay reachable from.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

/// A vertex with a positive weight and the fixed label box it occupies.
#[derive(Debug, Clone, PartialEq)]
pub struct Vertex {
    pub id: String,
    pub weight: f64,
    /// Label box width in cm.
    pub width: f64,
    /// Label box height in cm.
    pub height: f64,
    pub label: String,
}

/// A weighted edge between two vertex ids.
#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub src: String,
    pub dst: String,
    pub weight: f64,
}

impl Edge {
    pub fn key(&self) -> (String, String) {
        (self.src.clone(), self.dst.clone())
    }
}

/// Vertex- and edge-weighted graph; vertex and edge order is preserved from
/// construction, which keeps every downstream iteration deterministic.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct WeightedGraph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    pub directed: bool,
    pub start: Option<String>,
    index: HashMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GraphError {
    Malformed { line: usize, message: String },
    DuplicateVertex { line: usize, id: String },
    DuplicateEdge { line: usize, src: String, dst: String },
    DanglingEndpoint { line: usize, id: String },
    NonPositive { line: usize, what: String },
    SelfLoop { line: usize, id: String },
    MissingHeader,
    MissingStart,
    UnknownVertex { id: String },
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::Malformed { line, message } => {
                write!(f, "line {line}: {message}")
            }
            GraphError::DuplicateVertex { line, id } => {
                write!(f, "line {line}: duplicate vertex id `{id}`")
            }
            GraphError::DuplicateEdge { line, src, dst } => {
                write!(f, "line {line}: duplicate edge `{src}` -> `{dst}`")
            }
            GraphError::DanglingEndpoint { line, id } => {
                write!(f, "line {line}: edge endpoint `{id}` is not a vertex")
            }
            GraphError::NonPositive { line, what } => {
                write!(f, "line {line}: {what} must be positive")
            }
            GraphError::SelfLoop { line, id } => {
                write!(f, "line {line}: self loop at `{id}`")
            }
            GraphError::MissingHeader => {
                write!(f, "missing `graph directed|undirected` header line")
            }
            GraphError::MissingStart => {
                write!(f, "directed graph needs a `start <id>` line for layered mode")
            }
            GraphError::UnknownVertex { id } => write!(f, "unknown vertex `{id}`"),
        }
    }
}

impl std::error::Error for GraphError {}

impl WeightedGraph {
    pub fn new(directed: bool) -> WeightedGraph {
        WeightedGraph {
            vertices: Vec::new(),
            edges: Vec::new(),
            directed,
            start: None,
            index: HashMap::new(),
        }
    }

    pub fn add_vertex(&mut self, v: Vertex) -> Result<(), GraphError> {
        if v.weight <= 0.0 {
            return Err(GraphError::NonPositive {
                line: 0,
                what: format!("weight of `{}`", v.id),
            });
        }
        if v.width <= 0.0 || v.height <= 0.0 {
            return Err(GraphError::NonPositive {
                line: 0,
                what: format!("dimensions of `{}`", v.id),
            });
        }
        if self.index.contains_key(&v.id) {
            return Err(GraphError::DuplicateVertex {
                line: 0,
                id: v.id.clone(),
            });
        }
        self.index.insert(v.id.clone(), self.vertices.len());
        self.vertices.push(v);
        Ok(())
    }

    pub fn add_edge(&mut self, e: Edge) -> Result<(), GraphError> {
        if e.weight <= 0.0 {
            return Err(GraphError::NonPositive {
                line: 0,
                what: format!("weight of edge `{}` -> `{}`", e.src, e.dst),
            });
        }
        if e.src == e.dst {
            return Err(GraphError::SelfLoop {
                line: 0,
                id: e.src.clone(),
            });
        }
        for (a, b) in [(&e.src, &e.dst), (&e.dst, &e.src)] {
            if !self.index.contains_key(a.as_str()) {
                return Err(GraphError::DanglingEndpoint {
                    line: 0,
                    id: a.clone(),
                });
            }
            let _ = b;
        }
        if self.has_edge(&e.src, &e.dst) {
            return Err(GraphError::DuplicateEdge {
                line: 0,
                src: e.src.clone(),
                dst: e.dst.clone(),
            });
        }
        self.edges.push(e);
        Ok(())
    }

    pub fn has_edge(&self, src: &str, dst: &str) -> bool {
        self.edges.iter().any(|e| {
            (e.src == src && e.dst == dst) || (!self.directed && e.src == dst && e.dst == src)
        })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex(&self, id: &str) -> Option<&Vertex> {
        self.index.get(id).map(|&i| &self.vertices[i])
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn total_vertex_weight(&self) -> f64 {
        self.vertices.iter().map(|v| v.weight).sum()
    }

    pub fn total_edge_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    pub fn degree(&self, id: &str) -> usize {
        self.edges
            .iter()
            .filter(|e| e.src == id || e.dst == id)
            .count()
    }

    /// Neighbors along outgoing edges (all incident edges when undirected),
    /// in edge insertion order.
    pub fn out_neighbors<'a>(&'a self, id: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.edges.iter().filter_map(move |e| {
            if e.src == id {
                Some(e.dst.as_str())
            } else if !self.directed && e.dst == id {
                Some(e.src.as_str())
            } else {
                None
            }
        })
    }

    pub fn in_neighbors<'a>(&'a self, id: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.edges.iter().filter_map(move |e| {
            if e.dst == id {
                Some(e.src.as_str())
            } else if !self.directed && e.src == id {
                Some(e.dst.as_str())
            } else {
                None
            }
        })
    }

    /// Set of vertex ids reachable from `s` along directed edges, `s` included.
    pub fn reachable_from(&self, s: &str) -> Result<HashSet<String>, GraphError> {
        if !self.contains(s) {
            return Err(GraphError::UnknownVertex { id: s.to_string() });
        }
        let mut seen: HashSet<String> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(s.to_string());
        queue.push_back(s.to_string());
        while let Some(u) = queue.pop_front() {
            for e in &self.edges {
                if e.src == u && !seen.contains(&e.dst) {
                    seen.insert(e.dst.clone());
                    queue.push_back(e.dst.clone());
                }
            }
        }
        Ok(seen)
    }

    /// Subgraph induced by `keep`: exactly those vertices, and every edge with
    /// both endpoints kept. The start vertex survives iff it is kept.
    pub fn induced_subgraph(&self, keep: &HashSet<String>) -> WeightedGraph {
        let mut g = WeightedGraph::new(self.directed);
        for v in &self.vertices {
            if keep.contains(&v.id) {
                g.add_vertex(v.clone()).expect("kept vertex is valid");
            }
        }
        for e in &self.edges {
            if keep.contains(&e.src) && keep.contains(&e.dst) {
                g.add_edge(e.clone()).expect("kept edge is valid");
            }
        }
        g.start = self.start.clone().filter(|s| keep.contains(s));
        g
    }

    /// Remove a single vertex and its incident edges.
    pub fn remove_vertex(&mut self, id: &str) {
        self.vertices.retain(|v| v.id != id);
        self.edges.retain(|e| e.src != id && e.dst != id);
        if self.start.as_deref() == Some(id) {
            self.start = None;
        }
        self.rebuild_index();
    }

    pub fn remove_edge(&mut self, src: &str, dst: &str) {
        self.edges.retain(|e| !(e.src == src && e.dst == dst));
    }

    fn rebuild_index(&mut self) {
        self.index = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.id.clone(), i))
            .collect();
    }

    /// Whether `self` contains only vertices and edges of `other` (weights and
    /// dimensions must match exactly).
    pub fn is_subgraph_of(&self, other: &WeightedGraph) -> bool {
        self.vertices
            .iter()
            .all(|v| other.vertex(&v.id).map(|o| o == v).unwrap_or(false))
            && self.edges.iter().all(|e| {
                other.edges.iter().any(|o| {
                    o.weight == e.weight
                        && ((o.src == e.src && o.dst == e.dst)
                            || (!other.directed && o.src == e.dst && o.dst == e.src))
                })
            })
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        out.push_str(if self.directed {
            "graph directed\n"
        } else {
            "graph undirected\n"
        });
        if let Some(s) = &self.start {
            out.push_str(&format!("start {s}\n"));
        }
        for v in &self.vertices {
            out.push_str(&format!(
                "v {} {} {} {} {}\n",
                v.id,
                fmt_num(v.weight),
                fmt_num(v.width),
                fmt_num(v.height),
                v.label
            ));
        }
        for e in &self.edges {
            out.push_str(&format!(
                "e {} {} {}\n",
                e.src,
                e.dst,
                fmt_num(e.weight)
            ));
        }
        out
    }
}

/// Shortest decimal that round-trips through f64 parsing.
fn fmt_num(x: f64) -> String {
    let s = format!("{x}");
    debug_assert_eq!(s.parse::<f64>().ok(), Some(x));
    s
}

/// Parses the line-oriented graph format. Errors carry 1-based line numbers.
pub fn parse_graph(text: &str) -> Result<WeightedGraph, GraphError> {
    let mut graph: Option<WeightedGraph> = None;
    let mut start_line: Option<(usize, String)> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let tag = parts.next().unwrap();
        match tag {
            "graph" => {
                let mode = parts.next().ok_or_else(|| GraphError::Malformed {
                    line: lineno,
                    message: "expected `graph directed` or `graph undirected`".into(),
                })?;
                let directed = match mode {
                    "directed" => true,
                    "undirected" => false,
                    other => {
                        return Err(GraphError::Malformed {
                            line: lineno,
                            message: format!("unknown graph mode `{other}`"),
                        })
                    }
                };
                if graph.is_some() {
                    return Err(GraphError::Malformed {
                        line: lineno,
                        message: "repeated `graph` header".into(),
                    });
                }
                graph = Some(WeightedGraph::new(directed));
            }
            "v" => {
                let g = graph.as_mut().ok_or(GraphError::MissingHeader)?;
                let id = parts
                    .next()
                    .ok_or_else(|| malformed(lineno, "vertex line needs an id"))?
                    .to_string();
                let weight = parse_field(lineno, parts.next(), "vertex weight")?;
                let width = parse_field(lineno, parts.next(), "vertex width")?;
                let height = parse_field(lineno, parts.next(), "vertex height")?;
                let label: String = parts.collect::<Vec<_>>().join(" ");
                let label = if label.is_empty() { id.clone() } else { label };
                g.add_vertex(Vertex {
                    id,
                    weight,
                    width,
                    height,
                    label,
                })
                .map_err(|e| at_line(e, lineno))?;
            }
            "e" => {
                let g = graph.as_mut().ok_or(GraphError::MissingHeader)?;
                let src = parts
                    .next()
                    .ok_or_else(|| malformed(lineno, "edge line needs a source id"))?
                    .to_string();
                let dst = parts
                    .next()
                    .ok_or_else(|| malformed(lineno, "edge line needs a target id"))?
                    .to_string();
                let weight = parse_field(lineno, parts.next(), "edge weight")?;
                g.add_edge(Edge { src, dst, weight })
                    .map_err(|e| at_line(e, lineno))?;
            }
            "start" => {
                let id = parts
                    .next()
                    .ok_or_else(|| malformed(lineno, "start line needs a vertex id"))?
                    .to_string();
                start_line = Some((lineno, id));
            }
            other => {
                return Err(malformed(lineno, &format!("unknown line tag `{other}`")));
            }
        }
    }
    let mut g = graph.ok_or(GraphError::MissingHeader)?;
    if let Some((lineno, id)) = start_line {
        if !g.contains(&id) {
            return Err(GraphError::DanglingEndpoint { line: lineno, id });
        }
        g.start = Some(id);
    }
    Ok(g)
}

fn malformed(line: usize, message: &str) -> GraphError {
    GraphError::Malformed {
        line,
        message: message.to_string(),
    }
}

fn parse_field(line: usize, field: Option<&str>, what: &str) -> Result<f64, GraphError> {
    let raw = field.ok_or_else(|| malformed(line, &format!("missing {what}")))?;
    let value: f64 = raw
        .parse()
        .map_err(|_| malformed(line, &format!("{what} `{raw}` is not a number")))?;
    if !value.is_finite() {
        return Err(malformed(line, &format!("{what} must be finite")));
    }
    Ok(value)
}

fn at_line(e: GraphError, lineno: usize) -> GraphError {
    match e {
        GraphError::DuplicateVertex { id, .. } => GraphError::DuplicateVertex { line: lineno, id },
        GraphError::DuplicateEdge { src, dst, .. } => GraphError::DuplicateEdge {
            line: lineno,
            src,
            dst,
        },
        GraphError::DanglingEndpoint { id, .. } => {
            GraphError::DanglingEndpoint { line: lineno, id }
        }
        GraphError::NonPositive { what, .. } => GraphError::NonPositive { line: lineno, what },
        GraphError::SelfLoop { id, .. } => GraphError::SelfLoop { line: lineno, id },
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_two_vertices_one_edge() {
        let g = parse_graph("graph undirected\nv a 3 2.0 0.6 Alice\nv b 1 1.5 0.6 Bob\ne a b 2")
            .unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 1);
        assert!(!g.directed);
        assert_eq!(g.vertex("a").unwrap().label, "Alice");
        assert_eq!(g.edges()[0].weight, 2.0);
    }

    #[test]
    fn dangling_endpoint_is_reported_with_line() {
        let err = parse_graph("graph undirected\ne a b 2").unwrap_err();
        assert_eq!(
            err,
            GraphError::DanglingEndpoint {
                line: 2,
                id: "a".into()
            }
        );
    }

    #[test]
    fn rejects_duplicates_and_nonpositive() {
        let err = parse_graph("graph undirected\nv a 1 1 1 A\nv a 2 1 1 B").unwrap_err();
        assert!(matches!(err, GraphError::DuplicateVertex { line: 3, .. }));
        let err = parse_graph("graph undirected\nv a 0 1 1 A").unwrap_err();
        assert!(matches!(err, GraphError::NonPositive { line: 2, .. }));
        let err =
            parse_graph("graph undirected\nv a 1 1 1\nv b 1 1 1\ne a b 2\ne b a 1").unwrap_err();
        assert!(matches!(err, GraphError::DuplicateEdge { line: 5, .. }));
    }

    #[test]
    fn directed_allows_antiparallel_pair() {
        let g = parse_graph("graph directed\nv a 1 1 1\nv b 1 1 1\ne a b 2\ne b a 1\nstart a")
            .unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.start.as_deref(), Some("a"));
    }

    #[test]
    fn reachability_ignores_isolated_vertices() {
        let g = parse_graph(
            "graph directed\nstart s\nv s 1 1 1\nv a 1 1 1\nv b 1 1 1\nv c 1 1 1\ne s a 1\ne a b 1",
        )
        .unwrap();
        let r = g.reachable_from("s").unwrap();
        assert_eq!(
            r,
            ["s", "a", "b"].iter().map(|s| s.to_string()).collect()
        );
    }

    #[test]
    fn reachability_of_edgeless_graph_is_self() {
        let g = parse_graph("graph directed\nv s 1 1 1\nstart s").unwrap();
        assert_eq!(
            g.reachable_from("s").unwrap(),
            std::iter::once("s".to_string()).collect()
        );
    }

    #[test]
    fn induced_subgraph_identity_empty_and_triangle() {
        let g = parse_graph(
            "graph undirected\nv a 1 1 1\nv b 1 1 1\nv c 1 1 1\ne a b 1\ne b c 1\ne a c 1",
        )
        .unwrap();
        let all: HashSet<String> = g.vertices().iter().map(|v| v.id.clone()).collect();
        assert_eq!(g.induced_subgraph(&all), g);
        assert_eq!(g.induced_subgraph(&HashSet::new()).vertex_count(), 0);
        let two: HashSet<String> = ["a", "b"].iter().map(|s| s.to_string()).collect();
        let sub = g.induced_subgraph(&two);
        assert_eq!(sub.vertex_count(), 2);
        assert_eq!(sub.edge_count(), 1);
    }
}
