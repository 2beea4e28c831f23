//! Experiment harness: the exhaustive subset oracle and the table-style
//! parameter studies run by the `bench` subcommand.

use std::collections::HashSet;
use std::fmt;
use std::time::Instant;

use crate::force::{run_force_pipeline, ForceParams};
use crate::graph::WeightedGraph;
use crate::layered::{run_layered_pipeline, CrossingMethod, LayeredParams};
use crate::layout::DrawingArea;

/// Maximum retained vertex weight over all vertex subsets, where feasibility
/// of a subset is judged by the given checker (normally a layout attempt with
/// the pipeline's own containment and separation test). Exhaustive, so the
/// instance must stay tiny.
pub fn oracle_optimal_subgraph(
    graph: &WeightedGraph,
    mut feasible: impl FnMut(&WeightedGraph) -> bool,
) -> f64 {
    let n = graph.vertex_count();
    assert!(n <= 10, "subset oracle is exponential; {n} vertices is too many");
    let ids: Vec<String> = graph.vertices().iter().map(|v| v.id.clone()).collect();
    let mut best = 0.0f64;
    for mask in 0u32..(1 << n) {
        let keep: HashSet<String> = ids
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, id)| id.clone())
            .collect();
        let sub = graph.induced_subgraph(&keep);
        let weight = sub.total_vertex_weight();
        if weight > best && feasible(&sub) {
            best = weight;
        }
    }
    best
}

/// The parameter studies mirroring the published comparison tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentId {
    /// Preprocessing factor against runtime and quality (force pipeline).
    CPre,
    /// Vertex-vs-edge removal factor (force pipeline).
    CLen,
    /// One equilibrium per step vs. one without and one with edge repulsion.
    TwoPhase,
    /// Weight cutoff preprocessing (layered pipeline).
    Threshold,
    /// Crossing minimization heuristics (layered pipeline).
    CrossingMin,
}

impl ExperimentId {
    pub fn parse(s: &str) -> Option<ExperimentId> {
        match s {
            "cpre" => Some(ExperimentId::CPre),
            "clen" => Some(ExperimentId::CLen),
            "two_phase" => Some(ExperimentId::TwoPhase),
            "threshold" => Some(ExperimentId::Threshold),
            "crossing_min" => Some(ExperimentId::CrossingMin),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ExperimentId::CPre => "cpre",
            ExperimentId::CLen => "clen",
            ExperimentId::TwoPhase => "two_phase",
            ExperimentId::Threshold => "threshold",
            ExperimentId::CrossingMin => "crossing_min",
        }
    }
}

/// One aggregated grid point of an experiment.
#[derive(Debug, Clone)]
pub struct GridPointResult {
    pub label: String,
    pub mean_vertex_weight: f64,
    pub mean_edge_weight: f64,
    pub mean_crossings: f64,
    pub mean_crossing_weight: f64,
    pub mean_runtime: f64,
    /// Per-seed rows: (seed, vertex weight, edge weight, crossings,
    /// crossing weight, runtime seconds).
    pub rows: Vec<(usize, f64, f64, f64, f64, f64)>,
}

/// Result of one experiment: a text table mirroring the published layout and
/// CSV lines with one row per (seed, grid point).
#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub id: ExperimentId,
    pub points: Vec<GridPointResult>,
    pub include_runtime_in_csv: bool,
}

impl ExperimentReport {
    pub fn csv(&self) -> String {
        let mut out = String::from("experiment,seed,param,vertex_weight,edge_weight,crossings,crossing_weight");
        if self.include_runtime_in_csv {
            out.push_str(",runtime_s");
        }
        out.push('\n');
        for p in &self.points {
            for (seed, vw, ew, c, cw, rt) in &p.rows {
                out.push_str(&format!(
                    "{},{},{},{:.4},{:.4},{:.1},{:.4}",
                    self.id.name(),
                    seed,
                    p.label,
                    vw,
                    ew,
                    c,
                    cw
                ));
                if self.include_runtime_in_csv {
                    out.push_str(&format!(",{rt:.4}"));
                }
                out.push('\n');
            }
        }
        out
    }
}

impl fmt::Display for ExperimentReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let change = |value: f64, base: f64| -> String {
            if base == 0.0 {
                return "---".to_string();
            }
            let pct = 100.0 * (value - base) / base;
            if pct >= 0.0 {
                format!("+ {pct:.1} %")
            } else {
                format!("- {:.1} %", -pct)
            }
        };
        writeln!(f, "experiment: {}", self.id.name())?;
        match self.id {
            ExperimentId::CrossingMin => {
                writeln!(
                    f,
                    "{:<28} {:>14} {:>14} {:>10} {:>18}",
                    "", "vertex weight", "edge weight", "crossings", "weight of crossings"
                )?;
                for p in &self.points {
                    writeln!(
                        f,
                        "{:<28} {:>14.2} {:>14.2} {:>10.2} {:>18.2}",
                        p.label,
                        p.mean_vertex_weight,
                        p.mean_edge_weight,
                        p.mean_crossings,
                        p.mean_crossing_weight
                    )?;
                }
            }
            _ => {
                writeln!(
                    f,
                    "{:<16} {:>12} {:>10} {:>12} {:>10} {:>11} {:>10}",
                    "", "vertices", "change", "edges", "change", "runtime (s)", "change"
                )?;
                let base = &self.points[0];
                for p in &self.points {
                    writeln!(
                        f,
                        "{:<16} {:>12.1} {:>10} {:>12.1} {:>10} {:>11.1} {:>10}",
                        p.label,
                        p.mean_vertex_weight,
                        change(p.mean_vertex_weight, base.mean_vertex_weight),
                        p.mean_edge_weight,
                        change(p.mean_edge_weight, base.mean_edge_weight),
                        p.mean_runtime,
                        change(p.mean_runtime, base.mean_runtime),
                    )?;
                }
            }
        }
        Ok(())
    }
}

fn aggregate(label: String, rows: Vec<(usize, f64, f64, f64, f64, f64)>) -> GridPointResult {
    let n = rows.len().max(1) as f64;
    GridPointResult {
        label,
        mean_vertex_weight: rows.iter().map(|r| r.1).sum::<f64>() / n,
        mean_edge_weight: rows.iter().map(|r| r.2).sum::<f64>() / n,
        mean_crossings: rows.iter().map(|r| r.3).sum::<f64>() / n,
        mean_crossing_weight: rows.iter().map(|r| r.4).sum::<f64>() / n,
        mean_runtime: rows.iter().map(|r| r.5).sum::<f64>() / n,
        rows,
    }
}

fn force_rows(
    corpus: &[WeightedGraph],
    area: &DrawingArea,
    params: &ForceParams,
) -> Vec<(usize, f64, f64, f64, f64, f64)> {
    corpus
        .iter()
        .enumerate()
        .map(|(seed, g)| {
            let started = Instant::now();
            let result = run_force_pipeline(g, area, params);
            let elapsed = started.elapsed().as_secs_f64();
            match result {
                Ok(r) => (
                    seed,
                    r.metrics.vertex_weight_out,
                    r.metrics.edge_weight_out,
                    r.metrics.crossings as f64,
                    r.metrics.crossing_weight,
                    elapsed,
                ),
                Err(_) => (seed, 0.0, 0.0, 0.0, 0.0, elapsed),
            }
        })
        .collect()
}

fn layered_rows(
    corpus: &[WeightedGraph],
    area: &DrawingArea,
    params: &LayeredParams,
) -> Vec<(usize, f64, f64, f64, f64, f64)> {
    corpus
        .iter()
        .enumerate()
        .map(|(seed, g)| {
            let started = Instant::now();
            let result = run_layered_pipeline(g, area, params);
            let elapsed = started.elapsed().as_secs_f64();
            match result {
                Ok(r) => (
                    seed,
                    r.metrics.vertex_weight_out,
                    r.metrics.edge_weight_out,
                    r.metrics.crossings as f64,
                    r.metrics.crossing_weight,
                    elapsed,
                ),
                Err(_) => (seed, 0.0, 0.0, 0.0, 0.0, elapsed),
            }
        })
        .collect()
}

/// Runs one experiment over the corpus. `grid` feeds the parameter studies
/// (`cpre`, `clen`, `threshold`); the variant comparisons (`two_phase`,
/// `crossing_min`) ignore it.
pub fn run_table_experiment(
    id: ExperimentId,
    corpus: &[WeightedGraph],
    area: &DrawingArea,
    grid: &[f64],
    force_base: &ForceParams,
    layered_base: &LayeredParams,
    include_runtime_in_csv: bool,
) -> ExperimentReport {
    let mut points = Vec::new();
    match id {
        ExperimentId::CPre => {
            for &c_pre in grid {
                let params = ForceParams {
                    c_pre,
                    preprocess: true,
                    ..force_base.clone()
                };
                points.push(aggregate(format!("{c_pre}"), force_rows(corpus, area, &params)));
            }
        }
        ExperimentId::CLen => {
            for &c_len in grid {
                let params = ForceParams {
                    c_len,
                    ..force_base.clone()
                };
                points.push(aggregate(format!("{c_len}"), force_rows(corpus, area, &params)));
            }
        }
        ExperimentId::TwoPhase => {
            for (label, two_phase) in [("1x_equilibrium", false), ("2x_equilibrium", true)] {
                let params = ForceParams {
                    two_phase_equilibrium: two_phase,
                    ..force_base.clone()
                };
                points.push(aggregate(label.to_string(), force_rows(corpus, area, &params)));
            }
        }
        ExperimentId::Threshold => {
            for &threshold in grid {
                let params = LayeredParams {
                    threshold,
                    ..layered_base.clone()
                };
                points.push(aggregate(
                    format!("{threshold}"),
                    layered_rows(corpus, area, &params),
                ));
            }
        }
        ExperimentId::CrossingMin => {
            for (label, method) in [
                ("adjacent_exchange", CrossingMethod::AdjacentExchange),
                ("adjacent_exchange_weighted", CrossingMethod::AdjacentExchangeWeighted),
                ("median", CrossingMethod::Median),
            ] {
                let params = LayeredParams {
                    crossing_method: method,
                    ..layered_base.clone()
                };
                points.push(aggregate(label.to_string(), layered_rows(corpus, area, &params)));
            }
        }
    }
    ExperimentReport {
        id,
        points,
        include_runtime_in_csv,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{generate_corpus, CorpusSpec, GraphKind};
    use crate::graph::parse_graph;

    #[test]
    fn oracle_takes_everything_when_all_subsets_feasible() {
        let g = parse_graph("graph undirected\nv a 2 1 1\nv b 3 1 1\ne a b 1").unwrap();
        let best = oracle_optimal_subgraph(&g, |_| true);
        assert_eq!(best, 5.0);
    }

    #[test]
    fn oracle_counts_unit_squares_in_a_bounded_area() {
        // Feasibility: at most 4 unit squares fit.
        let mut text = String::from("graph undirected\n");
        for i in 0..8 {
            text.push_str(&format!("v v{i} 1 1 1\n"));
        }
        let g = parse_graph(&text).unwrap();
        let best = oracle_optimal_subgraph(&g, |sub| sub.vertex_count() <= 4);
        assert_eq!(best, 4.0);
    }

    #[test]
    fn two_phase_report_has_two_points_and_stable_csv() {
        let spec = CorpusSpec {
            vertices: 25,
            count: 2,
            kind: GraphKind::CollabLike,
            ..CorpusSpec::default()
        };
        let corpus = generate_corpus(&spec).unwrap();
        let area = DrawingArea::new(12.0, 9.0);
        let params = ForceParams {
            max_iterations: 60,
            shrink_steps: 8,
            ..ForceParams::with_l_unit(2.0)
        };
        let report = run_table_experiment(
            ExperimentId::TwoPhase,
            &corpus,
            &area,
            &[],
            &params,
            &LayeredParams::default(),
            false,
        );
        assert_eq!(report.points.len(), 2);
        assert_eq!(report.points[0].rows.len(), 2);
        let csv1 = report.csv();
        // 1 header + 2 variants x 2 seeds
        assert_eq!(csv1.lines().count(), 5);
        // Runtime excluded by default, so the CSV is reproducible.
        let report2 = run_table_experiment(
            ExperimentId::TwoPhase,
            &corpus,
            &area,
            &[],
            &params,
            &LayeredParams::default(),
            false,
        );
        assert_eq!(csv1, report2.csv());
        assert!(report.to_string().contains("2x_equilibrium"));
    }

    #[test]
    fn crossing_min_report_mirrors_three_heuristics() {
        let spec = CorpusSpec {
            vertices: 30,
            count: 2,
            kind: GraphKind::CalcLike,
            back_edge_fraction: 0.05,
            ..CorpusSpec::default()
        };
        let corpus = generate_corpus(&spec).unwrap();
        let area = DrawingArea::new(29.7, 21.0);
        let report = run_table_experiment(
            ExperimentId::CrossingMin,
            &corpus,
            &area,
            &[],
            &ForceParams::default(),
            &LayeredParams::default(),
            false,
        );
        assert_eq!(report.points.len(), 3);
        let text = report.to_string();
        assert!(text.contains("adjacent_exchange"));
        assert!(text.contains("median"));
        assert!(text.contains("weight of crossings"));
    }
}
