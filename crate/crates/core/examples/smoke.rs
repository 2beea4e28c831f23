use arealay::corpus::{generate_corpus, CorpusSpec, GraphKind};
use arealay::force::{run_force_pipeline, ForceParams};
use arealay::layout::DrawingArea;

fn main() {
    let area = DrawingArea::new(29.7, 21.0);
    let mut totals = [0.0f64; 2];
    let mut vtot = [0usize; 2];
    let mut etot = [0usize; 2];
    let mut times = 0.0;
    for seed in 7u64..=16 {
        let spec = CorpusSpec {
            vertices: 180, count: 1, seed, kind: GraphKind::CollabLike,
            edges_per_vertex: 3.0,
            label_length_mean: 8.0,
            ..CorpusSpec::default()
        };
        let g = &generate_corpus(&spec).unwrap()[0];
        let mut row = String::new();
        for (i, two_phase) in [false, true].into_iter().enumerate() {
            let params = ForceParams {
                two_phase_equilibrium: two_phase,
                ..ForceParams::with_l_unit(2.5)
            };
            let t0 = std::time::Instant::now();
            let r = run_force_pipeline(g, &area, &params).unwrap();
            times += t0.elapsed().as_secs_f64();
            totals[i] += r.metrics.edge_weight_out;
            vtot[i] += r.metrics.vertices_out;
            etot[i] += r.metrics.edges_out;
            row.push_str(&format!(
                " | p{}: v {:3} e {:3} ew{:7.1}",
                i + 1, r.metrics.vertices_out, r.metrics.edges_out, r.metrics.edge_weight_out,
            ));
        }
        println!("seed {seed}{row}");
    }
    println!(
        "TOTAL v {:?} e {:?} | ew single {:8.1} two-phase {:8.1} (ratio {:.2}) avg time {:.2}s",
        vtot, etot, totals[0], totals[1], totals[1] / totals[0].max(1e-9), times / 20.0
    );
}
