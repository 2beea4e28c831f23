//! Postprocessing for the force pipeline: edges that run through nonincident
//! vertices are re-routed as quadratic Bézier curves. Only the control point
//! moves, pushed away from nearby vertex boxes and pulled back by the boxes
//! the straight edge (almost) hit, so the curve stays close to the edge.

use crate::force::ForceParams;
use crate::geometry::{
    quad_bezier_point, segment_rect_intersection, Point, Rect, RectIntersection,
};
use crate::graph::WeightedGraph;
use crate::layout::{EdgeGeometry, Layout};

/// Role of a vertex near a refined edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveRole {
    /// Repels the control point when the curve comes close.
    Repelling,
    /// Was (almost) intersected by the straight edge: repels when close and
    /// always attracts, which anchors the curve near the vertex it avoids.
    Attracting,
}

/// Working state of one edge refinement.
#[derive(Debug, Clone)]
pub struct CurveState {
    pub src: String,
    pub dst: String,
    pub control: Point,
    /// Nearby vertices with their role.
    pub nearby: Vec<(String, CurveRole)>,
}

const CURVE_SAMPLES: usize = 64;
const CURVE_MAX_ITERATIONS: usize = 200;
const DISTANCE_FLOOR: f64 = 1e-3;

/// Repelling force on the control point from vertex rectangle `rect`:
/// magnitude `(w^2 + h^2) / d` along the line from the box towards the curve,
/// where the two closest points realize `d`.
pub fn curve_repel(rect: &Rect, curve_point: Point) -> Point {
    let p_v = rect.closest_point(curve_point);
    let d = p_v.dist(curve_point).max(DISTANCE_FLOOR);
    let dir = p_v
        .unit_towards(curve_point)
        .unwrap_or(Point::new(0.0, -1.0));
    dir.scale((rect.width * rect.width + rect.height * rect.height) / d)
}

/// Attracting force pulling the curve back towards an (almost) intersected
/// vertex: magnitude `d^2 / sqrt(w^2 + h^2)` towards the box.
pub fn curve_attract(rect: &Rect, curve_point: Point) -> Point {
    let p_v = rect.closest_point(curve_point);
    let d = p_v.dist(curve_point);
    if d == 0.0 {
        return Point::ZERO;
    }
    let dir = curve_point.unit_towards(p_v).unwrap();
    dir.scale(d * d / (rect.width * rect.width + rect.height * rect.height).sqrt())
}

/// Point of the quadratic curve closest to `rect`: 64 uniform parameter
/// samples refined by a bisection around the best sample.
fn closest_curve_point(p0: Point, control: Point, p1: Point, rect: &Rect) -> Point {
    let mut best_t = 0.0;
    let mut best_d = f64::INFINITY;
    for i in 0..=CURVE_SAMPLES {
        let t = i as f64 / CURVE_SAMPLES as f64;
        let p = quad_bezier_point(p0, control, p1, t);
        let d = rect.distance_to_point(p);
        if d < best_d {
            best_d = d;
            best_t = t;
        }
    }
    let step = 1.0 / CURVE_SAMPLES as f64;
    let mut lo = (best_t - step).max(0.0);
    let mut hi = (best_t + step).min(1.0);
    for _ in 0..20 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        let d1 = rect.distance_to_point(quad_bezier_point(p0, control, p1, m1));
        let d2 = rect.distance_to_point(quad_bezier_point(p0, control, p1, m2));
        if d1 < d2 {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    quad_bezier_point(p0, control, p1, (lo + hi) / 2.0)
}

fn curve_intersects_inner(
    p0: Point,
    control: Point,
    p1: Point,
    rect: &Rect,
    inner_fraction: f64,
) -> bool {
    let core = rect.scaled(inner_fraction);
    (0..=CURVE_SAMPLES).any(|i| {
        core.contains_point(quad_bezier_point(
            p0,
            control,
            p1,
            i as f64 / CURVE_SAMPLES as f64,
        ))
    })
}

/// Builds the curve state for one edge of the final straight-line layout.
/// Nearby vertices are collected once, against the straight segment:
/// repelling within `2 * max(w, h)` of the box, attracting when the segment
/// passes within `0.1 * l_unit` of the box boundary.
fn curve_state(
    graph: &WeightedGraph,
    layout: &Layout,
    src: &str,
    dst: &str,
    params: &ForceParams,
) -> CurveState {
    let seg = layout.edge_segment(src, dst).expect("edge endpoints drawn");
    let mut nearby = Vec::new();
    for v in graph.vertices() {
        if v.id == src || v.id == dst {
            continue;
        }
        let rect = layout.vertex_rect(graph, &v.id).unwrap();
        let d = seg.distance_to_rect(&rect);
        if d < 0.1 * params.l_unit {
            nearby.push((v.id.clone(), CurveRole::Attracting));
        } else if d < 2.0 * v.width.max(v.height) {
            nearby.push((v.id.clone(), CurveRole::Repelling));
        }
    }
    CurveState {
        src: src.to_string(),
        dst: dst.to_string(),
        control: seg.point_at(0.5),
        nearby,
    }
}

fn refine_control_point(
    graph: &WeightedGraph,
    layout: &Layout,
    state: &mut CurveState,
    params: &ForceParams,
) {
    let p0 = layout.position(&state.src).unwrap();
    let p1 = layout.position(&state.dst).unwrap();
    let mut temperature = params.l_unit;
    for _ in 0..CURVE_MAX_ITERATIONS {
        let mut total = Point::ZERO;
        for (id, role) in &state.nearby {
            let rect = layout.vertex_rect(graph, id).unwrap();
            let p_e = closest_curve_point(p0, state.control, p1, &rect);
            let d = rect.distance_to_point(p_e);
            if d < 2.0 * rect.width.max(rect.height) {
                total = total.add(curve_repel(&rect, p_e));
            }
            if *role == CurveRole::Attracting {
                total = total.add(curve_attract(&rect, p_e));
            }
        }
        let step = total.clamp_len(temperature);
        temperature *= params.cooling;
        state.control = state.control.add(step);
        if step.norm() < params.eps_move {
            break;
        }
    }
}

/// Report of one refinement pass.
#[derive(Debug, Clone, Default)]
pub struct RefineReport {
    /// Edges converted to curves.
    pub curved: Vec<(String, String)>,
    /// Curved edges that still cut a nonincident vertex's inner region.
    pub unresolved: Vec<(String, String)>,
}

/// Converts every edge whose straight segment intersects a nonincident vertex
/// rectangle into a quadratic Bézier curve; all other edges keep their
/// geometry. Edges are independent, so refinement order does not matter.
pub fn refine_curves(
    graph: &WeightedGraph,
    layout: &mut Layout,
    params: &ForceParams,
) -> RefineReport {
    let mut report = RefineReport::default();
    let snapshots: Vec<(usize, String, String)> = layout
        .edges
        .iter()
        .enumerate()
        .filter(|(_, e)| matches!(e.geometry, EdgeGeometry::Straight))
        .map(|(i, e)| (i, e.src.clone(), e.dst.clone()))
        .collect();
    for (idx, src, dst) in snapshots {
        let seg = layout.edge_segment(&src, &dst).unwrap();
        let offended = graph.vertices().iter().any(|v| {
            v.id != src && v.id != dst && {
                let rect = layout.vertex_rect(graph, &v.id).unwrap();
                seg.intersects_rect(&rect)
            }
        });
        if !offended {
            continue;
        }
        let mut state = curve_state(graph, layout, &src, &dst, params);
        refine_control_point(graph, layout, &mut state, params);
        let p0 = layout.position(&src).unwrap();
        let p1 = layout.position(&dst).unwrap();
        let unresolved = graph.vertices().iter().any(|v| {
            v.id != src && v.id != dst && {
                let rect = layout.vertex_rect(graph, &v.id).unwrap();
                curve_intersects_inner(p0, state.control, p1, &rect, params.inner_fraction)
            }
        });
        if unresolved {
            report.unresolved.push((src.clone(), dst.clone()));
        }
        layout.edges[idx].geometry = EdgeGeometry::Quadratic {
            control: state.control,
        };
        report.curved.push((src, dst));
    }
    report
}

/// Number of edge-vertex inner intersections in a layout, counting straight
/// segments and refined curves alike.
pub fn inner_intersection_count(
    graph: &WeightedGraph,
    layout: &Layout,
    params: &ForceParams,
) -> usize {
    let mut count = 0;
    for e in &layout.edges {
        for v in graph.vertices() {
            if v.id == e.src || v.id == e.dst {
                continue;
            }
            let rect = layout.vertex_rect(graph, &v.id).unwrap();
            let hit = match &e.geometry {
                EdgeGeometry::Quadratic { control } => curve_intersects_inner(
                    layout.position(&e.src).unwrap(),
                    *control,
                    layout.position(&e.dst).unwrap(),
                    &rect,
                    params.inner_fraction,
                ),
                _ => {
                    let seg = layout.edge_segment(&e.src, &e.dst).unwrap();
                    matches!(
                        segment_rect_intersection(&seg, &rect, params.inner_fraction),
                        RectIntersection::Inner(_)
                    )
                }
            };
            if hit {
                count += 1;
            }
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;
    use crate::layout::DrawnEdge;

    const TOL: f64 = 1e-9;

    #[test]
    fn repel_formula_on_unit_distance() {
        // 2x1 box at distance 1 below the probe point: magnitude (4+1)/1 = 5.
        let rect = Rect::new(Point::new(0.0, 2.0), 2.0, 1.0);
        let f = curve_repel(&rect, Point::new(0.0, 0.5));
        assert!((f.norm() - 5.0).abs() <= TOL);
        assert!(f.y < 0.0);
    }

    #[test]
    fn repel_halves_with_double_distance() {
        let rect = Rect::new(Point::new(0.0, 2.0), 2.0, 1.0);
        let f1 = curve_repel(&rect, Point::new(0.0, 0.5)).norm();
        let f2 = curve_repel(&rect, Point::new(0.0, -0.5)).norm();
        assert!((f1 - 2.0 * f2).abs() <= TOL);
    }

    #[test]
    fn attract_formula_and_contact_zero() {
        let rect = Rect::new(Point::new(0.0, 2.0), 2.0, 1.0);
        let f = curve_attract(&rect, Point::new(0.0, 0.5));
        assert!((f.norm() - 1.0 / 5.0_f64.sqrt()).abs() <= TOL);
        assert!(f.y > 0.0);
        // On the boundary: no over-correction.
        let touch = curve_attract(&rect, Point::new(0.0, 1.5));
        assert_eq!(touch, Point::ZERO);
    }

    #[test]
    fn larger_box_attracts_weaker_at_equal_distance() {
        let small = Rect::new(Point::new(0.0, 2.0), 2.0, 1.0);
        let large = Rect::new(Point::new(0.0, 2.5), 2.0, 2.0);
        // Both boundaries at y = 1.5; probe at distance 1.
        let fs = curve_attract(&small, Point::new(0.0, 0.5)).norm();
        let fl = curve_attract(&large, Point::new(0.0, 0.5)).norm();
        assert!(fl < fs);
    }

    fn straight_layout(g: &WeightedGraph, coords: &[(&str, f64, f64)]) -> Layout {
        let mut layout = Layout::default();
        for (id, x, y) in coords {
            layout.positions.insert(id.to_string(), Point::new(*x, *y));
        }
        for e in g.edges() {
            layout.edges.push(DrawnEdge {
                src: e.src.clone(),
                dst: e.dst.clone(),
                geometry: EdgeGeometry::Straight,
                stroke_width: None,
                reverted: false,
            });
        }
        layout
    }

    #[test]
    fn untouched_edges_stay_straight() {
        let g =
            parse_graph("graph undirected\nv a 1 0.5 0.5\nv b 1 0.5 0.5\nv c 1 0.5 0.5\ne a b 1")
                .unwrap();
        let mut layout =
            straight_layout(&g, &[("a", 0.0, 0.0), ("b", 4.0, 0.0), ("c", 2.0, 5.0)]);
        let params = ForceParams::with_l_unit(2.0);
        let report = refine_curves(&g, &mut layout, &params);
        assert!(report.curved.is_empty());
        assert_eq!(layout.edges[0].geometry, EdgeGeometry::Straight);
    }

    #[test]
    fn single_offender_is_cleared_sideways() {
        let g =
            parse_graph("graph undirected\nv a 1 0.4 0.4\nv b 1 0.4 0.4\nv c 1 1.0 0.6\ne a b 1")
                .unwrap();
        // c sits exactly on the midpoint of the straight edge.
        let mut layout =
            straight_layout(&g, &[("a", 0.0, 0.0), ("b", 6.0, 0.0), ("c", 3.0, 0.0)]);
        let params = ForceParams::with_l_unit(2.0);
        let report = refine_curves(&g, &mut layout, &params);
        assert_eq!(report.curved.len(), 1);
        let EdgeGeometry::Quadratic { control } = layout.edges[0].geometry else {
            panic!("edge was not curved");
        };
        // The control point left the segment perpendicularly.
        assert!(control.y.abs() > 0.1);
        // The curve no longer meets the offender's box.
        let rect = layout.vertex_rect(&g, "c").unwrap();
        let min_d = (0..=64)
            .map(|i| {
                let t = i as f64 / 64.0;
                rect.distance_to_point(quad_bezier_point(
                    Point::new(0.0, 0.0),
                    control,
                    Point::new(6.0, 0.0),
                    t,
                ))
            })
            .fold(f64::INFINITY, f64::min);
        assert!(min_d > 0.0, "curve still touches the offender");
        assert!(report.unresolved.is_empty());
    }

    #[test]
    fn symmetric_offenders_keep_control_on_bisector() {
        let g = parse_graph(
            "graph undirected\nv a 1 0.4 0.4\nv b 1 0.4 0.4\nv c 1 1.0 0.6\nv d 1 1.0 0.6\ne a b 1",
        )
        .unwrap();
        // c and d mirror each other across the segment midpoint.
        let mut layout = straight_layout(
            &g,
            &[
                ("a", 0.0, 0.0),
                ("b", 6.0, 0.0),
                ("c", 2.0, 0.0),
                ("d", 4.0, 0.0),
            ],
        );
        let params = ForceParams::with_l_unit(2.0);
        refine_curves(&g, &mut layout, &params);
        let EdgeGeometry::Quadratic { control } = layout.edges[0].geometry else {
            panic!("edge was not curved");
        };
        // Mirror symmetry about x = 3 keeps the control point on the bisector.
        assert!((control.x - 3.0).abs() < 1e-6, "control {control:?}");
    }

    #[test]
    fn endpoints_are_preserved() {
        let g =
            parse_graph("graph undirected\nv a 1 0.4 0.4\nv b 1 0.4 0.4\nv c 1 1.0 0.6\ne a b 1")
                .unwrap();
        let mut layout =
            straight_layout(&g, &[("a", 0.0, 0.0), ("b", 6.0, 0.0), ("c", 3.0, 0.1)]);
        let before = (
            layout.position("a").unwrap(),
            layout.position("b").unwrap(),
        );
        let params = ForceParams::with_l_unit(2.0);
        refine_curves(&g, &mut layout, &params);
        assert_eq!(layout.position("a").unwrap(), before.0);
        assert_eq!(layout.position("b").unwrap(), before.1);
    }
}
