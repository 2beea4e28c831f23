//! Edge routing: ports on vertex sides, one vertical segment per inter-layer
//! hop ordered to avoid unnecessary crossings, and the optional conversion of
//! orthogonal hops to cubic Bézier curves.

use std::collections::BTreeMap;

use super::coords::ItemPositions;
use super::{CalcGraph, EdgeId, Item, LayerStructure, LayeredParams, PortMode};
use crate::geometry::Point;
use crate::layout::{DrawnEdge, EdgeGeometry, Layout};
use crate::metrics::CrossingWeightMode;

/// One inter-layer hop of a routed edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RouteHop {
    pub from: Point,
    pub to: Point,
    /// x of the vertical segment inside the gap.
    pub seg_x: f64,
}

/// Complete routing of a layered drawing.
#[derive(Debug, Clone, Default)]
pub struct RoutingPlan {
    pub hops: BTreeMap<EdgeId, Vec<RouteHop>>,
    /// Stroke width per edge in cm.
    pub widths: BTreeMap<EdgeId, f64>,
    /// Per inter-layer gap: (edge, hop index) in left-to-right segment order.
    pub gap_order: Vec<Vec<(EdgeId, usize)>>,
    /// Gap x-ranges.
    pub gap_ranges: Vec<(f64, f64)>,
    /// Ordering fell back to port order because the constraints cycled.
    pub fallback_gaps: Vec<usize>,
}

/// Stroke width from the edge weight: cube-root scaling, clamped.
pub fn edge_stroke_width(weight: f64, params: &LayeredParams) -> f64 {
    (params.edge_width_coeff * weight.cbrt())
        .clamp(params.edge_width_min, params.edge_width_max)
}

struct HopSkeleton {
    edge: EdgeId,
    hop: usize,
    gap: usize,
    from: Point,
    to: Point,
}

/// The item occupied by an edge in a layer, for hop-chain construction.
fn edge_item(structure: &LayerStructure, graph: &CalcGraph, edge: EdgeId, li: usize) -> Option<Item> {
    let e = graph.edge(edge)?;
    structure.layers[li]
        .iter()
        .find(|it| match it {
            Item::Real(id) => *id == e.src || *id == e.dst,
            Item::Dummy { edge: d } => *d == edge,
        })
        .cloned()
}

fn item_point(positions: &ItemPositions, item: &Item, li: usize) -> Point {
    match item {
        Item::Real(id) => positions.real[id],
        Item::Dummy { edge } => positions.dummy[&(*edge, li)],
    }
}

/// Routes every drawn edge as an orthogonal polyline: out-port, one vertical
/// segment per gap (ordered by the constraint digraph, spaced by a 1-D
/// relaxation), in-port.
pub fn route_edges(
    structure: &LayerStructure,
    graph: &CalcGraph,
    positions: &ItemPositions,
    area: &crate::layout::DrawingArea,
    params: &LayeredParams,
) -> (RoutingPlan, Layout) {
    let nlayers = structure.layers.len();
    let mut plan = RoutingPlan::default();
    let _ = area;

    // Gap x-ranges between consecutive bands.
    for li in 0..nlayers.saturating_sub(1) {
        let (bx, bw) = positions.bands[li];
        let (nx, _) = positions.bands[li + 1];
        plan.gap_ranges.push((bx + bw, nx));
    }

    // Hop skeletons with item-center endpoints; ports refine them below.
    let mut skeletons: Vec<HopSkeleton> = Vec::new();
    let mut edge_spans: BTreeMap<EdgeId, (usize, usize)> = BTreeMap::new();
    for e in graph.drawn_edges() {
        let (Some(ls), Some(ld)) = (structure.layer_of(&e.src), structure.layer_of(&e.dst))
        else {
            continue;
        };
        edge_spans.insert(e.id, (ls, ld));
        for (hop, li) in (ls..ld).enumerate() {
            let from_item = edge_item(structure, graph, e.id, li).expect("hop item exists");
            let to_item = edge_item(structure, graph, e.id, li + 1).expect("hop item exists");
            skeletons.push(HopSkeleton {
                edge: e.id,
                hop,
                gap: li,
                from: item_point(positions, &from_item, li),
                to: item_point(positions, &to_item, li + 1),
            });
        }
    }

    // Ports. Real endpoints move to the vertex side; dummies stay points.
    for li in 0..nlayers {
        for it in &structure.layers[li] {
            let Item::Real(id) = it else { continue };
            let v = graph.vertex(id).expect("item exists");
            let center = positions.real[id];
            // Outgoing: first hops of edges with src == id.
            let mut outs: Vec<usize> = skeletons
                .iter()
                .enumerate()
                .filter(|(_, s)| {
                    s.hop == 0 && graph.edge(s.edge).map(|e| e.src == *id) == Some(true)
                })
                .map(|(i, _)| i)
                .collect();
            outs.sort_by(|a, b| {
                let ya = skeletons[*a].to.y;
                let yb = skeletons[*b].to.y;
                ya.partial_cmp(&yb)
                    .unwrap()
                    .then_with(|| skeletons[*a].edge.cmp(&skeletons[*b].edge))
            });
            let k = outs.len();
            for (idx, si) in outs.iter().enumerate() {
                let y = match params.port_mode {
                    PortMode::Single => center.y,
                    PortMode::PerEdge => {
                        center.y - v.height / 2.0
                            + (idx + 1) as f64 * v.height / (k + 1) as f64
                    }
                };
                skeletons[*si].from = Point::new(center.x + v.width / 2.0, y);
            }
            // Incoming: last hops of edges with dst == id.
            let mut ins: Vec<usize> = skeletons
                .iter()
                .enumerate()
                .filter(|(_, s)| {
                    graph.edge(s.edge).map(|e| e.dst == *id) == Some(true)
                        && edge_spans[&s.edge].1 - edge_spans[&s.edge].0 == s.hop + 1
                })
                .map(|(i, _)| i)
                .collect();
            ins.sort_by(|a, b| {
                let ya = skeletons[*a].from.y;
                let yb = skeletons[*b].from.y;
                ya.partial_cmp(&yb)
                    .unwrap()
                    .then_with(|| skeletons[*a].edge.cmp(&skeletons[*b].edge))
            });
            let k = ins.len();
            for (idx, si) in ins.iter().enumerate() {
                let y = match params.port_mode {
                    PortMode::Single => center.y,
                    PortMode::PerEdge => {
                        center.y - v.height / 2.0
                            + (idx + 1) as f64 * v.height / (k + 1) as f64
                    }
                };
                skeletons[*si].to = Point::new(center.x - v.width / 2.0, y);
            }
        }
    }

    // Per gap: order the vertical segments, then space them.
    plan.gap_order = vec![Vec::new(); nlayers.saturating_sub(1)];
    for gap in 0..nlayers.saturating_sub(1) {
        let members: Vec<usize> = skeletons
            .iter()
            .enumerate()
            .filter(|(_, s)| s.gap == gap)
            .map(|(i, _)| i)
            .collect();
        let order = order_gap_segments(&skeletons, &members, gap, &mut plan);
        let (g0, g1) = plan.gap_ranges[gap];
        let k = order.len();
        let xs: Vec<f64> = (0..k)
            .map(|i| g0 + (i + 1) as f64 * (g1 - g0) / (k + 1) as f64)
            .collect();
        let xs = relax_segments(xs, (g0, g1), params, false);
        for (rank, si) in order.iter().enumerate() {
            let s = &skeletons[*si];
            plan.gap_order[gap].push((s.edge, s.hop));
            plan.hops.entry(s.edge).or_default().resize(
                edge_spans[&s.edge].1 - edge_spans[&s.edge].0,
                RouteHop {
                    from: Point::ZERO,
                    to: Point::ZERO,
                    seg_x: 0.0,
                },
            );
            plan.hops.get_mut(&s.edge).unwrap()[s.hop] = RouteHop {
                from: s.from,
                to: s.to,
                seg_x: xs[rank],
            };
        }
    }

    for e in graph.drawn_edges() {
        plan.widths.insert(e.id, edge_stroke_width(e.weight, params));
    }

    let layout = build_layout(graph, positions, &plan, false);
    (plan, layout)
}

/// Decides the left-to-right order of the vertical segments of one gap.
/// For each pair the order that produces fewer crossings between the two
/// orthogonal routes wins a constraint; the constraint digraph is sorted
/// topologically (ties by port y, then edge id). Cycles fall back to port-y
/// order.
fn order_gap_segments(
    skeletons: &[HopSkeleton],
    members: &[usize],
    gap: usize,
    plan: &mut RoutingPlan,
) -> Vec<usize> {
    let k = members.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut indeg = vec![0usize; k];
    for i in 0..k {
        for j in (i + 1)..k {
            let a = &skeletons[members[i]];
            let b = &skeletons[members[j]];
            let a_left = crossings_ordered(a, b);
            let b_left = crossings_ordered(b, a);
            if a_left < b_left {
                adj[i].push(j);
                indeg[j] += 1;
            } else if b_left < a_left {
                adj[j].push(i);
                indeg[i] += 1;
            }
        }
    }
    // Kahn with deterministic tie-breaking.
    let tie_key = |i: usize| {
        let s = &skeletons[members[i]];
        (ordered_float(s.from.y), ordered_float(s.to.y), s.edge, s.hop)
    };
    let mut ready: Vec<usize> = (0..k).filter(|i| indeg[*i] == 0).collect();
    ready.sort_by_key(|i| tie_key(*i));
    let mut order = Vec::with_capacity(k);
    let mut indeg = indeg;
    while let Some(&i) = ready.first() {
        ready.remove(0);
        order.push(members[i]);
        for &j in &adj[i] {
            indeg[j] -= 1;
            if indeg[j] == 0 {
                ready.push(j);
            }
        }
        ready.sort_by_key(|i| tie_key(*i));
    }
    if order.len() < k {
        // Constraint cycle: fall back to port order.
        let mut rest: Vec<usize> = (0..k).collect();
        rest.sort_by_key(|i| tie_key(*i));
        plan.fallback_gaps.push(gap);
        return rest.into_iter().map(|i| members[i]).collect();
    }
    order
}

fn ordered_float(x: f64) -> i64 {
    // Total order for coordinates that are well within f64 range.
    let bits = x.to_bits() as i64;
    if bits < 0 {
        i64::MIN ^ bits
    } else {
        bits
    }
}

/// Crossings between the orthogonal routes of `left` and `right` when
/// `left`'s vertical is left of `right`'s: `right`'s entry horizontal may
/// cross `left`'s vertical, and `left`'s exit horizontal may cross `right`'s
/// vertical.
fn crossings_ordered(left: &HopSkeleton, right: &HopSkeleton) -> usize {
    let mut n = 0;
    if strictly_between(right.from.y, left.from.y, left.to.y) {
        n += 1;
    }
    if strictly_between(left.to.y, right.from.y, right.to.y) {
        n += 1;
    }
    n
}

fn strictly_between(y: f64, a: f64, b: f64) -> bool {
    let lo = a.min(b);
    let hi = a.max(b);
    y > lo && y < hi
}

/// 1-D relaxation of segment x positions: mutual repulsion between
/// neighbors (and the gap walls), optionally a pull towards the gap middle;
/// displacement clamping preserves the order.
fn relax_segments(
    mut xs: Vec<f64>,
    (g0, g1): (f64, f64),
    params: &LayeredParams,
    center: bool,
) -> Vec<f64> {
    let k = xs.len();
    if k == 0 || g1 <= g0 {
        return xs;
    }
    let width = g1 - g0;
    let minsep = if center {
        (width / (k + 1) as f64 / 8.0).min(0.02)
    } else {
        width / (k + 1) as f64 / 4.0
    };
    let eta = 0.02 * width;
    let mid = (g0 + g1) / 2.0;
    for _ in 0..params.relax_iterations {
        for i in 0..k {
            let left = if i == 0 { g0 } else { xs[i - 1] };
            let right = if i + 1 == k { g1 } else { xs[i + 1] };
            let mut f = 1.0 / (xs[i] - left).max(1e-6) - 1.0 / (right - xs[i]).max(1e-6);
            if center {
                f += 2.0 * (mid - xs[i]) / width;
            }
            xs[i] = (xs[i] + eta * f).clamp(left + minsep, right - minsep);
        }
    }
    xs
}

/// Assembles the drawn edges from the plan: orthogonal polylines, or cubic
/// hops with the former bends as control points.
fn build_layout(
    graph: &CalcGraph,
    positions: &ItemPositions,
    plan: &RoutingPlan,
    bezier: bool,
) -> Layout {
    let mut layout = Layout {
        positions: positions.real.clone(),
        edges: Vec::new(),
    };
    for e in graph.drawn_edges() {
        let Some(hops) = plan.hops.get(&e.id) else {
            continue;
        };
        let geometry = if bezier {
            EdgeGeometry::CubicChain {
                segments: hops
                    .iter()
                    .map(|h| {
                        [
                            h.from,
                            Point::new(h.seg_x, h.from.y),
                            Point::new(h.seg_x, h.to.y),
                            h.to,
                        ]
                    })
                    .collect(),
            }
        } else {
            let mut points: Vec<Point> = Vec::new();
            for h in hops {
                for p in [
                    h.from,
                    Point::new(h.seg_x, h.from.y),
                    Point::new(h.seg_x, h.to.y),
                    h.to,
                ] {
                    if points.last() != Some(&p) {
                        points.push(p);
                    }
                }
            }
            EdgeGeometry::Orthogonal { points }
        };
        layout.edges.push(DrawnEdge {
            src: e.src.clone(),
            dst: e.dst.clone(),
            geometry,
            stroke_width: Some(plan.widths[&e.id]),
            reverted: e.reverted,
        });
    }
    layout
}

/// Re-spaces every gap with the centering force (horizontal pieces may now
/// overlap since they become curves), keeping the x-order, and swaps the
/// layout geometry to cubic hops.
pub fn to_cubic_bezier(
    layout: &mut Layout,
    plan: &RoutingPlan,
    structure: &LayerStructure,
    graph: &CalcGraph,
    positions: &ItemPositions,
    area: &crate::layout::DrawingArea,
    params: &LayeredParams,
) {
    let _ = (structure, area);
    let mut plan = plan.clone();
    for gap in 0..plan.gap_order.len() {
        let k = plan.gap_order[gap].len();
        if k == 0 {
            continue;
        }
        let (g0, g1) = plan.gap_ranges[gap];
        let xs: Vec<f64> = (0..k)
            .map(|i| g0 + (i + 1) as f64 * (g1 - g0) / (k + 1) as f64)
            .collect();
        let xs = relax_segments(xs, (g0, g1), params, true);
        let order = plan.gap_order[gap].clone();
        for (rank, (edge, hop)) in order.iter().enumerate() {
            plan.hops.get_mut(edge).unwrap()[*hop].seg_x = xs[rank];
        }
    }
    *layout = build_layout(graph, positions, &plan, true);
}

/// Crossing count and weight of the routed drawing, per gap: two hops whose
/// endpoint ys strictly interleave cross exactly once whatever the segment
/// order; hops that need not cross still contribute a double crossing when a
/// constraint fallback left them in the bad x-order. Endpoint ties (shared
/// ports) never count. Working weights (including transfer boosts) apply.
pub fn count_routed_crossings(
    plan: &RoutingPlan,
    graph: &CalcGraph,
    mode: CrossingWeightMode,
) -> (usize, f64) {
    let mut count = 0usize;
    let mut weight = 0.0f64;
    for gap in &plan.gap_order {
        for i in 0..gap.len() {
            for j in (i + 1)..gap.len() {
                let (ea, ha) = gap[i];
                let (eb, hb) = gap[j];
                let a = &plan.hops[&ea][ha];
                let b = &plan.hops[&eb][hb];
                let d = (a.from.y - b.from.y) * (a.to.y - b.to.y);
                let pair = if d < 0.0 {
                    1
                } else if d > 0.0 {
                    // gap order is the realized left-to-right x order.
                    let (left, right) = if a.seg_x <= b.seg_x { (a, b) } else { (b, a) };
                    let mut n = 0;
                    if strictly_between(right.from.y, left.from.y, left.to.y) {
                        n += 1;
                    }
                    if strictly_between(left.to.y, right.from.y, right.to.y) {
                        n += 1;
                    }
                    n
                } else {
                    0
                };
                if pair > 0 {
                    count += pair;
                    let wa = graph.edge(ea).map(|e| e.weight).unwrap_or(0.0);
                    let wb = graph.edge(eb).map(|e| e.weight).unwrap_or(0.0);
                    weight += pair as f64 * mode.combine(wa, wb);
                }
            }
        }
    }
    (count, weight)
}
