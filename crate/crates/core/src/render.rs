//! Deterministic SVG emission for both pipelines and all edge styles.

use crate::geometry::Point;
use crate::graph::WeightedGraph;
use crate::layout::{DrawingArea, DrawnEdge, EdgeGeometry, Layout};

/// Rendering options.
#[derive(Debug, Clone, PartialEq)]
pub struct RenderStyle {
    pub show_frame: bool,
    /// Label font size in pt.
    pub font_size_pt: f64,
    /// cm to SVG user units.
    pub scale: f64,
    /// Mark reverted (drawn-backwards) edges with a hollow arrowhead at the
    /// source end.
    pub mark_reverted: bool,
    /// Draw arrowheads at edge targets (directed drawings).
    pub arrows: bool,
}

impl Default for RenderStyle {
    fn default() -> RenderStyle {
        RenderStyle {
            show_frame: true,
            font_size_pt: 10.0,
            scale: 37.7953,
            mark_reverted: true,
            arrows: false,
        }
    }
}

fn fmt(x: f64) -> String {
    // Fixed 3-decimal output for byte determinism; -0.000 normalizes to 0.000.
    let s = format!("{:.3}", x);
    if s == "-0.000" {
        "0.000".to_string()
    } else {
        s
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Linear hue ramp over the weight rank: green (lightest) to red (heaviest).
fn rank_color(rank: usize, total: usize) -> String {
    let t = if total <= 1 {
        1.0
    } else {
        rank as f64 / (total - 1) as f64
    };
    let hue = 120.0 * (1.0 - t);
    hsl_to_hex(hue, 0.65, 0.72)
}

fn hsl_to_hex(h: f64, s: f64, l: f64) -> String {
    let c = (1.0 - (2.0 * l - 1.0).abs()) * s;
    let hp = h / 60.0;
    let x = c * (1.0 - (hp % 2.0 - 1.0).abs());
    let (r1, g1, b1) = match hp as u32 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let m = l - c / 2.0;
    let to8 = |v: f64| ((v + m) * 255.0).round().clamp(0.0, 255.0) as u8;
    format!("#{:02x}{:02x}{:02x}", to8(r1), to8(g1), to8(b1))
}

fn edge_path(e: &DrawnEdge, layout: &Layout, scale: f64) -> String {
    let pt = |p: Point| format!("{},{}", fmt(p.x * scale), fmt(p.y * scale));
    match &e.geometry {
        EdgeGeometry::Straight => {
            let a = layout.position(&e.src).expect("drawn endpoint");
            let b = layout.position(&e.dst).expect("drawn endpoint");
            format!("M {} L {}", pt(a), pt(b))
        }
        EdgeGeometry::Quadratic { control } => {
            let a = layout.position(&e.src).expect("drawn endpoint");
            let b = layout.position(&e.dst).expect("drawn endpoint");
            format!("M {} Q {} {}", pt(a), pt(*control), pt(b))
        }
        EdgeGeometry::Orthogonal { points } => {
            let mut d = format!("M {}", pt(points[0]));
            for p in &points[1..] {
                d.push_str(&format!(" L {}", pt(*p)));
            }
            d
        }
        EdgeGeometry::CubicChain { segments } => {
            let mut d = format!("M {}", pt(segments[0][0]));
            for s in segments {
                d.push_str(&format!(" C {} {} {}", pt(s[1]), pt(s[2]), pt(s[3])));
            }
            d
        }
    }
}

/// First point and outgoing direction of an edge, for source-end markers.
fn edge_source_direction(e: &DrawnEdge, layout: &Layout) -> (Point, Point) {
    let (a, towards) = match &e.geometry {
        EdgeGeometry::Straight | EdgeGeometry::Quadratic { .. } => (
            layout.position(&e.src).expect("drawn endpoint"),
            match &e.geometry {
                EdgeGeometry::Quadratic { control } => *control,
                _ => layout.position(&e.dst).expect("drawn endpoint"),
            },
        ),
        EdgeGeometry::Orthogonal { points } => (points[0], points[1]),
        EdgeGeometry::CubicChain { segments } => (segments[0][0], segments[0][1]),
    };
    (a, towards)
}

/// Last point and incoming direction of an edge, for target arrowheads.
fn edge_target_direction(e: &DrawnEdge, layout: &Layout) -> (Point, Point) {
    match &e.geometry {
        EdgeGeometry::Straight => (
            layout.position(&e.dst).expect("drawn endpoint"),
            layout.position(&e.src).expect("drawn endpoint"),
        ),
        EdgeGeometry::Quadratic { control } => {
            (layout.position(&e.dst).expect("drawn endpoint"), *control)
        }
        EdgeGeometry::Orthogonal { points } => {
            (points[points.len() - 1], points[points.len() - 2])
        }
        EdgeGeometry::CubicChain { segments } => {
            let last = segments.last().unwrap();
            (last[3], last[2])
        }
    }
}

fn arrow_polygon(tip: Point, from: Point, size: f64, scale: f64) -> Option<String> {
    let dir = from.unit_towards(tip)?;
    let back = tip.sub(dir.scale(size));
    let perp = Point::new(-dir.y, dir.x).scale(size * 0.45);
    let p1 = back.add(perp);
    let p2 = back.sub(perp);
    let pt = |p: Point| format!("{},{}", fmt(p.x * scale), fmt(p.y * scale));
    Some(format!(
        "M {} L {} L {} Z",
        pt(tip),
        pt(p1),
        pt(p2)
    ))
}

/// Emits the drawing as a standalone SVG document. Element order is fixed:
/// frame, edges by ascending weight, then vertices by ascending weight, so
/// heavy items end up on top and identical inputs yield identical bytes.
pub fn render_svg(
    layout: &Layout,
    graph: &WeightedGraph,
    area: &DrawingArea,
    style: &RenderStyle,
) -> String {
    let s = style.scale;
    let margin = 0.2 * s;
    let w = area.width * s;
    let h = area.height * s;
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{} {} {} {}\" width=\"{}cm\" height=\"{}cm\">\n",
        fmt(-margin),
        fmt(-margin),
        fmt(w + 2.0 * margin),
        fmt(h + 2.0 * margin),
        fmt(area.width + 0.4),
        fmt(area.height + 0.4),
    ));
    if style.show_frame {
        out.push_str(&format!(
            "<rect x=\"0.000\" y=\"0.000\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#888888\" stroke-width=\"1\"/>\n",
            fmt(w),
            fmt(h)
        ));
    }

    // Edges ascending by weight (unknown weights first), ties by endpoints.
    let mut edges: Vec<&DrawnEdge> = layout.edges.iter().collect();
    let weight_of = |e: &DrawnEdge| {
        graph
            .edges()
            .iter()
            .find(|g| {
                (g.src == e.src && g.dst == e.dst)
                    || ((e.reverted || !graph.directed) && g.src == e.dst && g.dst == e.src)
            })
            .map(|g| g.weight)
            .unwrap_or(0.0)
    };
    edges.sort_by(|a, b| {
        weight_of(a)
            .partial_cmp(&weight_of(b))
            .unwrap()
            .then_with(|| (&a.src, &a.dst).cmp(&(&b.src, &b.dst)))
    });
    for e in edges {
        let d = edge_path(e, layout, s);
        let stroke_width = match e.stroke_width {
            Some(cm) => cm * s,
            None => 1.0,
        };
        out.push_str(&format!(
            "<path d=\"{}\" fill=\"none\" stroke=\"#444444\" stroke-width=\"{}\"/>\n",
            d,
            fmt(stroke_width)
        ));
        let arrow_size = 0.18;
        if style.arrows {
            let (tip, from) = edge_target_direction(e, layout);
            if let Some(path) = arrow_polygon(tip, from, arrow_size, s) {
                out.push_str(&format!(
                    "<path d=\"{}\" fill=\"#444444\" stroke=\"none\"/>\n",
                    path
                ));
            }
        }
        if style.mark_reverted && e.reverted {
            // Hollow marker at the source end pointing back along the true
            // direction of the input edge.
            let (src_pt, towards) = edge_source_direction(e, layout);
            if let Some(path) = arrow_polygon(src_pt, towards, arrow_size, s) {
                out.push_str(&format!(
                    "<path d=\"{}\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1\"/>\n",
                    path
                ));
            }
        }
    }

    // Vertices ascending by weight, ties by id.
    let mut drawn: Vec<&crate::graph::Vertex> = graph
        .vertices()
        .iter()
        .filter(|v| layout.positions.contains_key(&v.id))
        .collect();
    drawn.sort_by(|a, b| {
        a.weight
            .partial_cmp(&b.weight)
            .unwrap()
            .then_with(|| a.id.cmp(&b.id))
    });
    let total = drawn.len();
    let font_px = style.font_size_pt * 96.0 / 72.0;
    for (rank, v) in drawn.iter().enumerate() {
        let c = layout.positions[&v.id];
        let x = (c.x - v.width / 2.0) * s;
        let y = (c.y - v.height / 2.0) * s;
        out.push_str(&format!(
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\" stroke=\"#333333\" stroke-width=\"1\"/>\n",
            fmt(x),
            fmt(y),
            fmt(v.width * s),
            fmt(v.height * s),
            rank_color(rank, total)
        ));
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"{}\" font-family=\"sans-serif\" text-anchor=\"middle\">{}</text>\n",
            fmt(c.x * s),
            fmt(c.y * s + font_px * 0.35),
            fmt(font_px),
            escape(&v.label)
        ));
    }
    out.push_str("</svg>\n");
    out
}
