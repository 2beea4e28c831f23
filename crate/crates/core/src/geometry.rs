//! Planar primitives shared by both layout pipelines: points, axis-parallel
//! rectangles, segment tests and Bézier evaluation. All lengths are in cm.

use serde::{Deserialize, Serialize};

/// A point or displacement in the drawing plane. `y` grows downward, matching
/// the SVG output coordinate system.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ZERO: Point = Point { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Point {
        Point { x, y }
    }

    pub fn add(self, other: Point) -> Point {
        Point::new(self.x + other.x, self.y + other.y)
    }

    pub fn sub(self, other: Point) -> Point {
        Point::new(self.x - other.x, self.y - other.y)
    }

    pub fn scale(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, other: Point) -> f64 {
        self.sub(other).norm()
    }

    /// Unit vector from `self` towards `to`. Returns `None` for coincident points.
    pub fn unit_towards(self, to: Point) -> Option<Point> {
        let d = to.sub(self);
        let n = d.norm();
        if n == 0.0 {
            None
        } else {
            Some(d.scale(1.0 / n))
        }
    }

    /// Clamp the length of this vector to at most `max_len`.
    pub fn clamp_len(self, max_len: f64) -> Point {
        let n = self.norm();
        if n > max_len && n > 0.0 {
            self.scale(max_len / n)
        } else {
            self
        }
    }
}

/// Axis-parallel rectangle given by its center and full extents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub center: Point,
    pub width: f64,
    pub height: f64,
}

impl Rect {
    pub fn new(center: Point, width: f64, height: f64) -> Rect {
        Rect {
            center,
            width,
            height,
        }
    }

    pub fn from_corners(min: Point, max: Point) -> Rect {
        Rect {
            center: Point::new((min.x + max.x) / 2.0, (min.y + max.y) / 2.0),
            width: max.x - min.x,
            height: max.y - min.y,
        }
    }

    pub fn min(&self) -> Point {
        Point::new(
            self.center.x - self.width / 2.0,
            self.center.y - self.height / 2.0,
        )
    }

    pub fn max(&self) -> Point {
        Point::new(
            self.center.x + self.width / 2.0,
            self.center.y + self.height / 2.0,
        )
    }

    /// Rectangle scaled about its own center.
    pub fn scaled(&self, factor: f64) -> Rect {
        Rect {
            center: self.center,
            width: self.width * factor,
            height: self.height * factor,
        }
    }

    pub fn contains_point(&self, p: Point) -> bool {
        let lo = self.min();
        let hi = self.max();
        p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y
    }

    /// Whether `inner` lies completely within `self` (boundary contact allowed).
    pub fn contains_rect(&self, inner: &Rect) -> bool {
        let lo = self.min();
        let hi = self.max();
        let ilo = inner.min();
        let ihi = inner.max();
        ilo.x >= lo.x - GEOM_EPS
            && ilo.y >= lo.y - GEOM_EPS
            && ihi.x <= hi.x + GEOM_EPS
            && ihi.y <= hi.y + GEOM_EPS
    }

    pub fn union(&self, other: &Rect) -> Rect {
        let lo = self.min();
        let hi = self.max();
        let olo = other.min();
        let ohi = other.max();
        Rect::from_corners(
            Point::new(lo.x.min(olo.x), lo.y.min(olo.y)),
            Point::new(hi.x.max(ohi.x), hi.y.max(ohi.y)),
        )
    }

    /// Closest point of the rectangle (including its interior) to `p`.
    pub fn closest_point(&self, p: Point) -> Point {
        let lo = self.min();
        let hi = self.max();
        Point::new(p.x.clamp(lo.x, hi.x), p.y.clamp(lo.y, hi.y))
    }

    /// Closest point on the rectangle boundary to `p` (also for `p` inside).
    pub fn closest_boundary_point(&self, p: Point) -> Point {
        let lo = self.min();
        let hi = self.max();
        if !self.contains_point(p) {
            return self.closest_point(p);
        }
        // project to the nearest of the four sides
        let dl = p.x - lo.x;
        let dr = hi.x - p.x;
        let dt = p.y - lo.y;
        let db = hi.y - p.y;
        let m = dl.min(dr).min(dt).min(db);
        if m == dl {
            Point::new(lo.x, p.y)
        } else if m == dr {
            Point::new(hi.x, p.y)
        } else if m == dt {
            Point::new(p.x, lo.y)
        } else {
            Point::new(p.x, hi.y)
        }
    }

    /// Boundary-to-boundary distance between two rectangles; 0 when they
    /// touch or overlap.
    pub fn boundary_distance(&self, other: &Rect) -> f64 {
        let dx = ((self.center.x - other.center.x).abs() - (self.width + other.width) / 2.0)
            .max(0.0);
        let dy = ((self.center.y - other.center.y).abs() - (self.height + other.height) / 2.0)
            .max(0.0);
        dx.hypot(dy)
    }

    /// Distance from the rectangle (as a solid) to a point; 0 inside.
    pub fn distance_to_point(&self, p: Point) -> f64 {
        self.closest_point(p).dist(p)
    }
}

const GEOM_EPS: f64 = 1e-9;

/// A straight segment between two points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Segment {
        Segment { a, b }
    }

    pub fn len(&self) -> f64 {
        self.a.dist(self.b)
    }

    pub fn point_at(&self, t: f64) -> Point {
        self.a.add(self.b.sub(self.a).scale(t))
    }

    /// Orthogonal projection of `p` onto the segment's supporting line,
    /// clamped to the segment; the unclamped parameter is returned as well.
    pub fn project(&self, p: Point) -> (Point, f64) {
        let d = self.b.sub(self.a);
        let len2 = d.dot(d);
        if len2 == 0.0 {
            return (self.a, 0.0);
        }
        let t = p.sub(self.a).dot(d) / len2;
        (self.point_at(t.clamp(0.0, 1.0)), t)
    }

    pub fn distance_to_point(&self, p: Point) -> f64 {
        self.project(p).0.dist(p)
    }

    /// Whether the segment has at least one point inside (or on) `r`.
    pub fn intersects_rect(&self, r: &Rect) -> bool {
        // Liang-Barsky clipping against the rectangle slabs.
        let lo = r.min();
        let hi = r.max();
        let d = self.b.sub(self.a);
        let mut t0 = 0.0_f64;
        let mut t1 = 1.0_f64;
        let checks = [
            (-d.x, self.a.x - lo.x),
            (d.x, hi.x - self.a.x),
            (-d.y, self.a.y - lo.y),
            (d.y, hi.y - self.a.y),
        ];
        for (p, q) in checks {
            if p == 0.0 {
                if q < 0.0 {
                    return false;
                }
            } else {
                let t = q / p;
                if p < 0.0 {
                    if t > t1 {
                        return false;
                    }
                    t0 = t0.max(t);
                } else {
                    if t < t0 {
                        return false;
                    }
                    t1 = t1.min(t);
                }
            }
        }
        t0 <= t1
    }

    /// Minimal distance between the segment and the rectangle (0 when they touch).
    pub fn distance_to_rect(&self, r: &Rect) -> f64 {
        if self.intersects_rect(r) {
            return 0.0;
        }
        // Distance is attained between the segment and one of the four sides,
        // or between an endpoint and the rectangle.
        let lo = r.min();
        let hi = r.max();
        let corners = [
            Point::new(lo.x, lo.y),
            Point::new(hi.x, lo.y),
            Point::new(hi.x, hi.y),
            Point::new(lo.x, hi.y),
        ];
        let mut best = f64::INFINITY;
        for i in 0..4 {
            let side = Segment::new(corners[i], corners[(i + 1) % 4]);
            best = best.min(segment_segment_distance(self, &side));
        }
        best.min(r.distance_to_point(self.a))
            .min(r.distance_to_point(self.b))
    }
}

/// Result of classifying a segment against a vertex rectangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RectIntersection {
    None,
    /// The segment touches the rectangle but stays out of its scaled core.
    Outer,
    /// The segment enters the inner core; carries the projection of the
    /// rectangle center onto the segment (nearest endpoint if the
    /// perpendicular foot falls outside the segment).
    Inner(Point),
}

/// Classifies how `seg` meets the vertex rectangle `r`. The inner region is
/// `r` scaled about its center by `inner_fraction`.
pub fn segment_rect_intersection(seg: &Segment, r: &Rect, inner_fraction: f64) -> RectIntersection {
    debug_assert!(inner_fraction > 0.0 && inner_fraction <= 1.0);
    if !seg.intersects_rect(r) {
        return RectIntersection::None;
    }
    let core = r.scaled(inner_fraction);
    if !seg.intersects_rect(&core) {
        return RectIntersection::Outer;
    }
    let (foot, t) = seg.project(r.center);
    let p = if (0.0..=1.0).contains(&t) {
        foot
    } else if t < 0.0 {
        seg.a
    } else {
        seg.b
    };
    RectIntersection::Inner(p)
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    p.x >= a.x.min(b.x) - GEOM_EPS
        && p.x <= a.x.max(b.x) + GEOM_EPS
        && p.y >= a.y.min(b.y) - GEOM_EPS
        && p.y <= a.y.max(b.y) + GEOM_EPS
}

/// Whether two segments intersect in at least one point.
pub fn segments_intersect(s1: &Segment, s2: &Segment) -> bool {
    let d1 = orient(s2.a, s2.b, s1.a);
    let d2 = orient(s2.a, s2.b, s1.b);
    let d3 = orient(s1.a, s1.b, s2.a);
    let d4 = orient(s1.a, s1.b, s2.b);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(s2.a, s2.b, s1.a))
        || (d2 == 0.0 && on_segment(s2.a, s2.b, s1.b))
        || (d3 == 0.0 && on_segment(s1.a, s1.b, s2.a))
        || (d4 == 0.0 && on_segment(s1.a, s1.b, s2.b))
}

/// Whether two segments cross properly: a single interior intersection point
/// on both segments. Touching endpoints and collinear overlap do not count.
pub fn segments_cross_properly(s1: &Segment, s2: &Segment) -> bool {
    let d1 = orient(s2.a, s2.b, s1.a);
    let d2 = orient(s2.a, s2.b, s1.b);
    let d3 = orient(s1.a, s1.b, s2.a);
    let d4 = orient(s1.a, s1.b, s2.b);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

fn segment_segment_distance(s1: &Segment, s2: &Segment) -> f64 {
    if segments_intersect(s1, s2) {
        return 0.0;
    }
    s1.distance_to_point(s2.a)
        .min(s1.distance_to_point(s2.b))
        .min(s2.distance_to_point(s1.a))
        .min(s2.distance_to_point(s1.b))
}

/// Point on the quadratic Bézier with endpoints `p0`, `p2` and control `p1`.
pub fn quad_bezier_point(p0: Point, p1: Point, p2: Point, t: f64) -> Point {
    let u = 1.0 - t;
    p0.scale(u * u)
        .add(p1.scale(2.0 * u * t))
        .add(p2.scale(t * t))
}

/// Point on the cubic Bézier with control polygon `p0..p3`.
pub fn cubic_bezier_point(p0: Point, p1: Point, p2: Point, p3: Point, t: f64) -> Point {
    let u = 1.0 - t;
    p0.scale(u * u * u)
        .add(p1.scale(3.0 * u * u * t))
        .add(p2.scale(3.0 * u * t * t))
        .add(p3.scale(t * t * t))
}
