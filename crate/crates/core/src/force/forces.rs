//! The individual force definitions. All of them return unweighted vectors;
//! the equilibrium loop applies the force-weight factors.

use crate::geometry::{segment_rect_intersection, Point, Rect, RectIntersection, Segment};

/// Floor on distances entering the frame force so stress stays finite for
/// vertices touching the boundary.
pub const FRAME_DISTANCE_FLOOR: f64 = 1e-3;

/// Repulsion of `v` away from `u` with magnitude `l_unit^2 / d(u,v)`.
///
/// Positions must be distinct; the caller is responsible for separating
/// coincident vertices before evaluating forces.
pub fn force_repulsive(u: Point, v: Point, l_unit: f64) -> Point {
    let dir = u.unit_towards(v).expect("coincident positions separated by caller");
    dir.scale(l_unit * l_unit / u.dist(v))
}

/// Attraction of `v` towards its neighbor `u` with magnitude `d(u,v)^2 / l_unit`.
pub fn force_attractive(u: Point, v: Point, l_unit: f64) -> Point {
    let d = u.dist(v);
    if d == 0.0 {
        return Point::ZERO;
    }
    let dir = v.unit_towards(u).unwrap();
    dir.scale(d * d / l_unit)
}

/// Repulsion of vertex `v` away from a nonincident edge that enters its inner
/// region: `(l_unit - d(v, i_v))^2` away from the projection point `i_v`.
/// Zero without an inner intersection or once the projection is `l_unit` away.
///
/// When the edge passes exactly through the center, the direction degenerates;
/// `tie_dir` produces a unit vector perpendicular to the segment (side chosen
/// by the caller's seeded RNG) to break the tie.
pub fn force_edge_repulsion(
    v_rect: &Rect,
    seg: &Segment,
    l_unit: f64,
    inner_fraction: f64,
    tie_dir: impl FnOnce() -> Point,
) -> Point {
    match segment_rect_intersection(seg, v_rect, inner_fraction) {
        RectIntersection::Inner(i_v) => {
            let v = v_rect.center;
            let d = v.dist(i_v);
            if d >= l_unit {
                return Point::ZERO;
            }
            let magnitude = (l_unit - d) * (l_unit - d);
            let dir = i_v.unit_towards(v).unwrap_or_else(tie_dir);
            dir.scale(magnitude)
        }
        _ => Point::ZERO,
    }
}

/// Gravity pulling `v` towards the center `p_c` with magnitude `d(v, p_c)`.
pub fn force_gravity(v: Point, center: Point) -> Point {
    match v.unit_towards(center) {
        Some(dir) => dir.scale(v.dist(center)),
        None => Point::ZERO,
    }
}

/// Virtual boundary force: inward from the closest frame boundary point with
/// magnitude `l_unit^2 / d(v, p_f)`. Only enters the pressure computation,
/// never the motion.
pub fn force_frame_virtual(v: Point, frame: &Rect, l_unit: f64) -> Point {
    let p_f = frame.closest_boundary_point(v);
    let d = v.dist(p_f).max(FRAME_DISTANCE_FLOOR);
    let dir = p_f
        .unit_towards(v)
        .unwrap_or_else(|| frame.center.sub(p_f).scale(1.0 / frame.center.dist(p_f).max(FRAME_DISTANCE_FLOOR)));
    dir.scale(l_unit * l_unit / d)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-9;

    fn close(a: Point, b: Point) {
        assert!(
            (a.x - b.x).abs() <= TOL * b.x.abs().max(1.0)
                && (a.y - b.y).abs() <= TOL * b.y.abs().max(1.0),
            "{a:?} != {b:?}"
        );
    }

    #[test]
    fn repulsive_direct_formula() {
        let f = force_repulsive(Point::new(0.0, 0.0), Point::new(3.0, 0.0), 2.0);
        close(f, Point::new(4.0 / 3.0, 0.0));
    }

    #[test]
    fn repulsive_magnitude_at_unit_distance() {
        let l = 2.0;
        let f = force_repulsive(Point::new(0.0, 0.0), Point::new(l, 0.0), l);
        assert!((f.norm() - l).abs() <= TOL);
    }

    #[test]
    fn repulsive_antisymmetry() {
        let u = Point::new(1.0, 2.0);
        let v = Point::new(-2.0, 0.5);
        let f_on_v = force_repulsive(u, v, 1.7);
        let f_on_u = force_repulsive(v, u, 1.7);
        close(f_on_v, f_on_u.scale(-1.0));
    }

    #[test]
    fn attractive_direct_formula() {
        let f = force_attractive(Point::new(0.0, 0.0), Point::new(3.0, 0.0), 2.0);
        close(f, Point::new(-4.5, 0.0));
    }

    #[test]
    fn equilibrium_distance_is_l_unit() {
        let l = 2.0;
        let u = Point::new(0.0, 0.0);
        let v = Point::new(l, 0.0);
        let fa = force_attractive(u, v, l);
        let fr = force_repulsive(u, v, l);
        assert!((fa.norm() - l).abs() <= TOL);
        assert!((fr.norm() - l).abs() <= TOL);
        close(fa, fr.scale(-1.0));
    }

    #[test]
    fn half_distance_gives_net_repulsion() {
        let l = 2.0;
        let u = Point::new(0.0, 0.0);
        let v = Point::new(0.5 * l, 0.0);
        assert!((force_attractive(u, v, l).norm() - 0.25 * l).abs() <= TOL);
        assert!((force_repulsive(u, v, l).norm() - 2.0 * l).abs() <= TOL);
    }

    #[test]
    fn attractive_antisymmetry() {
        let u = Point::new(0.3, -1.0);
        let v = Point::new(2.0, 4.0);
        close(
            force_attractive(u, v, 2.5),
            force_attractive(v, u, 2.5).scale(-1.0),
        );
    }

    #[test]
    fn edge_repulsion_through_center_uses_tie_direction() {
        let l = 2.0;
        let rect = Rect::new(Point::new(0.0, 0.0), 1.0, 1.0);
        let seg = Segment::new(Point::new(-5.0, 0.0), Point::new(5.0, 0.0));
        let f = force_edge_repulsion(&rect, &seg, l, 0.5, || Point::new(0.0, -1.0));
        close(f, Point::new(0.0, -l * l));
    }

    #[test]
    fn edge_repulsion_zero_at_and_beyond_l_unit() {
        let l = 2.0;
        // Wide flat rectangle so the segment still cuts the inner region while
        // the center is exactly l away from its projection.
        let rect = Rect::new(Point::new(0.0, 0.0), 10.0, 2.0 * l + 1.0);
        let seg = Segment::new(Point::new(-5.0, l), Point::new(5.0, l));
        let f = force_edge_repulsion(&rect, &seg, l, 1.0, || Point::new(0.0, -1.0));
        assert_eq!(f, Point::ZERO);
    }

    #[test]
    fn edge_repulsion_half_l_unit_magnitude() {
        let l = 2.0;
        let rect = Rect::new(Point::new(0.0, 0.0), 10.0, 2.0 * l + 1.0);
        let seg = Segment::new(Point::new(-5.0, l / 2.0), Point::new(5.0, l / 2.0));
        let f = force_edge_repulsion(&rect, &seg, l, 1.0, || Point::new(0.0, -1.0));
        assert!((f.norm() - l * l / 4.0).abs() <= TOL);
        assert!(f.y < 0.0);
    }

    #[test]
    fn gravity_magnitude_and_fixed_point() {
        let f = force_gravity(Point::new(1.0, 1.0), Point::ZERO);
        assert!((f.norm() - 2.0_f64.sqrt()).abs() <= TOL);
        assert!(f.x < 0.0 && f.y < 0.0);
        assert_eq!(force_gravity(Point::ZERO, Point::ZERO), Point::ZERO);
    }

    #[test]
    fn gravity_mirror_symmetry() {
        let c = Point::new(0.0, 0.0);
        let f1 = force_gravity(Point::new(2.0, 1.0), c);
        let f2 = force_gravity(Point::new(-2.0, -1.0), c);
        close(f1, f2.scale(-1.0));
    }

    #[test]
    fn frame_force_near_edge() {
        let frame = Rect::new(Point::new(5.0, 5.0), 10.0, 10.0);
        let f = force_frame_virtual(Point::new(1.0, 5.0), &frame, 2.0);
        close(f, Point::new(4.0, 0.0));
    }

    #[test]
    fn frame_force_at_center_of_square_frame() {
        let frame = Rect::new(Point::new(5.0, 5.0), 10.0, 10.0);
        let l = 2.0;
        let f = force_frame_virtual(Point::new(5.0, 5.0), &frame, l);
        assert!((f.norm() - l * l / 5.0).abs() <= TOL);
    }

    #[test]
    fn frame_force_monotone_in_distance() {
        let frame = Rect::new(Point::new(5.0, 5.0), 10.0, 10.0);
        let near = force_frame_virtual(Point::new(0.5, 5.0), &frame, 2.0);
        let far = force_frame_virtual(Point::new(3.0, 5.0), &frame, 2.0);
        assert!(far.norm() < near.norm());
    }
}
