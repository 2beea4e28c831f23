//! The shrinking frame that presses the drawing towards the target area.

use std::collections::BTreeMap;

use crate::geometry::{Point, Rect};
use crate::graph::WeightedGraph;
use crate::layout::DrawingArea;

/// Rectangle that bounds all vertex rectangles while it is active. It starts
/// at the drawing's bounding box and shrinks to the drawing area, never below.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub rect: Rect,
}

impl Frame {
    /// Bounding box of the current drawing, expanded per axis so the frame is
    /// never smaller than the drawing area.
    pub fn bounding(
        graph: &WeightedGraph,
        positions: &BTreeMap<String, Point>,
        area: &DrawingArea,
    ) -> Frame {
        let mut bbox: Option<Rect> = None;
        for v in graph.vertices() {
            let r = Rect::new(positions[&v.id], v.width, v.height);
            bbox = Some(match bbox {
                Some(b) => b.union(&r),
                None => r,
            });
        }
        let bbox = bbox.unwrap_or_else(|| area.rect());
        Frame {
            rect: Rect::new(
                bbox.center,
                bbox.width.max(area.width),
                bbox.height.max(area.height),
            ),
        }
    }

    /// Closest center position that keeps a `w x h` rectangle fully inside.
    pub fn clamp_center(&self, p: Point, w: f64, h: f64) -> Point {
        let lo = self.rect.min();
        let hi = self.rect.max();
        let x = if w >= self.rect.width {
            self.rect.center.x
        } else {
            p.x.clamp(lo.x + w / 2.0, hi.x - w / 2.0)
        };
        let y = if h >= self.rect.height {
            self.rect.center.y
        } else {
            p.y.clamp(lo.y + h / 2.0, hi.y - h / 2.0)
        };
        Point::new(x, y)
    }

    /// Moves every vertex that (partially) left the frame to the closest
    /// position that lies completely within it.
    pub fn push_inside(&self, graph: &WeightedGraph, positions: &mut BTreeMap<String, Point>) {
        for v in graph.vertices() {
            let p = positions[&v.id];
            let clamped = self.clamp_center(p, v.width, v.height);
            if clamped != p {
                positions.insert(v.id.clone(), clamped);
            }
        }
    }
}

/// Frame after `step` of `total_steps` uniform shrink steps from the initial
/// frame towards the area dimensions; the last step lands exactly on them.
pub fn shrink_frame(initial: &Frame, area: &DrawingArea, step: usize, total_steps: usize) -> Frame {
    assert!(total_steps >= 1 && step <= total_steps);
    if step == total_steps {
        return Frame {
            rect: Rect::new(initial.rect.center, area.width, area.height),
        };
    }
    let t = step as f64 / total_steps as f64;
    Frame {
        rect: Rect::new(
            initial.rect.center,
            initial.rect.width - (initial.rect.width - area.width) * t,
            initial.rect.height - (initial.rect.height - area.height) * t,
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn per_step_delta_is_gap_over_steps() {
        let initial = Frame {
            rect: Rect::new(Point::ZERO, 50.0, 40.0),
        };
        let area = DrawingArea::new(25.0, 20.0);
        let f1 = shrink_frame(&initial, &area, 1, 25);
        assert!((initial.rect.width - f1.rect.width - 1.0).abs() < 1e-12);
        assert!((initial.rect.height - f1.rect.height - 0.8).abs() < 1e-12);
    }

    #[test]
    fn final_step_lands_exactly_on_area() {
        let initial = Frame {
            rect: Rect::new(Point::ZERO, 50.0, 40.0),
        };
        let area = DrawingArea::new(25.0, 20.0);
        let f = shrink_frame(&initial, &area, 25, 25);
        assert_eq!(f.rect.width, 25.0);
        assert_eq!(f.rect.height, 20.0);
    }

    #[test]
    fn push_inside_clamps_axiswise() {
        let g = crate::graph::parse_graph("graph undirected\nv a 1 2 1").unwrap();
        let frame = Frame {
            rect: Rect::new(Point::new(5.0, 5.0), 10.0, 10.0),
        };
        let mut positions = BTreeMap::new();
        // Half outside on the right, fine vertically.
        positions.insert("a".to_string(), Point::new(10.0, 5.0));
        frame.push_inside(&g, &mut positions);
        assert_eq!(positions["a"], Point::new(9.0, 5.0));
    }
}
