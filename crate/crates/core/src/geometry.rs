//! Degree-space geometry and the mapping onto the pixel canvas.
//!
//! Scene coordinates are visual degrees measured from the top-left corner of
//! the working field, with `y` growing downwards like image rows.

use num_traits::Float;
use serde::{Deserialize, Serialize};

/// Pixels per degree of visual angle.
pub const PX_PER_DEG: f64 = 40.0;
pub const CANVAS_WIDTH_PX: usize = 1280;
pub const CANVAS_HEIGHT_PX: usize = 1080;
/// One grid cell: a 1.5 deg item plus spacing.
pub const CELL_DEG: f64 = 2.5;
pub const GRID_ROWS: usize = 10;
pub const GRID_COLS: usize = 13;
pub const FIELD_WIDTH_DEG: f64 = CELL_DEG * GRID_COLS as f64;
pub const FIELD_HEIGHT_DEG: f64 = CELL_DEG * GRID_ROWS as f64;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Axis-aligned rectangle, `min` inclusive, `max` exclusive for pixel tests.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub min: Point,
    pub max: Point,
}

impl Rect {
    pub fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        Rect {
            min: Point::new(x0.min(x1), y0.min(y1)),
            max: Point::new(x0.max(x1), y0.max(y1)),
        }
    }

    pub fn centered(c: Point, half_w: f64, half_h: f64) -> Self {
        Rect::new(c.x - half_w, c.y - half_h, c.x + half_w, c.y + half_h)
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn area(&self) -> f64 {
        self.width().max(0.0) * self.height().max(0.0)
    }

    pub fn center(&self) -> Point {
        Point::new(
            0.5 * (self.min.x + self.max.x),
            0.5 * (self.min.y + self.max.y),
        )
    }

    pub fn is_empty(&self) -> bool {
        !(self.max.x > self.min.x && self.max.y > self.min.y)
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.min.x && p.x < self.max.x && p.y >= self.min.y && p.y < self.max.y
    }

    pub fn pad(&self, d: f64) -> Rect {
        Rect::new(self.min.x - d, self.min.y - d, self.max.x + d, self.max.y + d)
    }

    pub fn union(&self, other: &Rect) -> Rect {
        Rect::new(
            self.min.x.min(other.min.x),
            self.min.y.min(other.min.y),
            self.max.x.max(other.max.x),
            self.max.y.max(other.max.y),
        )
    }

    pub fn intersect(&self, other: &Rect) -> Rect {
        let r = Rect {
            min: Point::new(self.min.x.max(other.min.x), self.min.y.max(other.min.y)),
            max: Point::new(self.max.x.min(other.max.x), self.max.y.min(other.max.y)),
        };
        if r.is_empty() {
            Rect { min: r.min, max: r.min }
        } else {
            r
        }
    }
}

/// Placement of the working field on the pixel canvas.
///
/// The field is centered on the canvas; with the default 32.5 x 25 deg field
/// on a 1280 x 1080 px canvas the field overhangs the canvas by 10 px left and
/// right, which no generated item ever reaches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Viewport {
    pub width_px: usize,
    pub height_px: usize,
    pub px_per_deg: f64,
    pub field_width_deg: f64,
    pub field_height_deg: f64,
}

impl Default for Viewport {
    fn default() -> Self {
        Viewport {
            width_px: CANVAS_WIDTH_PX,
            height_px: CANVAS_HEIGHT_PX,
            px_per_deg: PX_PER_DEG,
            field_width_deg: FIELD_WIDTH_DEG,
            field_height_deg: FIELD_HEIGHT_DEG,
        }
    }
}

impl Viewport {
    fn offset_px(&self) -> (f64, f64) {
        (
            0.5 * (self.width_px as f64 - self.field_width_deg * self.px_per_deg),
            0.5 * (self.height_px as f64 - self.field_height_deg * self.px_per_deg),
        )
    }

    pub fn to_px(&self, p: Point) -> Point {
        let (ox, oy) = self.offset_px();
        Point::new(p.x * self.px_per_deg + ox, p.y * self.px_per_deg + oy)
    }

    pub fn to_deg(&self, p: Point) -> Point {
        let (ox, oy) = self.offset_px();
        Point::new((p.x - ox) / self.px_per_deg, (p.y - oy) / self.px_per_deg)
    }

    pub fn field(&self) -> Rect {
        Rect::new(0.0, 0.0, self.field_width_deg, self.field_height_deg)
    }

    /// The canvas expressed in field degrees.
    pub fn canvas_deg(&self) -> Rect {
        let a = self.to_deg(Point::new(0.0, 0.0));
        let b = self.to_deg(Point::new(self.width_px as f64, self.height_px as f64));
        Rect::new(a.x, a.y, b.x, b.y)
    }

    /// Region where an item's center may lie so that `radius` around it stays
    /// inside both the field and the canvas.
    pub fn placement_area(&self, radius: f64) -> Rect {
        let r = self.field().intersect(&self.canvas_deg());
        Rect::new(
            r.min.x + radius,
            r.min.y + radius,
            r.max.x - radius,
            r.max.y - radius,
        )
    }

    pub fn center_px(&self) -> Point {
        Point::new(0.5 * self.width_px as f64, 0.5 * self.height_px as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_is_centered_on_canvas() {
        let vp = Viewport::default();
        let c = vp.to_px(vp.field().center());
        assert_eq!(c, vp.center_px());
        assert_eq!(vp.to_px(Point::new(0.0, 0.0)), Point::new(-10.0, 40.0));
        let back = vp.to_deg(vp.to_px(Point::new(3.25, 7.5)));
        assert!((back.x - 3.25).abs() < 1e-12 && (back.y - 7.5).abs() < 1e-12);
    }

    #[test]
    fn rect_ops() {
        let a = Rect::new(0.0, 0.0, 2.0, 2.0);
        let b = Rect::new(1.0, 1.0, 3.0, 3.0);
        assert_eq!(a.intersect(&b), Rect::new(1.0, 1.0, 2.0, 2.0));
        assert_eq!(a.union(&b), Rect::new(0.0, 0.0, 3.0, 3.0));
        assert!(a.intersect(&Rect::new(5.0, 5.0, 6.0, 6.0)).is_empty());
        assert!(a.contains(Point::new(0.0, 1.9)));
        assert!(!a.contains(Point::new(2.0, 1.0)));
    }
}
