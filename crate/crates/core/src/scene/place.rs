//! Jittered rejection sampling on the cell grid.

use alloc::format;
use alloc::vec::Vec;

use num_traits::Float;
use rand::Rng;

use crate::geometry::{Point, Viewport, CELL_DEG};
use crate::rng::ChaCha8Rng;
use crate::{Error, Result};

/// Lower bound on the distance between two item centers.
pub(crate) const MIN_SEPARATION_DEG: f64 = CELL_DEG;
/// Largest displacement of an item from its cell center.
pub(crate) const JITTER_DEG: f64 = 0.6;
/// Extra clearance between the enclosing discs of neighbours.
const CLEARANCE_DEG: f64 = 0.25;
const MAX_ATTEMPTS: usize = 20_000;

pub(crate) struct Scatter {
    vp: Viewport,
    rows: usize,
    cols: usize,
    cell_w: f64,
    cell_h: f64,
    placed: Vec<(Point, f64)>,
}

impl Scatter {
    pub(crate) fn new(vp: Viewport) -> Self {
        let cols = (vp.field_width_deg / CELL_DEG).round().max(1.0) as usize;
        let rows = (vp.field_height_deg / CELL_DEG).round().max(1.0) as usize;
        Scatter {
            vp,
            rows,
            cols,
            cell_w: vp.field_width_deg / cols as f64,
            cell_h: vp.field_height_deg / rows as f64,
            placed: Vec::new(),
        }
    }

    /// Register an item placed by other means so later draws keep clear of it.
    pub(crate) fn reserve(&mut self, p: Point, radius: f64) {
        self.placed.push((p, radius));
    }

    fn clear_of_others(&self, p: Point, radius: f64) -> bool {
        self.placed.iter().all(|&(q, rq)| {
            p.distance(q) >= MIN_SEPARATION_DEG.max(radius + rq + CLEARANCE_DEG)
        })
    }

    /// Draw a center for an item of bounding `radius` that also satisfies
    /// `accept`.
    pub(crate) fn place(
        &mut self,
        rng: &mut ChaCha8Rng,
        radius: f64,
        accept: impl Fn(Point) -> bool,
    ) -> Result<Point> {
        let area = self.vp.placement_area(radius);
        for _ in 0..MAX_ATTEMPTS {
            let r = rng.random_range(0..self.rows);
            let c = rng.random_range(0..self.cols);
            let p = Point::new(
                (c as f64 + 0.5) * self.cell_w + rng.random_range(-JITTER_DEG..=JITTER_DEG),
                (r as f64 + 0.5) * self.cell_h + rng.random_range(-JITTER_DEG..=JITTER_DEG),
            );
            if area.contains(p) && self.clear_of_others(p, radius) && accept(p) {
                self.placed.push((p, radius));
                return Ok(p);
            }
        }
        Err(Error::Placement(format!(
            "no free position for item {} (radius {radius} deg)",
            self.placed.len() + 1
        )))
    }
}

/// Cell centers of a `rows` x `cols` grid spanning the field, row-major.
pub(crate) fn grid_centers(vp: &Viewport, rows: usize, cols: usize) -> Vec<(usize, usize, Point)> {
    let w = vp.field_width_deg / cols as f64;
    let h = vp.field_height_deg / rows as f64;
    let mut out = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            out.push((r, c, Point::new((c as f64 + 0.5) * w, (r as f64 + 0.5) * h)));
        }
    }
    out
}
