use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::density::{gaussian_kernel, pixel_of, DensityMap};
use crate::geometry::Point;
use crate::raster::AoiMask;
use crate::{Error, Result};

/// Saliency index value. When all fixation energy falls inside the mask the
/// ratio is undefined and reported as [`Si::AllInside`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Si {
    Value(f64),
    AllInside,
}

impl Si {
    pub fn value(self) -> Option<f64> {
        match self {
            Si::Value(v) => Some(v),
            Si::AllInside => None,
        }
    }

    fn from_means(st: f64, sb: f64) -> Si {
        if sb == 0.0 {
            Si::AllInside
        } else {
            Si::Value((st - sb) / sb)
        }
    }
}

fn check_mask(inside: usize, total: usize) -> Result<()> {
    if inside == 0 {
        return Err(Error::EmptyInput("mask has no inside pixel".into()));
    }
    if inside == total {
        return Err(Error::Degenerate("mask has no outside pixel".into()));
    }
    Ok(())
}

/// `(S_t - S_b) / S_b` with `S_t`, `S_b` the mean density over inside and
/// outside pixels.
pub fn saliency_index(map: &DensityMap, mask: &AoiMask) -> Result<Si> {
    if map.width != mask.width || map.height != mask.height {
        return Err(Error::arg("density map and mask sizes differ"));
    }
    let (mut sin, mut sout, mut nin) = (0.0, 0.0, 0usize);
    for (&d, &m) in map.data.iter().zip(&mask.data) {
        if m != 0 {
            sin += d;
            nin += 1;
        } else {
            sout += d;
        }
    }
    let n = map.data.len();
    check_mask(nin, n)?;
    Ok(Si::from_means(sin / nin as f64, sout / (n - nin) as f64))
}

/// Row runs of a mask, for evaluating Gaussian energy inside it without
/// building full density maps.
#[derive(Debug, Clone)]
pub struct MaskIndex {
    pub width: usize,
    pub height: usize,
    /// Half-open `[x0, x1)` runs of set pixels per row.
    runs: Vec<Vec<(usize, usize)>>,
    inside: usize,
}

impl MaskIndex {
    pub fn new(mask: &AoiMask) -> Self {
        let mut runs = Vec::with_capacity(mask.height);
        let mut inside = 0;
        for y in 0..mask.height {
            let row = &mask.data[y * mask.width..(y + 1) * mask.width];
            let mut r = Vec::new();
            let mut x = 0;
            while x < row.len() {
                if row[x] != 0 {
                    let s = x;
                    while x < row.len() && row[x] != 0 {
                        x += 1;
                    }
                    r.push((s, x));
                    inside += x - s;
                } else {
                    x += 1;
                }
            }
            runs.push(r);
        }
        MaskIndex {
            width: mask.width,
            height: mask.height,
            runs,
            inside,
        }
    }

    pub fn inside_count(&self) -> usize {
        self.inside
    }

    /// The `n`-th set pixel in row-major order.
    pub fn nth_pixel(&self, mut n: usize) -> Option<(usize, usize)> {
        for (y, row) in self.runs.iter().enumerate() {
            for &(a, b) in row {
                if n < b - a {
                    return Some((a + n, y));
                }
                n -= b - a;
            }
        }
        None
    }

    pub fn contains_px(&self, p: Point) -> bool {
        match pixel_of(p, self.width, self.height) {
            Some((x, y)) => self.runs[y].iter().any(|&(a, b)| a <= x && x < b),
            None => false,
        }
    }
}

/// Saliency index of the density map built from `fixations`, computed from
/// per-fixation kernel energies inside and outside the mask. Equal to
/// `saliency_index(density_map(..), mask)` up to rounding.
pub fn saliency_index_fixations(fixations: &[Point], mask: &MaskIndex, sigma_px: f64) -> Result<Si> {
    let n = mask.width * mask.height;
    check_mask(mask.inside, n)?;
    let (inside, total) = energies(fixations, mask, sigma_px)?;
    let nin = mask.inside as f64;
    let nout = (n - mask.inside) as f64;
    Ok(Si::from_means(inside / nin, (total - inside) / nout))
}

/// Summed kernel energy inside the mask and in total over the canvas, for the
/// on-canvas fixations.
pub(crate) fn energies(fixations: &[Point], mask: &MaskIndex, sigma_px: f64) -> Result<(f64, f64)> {
    let k = gaussian_kernel(sigma_px);
    let r = (k.len() / 2) as i64;
    let mut prefix = Vec::with_capacity(k.len() + 1);
    prefix.push(0.0);
    for &v in &k {
        prefix.push(prefix.last().copied().unwrap_or(0.0) + v);
    }
    // Kernel mass over canvas columns [a, b] for a fixation at c.
    let span = |c: i64, a: i64, b: i64| -> f64 {
        let lo = (a - c + r).max(0);
        let hi = (b - c + r).min(2 * r);
        if hi < lo {
            0.0
        } else {
            prefix[hi as usize + 1] - prefix[lo as usize]
        }
    };
    let (w, h) = (mask.width as i64, mask.height as i64);
    let (mut inside, mut total, mut any) = (0.0, 0.0, false);
    for &p in fixations {
        let Some((cx, cy)) = pixel_of(p, mask.width, mask.height) else {
            continue;
        };
        any = true;
        let (cx, cy) = (cx as i64, cy as i64);
        total += span(cx, 0, w - 1) * span(cy, 0, h - 1);
        for y in (cy - r).max(0)..=(cy + r).min(h - 1) {
            let ky = k[(y - cy + r) as usize];
            let row: f64 = mask.runs[y as usize]
                .iter()
                .map(|&(a, b)| span(cx, a as i64, b as i64 - 1))
                .sum();
            inside += ky * row;
        }
    }
    if !any {
        return Err(Error::EmptyInput("no fixation on the canvas".into()));
    }
    Ok((inside, total))
}
