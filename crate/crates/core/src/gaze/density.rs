use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use crate::geometry::{Point, PX_PER_DEG};
use crate::{Error, Result};

/// One degree of visual angle.
pub const DENSITY_SIGMA_PX: f64 = PX_PER_DEG;

/// Fixation density over the canvas, summing to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMap {
    pub width: usize,
    pub height: usize,
    pub data: Vec<f64>,
}

impl DensityMap {
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    pub fn sum(&self) -> f64 {
        self.data.iter().sum()
    }

    pub fn argmax(&self) -> (usize, usize) {
        let (i, _) = self
            .data
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, &v)| if v > best.1 { (i, v) } else { best });
        (i % self.width, i / self.width)
    }
}

/// Unnormalized Gaussian taps `exp(-d^2 / 2 sigma^2)` for `d = -r..=r`, with
/// `r = 3 sigma` so the window spans 6 sigma.
pub fn gaussian_kernel(sigma_px: f64) -> Vec<f64> {
    let r = (3.0 * sigma_px).round() as i64;
    (-r..=r)
        .map(|d| (-(d * d) as f64 / (2.0 * sigma_px * sigma_px)).exp())
        .collect()
}

/// Pixel holding a fixation, `None` when off the canvas.
pub(crate) fn pixel_of(p: Point, width: usize, height: usize) -> Option<(usize, usize)> {
    if !(p.x >= 0.0 && p.y >= 0.0) {
        return None;
    }
    let (x, y) = (p.x as usize, p.y as usize);
    (x < width && y < height).then_some((x, y))
}

/// Fixation counts convolved with a truncated Gaussian (zero padding at the
/// borders), then scaled to sum 1. Off-canvas fixations are ignored.
pub fn density_map(fixations: &[Point], width: usize, height: usize, sigma_px: f64) -> Result<DensityMap> {
    if !(sigma_px > 0.0) {
        return Err(Error::arg("density sigma must be positive"));
    }
    let k = gaussian_kernel(sigma_px);
    let r = (k.len() / 2) as i64;
    let mut data = vec![0.0; width * height];
    let mut any = false;
    for &p in fixations {
        let Some((cx, cy)) = pixel_of(p, width, height) else {
            continue;
        };
        any = true;
        let (cx, cy) = (cx as i64, cy as i64);
        let y0 = (cy - r).max(0);
        let y1 = (cy + r).min(height as i64 - 1);
        let x0 = (cx - r).max(0);
        let x1 = (cx + r).min(width as i64 - 1);
        for y in y0..=y1 {
            let ky = k[(y - cy + r) as usize];
            let row = &mut data[y as usize * width..(y as usize + 1) * width];
            for x in x0..=x1 {
                row[x as usize] += ky * k[(x - cx + r) as usize];
            }
        }
    }
    if !any {
        return Err(Error::EmptyInput("no fixation on the canvas".into()));
    }
    let total: f64 = data.iter().sum();
    data.iter_mut().for_each(|v| *v /= total);
    Ok(DensityMap { width, height, data })
}
