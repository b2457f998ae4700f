use alloc::vec::Vec;

use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::Scanpath;
use crate::geometry::{Point, PX_PER_DEG};
use crate::raster::AoiMask;
use crate::scene::Task;

/// Dwell needed inside the AOI to count as identification.
pub const DWELL_MS: f64 = 1000.0;
/// Free-viewing scanpaths starting this close to the AOI are excluded.
pub const EXCLUSION_RADIUS_DEG: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Localization {
    /// Onset of the first fixation inside the mask.
    pub rt: Option<f64>,
    /// The first fixation already started near the AOI.
    pub excluded: bool,
}

/// Whether a mask pixel center lies within `radius` px of `p`.
fn near_mask(mask: &AoiMask, p: Point, radius: f64) -> bool {
    let x0 = (p.x - radius).floor().max(0.0) as usize;
    let y0 = (p.y - radius).floor().max(0.0) as usize;
    let x1 = ((p.x + radius).ceil().max(0.0) as usize).min(mask.width);
    let y1 = ((p.y + radius).ceil().max(0.0) as usize).min(mask.height);
    let r2 = radius * radius;
    for y in y0..y1 {
        let dy = y as f64 + 0.5 - p.y;
        for x in x0..x1 {
            if mask.data[y * mask.width + x] != 0 {
                let dx = x as f64 + 0.5 - p.x;
                if dx * dx + dy * dy <= r2 {
                    return true;
                }
            }
        }
    }
    false
}

/// Localization time. For free viewing, a scanpath whose first fixation lies
/// within 5 deg of the AOI is flagged as excluded.
pub fn rt_localization(scanpath: &Scanpath, mask: &AoiMask, task: Task) -> Localization {
    let rt = scanpath
        .fixations
        .iter()
        .find(|f| mask.contains_px(f.x, f.y))
        .map(|f| f.onset_ms);
    let excluded = task == Task::FreeViewing
        && scanpath
            .fixations
            .first()
            .is_some_and(|f| near_mask(mask, f.pos(), EXCLUSION_RADIUS_DEG * PX_PER_DEG));
    Localization { rt, excluded }
}

/// Onset of the first run of consecutive in-mask fixations whose durations
/// add up to at least `dwell_ms`.
pub fn rt_identification(scanpath: &Scanpath, mask: &AoiMask, dwell_ms: f64) -> Option<f64> {
    let mut start = None;
    let mut acc = 0.0;
    for f in &scanpath.fixations {
        if mask.contains_px(f.x, f.y) {
            let s = *start.get_or_insert(f.onset_ms);
            acc += f.duration_ms;
            if acc >= dwell_ms {
                return Some(s);
            }
        } else {
            start = None;
            acc = 0.0;
        }
    }
    None
}

/// Time from the first in-mask fixation to the first return into the mask
/// after leaving it.
pub fn rt_return(scanpath: &Scanpath, mask: &AoiMask) -> Option<f64> {
    let mut first = None;
    let mut left = false;
    for f in &scanpath.fixations {
        let inside = mask.contains_px(f.x, f.y);
        match (first, inside) {
            (None, true) => first = Some(f.onset_ms),
            (Some(_), false) => left = true,
            (Some(t0), true) if left => return Some(f.onset_ms - t0),
            _ => {}
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CenterDistance {
    /// Degrees, one per fixation.
    pub per_fixation: Vec<f64>,
    pub mean: Option<f64>,
}

/// Distance of each fixation from `center`, in degrees.
pub fn distance_from_center(fixations: &[Point], center: Point) -> CenterDistance {
    let per_fixation: Vec<f64> = fixations.iter().map(|p| p.distance(center) / PX_PER_DEG).collect();
    let mean = (!per_fixation.is_empty())
        .then(|| per_fixation.iter().sum::<f64>() / per_fixation.len() as f64);
    CenterDistance { per_fixation, mean }
}

/// Amplitudes between consecutive fixation centers, in degrees.
pub fn saccade_amplitudes(scanpath: &Scanpath) -> Vec<f64> {
    scanpath
        .fixations
        .windows(2)
        .map(|w| w[0].pos().distance(w[1].pos()) / PX_PER_DEG)
        .collect()
}

/// Cutoff `mean + 2 sd` (sample sd) for reaction-time outliers, or `None`
/// below three samples.
pub fn rt_outlier_limit(rts: &[f64]) -> Option<f64> {
    if rts.len() < 3 {
        return None;
    }
    let n = rts.len() as f64;
    let mean = rts.iter().sum::<f64>() / n;
    let sd = (rts.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)).sqrt();
    Some(mean + 2.0 * sd)
}

/// Drop samples above [`rt_outlier_limit`] in a single pass. Fewer than three
/// samples pass through unchanged.
pub fn filter_rt_outliers(rts: &[f64]) -> Vec<f64> {
    match rt_outlier_limit(rts) {
        Some(limit) => rts.iter().copied().filter(|&v| v <= limit).collect(),
        None => rts.to_vec(),
    }
}
