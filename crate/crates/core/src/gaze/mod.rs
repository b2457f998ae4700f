//! Gaze evaluation: fixation records, density maps, the saliency index,
//! AOI reaction times, center-bias distance and per-fixation series.
//!
//! Positions are canvas pixels, times are milliseconds from stimulus onset.

mod density;
mod rt;
mod saliency;
mod temporal;

pub use density::{density_map, gaussian_kernel, DensityMap, DENSITY_SIGMA_PX};
pub use rt::{
    distance_from_center, filter_rt_outliers, rt_identification, rt_outlier_limit, rt_localization, rt_return,
    saccade_amplitudes, CenterDistance, Localization, DWELL_MS, EXCLUSION_RADIUS_DEG,
};
pub use saliency::{saliency_index, saliency_index_fixations, MaskIndex, Si};
pub use temporal::{evaluate_scanpath, temporal_series, EvalResult, SeriesMode, StimulusGaze, TemporalPoint};

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::geometry::Point;
use crate::{Error, Result};

/// Shortest fixation the upstream detector reports.
pub const MIN_FIXATION_MS: f64 = 80.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixationRecord {
    pub participant: String,
    pub stimulus: String,
    /// 1-based order within the scanpath.
    pub index: u32,
    pub x: f64,
    pub y: f64,
    pub onset_ms: f64,
    pub duration_ms: f64,
}

impl FixationRecord {
    pub fn pos(&self) -> Point {
        Point::new(self.x, self.y)
    }
}

/// All fixations of one participant on one stimulus, in order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scanpath {
    pub participant: String,
    pub stimulus: String,
    pub fixations: Vec<FixationRecord>,
}

impl Scanpath {
    pub fn points(&self) -> Vec<Point> {
        self.fixations.iter().map(FixationRecord::pos).collect()
    }
}

/// Sort records by (participant, stimulus, index) and check them.
///
/// Rejects non-finite fields, durations under 80 ms, duplicate keys and
/// onsets that do not strictly increase within a scanpath.
pub fn validate_records(mut records: Vec<FixationRecord>) -> Result<Vec<FixationRecord>> {
    for r in &records {
        if ![r.x, r.y, r.onset_ms, r.duration_ms].iter().all(|v| v.is_finite()) {
            return Err(Error::Validation(format!(
                "non-finite value in fixation {} of {}/{}",
                r.index, r.participant, r.stimulus
            )));
        }
        if r.duration_ms < MIN_FIXATION_MS {
            return Err(Error::Validation(format!(
                "fixation {} of {}/{} lasts {} ms, below the {MIN_FIXATION_MS} ms floor",
                r.index, r.participant, r.stimulus, r.duration_ms
            )));
        }
    }
    records.sort_by(|a, b| {
        (&a.participant, &a.stimulus, a.index).cmp(&(&b.participant, &b.stimulus, b.index))
    });
    let mut seen = BTreeSet::new();
    for r in &records {
        if !seen.insert((&r.participant, &r.stimulus, r.index)) {
            return Err(Error::Validation(format!(
                "duplicate fixation {} of {}/{}",
                r.index, r.participant, r.stimulus
            )));
        }
    }
    for w in records.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if a.participant == b.participant && a.stimulus == b.stimulus && b.onset_ms <= a.onset_ms {
            return Err(Error::Validation(format!(
                "onsets not increasing at fixation {} of {}/{}",
                b.index, b.participant, b.stimulus
            )));
        }
    }
    Ok(records)
}

/// Split sorted records into scanpaths.
pub fn group_scanpaths(records: &[FixationRecord]) -> Vec<Scanpath> {
    let mut out: Vec<Scanpath> = Vec::new();
    for r in records {
        match out.last_mut() {
            Some(sp) if sp.participant == r.participant && sp.stimulus == r.stimulus => {
                sp.fixations.push(r.clone())
            }
            _ => out.push(Scanpath {
                participant: r.participant.clone(),
                stimulus: r.stimulus.clone(),
                fixations: alloc::vec![r.clone()],
            }),
        }
    }
    out
}
