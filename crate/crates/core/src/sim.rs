//! Synthetic observer: scanpaths mixing AOI-attracted and center-biased
//! fixations, for exercising the evaluation pipeline end to end.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Float;
use rand::Rng;
use rand_distr::{Distribution, LogNormal, Normal};
use serde::{Deserialize, Serialize};

use crate::gaze::{FixationRecord, MaskIndex, Scanpath, MIN_FIXATION_MS};
use crate::geometry::PX_PER_DEG;
use crate::rng::{derive_seed, hash_str, rng_from_seed};
use crate::{Error, Result};

/// Gap between the end of one fixation and the onset of the next.
pub const SACCADE_GAP_MS: f64 = 30.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObserverParams {
    pub n_fixations: usize,
    /// Probability that a fixation lands in the AOI.
    pub aoi_bias: f64,
    /// Spread of the center-biased fixations, degrees.
    pub center_sigma: f64,
    pub fd_median: f64,
    /// Standard deviation of log duration.
    pub fd_dispersion: f64,
    pub seed: u64,
}

impl Default for ObserverParams {
    fn default() -> Self {
        ObserverParams {
            n_fixations: 10,
            aoi_bias: 0.3,
            center_sigma: 5.0,
            fd_median: 200.0,
            fd_dispersion: 0.5,
            seed: 0,
        }
    }
}

impl ObserverParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_fixations == 0 {
            return Err(Error::arg("n_fixations must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.aoi_bias) {
            return Err(Error::arg(format!("aoi_bias {} outside [0, 1]", self.aoi_bias)));
        }
        if !(self.center_sigma >= 0.0 && self.center_sigma.is_finite()) {
            return Err(Error::arg("center_sigma must be finite and non-negative"));
        }
        if !(self.fd_median > 0.0 && self.fd_dispersion >= 0.0) {
            return Err(Error::arg("fd_median must be positive, fd_dispersion non-negative"));
        }
        Ok(())
    }
}

/// Participant label for cohort member `i` (0-based): `sim01`, `sim02`, ...
pub fn participant_id(i: usize) -> String {
    format!("sim{:02}", i + 1)
}

fn round2(v: f64) -> f64 {
    (v * 100.0).round() / 100.0
}

/// One scanpath on `stimulus` for `participant`. The random stream is derived
/// from the params seed and both identifiers.
pub fn simulate(stimulus: &str, participant: &str, mask: &MaskIndex, params: &ObserverParams) -> Result<Scanpath> {
    params.validate()?;
    let inside = mask.inside_count();
    if params.aoi_bias > 0.0 && inside == 0 {
        return Err(Error::arg("aoi_bias > 0 needs a nonempty AOI"));
    }
    let seed = derive_seed(params.seed, &[hash_str(stimulus), hash_str(participant)]);
    let mut rng = rng_from_seed(seed);
    let (w, h) = (mask.width as f64, mask.height as f64);
    let sd = params.center_sigma * PX_PER_DEG;
    let spread = Normal::new(0.0, sd).map_err(|e| Error::arg(format!("{e}")))?;
    let durations = LogNormal::new(params.fd_median.ln(), params.fd_dispersion)
        .map_err(|e| Error::arg(format!("{e}")))?;
    let mut fixations = Vec::with_capacity(params.n_fixations);
    let mut onset = 0.0;
    for i in 0..params.n_fixations {
        let (x, y) = if params.aoi_bias > 0.0 && rng.random_bool(params.aoi_bias) {
            let n = rng.random_range(0..inside);
            let (px, py) = mask.nth_pixel(n).expect("index below inside count");
            (
                round2(px as f64 + 0.5 + rng.random_range(-0.4..=0.4)),
                round2(py as f64 + 0.5 + rng.random_range(-0.4..=0.4)),
            )
        } else {
            let (dx, dy) = if sd > 0.0 {
                (spread.sample(&mut rng), spread.sample(&mut rng))
            } else {
                (0.0, 0.0)
            };
            (
                round2((0.5 * w + dx).clamp(0.0, w - 0.01)),
                round2((0.5 * h + dy).clamp(0.0, h - 0.01)),
            )
        };
        let duration = durations.sample(&mut rng).round().max(MIN_FIXATION_MS);
        fixations.push(FixationRecord {
            participant: participant.into(),
            stimulus: stimulus.into(),
            index: (i + 1) as u32,
            x,
            y,
            onset_ms: onset,
            duration_ms: duration,
        });
        onset += duration + SACCADE_GAP_MS;
    }
    Ok(Scanpath {
        participant: participant.into(),
        stimulus: stimulus.into(),
        fixations,
    })
}
