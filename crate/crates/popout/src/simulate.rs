use std::path::Path;

use popout_core::gaze::{validate_records, MaskIndex};
use popout_core::sim::{participant_id, simulate, ObserverParams};
use rayon::prelude::*;

use crate::config::Config;
use crate::io::{fixations_csv, read_mask_png, write_atomic};
use crate::manifest::Manifest;
use crate::{with_jobs, Result};

pub const FIXATIONS_FILE: &str = "fixations.csv";

/// Simulate `cfg.participants` observers on every manifest stimulus and write
/// the fixations to `dest`. Returns the number of scanpaths.
pub fn run(cfg: &Config, dest: &Path) -> Result<usize> {
    cfg.validate()?;
    let dir = cfg.out.as_path();
    let manifest = Manifest::load(dir)?;
    let params = cfg.observer_params();
    let n = cfg.participants;
    let records = with_jobs(cfg.jobs, || {
        manifest
            .stimuli
            .par_iter()
            .map(|e| {
                let index = MaskIndex::new(&read_mask_png(&dir.join(&e.mask))?);
                // No AOI to look at: pure center-biased viewing.
                let p = if index.inside_count() == 0 { ObserverParams { aoi_bias: 0.0, ..params } } else { params };
                let mut out = Vec::new();
                for i in 0..n {
                    out.extend(simulate(&e.id, &participant_id(i), &index, &p)?.fixations);
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()
    })??;
    let records = validate_records(records.into_iter().flatten().collect())?;
    write_atomic(dest, &fixations_csv(&records)?)?;
    Ok(manifest.stimuli.len() * n)
}
