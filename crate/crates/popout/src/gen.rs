use std::path::Path;

use popout_core::raster::{render, render_mask};
use popout_core::scene::{generate, StimulusSpec};
use rayon::prelude::*;

use crate::config::Config;
use crate::io::{write_json, write_mask_png, write_rgb_png, write_atomic};
use crate::manifest::{Manifest, ManifestEntry};
use crate::{with_jobs, Error, Result};

pub const CONFIG_FILE: &str = "config.txt";

fn build_one(spec: &StimulusSpec, out: &Path) -> Result<ManifestEntry> {
    let layout = generate(spec)?;
    let entry = ManifestEntry::from_layout(&layout);
    let img = render(&layout)?;
    write_rgb_png(&out.join(&entry.image), img.width, img.height, &img.to_rgb8())?;
    write_mask_png(&out.join(&entry.mask), &render_mask(&layout))?;
    write_json(&out.join(&entry.layout), &layout)?;
    Ok(entry)
}

/// Render every configured stimulus with its mask and layout, then write the
/// manifest and the effective configuration.
pub fn run(cfg: &Config) -> Result<Manifest> {
    cfg.validate()?;
    let out = cfg.out.as_path();
    std::fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let specs = cfg.stimuli();
    let entries = with_jobs(cfg.jobs, || {
        specs.par_iter().map(|s| build_one(s, out)).collect::<Result<Vec<_>>>()
    })??;
    let manifest = Manifest::new(cfg.seed, entries);
    manifest.save(out)?;
    // Relative output so the file is identical wherever the run lives.
    let saved = Config { out: ".".into(), jobs: 0, ..cfg.clone() };
    write_atomic(&out.join(CONFIG_FILE), saved.to_text().as_bytes())?;
    Ok(manifest)
}
