//! Manifest and file-tree consistency.

use std::collections::BTreeSet;
use std::path::Path;

use popout_core::scene::{generate, SceneLayout};

use crate::io::{read_json, read_png};
use crate::manifest::Manifest;
use crate::Result;

/// Problems found under `dir`; empty when the tree is consistent. Fails only
/// when the manifest itself cannot be read.
pub fn run(dir: &Path) -> Result<Vec<String>> {
    let manifest = Manifest::load(dir)?;
    let mut problems = Vec::new();
    let mut seen = BTreeSet::new();
    for e in &manifest.stimuli {
        let mut bad = |msg: String| problems.push(format!("{}: {msg}", e.id));
        if !seen.insert(e.id.as_str()) {
            bad("duplicate id".into());
        }
        let spec = match e.spec() {
            Ok(s) => s,
            Err(err) => {
                bad(err.to_string());
                continue;
            }
        };
        match read_png(&dir.join(&e.image)) {
            Ok(img) if (img.width, img.height, img.channels) != (manifest.width_px, manifest.height_px, 3) => {
                bad(format!("image is {}x{} with {} channels", img.width, img.height, img.channels))
            }
            Ok(_) => {}
            Err(err) => bad(err.to_string()),
        }
        match read_png(&dir.join(&e.mask)) {
            Ok(m) if (m.width, m.height, m.channels) != (manifest.width_px, manifest.height_px, 1) => {
                bad(format!("mask is {}x{} with {} channels", m.width, m.height, m.channels))
            }
            Ok(m) => {
                let nonempty = m.data.iter().any(|&v| v != 0);
                if nonempty != spec.subtype.target_present() {
                    bad(format!("mask {} but target present is {}", if nonempty { "set" } else { "empty" }, spec.subtype.target_present()));
                }
            }
            Err(err) => bad(err.to_string()),
        }
        match read_json::<SceneLayout>(&dir.join(&e.layout)) {
            Ok(layout) => match generate(&spec) {
                Ok(fresh) if fresh != layout => bad("layout differs from a fresh generation".into()),
                Ok(_) => {}
                Err(err) => bad(err.to_string()),
            },
            Err(err) => bad(err.to_string()),
        }
    }
    Ok(problems)
}
