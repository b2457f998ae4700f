use std::path::Path;

use popout_core::geometry::{Viewport, PX_PER_DEG};
use popout_core::scene::{Family, SceneLayout, StimulusSpec, Subtype, Task};
use serde::{Deserialize, Serialize};

use crate::io::{read_json, write_json};
use crate::{Error, Result};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub seed: u64,
    pub width_px: usize,
    pub height_px: usize,
    pub px_per_deg: f64,
    pub stimuli: Vec<ManifestEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub id: String,
    pub family: u8,
    pub family_name: String,
    pub subtype: String,
    pub contrast_index: usize,
    /// Feature contrast in `ct_unit`.
    pub ct: f64,
    pub ct_unit: String,
    pub seed: u64,
    pub task: String,
    /// Paths relative to the manifest.
    pub image: String,
    pub mask: String,
    pub layout: String,
    /// Target center in degrees from the field's top-left corner.
    pub target_deg: Option<[f64; 2]>,
    pub flags: Vec<String>,
}

impl ManifestEntry {
    pub fn from_layout(layout: &SceneLayout) -> ManifestEntry {
        let s = &layout.spec;
        let id = s.id();
        ManifestEntry {
            family: s.family.number(),
            family_name: s.family.name().into(),
            subtype: s.subtype.slug().into(),
            contrast_index: s.contrast_index,
            ct: layout.ct,
            ct_unit: layout.ct_unit.clone(),
            seed: s.seed,
            task: s.family.task().as_str().into(),
            image: format!("images/{id}.png"),
            mask: format!("masks/{id}_mask.png"),
            layout: format!("layouts/{id}.json"),
            target_deg: layout.target().map(|t| [t.center.x, t.center.y]),
            flags: layout.notes.clone(),
            id,
        }
    }

    pub fn spec(&self) -> Result<StimulusSpec> {
        let spec = StimulusSpec::new(
            Family::from_number(self.family)?,
            Subtype::from_slug(&self.subtype)?,
            self.contrast_index,
            self.seed,
        );
        if spec.id() != self.id {
            return Err(Error::Invalid(format!("manifest entry {} does not match its fields", self.id)));
        }
        Ok(spec)
    }

    pub fn family(&self) -> Result<Family> {
        Ok(Family::from_number(self.family)?)
    }

    pub fn task(&self) -> Result<Task> {
        Ok(self.family()?.task())
    }
}

impl Manifest {
    pub fn new(seed: u64, stimuli: Vec<ManifestEntry>) -> Manifest {
        let vp = Viewport::default();
        Manifest { seed, width_px: vp.width_px, height_px: vp.height_px, px_per_deg: PX_PER_DEG, stimuli }
    }

    pub fn load(dir: &Path) -> Result<Manifest> {
        read_json(&dir.join(MANIFEST_FILE))
    }

    pub fn save(&self, dir: &Path) -> Result<()> {
        write_json(&dir.join(MANIFEST_FILE), self)
    }

    pub fn get(&self, id: &str) -> Option<&ManifestEntry> {
        self.stimuli.iter().find(|e| e.id == id)
    }
}
