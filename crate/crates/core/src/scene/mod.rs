//! Scene layouts for the fifteen stimulus families.
//!
//! A [`StimulusSpec`] (family, subtype, contrast index, seed) fully determines
//! a [`SceneLayout`]: the placed items, the background, and the area of
//! interest around the salient region. [`generate`] dispatches to the family
//! builders in [`families`].

mod aoi;
pub mod families;
mod place;
mod types;

pub use aoi::{aoi_for, AoiRegion, AOI_PADDING_DEG};
pub use types::*;

use alloc::vec::Vec;

use crate::Result;

/// Build the layout for `spec`.
pub fn generate(spec: &StimulusSpec) -> Result<SceneLayout> {
    spec.validate()?;
    let mut layout = families::build(spec)?;
    layout.aoi = aoi_for(&layout);
    Ok(layout)
}

/// Every stimulus of the full 230-image dataset for one master seed, in
/// family / subtype / contrast order.
pub fn enumerate_dataset(master_seed: u64) -> Vec<StimulusSpec> {
    Family::ALL
        .iter()
        .flat_map(|&f| enumerate_family(f, master_seed))
        .collect()
}

pub fn enumerate_family(family: Family, master_seed: u64) -> Vec<StimulusSpec> {
    let mut out = Vec::new();
    for &subtype in family.subtypes() {
        for x in 1..=family.levels() {
            out.push(StimulusSpec::with_master_seed(family, subtype, x, master_seed));
        }
    }
    out
}
