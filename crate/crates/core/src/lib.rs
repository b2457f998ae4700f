#![no_std]
// `num_traits::Float` supplies float math without std. Whenever std is in
// the crate graph its inherent methods take over and the imports go unused.
#![allow(unused_imports)]
//! Parametric pop-out stimulus synthesis and gaze-based saliency metrics.
//!
//! The crate is `no_std` and needs only `alloc`. It covers:
//!
//! - [`psychometric`]: the contrast ladders (uniform fraction, angle series,
//!   color and lightness contrast geometry) that parametrize every stimulus.
//! - [`scene`]: deterministic layout builders for the fifteen stimulus
//!   families, including the area of interest around each salient region.
//! - [`raster`]: anti-aliased rendering of layouts, binary AOI masks,
//!   `1/f^beta` rough surfaces and Lambertian shading.
//! - [`gaze`]: fixation records, density maps, the saliency index, reaction
//!   times, center-bias distance and temporal series.
//! - [`stats`]: Spearman, Kruskal-Wallis and Wilcoxon signed-rank tests.
//! - [`sim`]: a synthetic observer for exercising the evaluation pipeline.
//!
//! File formats, the command line and all IO live in the companion `popout`
//! crate.

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod color;
mod error;
pub mod gaze;
pub mod geometry;
pub mod psychometric;
pub mod raster;
pub mod rng;
pub mod scene;
pub mod sim;
pub mod stats;

pub use error::{Error, Result};
pub use geometry::{Point, Rect, Viewport};
