//! Pixel output: stimulus rendering, AOI masks, rough surfaces and shading.
//!
//! Images are real-valued in `[0, 1]` and quantized only on export
//! ([`RasterImage::to_rgb8`]). Rendering supersamples each pixel 4 x 4.

pub mod fft;
mod render;
mod shading;
mod surface;

pub use render::{render, render_mask, SUPERSAMPLE};
pub use shading::{lambert_intensity, lambert_shade, light_vector};
pub use surface::{synth_surface, HeightMap};

use alloc::vec;
use alloc::vec::Vec;

pub use crate::color::hsl_to_rgb;

/// Row-major RGB image.
#[derive(Debug, Clone, PartialEq)]
pub struct RasterImage {
    pub width: usize,
    pub height: usize,
    pub data: Vec<[f64; 3]>,
}

impl RasterImage {
    pub fn filled(width: usize, height: usize, rgb: [f64; 3]) -> Self {
        RasterImage {
            width,
            height,
            data: vec![rgb; width * height],
        }
    }

    pub fn get(&self, x: usize, y: usize) -> [f64; 3] {
        self.data[y * self.width + x]
    }

    /// Interleaved 8-bit RGB.
    pub fn to_rgb8(&self) -> Vec<u8> {
        self.data
            .iter()
            .flat_map(|p| p.map(|c| (c.clamp(0.0, 1.0) * 255.0 + 0.5) as u8))
            .collect()
    }
}

/// Row-major single-channel image.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    pub data: Vec<f64>,
}

/// Binary area-of-interest mask, one byte per pixel holding 0 or 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AoiMask {
    pub width: usize,
    pub height: usize,
    pub data: Vec<u8>,
}

impl AoiMask {
    pub fn new(width: usize, height: usize) -> Self {
        AoiMask {
            width,
            height,
            data: vec![0; width * height],
        }
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.data[y * self.width + x] != 0
    }

    pub fn set(&mut self, x: usize, y: usize, on: bool) {
        self.data[y * self.width + x] = on as u8;
    }

    /// Whether the pixel containing `(x, y)` is set; off-canvas points are
    /// outside.
    pub fn contains_px(&self, x: f64, y: f64) -> bool {
        if !(x >= 0.0 && y >= 0.0) {
            return false;
        }
        let (xi, yi) = (x as usize, y as usize);
        xi < self.width && yi < self.height && self.get(xi, yi)
    }

    pub fn count(&self) -> usize {
        self.data.iter().filter(|&&v| v != 0).count()
    }

    pub fn is_empty(&self) -> bool {
        self.count() == 0
    }

    /// 8-bit gray with values 0 and 255.
    pub fn to_gray8(&self) -> Vec<u8> {
        self.data.iter().map(|&v| if v != 0 { 255 } else { 0 }).collect()
    }
}
