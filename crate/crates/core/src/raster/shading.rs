use alloc::vec::Vec;

use num_traits::Float;

use super::{GrayImage, HeightMap};

/// Unit vector towards the light: slant from the surface normal, tilt
/// counter-clockwise from image right (90 deg is the top of the image).
pub fn light_vector(slant_deg: f64, tilt_deg: f64) -> [f64; 3] {
    let (ss, cs) = slant_deg.to_radians().sin_cos();
    let (st, ct) = tilt_deg.to_radians().sin_cos();
    [ss * ct, ss * st, cs]
}

/// Lambertian intensity `max(0, n . l)` before any tone mapping.
///
/// Gradients are central differences with unit spacing (one-sided at the
/// border). The surface `y` axis points up, so image rows are negated.
pub fn lambert_intensity(h: &HeightMap, slant_deg: f64, tilt_deg: f64) -> Vec<f64> {
    let l = light_vector(slant_deg, tilt_deg);
    let (w, ht) = (h.width, h.height);
    let diff = |a: f64, b: f64, span: usize| (a - b) / span as f64;
    let mut out = Vec::with_capacity(w * ht);
    for y in 0..ht {
        for x in 0..w {
            let (x0, x1) = (x.saturating_sub(1), (x + 1).min(w - 1));
            let (y0, y1) = (y.saturating_sub(1), (y + 1).min(ht - 1));
            let dzdx = if x1 > x0 { diff(h.get(x1, y), h.get(x0, y), x1 - x0) } else { 0.0 };
            let dzdy = if y1 > y0 { -diff(h.get(x, y1), h.get(x, y0), y1 - y0) } else { 0.0 };
            let norm = (dzdx * dzdx + dzdy * dzdy + 1.0).sqrt();
            let dot = (-dzdx * l[0] - dzdy * l[1] + l[2]) / norm;
            out.push(dot.max(0.0));
        }
    }
    out
}

/// Shaded surface mapped linearly to `[0, 1]` per image. A shading with no
/// range is returned unmapped.
pub fn lambert_shade(h: &HeightMap, slant_deg: f64, tilt_deg: f64) -> GrayImage {
    let mut v = lambert_intensity(h, slant_deg, tilt_deg);
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi - lo > 1e-12 {
        v.iter_mut().for_each(|p| *p = (*p - lo) / (hi - lo));
    }
    GrayImage {
        width: h.width,
        height: h.height,
        data: v,
    }
}
