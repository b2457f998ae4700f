use alloc::format;

use num_traits::Float;

use super::{lambert_shade, synth_surface, AoiMask, RasterImage};
use crate::geometry::{Point, Viewport};
use crate::scene::{Background, Item, SceneLayout, Shape};
use crate::{Error, Result};

/// Subsamples per pixel along each axis.
pub const SUPERSAMPLE: usize = 4;

/// Position of `q` in the item frame: `along` the orientation axis and
/// `across` it, with the y axis pointing up.
fn local(item: &Item, q: Point) -> (f64, f64, f64, f64) {
    let dx = q.x - item.center.x;
    let dy = item.center.y - q.y;
    let (s, c) = item.orientation.to_radians().sin_cos();
    (dx * c + dy * s, -dx * s + dy * c, dx, dy)
}

fn covers(item: &Item, q: Point) -> bool {
    let (u, v, dx, dy) = local(item, q);
    let half = 0.5 * item.size;
    match item.shape {
        Shape::Bar => u.abs() <= half && v.abs() <= 0.5 * item.thickness,
        Shape::Circle | Shape::GradientDisc => dx.hypot(dy) <= half,
        Shape::Ring => {
            let r = dx.hypot(dy);
            r <= half && r >= half - item.thickness
        }
        Shape::CrossedCircle => {
            let r = dx.hypot(dy);
            (r <= half && r >= half - item.thickness)
                || (dx.abs() <= 0.5 * item.thickness && dy.abs() <= half)
        }
        Shape::Square => u.abs() <= half && v.abs() <= half,
        Shape::Triangle => {
            let h = item.size * 3f64.sqrt() / 2.0;
            v >= -h / 3.0 && 3f64.sqrt() * u.abs() + v <= 2.0 * h / 3.0
        }
        Shape::CornerGradient => corner_level(item, q) <= 0.0,
    }
}

/// Corner gradient value at `q`: 0 inside the wedge, rising linearly to 1 at
/// the ramp width outside it. The wedge opens downwards from the vertex with
/// interior angle `orientation`.
fn corner_level(item: &Item, q: Point) -> f64 {
    let dx = q.x - item.center.x;
    let dy = q.y - item.center.y; // image y, down
    let half = 0.5 * item.orientation.to_radians();
    // Angle from the downward axis.
    let ang = dx.abs().atan2(dy);
    if ang <= half {
        return 0.0;
    }
    // Distance to the nearer edge ray.
    let (s, c) = half.sin_cos();
    let (ex, ey) = (s, c);
    let (px, py) = (dx.abs(), dy);
    let t = px * ex + py * ey;
    let dist = if t >= 0.0 {
        (px * ey - py * ex).abs()
    } else {
        px.hypot(py)
    };
    (dist / item.size).min(1.0)
}

fn item_rgb(item: &Item, q: Point) -> [f64; 3] {
    match item.shape {
        Shape::GradientDisc => {
            let r = 0.5 * item.size;
            let t = ((q.y - (item.center.y - r)) / (2.0 * r)).clamp(0.0, 1.0);
            let l = 1.0 - t;
            [l, l, l]
        }
        _ => item.color.to_rgb(),
    }
}

fn background(layout: &SceneLayout, vp: &Viewport) -> Result<RasterImage> {
    match layout.background {
        Background::Solid { color } => Ok(RasterImage::filled(vp.width_px, vp.height_px, color.to_rgb())),
        Background::Surface {
            beta,
            sigma_rms,
            seed,
            slant_deg,
            tilt_deg,
        } => {
            let h = synth_surface(beta, sigma_rms, seed, vp.width_px, vp.height_px)?;
            let g = lambert_shade(&h, slant_deg, tilt_deg);
            Ok(RasterImage {
                width: g.width,
                height: g.height,
                data: g.data.iter().map(|&v| [v, v, v]).collect(),
            })
        }
    }
}

fn pixel_range(lo: f64, hi: f64, n: usize) -> (usize, usize) {
    let a = lo.floor().max(0.0) as usize;
    let b = (hi.ceil().max(0.0) as usize).min(n);
    (a.min(n), b)
}

fn draw_corner(img: &mut RasterImage, item: &Item, vp: &Viewport) {
    let ink = item.color.to_rgb();
    for py in 0..img.height {
        for px in 0..img.width {
            let q = vp.to_deg(Point::new(px as f64 + 0.5, py as f64 + 0.5));
            let g = corner_level(item, q);
            let p = &mut img.data[py * img.width + px];
            for ch in 0..3 {
                p[ch] = ink[ch] * (1.0 - g) + p[ch] * g;
            }
        }
    }
}

/// Render a layout onto its canvas.
///
/// Items are drawn in order with 4 x 4 supersampled coverage blended over
/// what lies below. Parts of an item beyond the canvas are clipped; an item
/// whose center is off the canvas is an error.
pub fn render(layout: &SceneLayout) -> Result<RasterImage> {
    let vp = layout.viewport;
    let mut img = background(layout, &vp)?;
    let n = SUPERSAMPLE;
    let inv = 1.0 / (n * n) as f64;
    for (i, item) in layout.items.iter().enumerate() {
        let c = vp.to_px(item.center);
        if !(c.x >= 0.0 && c.y >= 0.0 && c.x < vp.width_px as f64 && c.y < vp.height_px as f64) {
            return Err(Error::Render(format!(
                "item {i} centered at ({:.2}, {:.2}) deg lies outside the canvas",
                item.center.x, item.center.y
            )));
        }
        if item.shape == Shape::CornerGradient {
            draw_corner(&mut img, item, &vp);
            continue;
        }
        let b = item.bbox();
        let (p0, p1) = (vp.to_px(b.min), vp.to_px(b.max));
        let (x0, x1) = pixel_range(p0.x, p1.x, vp.width_px);
        let (y0, y1) = pixel_range(p0.y, p1.y, vp.height_px);
        for py in y0..y1 {
            for px in x0..x1 {
                let mut acc = [0.0; 3];
                let mut hits = 0usize;
                for sy in 0..n {
                    for sx in 0..n {
                        let q = vp.to_deg(Point::new(
                            px as f64 + (sx as f64 + 0.5) / n as f64,
                            py as f64 + (sy as f64 + 0.5) / n as f64,
                        ));
                        if covers(item, q) {
                            let rgb = item_rgb(item, q);
                            for ch in 0..3 {
                                acc[ch] += rgb[ch];
                            }
                            hits += 1;
                        }
                    }
                }
                if hits == 0 {
                    continue;
                }
                let cov = hits as f64 * inv;
                let p = &mut img.data[py * img.width + px];
                for ch in 0..3 {
                    p[ch] = acc[ch] * inv + p[ch] * (1.0 - cov);
                }
            }
        }
    }
    Ok(img)
}

/// Rasterize the layout's area of interest: a pixel is set when its center
/// lies inside the region.
pub fn render_mask(layout: &SceneLayout) -> AoiMask {
    let vp = layout.viewport;
    let mut mask = AoiMask::new(vp.width_px, vp.height_px);
    let Some(b) = layout.aoi.bbox() else {
        return mask;
    };
    let (p0, p1) = (vp.to_px(b.min), vp.to_px(b.max));
    let (x0, x1) = pixel_range(p0.x - 1.0, p1.x + 1.0, vp.width_px);
    let (y0, y1) = pixel_range(p0.y - 1.0, p1.y + 1.0, vp.height_px);
    for py in y0..y1 {
        for px in x0..x1 {
            let q = vp.to_deg(Point::new(px as f64 + 0.5, py as f64 + 0.5));
            if layout.aoi.contains(q) {
                mask.set(px, py, true);
            }
        }
    }
    mask
}
