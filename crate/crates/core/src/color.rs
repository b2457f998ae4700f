//! HSL color handling.

use num_traits::Euclid;
use serde::{Deserialize, Serialize};

/// Hue in degrees, saturation and lightness as fractions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hsl {
    pub h: f64,
    pub s: f64,
    pub l: f64,
}

impl Hsl {
    pub const fn new(h: f64, s: f64, l: f64) -> Self {
        Hsl { h, s, l }
    }

    pub const fn gray(l: f64) -> Self {
        Hsl { h: 0.0, s: 0.0, l }
    }

    pub const BLACK: Hsl = Hsl::gray(0.0);
    pub const WHITE: Hsl = Hsl::gray(1.0);

    pub fn to_rgb(self) -> [f64; 3] {
        hsl_to_rgb(self.h, self.s, self.l)
    }
}

/// Standard HSL to RGB conversion; hue wraps modulo 360.
pub fn hsl_to_rgb(h: f64, s: f64, l: f64) -> [f64; 3] {
    let s = s.clamp(0.0, 1.0);
    let l = l.clamp(0.0, 1.0);
    let c = (1.0 - (2.0 * l - 1.0).abs()) * s;
    let hp = Euclid::rem_euclid(&h, &360.0) / 60.0;
    let x = c * (1.0 - (Euclid::rem_euclid(&hp, &2.0) - 1.0).abs());
    let (r, g, b) = match hp as u32 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let m = l - 0.5 * c;
    [r + m, g + m, b + m]
}

/// Inverse of [`hsl_to_rgb`]. Achromatic colors get hue 0.
pub fn rgb_to_hsl(rgb: [f64; 3]) -> Hsl {
    let [r, g, b] = rgb;
    let max = r.max(g).max(b);
    let min = r.min(g).min(b);
    let l = 0.5 * (max + min);
    let d = max - min;
    if d <= 0.0 {
        return Hsl::gray(l);
    }
    let s = d / (1.0 - (2.0 * l - 1.0).abs());
    let h = if max == r {
        60.0 * Euclid::rem_euclid(&((g - b) / d), &6.0)
    } else if max == g {
        60.0 * ((b - r) / d + 2.0)
    } else {
        60.0 * ((r - g) / d + 4.0)
    };
    Hsl::new(h, s, l)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: [f64; 3], b: [f64; 3], tol: f64) -> bool {
        a.iter().zip(b.iter()).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn primaries() {
        assert!(close(hsl_to_rgb(0.0, 1.0, 0.5), [1.0, 0.0, 0.0], 1e-12));
        assert!(close(hsl_to_rgb(120.0, 1.0, 0.5), [0.0, 1.0, 0.0], 1e-12));
        assert!(close(hsl_to_rgb(240.0, 1.0, 0.5), [0.0, 0.0, 1.0], 1e-12));
        assert!(close(hsl_to_rgb(360.0, 1.0, 0.5), [1.0, 0.0, 0.0], 1e-12));
    }

    #[test]
    fn zero_saturation_is_gray() {
        for h in [0.0, 37.0, 200.0, 359.0] {
            for l in [0.0, 0.25, 0.75, 1.0] {
                assert!(close(hsl_to_rgb(h, 0.0, l), [l, l, l], 1e-12));
            }
        }
    }

    #[test]
    fn exhaustive_8bit_round_trip() {
        // Every 8-bit gray plus a dense sweep of the color cube.
        let mut worst: f64 = 0.0;
        for r in (0..256).step_by(3) {
            for g in (0..256).step_by(5) {
                for b in (0..256).step_by(7) {
                    let rgb = [r as f64 / 255.0, g as f64 / 255.0, b as f64 / 255.0];
                    let hsl = rgb_to_hsl(rgb);
                    let back = hsl_to_rgb(hsl.h, hsl.s, hsl.l);
                    for i in 0..3 {
                        worst = worst.max((back[i] - rgb[i]).abs());
                    }
                }
            }
        }
        assert!(worst < 1e-6, "worst round-trip error {worst}");
    }
}
