//! Contrast ladders for every stimulus family.
//!
//! All contrast values derive from the uniform fraction
//! `psi(x, n) = (x - 1) / (n - 1)` over `n` discrete contrast indices
//! (`x = 1..=n`, normally `n = 7`). Angles are in degrees throughout.

use alloc::vec::Vec;
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::color::Hsl;
use crate::{Error, Result};

/// Number of contrast levels used by every family except contour
/// integration.
pub const LEVELS: usize = 7;

/// Fitted B-T angle of the color contrast geometry, in degrees.
///
/// With this angle the generated `theta` ladder tops out at 53 deg and the
/// saturation differences follow `tan(alpha) * tan(theta)`, matching the
/// published pairs to within 0.01.
pub const FITTED_ALPHA_DEG: f64 = 37.0;

/// Ordered contrast values, one per contrast index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContrastSeries {
    pub values: Vec<f64>,
}

impl ContrastSeries {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value at a 1-based contrast index.
    pub fn at(&self, x: usize) -> Result<f64> {
        if x == 0 || x > self.values.len() {
            return Err(Error::arg(alloc::format!(
                "contrast index {x} outside 1..={}",
                self.values.len()
            )));
        }
        Ok(self.values[x - 1])
    }
}

/// An angle in degrees.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AngleDeg(pub f64);

impl AngleDeg {
    /// Canonical bar orientation in `[0, 180)`; bars are symmetric under a
    /// half turn.
    pub fn orientation(self) -> AngleDeg {
        AngleDeg(canonical_orientation(self.0))
    }
}

pub fn canonical_orientation(deg: f64) -> f64 {
    let mut r = deg % 180.0;
    if r < 0.0 {
        r += 180.0;
    }
    // tiny negative inputs can round up to exactly 180
    if r >= 180.0 {
        0.0
    } else {
        r
    }
}

fn check_index(x: usize, n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::arg(alloc::format!("need at least 2 levels, got {n}")));
    }
    if x < 1 || x > n {
        return Err(Error::arg(alloc::format!("contrast index {x} outside 1..={n}")));
    }
    Ok(())
}

/// Uniform fraction `(x - 1) / (n - 1)`.
pub fn psi(x: usize, n: usize) -> Result<f64> {
    check_index(x, n)?;
    Ok((x - 1) as f64 / (n - 1) as f64)
}

/// `v * psi(x, n)`.
pub fn psi_scaled(x: usize, n: usize, v: f64) -> Result<f64> {
    if !v.is_finite() {
        return Err(Error::arg("scale must be finite"));
    }
    Ok(v * psi(x, n)?)
}

/// Seven-point ladder from `min` to `max` through `baseline`.
///
/// Built from two four-point halves (`min..baseline`, `baseline..max`) that
/// share the baseline, so the first, middle and last values are exactly
/// `min`, `baseline` and `max`. The default baseline is the midpoint.
pub fn psi_range(n: usize, min: f64, max: f64, baseline: Option<f64>) -> Result<ContrastSeries> {
    if n != LEVELS {
        return Err(Error::arg(alloc::format!("psi_range needs n = {LEVELS}, got {n}")));
    }
    let baseline = baseline.unwrap_or(0.5 * (min + max));
    if !(min <= baseline && baseline <= max) || !min.is_finite() || !max.is_finite() {
        return Err(Error::arg(alloc::format!(
            "require min <= baseline <= max, got {min}, {baseline}, {max}"
        )));
    }
    let half = (n + 1) / 2;
    let mut values = Vec::with_capacity(n);
    for k in 1..=half {
        values.push(min + (baseline - min) * psi(k, half)?);
    }
    for k in 2..=half {
        values.push(baseline + (max - baseline) * psi(k, half)?);
    }
    // Pin the anchors exactly; interpolation can be off by an ulp.
    values[0] = min;
    values[half - 1] = baseline;
    values[n - 1] = max;
    Ok(ContrastSeries { values })
}

/// Angle ladder `|asin(psi_scaled(x, 7, v)) + a|` in degrees.
pub fn phi_series(v: f64, a: f64) -> Result<ContrastSeries> {
    let mut values = Vec::with_capacity(LEVELS);
    for x in 1..=LEVELS {
        let s = psi_scaled(x, LEVELS, v)?;
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::Domain(alloc::format!(
                "asin argument {s} at index {x} outside [0, 1] (scale {v})"
            )));
        }
        values.push((s.asin().to_degrees() + a).abs());
    }
    Ok(ContrastSeries { values })
}

/// Orientation contrast between two bars, in `[0, 90]`.
pub fn delta_phi(phi: f64, b: f64) -> f64 {
    let d = (b - phi).abs() % 180.0;
    d.min(180.0 - d)
}

/// Accumulated nonlinearity pattern `u * row + u * col`, as a bar
/// orientation.
pub fn pattern_angle(u: f64, row: usize, col: usize) -> AngleDeg {
    AngleDeg(canonical_orientation(u * row as f64 + u * col as f64))
}

/// Saturation contrast geometry between background, target and distractors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ColorGeometry {
    pub alpha: f64,
    pub theta: f64,
    pub beta: f64,
    /// Saturation difference between distractors and target.
    pub delta_s_dt: f64,
    /// Distractor saturation.
    pub s_d: f64,
    pub background: Hsl,
    pub target: Hsl,
}

impl ColorGeometry {
    /// Distractors share the target's hue and lightness.
    pub fn distractor(&self) -> Hsl {
        Hsl::new(self.target.h, self.s_d, self.target.l)
    }
}

/// Color contrast at index `x` of the seven-level ladder.
///
/// `theta = (90 - alpha) * psi(x)`, `beta = 90 - theta - alpha`, and the
/// saturation difference is `dL_BT * tan(theta)` with
/// `dL_BT = dS_BT * tan(alpha)`. `dS_BT` is the saturation span available to
/// the distractors (the larger of target and background saturation), so the
/// maximum contrast always reaches the full span.
pub fn color_geometry(background: Hsl, target: Hsl, x: usize) -> Result<ColorGeometry> {
    if background == target {
        return Err(Error::Degenerate(
            "background and target are identical; B-T angle undefined".into(),
        ));
    }
    let alpha = FITTED_ALPHA_DEG;
    let theta = (90.0 - alpha) * psi(x, LEVELS)?;
    let beta = 90.0 - theta - alpha;
    let delta_s_bt = target.s.max(background.s);
    let delta_l_bt = delta_s_bt * alpha.to_radians().tan();
    let delta_s_dt = delta_l_bt * theta.to_radians().tan();
    let s_d = if target.s > background.s {
        target.s - delta_s_dt
    } else {
        background.s - delta_s_dt
    };
    Ok(ColorGeometry {
        alpha,
        theta,
        beta,
        delta_s_dt,
        s_d: s_d.clamp(0.0, 1.0),
        background,
        target,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LightnessContrast {
    pub delta_l_dt: f64,
    pub l_d: f64,
}

/// Distractor lightness for background `l_b`, target `l_t` and uniform
/// fraction `psi`, following the two printed branches on `l_t > l_b`.
pub fn lightness_contrast(l_b: f64, l_t: f64, psi: f64) -> LightnessContrast {
    let delta_bt = (l_b - l_t).abs();
    if l_t > l_b {
        let d = delta_bt * (1.0 - psi);
        LightnessContrast {
            delta_l_dt: d,
            l_d: (l_t - d).clamp(0.0, 1.0),
        }
    } else {
        let d = delta_bt * psi;
        LightnessContrast {
            delta_l_dt: d,
            l_d: (l_b - d).clamp(0.0, 1.0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn psi_anchors() {
        assert_eq!(psi(1, 7).unwrap(), 0.0);
        assert_eq!(psi(4, 7).unwrap(), 0.5);
        assert_eq!(psi(7, 7).unwrap(), 1.0);
        assert_abs_diff_eq!(psi(2, 7).unwrap(), 1.0 / 6.0, epsilon = 1e-15);
        assert!(psi(0, 7).is_err());
        assert!(psi(8, 7).is_err());
        assert!(psi(1, 1).is_err());
    }

    #[test]
    fn psi_scaled_examples() {
        assert_eq!(psi_scaled(7, 7, 2.5).unwrap(), 2.5);
        assert_eq!(psi_scaled(4, 7, 90.0).unwrap(), 45.0);
        assert_abs_diff_eq!(psi_scaled(3, 7, 2.5).unwrap(), 0.8333, epsilon = 1e-4);
        assert!(psi_scaled(3, 7, f64::NAN).is_err());
    }

    #[test]
    fn psi_range_size_ladder() {
        let s = psi_range(7, 1.25, 5.0, Some(2.5)).unwrap();
        let want = [1.25, 1.667, 2.083, 2.5, 3.333, 4.167, 5.0];
        for (a, b) in s.values.iter().zip(want) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-3);
        }
    }

    #[test]
    fn psi_range_default_baseline() {
        let s = psi_range(7, 2.5, 7.5, None).unwrap();
        let want = [2.5, 3.333, 4.167, 5.0, 5.833, 6.667, 7.5];
        for (a, b) in s.values.iter().zip(want) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-3);
        }
        let beta = psi_range(7, 1.5, 1.8, None).unwrap();
        let want = [1.5, 1.55, 1.6, 1.65, 1.7, 1.75, 1.8];
        for (a, b) in beta.values.iter().zip(want) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn psi_range_rejects_bad_order() {
        assert!(psi_range(7, 5.0, 1.0, None).is_err());
        assert!(psi_range(7, 1.0, 5.0, Some(6.0)).is_err());
        assert!(psi_range(5, 1.0, 5.0, None).is_err());
    }

    #[test]
    fn phi_series_examples() {
        let s = phi_series(1.0, 0.0).unwrap();
        let want = [0.0, 9.594, 19.471, 30.0, 41.810, 56.443, 90.0];
        for (a, b) in s.values.iter().zip(want) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-3);
        }
        let shifted = phi_series(1.0, 90.0).unwrap();
        assert_abs_diff_eq!(shifted.values[0], 90.0, epsilon = 1e-12);
        assert_abs_diff_eq!(shifted.values[1], 99.594, epsilon = 1e-3);
        assert_abs_diff_eq!(shifted.values[6], 180.0, epsilon = 1e-12);
        assert!(phi_series(0.0, 45.0).unwrap().values.iter().all(|v| *v == 45.0));
        assert!(matches!(phi_series(90.0 / 40.0, 90.0), Err(Error::Domain(_))));
    }

    #[test]
    fn delta_phi_examples() {
        assert_eq!(delta_phi(0.0, 90.0), 90.0);
        assert_eq!(delta_phi(170.0, 0.0), 10.0);
        assert_eq!(delta_phi(33.0, 33.0), 0.0);
    }

    #[test]
    fn pattern_angle_examples() {
        assert_eq!(pattern_angle(10.0, 2, 3).0, 50.0);
        assert_eq!(pattern_angle(0.0, 7, 4).0, 0.0);
        assert_eq!(pattern_angle(90.0, 1, 1).0, 0.0);
    }

    /// Brute force: a bar at angle `t` and one at `t + 180` cover the same
    /// set of points, so their sampled endpoint sets coincide.
    #[test]
    fn pattern_angle_wrap_is_orientation_equivalent() {
        let endpoints = |deg: f64| {
            let (s, c) = deg.to_radians().sin_cos();
            let mut e = [(c, s), (-c, -s)];
            e.sort_by(|a, b| a.partial_cmp(b).unwrap());
            e
        };
        let a = endpoints(180.0);
        let b = endpoints(pattern_angle(90.0, 1, 1).0);
        for (p, q) in a.iter().zip(b.iter()) {
            assert!((p.0 - q.0).abs() < 1e-12 && (p.1 - q.1).abs() < 1e-12);
        }
    }

    fn grey_red() -> (Hsl, Hsl) {
        (Hsl::new(0.0, 0.0, 0.5), Hsl::new(0.0, 1.0, 0.75))
    }

    #[test]
    fn color_geometry_matches_published_pairs() {
        let (bg, tg) = grey_red();
        let theta_pub = [0.0, 9.0, 18.0, 35.0, 44.0, 53.0];
        let ds_pub = [0.0, 0.121, 0.246, 0.528, 0.728, 1.0];
        for (i, x) in [1usize, 2, 3, 5, 6, 7].into_iter().enumerate() {
            let g = color_geometry(bg, tg, x).unwrap();
            assert!((g.theta - theta_pub[i]).abs() <= 1.0, "theta x={x}: {}", g.theta);
            assert!(
                (g.delta_s_dt - ds_pub[i]).abs() <= 0.01,
                "dS x={x}: {}",
                g.delta_s_dt
            );
            assert_abs_diff_eq!(g.alpha + g.beta + g.theta, 90.0, epsilon = 1e-9);
        }
        let mid = color_geometry(bg, tg, 4).unwrap();
        assert_abs_diff_eq!(mid.theta, 26.5, epsilon = 1e-12);
    }

    /// Independent tabulation of the two candidate readings of the saturation
    /// difference; only the `tan(alpha) * tan(theta)` reading fits.
    #[test]
    fn saturation_difference_reading_oracle() {
        let ds_pub = [0.0, 0.121, 0.246, 0.528, 0.728, 1.0];
        let xs = [1usize, 2, 3, 5, 6, 7];
        let alpha = 37f64.to_radians();
        let fits = |f: &dyn Fn(f64) -> f64| {
            xs.iter().zip(ds_pub).all(|(&x, p)| {
                let theta = (90f64.to_radians() - alpha) * (x - 1) as f64 / 6.0;
                (f(theta) - p).abs() <= 0.01
            })
        };
        let tangent_product = |theta: f64| alpha.tan() * theta.tan();
        let literal = |theta: f64| {
            let beta = 90f64.to_radians() - theta - alpha;
            (1.0 - alpha.tan() * beta.tan()).abs()
        };
        assert!(fits(&tangent_product));
        assert!(!fits(&literal));
        // and the implementation follows the fitting reading
        let (bg, tg) = grey_red();
        for &x in &xs {
            let theta = (90f64.to_radians() - alpha) * (x - 1) as f64 / 6.0;
            let g = color_geometry(bg, tg, x).unwrap();
            assert_abs_diff_eq!(g.delta_s_dt, tangent_product(theta), epsilon = 1e-12);
        }
    }

    #[test]
    fn color_geometry_zero_contrast_and_errors() {
        let (bg, tg) = grey_red();
        let g = color_geometry(bg, tg, 1).unwrap();
        assert_eq!(g.theta, 0.0);
        assert_eq!(g.delta_s_dt, 0.0);
        assert_eq!(g.s_d, tg.s);
        assert_eq!(g.distractor(), tg);
        assert!(matches!(color_geometry(tg, tg, 3), Err(Error::Degenerate(_))));
        // saturated background of the same hue gives the same ladder
        let sat_bg = Hsl::new(0.0, 1.0, 0.5);
        for x in 1..=7 {
            let a = color_geometry(bg, tg, x).unwrap();
            let b = color_geometry(sat_bg, tg, x).unwrap();
            assert_abs_diff_eq!(a.s_d, b.s_d, epsilon = 1e-12);
            assert!((0.0..=1.0).contains(&b.s_d));
        }
    }

    #[test]
    fn lightness_caption_pairs() {
        let light = lightness_contrast(1.0, 0.5, 2.0 / 3.0);
        assert_abs_diff_eq!(light.delta_l_dt, 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(light.l_d, 2.0 / 3.0, epsilon = 1e-15);
        let dark = lightness_contrast(0.0, 0.5, 1.0 / 3.0);
        assert_abs_diff_eq!(dark.delta_l_dt, 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(dark.l_d, 1.0 / 6.0, epsilon = 1e-15);
        let none = lightness_contrast(1.0, 0.5, 0.0);
        assert_eq!(none.delta_l_dt, 0.0);
        assert_eq!(none.l_d, 1.0);
    }

    proptest! {
        #[test]
        fn psi_is_symmetric(n in 2usize..40, x in 1usize..40) {
            prop_assume!(x <= n);
            let s = psi(x, n).unwrap() + psi(n + 1 - x, n).unwrap();
            prop_assert!((s - 1.0).abs() < 1e-12);
        }

        #[test]
        fn delta_phi_symmetric_and_bounded(a in -720.0f64..720.0, b in -720.0f64..720.0) {
            let d = delta_phi(a, b);
            prop_assert!((d - delta_phi(b, a)).abs() < 1e-9);
            prop_assert!((0.0..=90.0).contains(&d));
        }

        #[test]
        fn psi_range_anchors_exact(min in -10.0f64..10.0, w1 in 0.0f64..10.0, w2 in 0.0f64..10.0) {
            let base = min + w1;
            let max = base + w2;
            let s = psi_range(7, min, max, Some(base)).unwrap();
            prop_assert_eq!(s.values[0], min);
            prop_assert_eq!(s.values[3], base);
            prop_assert_eq!(s.values[6], max);
            prop_assert!(s.values.windows(2).all(|w| w[0] <= w[1]));
        }

        #[test]
        fn color_angles_sum_to_right_angle(x in 1usize..=7, s_b in 0.0f64..0.9, l_b in 0.0f64..1.0) {
            let g = color_geometry(Hsl::new(0.0, s_b, l_b), Hsl::new(0.0, 1.0, 0.75), x).unwrap();
            prop_assert!((g.alpha + g.beta + g.theta - 90.0).abs() < 1e-9);
            prop_assert!((0.0..=1.0).contains(&g.s_d));
        }
    }
}
