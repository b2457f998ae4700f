//! Layout builders, one per stimulus family.
//!
//! Each builder draws every random quantity from the generator it is handed,
//! so a layout is a pure function of its [`StimulusSpec`]. The area of
//! interest is filled in afterwards by [`super::aoi_for`].

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;
use rand::seq::SliceRandom;
use rand::Rng;

use super::place::{grid_centers, Scatter};
use super::{
    AoiRegion, Background, Boundary, Family, Item, Role, SceneLayout, Shape, StimulusSpec, Subtype,
    ITEM_SIZE_DEG,
};
use crate::color::Hsl;
use crate::geometry::{Point, Viewport, CELL_DEG, GRID_COLS, GRID_ROWS};
use crate::psychometric::{
    canonical_orientation, color_geometry, delta_phi, lightness_contrast, pattern_angle, phi_series,
    psi, psi_range, psi_scaled, LEVELS,
};
use crate::rng::{derive_seed, rng_from_seed, ChaCha8Rng};
use crate::{Error, Result};

/// Corner angles from flat edge to sharpest wedge.
pub const CORNER_ANGLES_DEG: [f64; 7] = [180.0, 135.0, 105.0, 75.0, 45.0, 30.0, 15.0];
/// Chain lengths for contour integration.
pub const CONTOUR_LENGTHS: [usize; 6] = [3, 5, 7, 8, 9, 10];
/// Items in the scattered single-target displays (families 9 to 12).
pub const SCATTER_COUNT: usize = 34;
/// Distractors around the compact group in perceptual grouping.
pub const GROUPING_DISTRACTORS: usize = 36;
pub const ROUGHNESS_TARGET_DEG: f64 = 0.78;
pub const LIGHT_SLANT_DEG: f64 = 60.0;
pub const LIGHT_TILT_DEG: f64 = 90.0;
pub const HETEROGENEITY_BASE_DEG: f64 = 75.0;

const RED: Hsl = Hsl::new(0.0, 1.0, 0.5);
const GREEN: Hsl = Hsl::new(120.0, 1.0, 0.5);
const PLACEMENT_RETRIES: u64 = 16;

/// Build the layout for a validated spec. A placement dead end is retried
/// with a seed derived from the spec seed.
pub(crate) fn build(spec: &StimulusSpec) -> Result<SceneLayout> {
    let mut last = None;
    for attempt in 0..PLACEMENT_RETRIES {
        let seed = if attempt == 0 {
            spec.seed
        } else {
            derive_seed(spec.seed, &[attempt])
        };
        let mut rng = rng_from_seed(seed);
        match build_with(spec, &mut rng) {
            Err(e @ Error::Placement(_)) => last = Some(e),
            other => return other,
        }
    }
    Err(last.unwrap_or_else(|| Error::Placement("exhausted retries".into())))
}

fn build_with(spec: &StimulusSpec, rng: &mut ChaCha8Rng) -> Result<SceneLayout> {
    let x = spec.contrast_index;
    match spec.family {
        Family::CornerAngle => corner(spec, rng),
        Family::SegmentationAngle => {
            segmentation_angle(spec, rng, spec.subtype == Subtype::Superimposed)
        }
        Family::SegmentationSpacing => segmentation_spacing(spec, rng),
        Family::ContourIntegration => contour(spec, rng),
        Family::PerceptualGrouping => grouping(spec, rng, spec.subtype == Subtype::Similar),
        Family::FeatureConjunction => feature_conjunction(spec, rng),
        Family::SearchAsymmetry => asymmetry(spec, rng, spec.subtype == Subtype::BarPresent),
        Family::Roughness => roughness(spec, rng),
        Family::ColorContrast => color(spec, rng),
        Family::BrightnessContrast => brightness(spec, rng),
        Family::SizeContrast => size(spec, rng),
        Family::OrientationContrast => orientation(spec, rng),
        Family::Heterogeneity => heterogeneity(spec, rng, x),
        Family::Linearity => linearity(spec, rng),
        Family::Categorization => categorization(spec, rng),
    }
}

fn base(spec: &StimulusSpec, ct: f64, unit: &str) -> SceneLayout {
    SceneLayout {
        spec: *spec,
        viewport: Viewport::default(),
        background: Background::Solid { color: Hsl::WHITE },
        items: Vec::new(),
        target_index: None,
        boundary: None,
        aoi: AoiRegion::Empty,
        ct,
        ct_unit: unit.to_string(),
        allow_overlap: false,
        notes: Vec::new(),
    }
}

fn note(layout: &mut SceneLayout, s: &str) {
    layout.notes.push(String::from(s));
}

fn black_bar(center: Point, orientation: f64) -> Item {
    Item::bar(center, orientation, ITEM_SIZE_DEG, Hsl::BLACK)
}

/// Place the target first, then `distractors`, all by scatter sampling.
fn scatter_display(
    layout: &mut SceneLayout,
    rng: &mut ChaCha8Rng,
    target: Option<Item>,
    distractors: Vec<Item>,
) -> Result<()> {
    let mut scatter = Scatter::new(layout.viewport);
    if let Some(mut t) = target {
        t.center = scatter.place(rng, t.bounding_radius(), |_| true)?;
        t.role = Role::Target;
        layout.target_index = Some(layout.items.len());
        layout.items.push(t);
    }
    for mut d in distractors {
        d.center = scatter.place(rng, d.bounding_radius(), |_| true)?;
        layout.items.push(d);
    }
    Ok(())
}

/// Fill a grid, putting the target at a random cell. `distractor(r, c, p)`
/// yields the item for every other cell.
fn grid_display(
    layout: &mut SceneLayout,
    rng: &mut ChaCha8Rng,
    rows: usize,
    cols: usize,
    target: impl FnOnce(usize, usize, Point) -> Item,
    mut distractor: impl FnMut(usize, usize, Point) -> Item,
) {
    let cells = grid_centers(&layout.viewport, rows, cols);
    let t = rng.random_range(0..cells.len());
    let mut target = Some(target);
    for (i, &(r, c, p)) in cells.iter().enumerate() {
        if i == t {
            let make = target.take().expect("single target cell");
            layout.target_index = Some(layout.items.len());
            layout.items.push(make(r, c, p).with_role(Role::Target));
        } else {
            layout.items.push(distractor(r, c, p));
        }
    }
}

pub fn corner(spec: &StimulusSpec, rng: &mut ChaCha8Rng) -> Result<SceneLayout> {
    let angle = CORNER_ANGLES_DEG[spec.contrast_index - 1];
    let mut layout = base(spec, 180.0 - angle, "deg (180 - corner angle)");
    let field = layout.viewport.field();
    let vx = rng.random_range(0.25 * field.width()..=0.75 * field.width());
    let vertex = Point::new(vx, 0.5 * field.height());
    layout.items.push(Item {
        shape: Shape::CornerGradient,
        center: vertex,
        orientation: angle,
        size: ITEM_SIZE_DEG,
        thickness: 0.0,
        color: Hsl::BLACK,
        role: Role::Target,
    });
    layout.target_index = Some(0);
    Ok(layout)
}

pub fn segmentation_angle(
    spec: &StimulusSpec,
    rng: &mut ChaCha8Rng,
    superimposed: bool,
) -> Result<SceneLayout> {
    let phi = phi_series(1.0, 0.0)?.at(spec.contrast_index)?;
    let right = 90.0;
    let mut layout = base(spec, delta_phi(phi, right), "deg");
    let (rows, cols, len, b_range) = if superimposed {
        (2 * GRID_ROWS, 2 * GRID_COLS, 0.5 * ITEM_SIZE_DEG, 6..=20)
    } else {
        (GRID_ROWS, GRID_COLS, ITEM_SIZE_DEG, 3..=10)
    };
    let pitch = layout.viewport.field_width_deg / cols as f64;
    let b = rng.random_range(b_range);
    for (_, c, p) in grid_centers(&layout.viewport, rows, cols) {
        let o = if c < b { phi } else { right };
        layout.items.push(Item::bar(p, o, len, Hsl::BLACK));
        if superimposed {
            layout.items.push(Item::bar(p, o + 45.0, len, Hsl::BLACK));
        }
    }
    layout.boundary = Some(Boundary {
        x: b as f64 * pitch,
        cell_width: pitch,
    });
    layout.allow_overlap = superimposed;
    if superimposed {
        note(&mut layout, "superimposed: each cell holds a bar and a copy rotated by +45 deg, counted as one element");
    }
    Ok(layout)
}

/// Horizontal extent of a 45 deg bar for a given boundary spacing: 3.6 deg at
/// zero spacing, 1.0 deg at 2.5 deg spacing.
pub fn spacing_bar_extent(spacing: f64) -> f64 {
    3.6 - 1.04 * spacing
}

pub fn segmentation_spacing(spec: &StimulusSpec, rng: &mut ChaCha8Rng) -> Result<SceneLayout> {
    let s = psi_scaled(spec.contrast_index, LEVELS, CELL_DEG)?;
    let mut layout = base(spec, s, "deg");
    let extent = spacing_bar_extent(s);
    let length = extent * core::f64::consts::SQRT_2;
    // Shift both halves apart so the facing bar ends are exactly `s` apart.
    let shift = 0.5 * (s + extent - CELL_DEG);
    let b = rng.random_range(3..=10usize);
    for (_, c, p) in grid_centers(&layout.viewport, GRID_ROWS, GRID_COLS) {
        let (o, dx) = if c < b { (45.0, -shift) } else { (135.0, shift) };
        let mut bar = Item::bar(Point::new(p.x + dx, p.y), o, length, Hsl::BLACK);
        bar.thickness = ITEM_SIZE_DEG / super::BAR_ASPECT;
        layout.items.push(bar);
    }
    layout.boundary = Some(Boundary {
        x: b as f64 * CELL_DEG,
        cell_width: CELL_DEG,
    });
    layout.allow_overlap = true;
    note(
        &mut layout,
        "spacing: horizontal bar extent falls linearly from 3.6 deg (spacing 0) to 1.0 deg (spacing 2.5)",
    );
    Ok(layout)
}

pub fn contour(spec: &StimulusSpec, rng: &mut ChaCha8Rng) -> Result<SceneLayout> {
    let n = CONTOUR_LENGTHS[spec.contrast_index - 1];
    let mut layout = base(spec, n as f64, "bars");
    let horizontal = rng.random_bool(0.5);
    let (fixed, start) = if horizontal {
        (rng.random_range(0..GRID_ROWS), rng.random_range(0..=GRID_COLS - n))
    } else {
        (rng.random_range(0..GRID_COLS), rng.random_range(0..=GRID_ROWS - n))
    };
    let on_chain = |r: usize, c: usize| {
        if horizontal {
            r == fixed && (start..start + n).contains(&c)
        } else {
            c == fixed && (start..start + n).contains(&r)
        }
    };
    for (r, c, p) in grid_centers(&layout.viewport, GRID_ROWS, GRID_COLS) {
        if on_chain(r, c) {
            let o = if horizontal { 0.0 } else { 90.0 };
            layout.items.push(black_bar(p, o).with_role(Role::Contour));
        } else {
            let o = rng.random_range(0.0..180.0);
            layout.items.push(black_bar(p, o));
        }
    }
    Ok(layout)
}

/// Offset of each group square from the group centroid.
pub const GROUP_HALF_PITCH_DEG: f64 = 1.0;

pub fn grouping(spec: &StimulusSpec, rng: &mut ChaCha8Rng, similar: bool) -> Result<SceneLayout> {
    let d = psi_range(LEVELS, 2.5, 7.5, None)?.at(spec.contrast_index)?;
    let mut layout = base(spec, d, "deg");
    let square = |p| Item {
        shape: Shape::Square,
        center: p,
        orientation: 0.0,
        size: ITEM_SIZE_DEG,
        thickness: 0.0,
        color: Hsl::BLACK,
        role: Role::Distractor,
    };
    let reach = GROUP_HALF_PITCH_DEG + square(Point::default()).bounding_radius();
    let area = layout.viewport.placement_area(reach);
    let g = Point::new(
        rng.random_range(area.min.x..area.max.x),
        rng.random_range(area.min.y..area.max.y),
    );
    let mut scatter = Scatter::new(layout.viewport);
    for (sx, sy) in [(-1.0, -1.0), (1.0, -1.0), (-1.0, 1.0), (1.0, 1.0)] {
        let it = square(Point::new(
            g.x + sx * GROUP_HALF_PITCH_DEG,
            g.y + sy * GROUP_HALF_PITCH_DEG,
        ))
        .with_role(Role::Group);
        scatter.reserve(it.center, it.bounding_radius());
        layout.items.push(it);
    }
    for _ in 0..GROUPING_DISTRACTORS {
        let mut it = square(Point::default());
        if !similar {
            it.shape = Shape::Triangle;
        }
        it.center = scatter.place(rng, it.bounding_radius(), |p| p.distance(g) >= d)?;
        layout.items.push(it);
    }
    Ok(layout)
}

/// Distractor counts for the feature and conjunctive search ladder.
pub fn set_sizes() -> Result<Vec<usize>> {
    Ok(psi_range(LEVELS, 2.0, 34.0, Some(18.0))?
        .values
        .iter()
        .map(|v| v.round() as usize)
        .collect())
}

pub fn feature_conjunction(spec: &StimulusSpec, rng: &mut ChaCha8Rng) -> Result<SceneLayout> {
    let n = set_sizes()?[spec.contrast_index - 1];
    let mut layout = base(spec, n as f64, "distractors");
    let conjunctive = matches!(spec.subtype, Subtype::Conjunctive | Subtype::ConjunctiveAbsent);
    let green = if conjunctive { n.div_ceil(2) } else { n };
    let mut distractors: Vec<Item> = (0..n)
        .map(|i| {
            if i < green {
                Item::bar(Point::default(), 45.0, ITEM_SIZE_DEG, GREEN)
            } else {
                Item::bar(Point::default(), 135.0, ITEM_SIZE_DEG, RED)
            }
        })
        .collect();
    distractors.shuffle(rng);
    let target = spec
        .subtype
        .target_present()
        .then(|| Item::bar(Point::default(), 45.0, ITEM_SIZE_DEG, RED));
    scatter_display(&mut layout, rng, target, distractors)?;
    Ok(layout)
}

/// Grid shape of the search asymmetry display at element scale `s`.
pub fn asymmetry_grid(s: f64) -> (usize, usize) {
    // The nudge keeps exact halves such as 19.5 from rounding down.
    let rows = (crate::geometry::FIELD_HEIGHT_DEG / s + 1e-9).round() as usize;
    let cols = (crate::geometry::FIELD_WIDTH_DEG / s + 1e-9).round() as usize;
    (rows.max(1), cols.max(1))
}

pub fn asymmetry(spec: &StimulusSpec, rng: &mut ChaCha8Rng, target_has_bar: bool) -> Result<SceneLayout> {
    let s = psi_range(LEVELS, 1.25, 5.0, Some(2.5))?.at(spec.contrast_index)?;
    let mut layout = base(spec, s, "deg (element scale)");
    let (rows, cols) = asymmetry_grid(s);
    let diameter = 0.6 * s;
    let (t_shape, d_shape) = if target_has_bar {
        (Shape::CrossedCircle, Shape::Ring)
    } else {
        (Shape::Ring, Shape::CrossedCircle)
    };
    grid_display(
        &mut layout,
        rng,
        rows,
        cols,
        |_, _, p| Item::round(t_shape, p, diameter, Hsl::BLACK),
        |_, _, p| Item::round(d_shape, p, diameter, Hsl::BLACK),
    );
    note(&mut layout, "grid pitch stretched so rows x cols fill the field exactly");
    Ok(layout)
}

pub fn roughness(spec: &StimulusSpec, rng: &mut ChaCha8Rng) -> Result<SceneLayout> {
    let beta = psi_range(LEVELS, 1.5, 1.8, None)?.at(spec.contrast_index)?;
    let sigma_rms = if spec.subtype == Subtype::HighDeviation { 1.1 } else { 0.9 };
    let mut layout = base(spec, beta, "spectral exponent");
    layout.background = Background::Surface {
        beta,
        sigma_rms,
        seed: derive_seed(spec.seed, &[0x5eed]),
        slant_deg: LIGHT_SLANT_DEG,
        tilt_deg: LIGHT_TILT_DEG,
    };
    let target = Item::round(
        Shape::GradientDisc,
        Point::default(),
        ROUGHNESS_TARGET_DEG,
        Hsl::gray(0.5),
    );
    scatter_display(&mut layout, rng, Some(target), Vec::new())?;
    Ok(layout)
}

fn circles(n: usize, diameter: f64, color: Hsl) -> Vec<Item> {
    vec![Item::round(Shape::Circle, Point::default(), diameter, color); n]
}

pub fn color(spec: &StimulusSpec, rng: &mut ChaCha8Rng) -> Result<SceneLayout> {
    let (hue, saturated_bg) = match spec.subtype {
        Subtype::RedGrey => (0.0, false),
        Subtype::RedSaturated => (0.0, true),
        Subtype::BlueGrey => (240.0, false),
        _ => (240.0, true),
    };
    let bg = if saturated_bg {
        Hsl::new(hue, 1.0, 0.5)
    } else {
        Hsl::new(hue, 0.0, 0.5)
    };
    let target = Hsl::new(hue, 1.0, 0.75);
    let geo = color_geometry(bg, target, spec.contrast_index)?;
    let mut layout = base(spec, geo.delta_s_dt, "saturation");
    layout.background = Background::Solid { color: bg };
    let t = Item::round(Shape::Circle, Point::default(), ITEM_SIZE_DEG, target);
    let ds = circles(SCATTER_COUNT - 1, ITEM_SIZE_DEG, geo.distractor());
    scatter_display(&mut layout, rng, Some(t), ds)?;
    if spec.contrast_index == 4 {
        note(&mut layout, "theta midpoint generated; the published ladder lists six angles");
    }
    Ok(layout)
}

pub fn brightness(spec: &StimulusSpec, rng: &mut ChaCha8Rng) -> Result<SceneLayout> {
    let l_b = if spec.subtype == Subtype::LightBackground { 1.0 } else { 0.0 };
    let l_t = 0.5;
    // Index 1 is the no-contrast end, so the fraction runs backwards here.
    let lc = lightness_contrast(l_b, l_t, 1.0 - psi(spec.contrast_index, LEVELS)?);
    let mut layout = base(spec, (lc.l_d - l_t).abs(), "lightness");
    layout.background = Background::Solid { color: Hsl::gray(l_b) };
    let t = Item::round(Shape::Circle, Point::default(), ITEM_SIZE_DEG, Hsl::gray(l_t));
    let ds = circles(SCATTER_COUNT - 1, ITEM_SIZE_DEG, Hsl::gray(lc.l_d));
    scatter_display(&mut layout, rng, Some(t), ds)?;
    Ok(layout)
}

pub const SIZE_DISTRACTOR_DEG: f64 = 2.5;

pub fn size(spec: &StimulusSpec, rng: &mut ChaCha8Rng) -> Result<SceneLayout> {
    let d = psi_range(LEVELS, 1.25, 5.0, Some(SIZE_DISTRACTOR_DEG))?.at(spec.contrast_index)?;
    let mut layout = base(spec, d / SIZE_DISTRACTOR_DEG, "diameter ratio");
    let t = Item::round(Shape::Circle, Point::default(), d, Hsl::BLACK);
    let ds = circles(SCATTER_COUNT - 1, SIZE_DISTRACTOR_DEG, Hsl::BLACK);
    scatter_display(&mut layout, rng, Some(t), ds)?;
    Ok(layout)
}

pub fn orientation(spec: &StimulusSpec, rng: &mut ChaCha8Rng) -> Result<SceneLayout> {
    let phi = phi_series(1.0, 0.0)?.at(spec.contrast_index)?;
    let mut layout = base(spec, delta_phi(phi, 0.0), "deg");
    let t = black_bar(Point::default(), phi);
    let ds = vec![black_bar(Point::default(), 0.0); SCATTER_COUNT - 1];
    scatter_display(&mut layout, rng, Some(t), ds)?;
    Ok(layout)
}

/// The two distractor orientations of a heterogeneity condition.
pub fn heterogeneity_sets(subtype: Subtype) -> [f64; 2] {
    let b = HETEROGENEITY_BASE_DEG;
    match subtype {
        Subtype::TiltedRight => [b + 15.0, b + 30.0],
        Subtype::Flanking => [b + 15.0, b - 30.0],
        _ => [b, b],
    }
}

/// Fill `rows * cols - 1` distractor slots alternating between two
/// orientations, in random order.
fn interleaved(rng: &mut ChaCha8Rng, sets: [f64; 2], count: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..count).map(|i| sets[i % 2]).collect();
    v.shuffle(rng);
    v
}

pub fn heterogeneity(spec: &StimulusSpec, rng: &mut ChaCha8Rng, x: usize) -> Result<SceneLayout> {
    let sets = heterogeneity_sets(spec.subtype);
    let target = canonical_orientation(phi_series(1.0, 90.0)?.at(x)?);
    let ct = delta_phi(target, sets[0]).min(delta_phi(target, sets[1]));
    let mut layout = base(spec, ct, "deg");
    let mut orients = interleaved(rng, sets, GRID_ROWS * GRID_COLS - 1).into_iter();
    grid_display(
        &mut layout,
        rng,
        GRID_ROWS,
        GRID_COLS,
        |_, _, p| black_bar(p, target),
        |_, _, p| black_bar(p, orients.next().unwrap_or(sets[0])),
    );
    note(&mut layout, "distractor sets are base +/- tilt; target ladder starts at 90 deg");
    Ok(layout)
}

pub fn linearity_slope(subtype: Subtype) -> f64 {
    match subtype {
        Subtype::Slope10 => 10.0,
        Subtype::Slope20 => 20.0,
        Subtype::Slope90 => 90.0,
        _ => 0.0,
    }
}

pub fn linearity(spec: &StimulusSpec, rng: &mut ChaCha8Rng) -> Result<SceneLayout> {
    let u = linearity_slope(spec.subtype);
    let phi = phi_series(1.0, 0.0)?.at(spec.contrast_index)?;
    let mut layout = base(spec, delta_phi(phi, 0.0), "deg");
    grid_display(
        &mut layout,
        rng,
        GRID_ROWS,
        GRID_COLS,
        |r, c, p| black_bar(p, pattern_angle(u, r, c).0 + phi),
        |r, c, p| black_bar(p, pattern_angle(u, r, c).0),
    );
    Ok(layout)
}

pub fn categorization_pair(subtype: Subtype) -> [f64; 2] {
    match subtype {
        Subtype::Steepest => [canonical_orientation(-30.0), 70.0],
        Subtype::SteepRight => [20.0, 80.0],
        _ => [canonical_orientation(-50.0), 50.0],
    }
}

/// Target offsets from vertical: the unit arcsine ladder rescaled to 40 deg.
pub fn categorization_offsets() -> Result<Vec<f64>> {
    Ok(phi_series(1.0, 0.0)?
        .values
        .iter()
        .map(|v| v * 40.0 / 90.0)
        .collect())
}

pub fn categorization(spec: &StimulusSpec, rng: &mut ChaCha8Rng) -> Result<SceneLayout> {
    let sets = categorization_pair(spec.subtype);
    let c = categorization_offsets()?[spec.contrast_index - 1];
    let target = 90.0 + c;
    let mut layout = base(spec, c, "deg from vertical");
    let mut orients = interleaved(rng, sets, GRID_ROWS * GRID_COLS - 1).into_iter();
    grid_display(
        &mut layout,
        rng,
        GRID_ROWS,
        GRID_COLS,
        |_, _, p| black_bar(p, target),
        |_, _, p| black_bar(p, orients.next().unwrap_or(sets[0])),
    );
    note(&mut layout, "target offset is the unit arcsine ladder scaled to a 40 deg maximum");
    Ok(layout)
}
