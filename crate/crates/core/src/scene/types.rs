use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::AoiRegion;
use crate::color::Hsl;
use crate::geometry::{Point, Rect, Viewport};
use crate::rng::derive_seed;
use crate::{Error, Result};

/// Width of a bar relative to its length.
pub const BAR_ASPECT: f64 = 5.0;
/// Default item size in degrees.
pub const ITEM_SIZE_DEG: f64 = 1.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    FreeViewing,
    VisualSearch,
}

impl Task {
    pub fn as_str(self) -> &'static str {
        match self {
            Task::FreeViewing => "free-viewing",
            Task::VisualSearch => "visual-search",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
#[repr(u8)]
pub enum Family {
    CornerAngle = 1,
    SegmentationAngle = 2,
    SegmentationSpacing = 3,
    ContourIntegration = 4,
    PerceptualGrouping = 5,
    FeatureConjunction = 6,
    SearchAsymmetry = 7,
    Roughness = 8,
    ColorContrast = 9,
    BrightnessContrast = 10,
    SizeContrast = 11,
    OrientationContrast = 12,
    Heterogeneity = 13,
    Linearity = 14,
    Categorization = 15,
}

impl Family {
    pub const ALL: [Family; 15] = [
        Family::CornerAngle,
        Family::SegmentationAngle,
        Family::SegmentationSpacing,
        Family::ContourIntegration,
        Family::PerceptualGrouping,
        Family::FeatureConjunction,
        Family::SearchAsymmetry,
        Family::Roughness,
        Family::ColorContrast,
        Family::BrightnessContrast,
        Family::SizeContrast,
        Family::OrientationContrast,
        Family::Heterogeneity,
        Family::Linearity,
        Family::Categorization,
    ];

    pub fn number(self) -> u8 {
        self as u8
    }

    pub fn from_number(n: u8) -> Result<Family> {
        Family::ALL
            .get((n as usize).wrapping_sub(1))
            .copied()
            .ok_or_else(|| Error::arg(format!("family {n} outside 1..=15")))
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::CornerAngle => "corner-angle",
            Family::SegmentationAngle => "segmentation-angle",
            Family::SegmentationSpacing => "segmentation-spacing",
            Family::ContourIntegration => "contour-integration",
            Family::PerceptualGrouping => "perceptual-grouping",
            Family::FeatureConjunction => "feature-conjunctive-search",
            Family::SearchAsymmetry => "search-asymmetry",
            Family::Roughness => "noise-roughness",
            Family::ColorContrast => "color-contrast",
            Family::BrightnessContrast => "brightness-contrast",
            Family::SizeContrast => "size-contrast",
            Family::OrientationContrast => "orientation-contrast",
            Family::Heterogeneity => "distractor-heterogeneity",
            Family::Linearity => "distractor-linearity",
            Family::Categorization => "distractor-categorization",
        }
    }

    pub fn task(self) -> Task {
        if self.number() <= 5 {
            Task::FreeViewing
        } else {
            Task::VisualSearch
        }
    }

    /// Number of contrast levels. Contour integration has six chain lengths.
    pub fn levels(self) -> usize {
        match self {
            Family::ContourIntegration => 6,
            _ => 7,
        }
    }

    pub fn subtypes(self) -> &'static [Subtype] {
        use Subtype::*;
        match self {
            Family::CornerAngle
            | Family::SegmentationSpacing
            | Family::ContourIntegration
            | Family::SizeContrast
            | Family::OrientationContrast => &[Plain],
            Family::SegmentationAngle => &[Single, Superimposed],
            Family::PerceptualGrouping => &[Similar, Dissimilar],
            Family::FeatureConjunction => &[Feature, Conjunctive, FeatureAbsent, ConjunctiveAbsent],
            Family::SearchAsymmetry => &[BarPresent, BarAbsent],
            Family::Roughness => &[HighDeviation, LowDeviation],
            Family::ColorContrast => &[RedGrey, RedSaturated, BlueGrey, BlueSaturated],
            Family::BrightnessContrast => &[LightBackground, DarkBackground],
            Family::Heterogeneity => &[Homogeneous, TiltedRight, Flanking],
            Family::Linearity => &[Linear, Slope10, Slope20, Slope90],
            Family::Categorization => &[Steep, Steepest, SteepRight],
        }
    }
}

impl From<Family> for u8 {
    fn from(f: Family) -> u8 {
        f.number()
    }
}

impl TryFrom<u8> for Family {
    type Error = Error;
    fn try_from(n: u8) -> Result<Family> {
        Family::from_number(n)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:02}-{}", self.number(), self.name())
    }
}

/// Stimulus condition within a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Subtype {
    Plain,
    Single,
    Superimposed,
    Similar,
    Dissimilar,
    Feature,
    Conjunctive,
    FeatureAbsent,
    ConjunctiveAbsent,
    BarPresent,
    BarAbsent,
    /// sigma_rms = 1.1
    HighDeviation,
    /// sigma_rms = 0.9
    LowDeviation,
    RedGrey,
    RedSaturated,
    BlueGrey,
    BlueSaturated,
    LightBackground,
    DarkBackground,
    Homogeneous,
    TiltedRight,
    Flanking,
    Linear,
    Slope10,
    Slope20,
    Slope90,
    Steep,
    Steepest,
    SteepRight,
}

impl Subtype {
    pub const ALL: [Subtype; 29] = [
        Subtype::Plain,
        Subtype::Single,
        Subtype::Superimposed,
        Subtype::Similar,
        Subtype::Dissimilar,
        Subtype::Feature,
        Subtype::Conjunctive,
        Subtype::FeatureAbsent,
        Subtype::ConjunctiveAbsent,
        Subtype::BarPresent,
        Subtype::BarAbsent,
        Subtype::HighDeviation,
        Subtype::LowDeviation,
        Subtype::RedGrey,
        Subtype::RedSaturated,
        Subtype::BlueGrey,
        Subtype::BlueSaturated,
        Subtype::LightBackground,
        Subtype::DarkBackground,
        Subtype::Homogeneous,
        Subtype::TiltedRight,
        Subtype::Flanking,
        Subtype::Linear,
        Subtype::Slope10,
        Subtype::Slope20,
        Subtype::Slope90,
        Subtype::Steep,
        Subtype::Steepest,
        Subtype::SteepRight,
    ];

    pub fn slug(self) -> &'static str {
        use Subtype::*;
        match self {
            Plain => "plain",
            Single => "single",
            Superimposed => "superimposed",
            Similar => "similar",
            Dissimilar => "dissimilar",
            Feature => "feature",
            Conjunctive => "conjunctive",
            FeatureAbsent => "feature-absent",
            ConjunctiveAbsent => "conjunctive-absent",
            BarPresent => "bar-present",
            BarAbsent => "bar-absent",
            HighDeviation => "high-deviation",
            LowDeviation => "low-deviation",
            RedGrey => "red-grey",
            RedSaturated => "red-saturated",
            BlueGrey => "blue-grey",
            BlueSaturated => "blue-saturated",
            LightBackground => "light-background",
            DarkBackground => "dark-background",
            Homogeneous => "homogeneous",
            TiltedRight => "tilted-right",
            Flanking => "flanking",
            Linear => "linear",
            Slope10 => "slope10",
            Slope20 => "slope20",
            Slope90 => "slope90",
            Steep => "steep",
            Steepest => "steepest",
            SteepRight => "steep-right",
        }
    }

    pub fn from_slug(s: &str) -> Result<Subtype> {
        Subtype::ALL
            .iter()
            .copied()
            .find(|t| t.slug() == s)
            .ok_or_else(|| Error::arg(format!("unknown subtype {s:?}")))
    }

    pub fn target_present(self) -> bool {
        !matches!(self, Subtype::FeatureAbsent | Subtype::ConjunctiveAbsent)
    }

    fn ordinal(self) -> u64 {
        Subtype::ALL.iter().position(|&t| t == self).unwrap_or(0) as u64
    }
}

impl fmt::Display for Subtype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

/// Everything needed to build one stimulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StimulusSpec {
    pub family: Family,
    pub subtype: Subtype,
    pub contrast_index: usize,
    pub seed: u64,
}

impl StimulusSpec {
    pub fn new(family: Family, subtype: Subtype, contrast_index: usize, seed: u64) -> Self {
        StimulusSpec {
            family,
            subtype,
            contrast_index,
            seed,
        }
    }

    /// Per-stimulus seed derived from a dataset-wide master seed.
    pub fn with_master_seed(family: Family, subtype: Subtype, x: usize, master: u64) -> Self {
        let seed = derive_seed(master, &[family.number() as u64, subtype.ordinal(), x as u64]);
        StimulusSpec::new(family, subtype, x, seed)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.family.subtypes().contains(&self.subtype) {
            return Err(Error::arg(format!(
                "subtype {} is not defined for family {}",
                self.subtype, self.family
            )));
        }
        if self.contrast_index < 1 || self.contrast_index > self.family.levels() {
            return Err(Error::arg(format!(
                "contrast index {} outside 1..={} for family {}",
                self.contrast_index,
                self.family.levels(),
                self.family
            )));
        }
        Ok(())
    }

    /// Stable identifier, also the image file stem.
    pub fn id(&self) -> String {
        format!(
            "{:02}_{}_{:02}_{}",
            self.family.number(),
            self.subtype.slug(),
            self.contrast_index,
            self.seed
        )
    }

    /// Inverse of [`StimulusSpec::id`].
    pub fn parse_id(id: &str) -> Result<StimulusSpec> {
        let bad = || Error::arg(format!("malformed stimulus id {id:?}"));
        let mut parts = id.split('_');
        let fam: u8 = parts.next().and_then(|p| p.parse().ok()).ok_or_else(bad)?;
        let sub = Subtype::from_slug(parts.next().ok_or_else(bad)?)?;
        let x: usize = parts.next().and_then(|p| p.parse().ok()).ok_or_else(bad)?;
        let seed: u64 = parts.next().and_then(|p| p.parse().ok()).ok_or_else(bad)?;
        if parts.next().is_some() {
            return Err(bad());
        }
        let spec = StimulusSpec::new(Family::from_number(fam)?, sub, x, seed);
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    Bar,
    /// Filled disc.
    Circle,
    /// Circle outline.
    Ring,
    /// Circle outline crossed by a vertical bar.
    CrossedCircle,
    Square,
    /// Equilateral, apex up.
    Triangle,
    /// Dark wedge with a dark-to-white ramp outside it. `center` is the
    /// vertex, `orientation` the interior angle, `size` the ramp width.
    CornerGradient,
    /// Disc shaded with a vertical bright-to-dark ramp.
    GradientDisc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Distractor,
    Target,
    /// Member of the compact group in perceptual grouping.
    Group,
    /// Member of the collinear chain in contour integration.
    Contour,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Item {
    pub shape: Shape,
    /// Degrees, field coordinates.
    pub center: Point,
    /// Degrees counter-clockwise from horizontal.
    pub orientation: f64,
    /// Length for bars, diameter for round shapes, side for polygons.
    pub size: f64,
    /// Bar width or outline stroke.
    pub thickness: f64,
    pub color: Hsl,
    pub role: Role,
}

impl Item {
    pub fn bar(center: Point, orientation: f64, length: f64, color: Hsl) -> Item {
        Item {
            shape: Shape::Bar,
            center,
            orientation: crate::psychometric::canonical_orientation(orientation),
            size: length,
            thickness: length / BAR_ASPECT,
            color,
            role: Role::Distractor,
        }
    }

    pub fn round(shape: Shape, center: Point, diameter: f64, color: Hsl) -> Item {
        Item {
            shape,
            center,
            orientation: 0.0,
            size: diameter,
            thickness: diameter / 10.0,
            color,
            role: Role::Distractor,
        }
    }

    pub fn with_role(mut self, role: Role) -> Item {
        self.role = role;
        self
    }

    /// Radius of a disc enclosing the item.
    pub fn bounding_radius(&self) -> f64 {
        match self.shape {
            Shape::Bar => 0.5 * self.size.hypot(self.thickness),
            Shape::Square => self.size / core::f64::consts::SQRT_2,
            Shape::Triangle => self.size / 3f64.sqrt(),
            _ => 0.5 * self.size,
        }
    }

    /// Axis-aligned bounding box in degrees.
    pub fn bbox(&self) -> Rect {
        let (s, c) = self.orientation.to_radians().sin_cos();
        let (s, c) = (s.abs(), c.abs());
        let (hx, hy) = match self.shape {
            Shape::Bar => (
                0.5 * (c * self.size + s * self.thickness),
                0.5 * (s * self.size + c * self.thickness),
            ),
            Shape::Square => {
                let h = 0.5 * self.size * (c + s);
                (h, h)
            }
            Shape::Triangle => {
                let r = self.bounding_radius();
                (r, r)
            }
            _ => (0.5 * self.size, 0.5 * self.size),
        };
        Rect::centered(self.center, hx, hy)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Background {
    Solid { color: Hsl },
    /// Lambert-shaded `1/f^beta` height map.
    Surface {
        beta: f64,
        sigma_rms: f64,
        seed: u64,
        slant_deg: f64,
        tilt_deg: f64,
    },
}

/// Illusory boundary between two textured segments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Boundary {
    pub x: f64,
    pub cell_width: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneLayout {
    pub spec: StimulusSpec,
    pub viewport: Viewport,
    pub background: Background,
    pub items: Vec<Item>,
    pub target_index: Option<usize>,
    pub boundary: Option<Boundary>,
    pub aoi: AoiRegion,
    /// Feature contrast value in family-specific units.
    pub ct: f64,
    pub ct_unit: String,
    /// Items may intersect (superimposed or merging textures).
    pub allow_overlap: bool,
    /// Interpretation choices made for this family.
    pub notes: Vec<String>,
}

impl SceneLayout {
    pub fn target(&self) -> Option<&Item> {
        self.target_index.and_then(|i| self.items.get(i))
    }

    /// Number of display elements. Items sharing a center form one composite
    /// element.
    pub fn element_count(&self) -> usize {
        let keys: BTreeSet<(i64, i64)> = self
            .items
            .iter()
            .map(|it| {
                (
                    (it.center.x * 1e6).round() as i64,
                    (it.center.y * 1e6).round() as i64,
                )
            })
            .collect();
        keys.len()
    }
}
