use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{Family, Role, SceneLayout};
use crate::geometry::{Point, Rect};

/// Margin added around salient items when building areas of interest.
pub const AOI_PADDING_DEG: f64 = 1.0;
/// Radius of the disc around a corner vertex.
pub const CORNER_AOI_RADIUS_DEG: f64 = 1.5;

/// Region of the field that counts as "on target", in field degrees.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AoiRegion {
    /// Target-absent stimuli.
    Empty,
    ItemBbox { rect: Rect },
    Strip { rect: Rect },
    Disc { center: Point, radius: f64 },
    Union { rects: Vec<Rect> },
}

impl AoiRegion {
    pub fn is_empty(&self) -> bool {
        match self {
            AoiRegion::Empty => true,
            AoiRegion::ItemBbox { rect } | AoiRegion::Strip { rect } => rect.is_empty(),
            AoiRegion::Disc { radius, .. } => *radius <= 0.0,
            AoiRegion::Union { rects } => rects.iter().all(Rect::is_empty),
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        match self {
            AoiRegion::Empty => false,
            AoiRegion::ItemBbox { rect } | AoiRegion::Strip { rect } => rect.contains(p),
            AoiRegion::Disc { center, radius } => p.distance(*center) <= *radius,
            AoiRegion::Union { rects } => rects.iter().any(|r| r.contains(p)),
        }
    }

    /// Enclosing rectangle, `None` for an empty region.
    pub fn bbox(&self) -> Option<Rect> {
        match self {
            AoiRegion::Empty => None,
            AoiRegion::ItemBbox { rect } | AoiRegion::Strip { rect } => Some(*rect),
            AoiRegion::Disc { center, radius } => Some(Rect::centered(*center, *radius, *radius)),
            AoiRegion::Union { rects } => rects.iter().copied().reduce(|a, b| a.union(&b)),
        }
    }
}

fn padded_union<'a>(items: impl Iterator<Item = &'a super::Item>, field: &Rect) -> Option<Rect> {
    items
        .map(|it| it.bbox())
        .reduce(|a, b| a.union(&b))
        .map(|r| r.pad(AOI_PADDING_DEG).intersect(field))
}

/// Area of interest around the salient region of a layout.
pub fn aoi_for(layout: &SceneLayout) -> AoiRegion {
    let field = layout.viewport.field();
    match layout.spec.family {
        Family::CornerAngle => match layout.items.first() {
            Some(corner) => AoiRegion::Disc {
                center: corner.center,
                radius: CORNER_AOI_RADIUS_DEG,
            },
            None => AoiRegion::Empty,
        },
        Family::SegmentationAngle | Family::SegmentationSpacing => match layout.boundary {
            Some(b) => {
                let half = 0.5 * b.cell_width + AOI_PADDING_DEG;
                let rect = Rect::new(b.x - half, field.min.y, b.x + half, field.max.y).intersect(&field);
                AoiRegion::Strip { rect }
            }
            None => AoiRegion::Empty,
        },
        Family::ContourIntegration => {
            let rects: Vec<Rect> = layout
                .items
                .iter()
                .filter(|it| it.role == Role::Contour)
                .map(|it| it.bbox().pad(AOI_PADDING_DEG).intersect(&field))
                .collect();
            if rects.is_empty() {
                AoiRegion::Empty
            } else {
                AoiRegion::Union { rects }
            }
        }
        Family::PerceptualGrouping => {
            match padded_union(layout.items.iter().filter(|it| it.role == Role::Group), &field) {
                Some(rect) => AoiRegion::ItemBbox { rect },
                None => AoiRegion::Empty,
            }
        }
        _ => match layout.target() {
            Some(t) => AoiRegion::ItemBbox {
                rect: t.bbox().pad(AOI_PADDING_DEG).intersect(&field),
            },
            None => AoiRegion::Empty,
        },
    }
}
