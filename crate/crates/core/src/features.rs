//! Four feature points per curve: the west/east extremes and the touch
//! points of the horizontal supporting lines above and below.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fill::Curve;
use crate::raster::Point;
use crate::roi::RoiTag;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FeatureError {
    #[error("curve for {0} has no cells")]
    EmptyCurve(RoiTag),
    #[error("more than one curve tagged {0}")]
    DuplicateRoi(RoiTag),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FeatureKind {
    ExtremeWest,
    ExtremeEast,
    TangentNorth,
    TangentSouth,
}

impl FeatureKind {
    pub const ALL: [FeatureKind; 4] =
        [FeatureKind::ExtremeWest, FeatureKind::ExtremeEast, FeatureKind::TangentNorth, FeatureKind::TangentSouth];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeaturePoint {
    pub position: Point,
    pub kind: FeatureKind,
    pub roi_tag: RoiTag,
}

/// West and east extremes. Ties on x go to the smaller y.
pub fn extreme_points(curve: &Curve) -> Result<(FeaturePoint, FeaturePoint), FeatureError> {
    let tag = curve.roi_tag();
    let cells = curve.cells();
    let west = cells.iter().min_by_key(|p| (p.x, p.y)).ok_or(FeatureError::EmptyCurve(tag))?;
    let east = cells.iter().min_by_key(|p| (std::cmp::Reverse(p.x), p.y)).ok_or(FeatureError::EmptyCurve(tag))?;
    Ok((
        FeaturePoint { position: *west, kind: FeatureKind::ExtremeWest, roi_tag: tag },
        FeaturePoint { position: *east, kind: FeatureKind::ExtremeEast, roi_tag: tag },
    ))
}

/// Touch points of the horizontal tangents `y = min` and `y = max`.
/// Ties on y go to the smaller x.
pub fn tangent_points(curve: &Curve) -> Result<(FeaturePoint, FeaturePoint), FeatureError> {
    let tag = curve.roi_tag();
    let cells = curve.cells();
    let north = cells.iter().min_by_key(|p| (p.y, p.x)).ok_or(FeatureError::EmptyCurve(tag))?;
    let south = cells.iter().min_by_key(|p| (std::cmp::Reverse(p.y), p.x)).ok_or(FeatureError::EmptyCurve(tag))?;
    Ok((
        FeaturePoint { position: *north, kind: FeatureKind::TangentNorth, roi_tag: tag },
        FeaturePoint { position: *south, kind: FeatureKind::TangentSouth, roi_tag: tag },
    ))
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureSet {
    /// Grouped by ROI (left eye, right eye, lips), then by kind.
    pub points: Vec<FeaturePoint>,
    /// Indexed by [`RoiTag::index`].
    pub complete: [bool; 3],
}

impl FeatureSet {
    pub fn is_complete(&self, tag: RoiTag) -> bool {
        self.complete[tag.index()]
    }

    pub fn for_roi(&self, tag: RoiTag) -> impl Iterator<Item = &FeaturePoint> {
        self.points.iter().filter(move |p| p.roi_tag == tag)
    }

    pub fn point(&self, tag: RoiTag, kind: FeatureKind) -> Option<Point> {
        self.points.iter().find(|p| p.roi_tag == tag && p.kind == kind).map(|p| p.position)
    }
}

pub fn extract_features(curves: &[Curve]) -> Result<FeatureSet, FeatureError> {
    let mut by_tag: [Option<&Curve>; 3] = [None; 3];
    for c in curves {
        let slot = &mut by_tag[c.roi_tag().index()];
        if slot.is_some() {
            return Err(FeatureError::DuplicateRoi(c.roi_tag()));
        }
        *slot = Some(c);
    }
    let mut set = FeatureSet::default();
    for curve in by_tag.into_iter().flatten() {
        let (west, east) = extreme_points(curve)?;
        let (north, south) = tangent_points(curve)?;
        set.points.extend([west, east, north, south]);
        set.complete[curve.roi_tag().index()] = true;
    }
    Ok(set)
}
