//! Skin classification, connected skin regions, the face plausibility gate
//! and face cropping.

use std::collections::VecDeque;
use std::fmt;
use std::num::NonZeroU32;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::raster::{binarize, BinaryMask, Cell, Point, Rect, RgbImage};

/// Minimum face height and width accepted by the gate.
pub const MIN_FACE_SIDE: u32 = 50;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SkinError {
    #[error("no connected skin region survives the size filter")]
    NoRegion,
    #[error("face gate rejected the region: {0}")]
    GateFailed(String),
    #[error("face box {0:?} exceeds the mask")]
    OutOfBounds(Rect),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Connectivity {
    #[default]
    Four,
    Eight,
}

impl Connectivity {
    fn offsets(self) -> &'static [(i64, i64)] {
        match self {
            Connectivity::Four => &[(0, -1), (-1, 0), (1, 0), (0, 1)],
            Connectivity::Eight => &[(-1, -1), (0, -1), (1, -1), (-1, 0), (1, 0), (-1, 1), (0, 1), (1, 1)],
        }
    }
}

impl std::str::FromStr for Connectivity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "four" | "4" => Ok(Connectivity::Four),
            "eight" | "8" => Ok(Connectivity::Eight),
            other => Err(format!("unknown connectivity {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkinConfig {
    /// Average-intensity threshold `T`.
    pub threshold: u8,
    pub connectivity: Connectivity,
    pub min_region_pixels: NonZeroU32,
}

impl Default for SkinConfig {
    fn default() -> Self {
        SkinConfig {
            threshold: 100,
            connectivity: Connectivity::Four,
            min_region_pixels: NonZeroU32::new(25).unwrap(),
        }
    }
}

impl SkinConfig {
    pub fn with_threshold(threshold: u8) -> Self {
        SkinConfig { threshold, ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FaceDecisionReason {
    TooShort,
    TooNarrow,
    RatioBelowOne,
    RatioAboveTwo,
    NoSkinRegion,
}

impl fmt::Display for FaceDecisionReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Face,
    NotFace(FaceDecisionReason),
}

/// Bounding box of a connected skin component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceBox {
    pub x0: u32,
    pub y0: u32,
    pub width: u32,
    pub height: u32,
    pub pixel_count: u64,
    /// `None` until [`face_gate`] has run.
    pub verdict: Option<Verdict>,
}

impl FaceBox {
    pub fn rect(&self) -> Rect {
        Rect::new(self.x0, self.y0, self.width, self.height)
    }

    pub fn is_face(&self) -> bool {
        self.verdict == Some(Verdict::Face)
    }
}

/// Per-pixel skin classification; White cells are skin candidates.
pub fn classify_skin(image: &RgbImage, config: &SkinConfig) -> BinaryMask {
    binarize(image, config.threshold)
}

/// Summary of one connected White component.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Component {
    pub bounds: Rect,
    pub pixel_count: u64,
    /// First cell in row-major order.
    pub seed: Point,
}

/// Labels every White component of `mask` under `connectivity`, in order of
/// their first cell in row-major order.
pub fn skin_components(mask: &BinaryMask, connectivity: Connectivity) -> Vec<Component> {
    let (w, h) = (mask.width() as i64, mask.height() as i64);
    let cells = mask.cells();
    let mut seen = vec![false; cells.len()];
    let mut queue = VecDeque::new();
    let mut out = Vec::new();

    for start in 0..cells.len() {
        if seen[start] || cells[start] != Cell::White {
            continue;
        }
        seen[start] = true;
        queue.push_back(start);
        let (sx, sy) = ((start as i64 % w) as u32, (start as i64 / w) as u32);
        let (mut x0, mut y0, mut x1, mut y1) = (sx, sy, sx, sy);
        let mut count = 0u64;
        while let Some(i) = queue.pop_front() {
            count += 1;
            let (x, y) = (i as i64 % w, i as i64 / w);
            x0 = x0.min(x as u32);
            x1 = x1.max(x as u32);
            y0 = y0.min(y as u32);
            y1 = y1.max(y as u32);
            for &(dx, dy) in connectivity.offsets() {
                let (nx, ny) = (x + dx, y + dy);
                if nx < 0 || ny < 0 || nx >= w || ny >= h {
                    continue;
                }
                let j = (ny * w + nx) as usize;
                if !seen[j] && cells[j] == Cell::White {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        out.push(Component { bounds: Rect::from_corners(x0, y0, x1, y1), pixel_count: count, seed: Point::new(sx, sy) });
    }
    out
}

/// Bounding box of the largest connected skin component.
///
/// Components smaller than `min_region_pixels` are ignored. Ties on pixel
/// count go to the smaller `y0`, then the smaller `x0`, then the component
/// found first in row-major order.
pub fn largest_skin_region(mask: &BinaryMask, config: &SkinConfig) -> Result<FaceBox, SkinError> {
    let min = u64::from(config.min_region_pixels.get());
    let mut best: Option<Component> = None;
    for c in skin_components(mask, config.connectivity) {
        if c.pixel_count < min {
            continue;
        }
        let better = match &best {
            None => true,
            Some(b) => {
                (c.pixel_count, std::cmp::Reverse(c.bounds.y0), std::cmp::Reverse(c.bounds.x0))
                    > (b.pixel_count, std::cmp::Reverse(b.bounds.y0), std::cmp::Reverse(b.bounds.x0))
            }
        };
        if better {
            best = Some(c);
        }
    }
    let c = best.ok_or(SkinError::NoRegion)?;
    Ok(FaceBox {
        x0: c.bounds.x0,
        y0: c.bounds.y0,
        width: c.bounds.width,
        height: c.bounds.height,
        pixel_count: c.pixel_count,
        verdict: None,
    })
}

/// Decides whether a box's dimensions are plausible for a face.
pub fn gate_verdict(height: u32, width: u32) -> Verdict {
    let (h, w) = (u64::from(height), u64::from(width));
    if height < MIN_FACE_SIDE {
        Verdict::NotFace(FaceDecisionReason::TooShort)
    } else if width < MIN_FACE_SIDE {
        Verdict::NotFace(FaceDecisionReason::TooNarrow)
    } else if h < w {
        Verdict::NotFace(FaceDecisionReason::RatioBelowOne)
    } else if h > 2 * w {
        Verdict::NotFace(FaceDecisionReason::RatioAboveTwo)
    } else {
        Verdict::Face
    }
}

pub fn face_gate(face: FaceBox) -> FaceBox {
    FaceBox { verdict: Some(gate_verdict(face.height, face.width)), ..face }
}

/// Cuts the gated face out of the mask; the result's origin is the box's top-left.
pub fn crop_face(mask: &BinaryMask, face: &FaceBox) -> Result<BinaryMask, SkinError> {
    match face.verdict {
        Some(Verdict::Face) => {}
        Some(Verdict::NotFace(r)) => return Err(SkinError::GateFailed(r.to_string())),
        None => return Err(SkinError::GateFailed("gate not applied".into())),
    }
    mask.sub_mask(face.rect()).map_err(|_| SkinError::OutOfBounds(face.rect()))
}
