//! Geometric placement of the left-eye, right-eye and lip regions inside a
//! cropped face.
//!
//! Each region is a half-open fractional interval of the face extent,
//! `[lo·n, hi·n)`, rounded outward to whole pixels as
//! `floor(lo·n) ..= ceil(hi·n) − 1` and clamped to the face.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::num::{Fraction, Rational};
use crate::raster::Rect;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RoiError {
    #[error("invalid ROI fractions: {0}")]
    InvalidFractions(String),
    #[error("{0} collapses to zero area at face size {1}x{2}")]
    DegenerateRoi(RoiTag, u32, u32),
    #[error("{0} and {1} overlap at face size {2}x{3}")]
    Overlap(RoiTag, RoiTag, u32, u32),
}

/// Which facial region a rectangle, curve or feature point belongs to.
/// "Left" is the viewer's left.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RoiTag {
    LeftEye,
    RightEye,
    Lips,
}

impl RoiTag {
    pub const ALL: [RoiTag; 3] = [RoiTag::LeftEye, RoiTag::RightEye, RoiTag::Lips];

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for RoiTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RoiTag::LeftEye => "left_eye",
            RoiTag::RightEye => "right_eye",
            RoiTag::Lips => "lips",
        })
    }
}

/// Facial-proportion prior. Vertical bounds are fractions of face height,
/// horizontal bounds fractions of face width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoiFractions<S = Rational> {
    eye_top: S,
    eye_bottom: S,
    lip_top: S,
    lip_bottom: S,
    left_eye_left: S,
    left_eye_right: S,
    right_eye_left: S,
    right_eye_right: S,
    lip_left: S,
    lip_right: S,
}

/// Names used in configuration files, in field order.
pub const FRACTION_KEYS: [&str; 10] = [
    "eye_top",
    "eye_bottom",
    "lip_top",
    "lip_bottom",
    "left_eye_left",
    "left_eye_right",
    "right_eye_left",
    "right_eye_right",
    "lip_left",
    "lip_right",
];

impl<S: Fraction> Default for RoiFractions<S> {
    fn default() -> Self {
        let pct = |p: i64| S::from_ratio(p, 100);
        RoiFractions {
            eye_top: pct(20),
            eye_bottom: pct(50),
            lip_top: pct(65),
            lip_bottom: pct(95),
            left_eye_left: pct(10),
            left_eye_right: pct(50),
            right_eye_left: pct(55),
            right_eye_right: pct(95),
            lip_left: pct(25),
            lip_right: pct(75),
        }
    }
}

impl<S: Fraction> RoiFractions<S> {
    /// Values in [`FRACTION_KEYS`] order.
    pub fn new(values: [S; 10]) -> Result<Self, RoiError> {
        let [eye_top, eye_bottom, lip_top, lip_bottom, left_eye_left, left_eye_right, right_eye_left, right_eye_right, lip_left, lip_right] =
            values;
        let f = RoiFractions {
            eye_top,
            eye_bottom,
            lip_top,
            lip_bottom,
            left_eye_left,
            left_eye_right,
            right_eye_left,
            right_eye_right,
            lip_left,
            lip_right,
        };
        f.validate()?;
        Ok(f)
    }

    pub fn values(&self) -> [S; 10] {
        [
            self.eye_top,
            self.eye_bottom,
            self.lip_top,
            self.lip_bottom,
            self.left_eye_left,
            self.left_eye_right,
            self.right_eye_left,
            self.right_eye_right,
            self.lip_left,
            self.lip_right,
        ]
    }

    /// Replaces one named field, re-checking every invariant.
    pub fn with_value(&self, key: &str, value: S) -> Result<Self, RoiError> {
        let idx = FRACTION_KEYS
            .iter()
            .position(|k| *k == key)
            .ok_or_else(|| RoiError::InvalidFractions(format!("unknown field {key:?}")))?;
        let mut values = self.values();
        values[idx] = value;
        Self::new(values)
    }

    // negated comparisons also reject NaN
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    fn validate(&self) -> Result<(), RoiError> {
        let bad = |msg: String| Err(RoiError::InvalidFractions(msg));
        for (key, v) in FRACTION_KEYS.iter().zip(self.values()) {
            if !(v >= S::zero() && v <= S::one()) {
                return bad(format!("{key} = {v:?} is outside [0, 1]"));
            }
        }
        let ordered = [
            ("eye_top", self.eye_top, "eye_bottom", self.eye_bottom),
            ("lip_top", self.lip_top, "lip_bottom", self.lip_bottom),
            ("left_eye_left", self.left_eye_left, "left_eye_right", self.left_eye_right),
            ("right_eye_left", self.right_eye_left, "right_eye_right", self.right_eye_right),
            ("lip_left", self.lip_left, "lip_right", self.lip_right),
        ];
        for (lo_key, lo, hi_key, hi) in ordered {
            if !(lo < hi) {
                return bad(format!("{lo_key} must be below {hi_key}"));
            }
        }
        if !(self.left_eye_right <= self.right_eye_left) {
            return bad("left-eye and right-eye columns overlap".into());
        }
        if !(self.eye_bottom <= self.lip_top) {
            return bad("eye rows must end before lip rows begin".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoiSet {
    pub left_eye: Rect,
    pub right_eye: Rect,
    pub lips: Rect,
}

impl RoiSet {
    pub fn get(&self, tag: RoiTag) -> Rect {
        match tag {
            RoiTag::LeftEye => self.left_eye,
            RoiTag::RightEye => self.right_eye,
            RoiTag::Lips => self.lips,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (RoiTag, Rect)> + '_ {
        RoiTag::ALL.into_iter().map(|t| (t, self.get(t)))
    }
}

fn span<S: Fraction>(lo: S, hi: S, extent: u32) -> Option<(u32, u32)> {
    let max = i64::from(extent) - 1;
    let first = lo.floor_scaled(extent).clamp(0, max);
    let last = (hi.ceil_scaled(extent) - 1).clamp(0, max);
    (last >= first).then_some((first as u32, last as u32))
}

/// Places the three regions for a `face_width`×`face_height` face.
pub fn locate_rois<S: Fraction>(face_width: u32, face_height: u32, fractions: &RoiFractions<S>) -> Result<RoiSet, RoiError> {
    let f = fractions;
    let rect = |tag, left: S, right: S, top: S, bottom: S| {
        let degenerate = || RoiError::DegenerateRoi(tag, face_width, face_height);
        if face_width == 0 || face_height == 0 {
            return Err(degenerate());
        }
        let (x0, x1) = span(left, right, face_width).ok_or_else(degenerate)?;
        let (y0, y1) = span(top, bottom, face_height).ok_or_else(degenerate)?;
        Ok(Rect::from_corners(x0, y0, x1, y1))
    };
    let set = RoiSet {
        left_eye: rect(RoiTag::LeftEye, f.left_eye_left, f.left_eye_right, f.eye_top, f.eye_bottom)?,
        right_eye: rect(RoiTag::RightEye, f.right_eye_left, f.right_eye_right, f.eye_top, f.eye_bottom)?,
        lips: rect(RoiTag::Lips, f.lip_left, f.lip_right, f.lip_top, f.lip_bottom)?,
    };
    // rounding can still push adjacent fractional boundaries onto the same pixel
    for (a, b) in [(RoiTag::LeftEye, RoiTag::RightEye), (RoiTag::LeftEye, RoiTag::Lips), (RoiTag::RightEye, RoiTag::Lips)] {
        if set.get(a).intersects(&set.get(b)) {
            return Err(RoiError::Overlap(a, b, face_width, face_height));
        }
    }
    Ok(set)
}
