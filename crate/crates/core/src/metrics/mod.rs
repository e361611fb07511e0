//! Face-recognition and ROI-detection accuracy over a labeled corpus.
//!
//! Every rate is `100 · count / denominator`, evaluated in floating point
//! from exact integer counts. A zero denominator yields `None` ("undefined"),
//! never a substituted 0 or 100.

mod manifest;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::num::{percentage, Real};
use crate::roi::RoiTag;

pub use manifest::{parse_manifest, read_manifest, write_manifest, ManifestEntry, ManifestError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricsError {
    #[error("corpus has no labeled images")]
    EmptyCorpus,
    #[error("no detection record for {0}")]
    MissingRecord(String),
    #[error("more than one detection record for {0}")]
    DuplicateRecord(String),
    #[error("detection record for unlabeled image {0}")]
    UnknownRecord(String),
    #[error("image {0} is labeled more than once")]
    DuplicateLabel(String),
    #[error("non-face image {0} is labeled with expected ROIs")]
    InconsistentLabel(String),
    #[error("record for {0} reports ROIs without a detected face")]
    InconsistentRecord(String),
}

/// Presence flags for the three regions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RoiFlags {
    pub left_eye: bool,
    pub right_eye: bool,
    pub lips: bool,
}

impl RoiFlags {
    pub const ALL: RoiFlags = RoiFlags { left_eye: true, right_eye: true, lips: true };
    pub const NONE: RoiFlags = RoiFlags { left_eye: false, right_eye: false, lips: false };

    pub fn contains(&self, tag: RoiTag) -> bool {
        match tag {
            RoiTag::LeftEye => self.left_eye,
            RoiTag::RightEye => self.right_eye,
            RoiTag::Lips => self.lips,
        }
    }

    pub fn insert(&mut self, tag: RoiTag) {
        match tag {
            RoiTag::LeftEye => self.left_eye = true,
            RoiTag::RightEye => self.right_eye = true,
            RoiTag::Lips => self.lips = true,
        }
    }

    pub fn is_empty(&self) -> bool {
        *self == Self::NONE
    }
}

impl FromIterator<RoiTag> for RoiFlags {
    fn from_iter<I: IntoIterator<Item = RoiTag>>(iter: I) -> Self {
        let mut flags = RoiFlags::NONE;
        for t in iter {
            flags.insert(t);
        }
        flags
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTruthLabel {
    pub image_id: String,
    pub is_face: bool,
    pub expected_rois: RoiFlags,
}

impl GroundTruthLabel {
    pub fn face(image_id: impl Into<String>) -> Self {
        GroundTruthLabel { image_id: image_id.into(), is_face: true, expected_rois: RoiFlags::ALL }
    }

    pub fn non_face(image_id: impl Into<String>) -> Self {
        GroundTruthLabel { image_id: image_id.into(), is_face: false, expected_rois: RoiFlags::NONE }
    }
}

/// What the pipeline produced for one image. A ROI counts as found only
/// when its rectangle, curve and all four feature points were obtained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetectionRecord {
    pub image_id: String,
    pub face_detected: bool,
    pub rois_found: RoiFlags,
}

impl DetectionRecord {
    pub fn missed(image_id: impl Into<String>) -> Self {
        DetectionRecord { image_id: image_id.into(), face_detected: false, rois_found: RoiFlags::NONE }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaceScore<S = f64> {
    pub n: u64,
    pub m: u64,
    pub i_f: u64,
    pub i_nf: u64,
    pub a_f: Option<S>,
    pub a_nf: Option<S>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoiScore<S = f64> {
    pub n: u64,
    pub roi_lip: u64,
    pub roi_l_eye: u64,
    pub roi_r_eye: u64,
    pub a_lip: Option<S>,
    pub a_l_eye: Option<S>,
    pub a_r_eye: Option<S>,
}

/// Pairs every label with its record, checking coverage and consistency.
fn pair_up<'a>(
    labels: &'a [GroundTruthLabel],
    records: &'a [DetectionRecord],
) -> Result<Vec<(&'a GroundTruthLabel, &'a DetectionRecord)>, MetricsError> {
    if labels.is_empty() {
        return Err(MetricsError::EmptyCorpus);
    }
    let mut by_id: HashMap<&str, &DetectionRecord> = HashMap::with_capacity(records.len());
    for r in records {
        if !r.face_detected && !r.rois_found.is_empty() {
            return Err(MetricsError::InconsistentRecord(r.image_id.clone()));
        }
        if by_id.insert(r.image_id.as_str(), r).is_some() {
            return Err(MetricsError::DuplicateRecord(r.image_id.clone()));
        }
    }
    let mut pairs = Vec::with_capacity(labels.len());
    let mut seen = std::collections::HashSet::with_capacity(labels.len());
    for l in labels {
        if !seen.insert(l.image_id.as_str()) {
            return Err(MetricsError::DuplicateLabel(l.image_id.clone()));
        }
        if !l.is_face && !l.expected_rois.is_empty() {
            return Err(MetricsError::InconsistentLabel(l.image_id.clone()));
        }
        let r = by_id.get(l.image_id.as_str()).ok_or_else(|| MetricsError::MissingRecord(l.image_id.clone()))?;
        pairs.push((l, *r));
    }
    if let Some(extra) = records.iter().find(|r| !seen.contains(r.image_id.as_str())) {
        return Err(MetricsError::UnknownRecord(extra.image_id.clone()));
    }
    Ok(pairs)
}

/// `A_f = 100·I_f/N` over facial images and `A_nf = 100·I_nf/M` over non-facial ones.
pub fn score_face_recognition<S: Real>(
    labels: &[GroundTruthLabel],
    records: &[DetectionRecord],
) -> Result<FaceScore<S>, MetricsError> {
    let pairs = pair_up(labels, records)?;
    let (mut n, mut m, mut i_f, mut i_nf) = (0u64, 0u64, 0u64, 0u64);
    for (label, record) in pairs {
        if label.is_face {
            n += 1;
            i_f += u64::from(record.face_detected);
        } else {
            m += 1;
            i_nf += u64::from(!record.face_detected);
        }
    }
    Ok(FaceScore { n, m, i_f, i_nf, a_f: percentage(i_f, n), a_nf: percentage(i_nf, m) })
}

/// `A_x = 100·ROI_x/N` for each region, where `ROI_x` counts facial images
/// whose label expects `x` and whose record found it.
pub fn score_roi_detection<S: Real>(
    labels: &[GroundTruthLabel],
    records: &[DetectionRecord],
) -> Result<RoiScore<S>, MetricsError> {
    let pairs = pair_up(labels, records)?;
    let mut n = 0u64;
    let mut counts = [0u64; 3];
    for (label, record) in pairs.into_iter().filter(|(l, _)| l.is_face) {
        n += 1;
        for tag in RoiTag::ALL {
            if label.expected_rois.contains(tag) && record.rois_found.contains(tag) {
                counts[tag.index()] += 1;
            }
        }
    }
    let [l_eye, r_eye, lip] = counts;
    Ok(RoiScore {
        n,
        roi_lip: lip,
        roi_l_eye: l_eye,
        roi_r_eye: r_eye,
        a_lip: percentage(lip, n),
        a_l_eye: percentage(l_eye, n),
        a_r_eye: percentage(r_eye, n),
    })
}

/// Combined report. Field order is the JSON key order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AccuracyReport<S = f64> {
    pub n: u64,
    pub m: u64,
    pub i_f: u64,
    pub i_nf: u64,
    pub roi_lip: u64,
    pub roi_l_eye: u64,
    pub roi_r_eye: u64,
    pub a_f: Option<S>,
    pub a_nf: Option<S>,
    pub a_lip: Option<S>,
    pub a_l_eye: Option<S>,
    pub a_r_eye: Option<S>,
}

pub fn aggregate_report<S: Real>(face: &FaceScore<S>, roi: &RoiScore<S>) -> AccuracyReport<S> {
    debug_assert_eq!(face.n, roi.n);
    let report = AccuracyReport {
        n: face.n,
        m: face.m,
        i_f: face.i_f,
        i_nf: face.i_nf,
        roi_lip: roi.roi_lip,
        roi_l_eye: roi.roi_l_eye,
        roi_r_eye: roi.roi_r_eye,
        a_f: face.a_f,
        a_nf: face.a_nf,
        a_lip: roi.a_lip,
        a_l_eye: roi.a_l_eye,
        a_r_eye: roi.a_r_eye,
    };
    debug_assert!(report.counts_consistent());
    report
}

/// Scores both passes and bundles them.
pub fn evaluate<S: Real>(labels: &[GroundTruthLabel], records: &[DetectionRecord]) -> Result<AccuracyReport<S>, MetricsError> {
    let face = score_face_recognition(labels, records)?;
    let roi = score_roi_detection(labels, records)?;
    Ok(aggregate_report(&face, &roi))
}

impl<S: Real> AccuracyReport<S> {
    pub fn counts_consistent(&self) -> bool {
        self.i_f <= self.n
            && self.i_nf <= self.m
            && self.roi_lip <= self.n
            && self.roi_l_eye <= self.n
            && self.roi_r_eye <= self.n
            && [self.a_f, self.a_nf, self.a_lip, self.a_l_eye, self.a_r_eye]
                .iter()
                .flatten()
                .all(|a| *a >= S::zero() && *a <= S::from_u8(100).unwrap())
    }
}

impl<S: Real> fmt::Display for AccuracyReport<S> {
    /// Fixed-width table with two decimals; undefined rates print as `n/a`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rate = |a: Option<S>| a.map_or_else(|| "n/a".to_string(), |v| format!("{:.2}", v.to_f64().unwrap_or(f64::NAN)));
        writeln!(f, "{:<10} {:>8} {:>8} {:>8}", "metric", "count", "of", "percent")?;
        let rows = [
            ("A_f", self.i_f, self.n, self.a_f),
            ("A_nf", self.i_nf, self.m, self.a_nf),
            ("A_l_eye", self.roi_l_eye, self.n, self.a_l_eye),
            ("A_r_eye", self.roi_r_eye, self.n, self.a_r_eye),
            ("A_lip", self.roi_lip, self.n, self.a_lip),
        ];
        for (name, count, of, a) in rows {
            writeln!(f, "{name:<10} {count:>8} {of:>8} {:>8}", rate(a))?;
        }
        Ok(())
    }
}
