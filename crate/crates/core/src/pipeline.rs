//! The end-to-end pipeline: classify → largest region → gate → crop →
//! ROIs → curves → feature points.

use std::time::Instant;

use serde::{Serialize, Serializer};

use crate::fill::extract_curves;
use crate::features::{extract_features, FeatureSet};
use crate::metrics::{DetectionRecord, RoiFlags};
use crate::num::{Fraction, Rational};
use crate::raster::{Overlay, Point, RgbImage};
use crate::roi::{locate_rois, RoiFractions, RoiSet, RoiTag};
use crate::skin::{
    classify_skin, crop_face, face_gate, largest_skin_region, FaceBox, FaceDecisionReason, SkinConfig, SkinError,
    Verdict,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineConfig<S = Rational> {
    pub skin: SkinConfig,
    pub fractions: RoiFractions<S>,
}

impl<S: Fraction> Default for PipelineConfig<S> {
    fn default() -> Self {
        PipelineConfig { skin: SkinConfig::default(), fractions: RoiFractions::default() }
    }
}

/// Why an image was not processed to the end.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Rejection {
    /// The face gate or the region search failed.
    Gate(FaceDecisionReason),
    /// The configured fractions could not be placed on this face.
    RoiPlacement(String),
}

impl std::fmt::Display for Rejection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Rejection::Gate(r) => write!(f, "{r}"),
            Rejection::RoiPlacement(msg) => write!(f, "RoiPlacement: {msg}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CurveStat {
    pub roi: RoiTag,
    pub pixel_count: usize,
}

fn serialize_millis<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(ms) => s.serialize_f64(*ms),
        None => s.serialize_none(),
    }
}

/// Everything the pipeline learned about one image. ROI rectangles and
/// feature points are face-local; `face_box` is in image coordinates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineResult {
    pub image_id: String,
    pub face_box: Option<FaceBox>,
    pub rejection: Option<Rejection>,
    pub rois: Option<RoiSet>,
    pub curves: Vec<CurveStat>,
    pub missing_curves: Vec<RoiTag>,
    pub features: Option<FeatureSet>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "serialize_millis")]
    pub timing_ms: Option<f64>,
}

impl PipelineResult {
    fn rejected(image_id: &str, face_box: Option<FaceBox>, rejection: Rejection) -> Self {
        PipelineResult {
            image_id: image_id.to_string(),
            face_box,
            rejection: Some(rejection),
            rois: None,
            curves: Vec::new(),
            missing_curves: Vec::new(),
            features: None,
            timing_ms: None,
        }
    }

    pub fn is_face(&self) -> bool {
        self.face_box.is_some_and(|b| b.is_face())
    }

    pub fn detection_record(&self) -> DetectionRecord {
        let rois_found: RoiFlags = match (&self.rois, &self.features) {
            (Some(_), Some(f)) => RoiTag::ALL.into_iter().filter(|t| f.is_complete(*t)).collect(),
            _ => RoiFlags::NONE,
        };
        DetectionRecord { image_id: self.image_id.clone(), face_detected: self.is_face(), rois_found }
    }

    /// Face box, ROI boxes and feature points in image coordinates.
    pub fn overlay(&self) -> Overlay {
        let mut overlay = Overlay::default();
        let Some(face) = self.face_box else { return overlay };
        overlay.boxes.push((face.rect(), "face".into()));
        if let Some(rois) = &self.rois {
            for (tag, r) in rois.iter() {
                overlay.boxes.push((r.translate(face.x0, face.y0), tag.to_string()));
            }
        }
        if let Some(features) = &self.features {
            for p in &features.points {
                let at = Point::new(p.position.x + face.x0, p.position.y + face.y0);
                overlay.points.push((at, format!("{}:{:?}", p.roi_tag, p.kind)));
            }
        }
        overlay
    }
}

/// Runs every stage, stopping at the first rejection. Deterministic for
/// fixed inputs; `timing_ms` is always filled.
pub fn run_pipeline<S: Fraction>(image_id: &str, image: &RgbImage, config: &PipelineConfig<S>) -> PipelineResult {
    let started = Instant::now();
    let mut result = run_stages(image_id, image, config);
    result.timing_ms = Some(started.elapsed().as_secs_f64() * 1e3);
    result
}

fn run_stages<S: Fraction>(image_id: &str, image: &RgbImage, config: &PipelineConfig<S>) -> PipelineResult {
    let mask = classify_skin(image, &config.skin);
    let face = match largest_skin_region(&mask, &config.skin) {
        Ok(b) => face_gate(b),
        Err(_) => return PipelineResult::rejected(image_id, None, Rejection::Gate(FaceDecisionReason::NoSkinRegion)),
    };
    let face_mask = match crop_face(&mask, &face) {
        Ok(m) => m,
        Err(SkinError::GateFailed(_)) => {
            let reason = match face.verdict {
                Some(Verdict::NotFace(r)) => r,
                _ => unreachable!("crop only fails the gate check on rejected boxes"),
            };
            return PipelineResult::rejected(image_id, Some(face), Rejection::Gate(reason));
        }
        Err(e) => unreachable!("component boxes lie inside their mask: {e}"),
    };
    let rois = match locate_rois(face.width, face.height, &config.fractions) {
        Ok(r) => r,
        Err(e) => return PipelineResult::rejected(image_id, Some(face), Rejection::RoiPlacement(e.to_string())),
    };
    let curves = extract_curves(&face_mask, &rois);
    let features = extract_features(&curves).expect("extract_curves yields one non-empty curve per ROI");
    PipelineResult {
        image_id: image_id.to_string(),
        face_box: Some(face),
        rejection: None,
        rois: Some(rois),
        curves: curves.iter().map(|c| CurveStat { roi: c.roi_tag(), pixel_count: c.pixel_count() }).collect(),
        missing_curves: RoiTag::ALL.into_iter().filter(|t| !features.is_complete(*t)).collect(),
        features: Some(features),
        timing_ms: None,
    }
}
