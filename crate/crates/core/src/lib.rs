//! # facekit
//!
//! Face localization and facial feature-point extraction from plain RGB
//! images using an average-intensity skin threshold.
//!
//! Stages, each in its own module:
//!
//! 1. [`skin`]: threshold every pixel, take the largest connected skin
//!    component and check its box is face-shaped (both sides at least 50
//!    pixels, height between one and two widths).
//! 2. [`roi`]: place left-eye, right-eye and lip rectangles inside the face
//!    from configurable facial-proportion fractions.
//! 3. [`fill`]: scanline flood fill over the non-skin cells of each ROI;
//!    the largest component becomes that ROI's curve.
//! 4. [`features`]: west/east extremes plus north/south tangent points per
//!    curve, twelve points for a complete face.
//!
//! [`metrics`] scores detections against labeled corpora, [`corpus`]
//! renders seeded synthetic test images and [`pipeline`] chains it all.
//!
//! Fraction and percentage types are generic over the scalar; the aliases
//! below pick the common instantiations.

pub mod corpus;
pub mod features;
pub mod fill;
pub mod metrics;
pub mod num;
pub mod pipeline;
pub mod raster;
pub mod roi;
pub mod skin;

pub use features::{extract_features, FeatureKind, FeaturePoint, FeatureSet};
pub use fill::{extract_curves, scanline_flood_fill, Curve, Grid};
pub use metrics::{AccuracyReport, DetectionRecord, GroundTruthLabel, RoiFlags};
pub use num::{Fraction, Rational, Real};
pub use pipeline::{run_pipeline, PipelineConfig, PipelineResult, Rejection};
pub use raster::{binarize, load_image, save_image, BinaryMask, Cell, Pixel, Point, Rect, RgbImage};
pub use roi::{locate_rois, RoiFractions, RoiSet, RoiTag};
pub use skin::{classify_skin, crop_face, face_gate, largest_skin_region, FaceBox, SkinConfig, Verdict};

/// ROI fractions with exact rational rounding (the default).
pub type ExactRoiFractions = RoiFractions<Rational>;
pub type RoiFractionsF64 = RoiFractions<f64>;
pub type RoiFractionsF32 = RoiFractions<f32>;

pub type AccuracyReportF64 = AccuracyReport<f64>;
pub type AccuracyReportF32 = AccuracyReport<f32>;

pub type ExactPipelineConfig = PipelineConfig<Rational>;
pub type PipelineConfigF64 = PipelineConfig<f64>;
