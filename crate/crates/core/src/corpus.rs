//! Seeded synthetic face and non-face images with ground-truth labels.
//!
//! Faces are a skin-toned rectangle holding three dark filled ellipses, one
//! strictly inside each default ROI. Every tone keeps its channel average at
//! least [`TONE_MARGIN`] away from [`GENERATOR_THRESHOLD`] even after
//! per-pixel jitter, so classification does not hinge on the exact threshold.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metrics::GroundTruthLabel;
use crate::raster::{binarize, Pixel, Point, Rect, RgbImage};
use crate::num::Rational;
use crate::roi::{locate_rois, RoiFractions, RoiTag};
use crate::skin::{gate_verdict, skin_components, Connectivity, SkinConfig, Verdict};

pub const GENERATOR_THRESHOLD: u8 = 100;
pub const TONE_MARGIN: u8 = 40;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CorpusError {
    #[error("synthetic face spec is infeasible: {0}")]
    SpecInfeasible(String),
}

/// Filled ellipse `((x-cx)/a)^2 + ((y-cy)/b)^2 <= 1` over integer pixel centers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ellipse {
    pub center: Point,
    pub semi_x: u32,
    pub semi_y: u32,
}

impl Ellipse {
    pub fn contains(&self, x: u32, y: u32) -> bool {
        let (a, b) = (i64::from(self.semi_x), i64::from(self.semi_y));
        let dx = i64::from(x) - i64::from(self.center.x);
        let dy = i64::from(y) - i64::from(self.center.y);
        dx * dx * b * b + dy * dy * a * a <= a * a * b * b
    }

    /// West, east, north and south apex pixels.
    pub fn apexes(&self) -> [Point; 4] {
        let Point { x, y } = self.center;
        [
            Point::new(x - self.semi_x, y),
            Point::new(x + self.semi_x, y),
            Point::new(x, y - self.semi_y),
            Point::new(x, y + self.semi_y),
        ]
    }

    fn strictly_inside(&self, r: &Rect) -> bool {
        let Point { x, y } = self.center;
        x >= self.semi_x
            && y >= self.semi_y
            && x - self.semi_x > r.x0
            && x + self.semi_x < r.x1()
            && y - self.semi_y > r.y0
            && y + self.semi_y < r.y1()
    }
}

/// Layout of one synthetic face. Ellipse centers are face-local.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyntheticFaceSpec {
    pub canvas_width: u32,
    pub canvas_height: u32,
    pub face: Rect,
    pub skin: Pixel,
    pub background: Pixel,
    pub feature_tone: Pixel,
    /// Per-channel jitter amplitude applied to every pixel.
    pub noise: u8,
    pub left_eye: Ellipse,
    pub right_eye: Ellipse,
    pub lips: Ellipse,
    pub seed: u64,
}

impl Default for SyntheticFaceSpec {
    fn default() -> Self {
        SyntheticFaceSpec {
            canvas_width: 160,
            canvas_height: 180,
            face: Rect::new(30, 25, 100, 130),
            skin: Pixel::new(224, 172, 140),
            background: Pixel::new(30, 30, 40),
            feature_tone: Pixel::new(40, 20, 20),
            noise: 6,
            left_eye: Ellipse { center: Point::new(30, 45), semi_x: 12, semi_y: 6 },
            right_eye: Ellipse { center: Point::new(75, 45), semi_x: 12, semi_y: 6 },
            lips: Ellipse { center: Point::new(50, 104), semi_x: 18, semi_y: 7 },
            seed: 0,
        }
    }
}

fn random_ellipse(rng: &mut ChaCha8Rng, roi: Rect) -> Ellipse {
    let a_max = (roi.width - 3) / 2;
    let b_max = (roi.height - 3) / 2;
    let a = rng.gen_range((a_max / 2).max(1)..=a_max);
    let b = rng.gen_range((b_max / 3).max(1)..=b_max);
    let cx = rng.gen_range(roi.x0 + 1 + a..=roi.x1() - 1 - a);
    let cy = rng.gen_range(roi.y0 + 1 + b..=roi.y1() - 1 - b);
    Ellipse { center: Point::new(cx, cy), semi_x: a, semi_y: b }
}

impl SyntheticFaceSpec {
    /// A randomized feasible layout drawn entirely from `seed`.
    pub fn from_seed(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let width = rng.gen_range(56..=120);
        let height = rng.gen_range(width..=(2 * width).min(width + 60));
        let (left, right, top, bottom) =
            (rng.gen_range(4..=40), rng.gen_range(4..=40), rng.gen_range(4..=40), rng.gen_range(4..=40));
        let skin = Pixel::new(rng.gen_range(190..=240), rng.gen_range(160..=210), rng.gen_range(140..=190));
        let background = Pixel::new(rng.gen_range(0..=40), rng.gen_range(0..=40), rng.gen_range(0..=40));
        let feature_tone = Pixel::new(rng.gen_range(10..=45), rng.gen_range(10..=45), rng.gen_range(10..=45));
        let noise = rng.gen_range(0..=12);
        let rois = locate_rois(width, height, &RoiFractions::<Rational>::default()).expect("gated sizes always place ROIs");
        SyntheticFaceSpec {
            canvas_width: left + width + right,
            canvas_height: top + height + bottom,
            face: Rect::new(left, top, width, height),
            skin,
            background,
            feature_tone,
            noise,
            left_eye: random_ellipse(&mut rng, rois.left_eye),
            right_eye: random_ellipse(&mut rng, rois.right_eye),
            lips: random_ellipse(&mut rng, rois.lips),
            seed,
        }
    }

    pub fn ellipse(&self, tag: RoiTag) -> Ellipse {
        match tag {
            RoiTag::LeftEye => self.left_eye,
            RoiTag::RightEye => self.right_eye,
            RoiTag::Lips => self.lips,
        }
    }

    pub fn validate(&self) -> Result<(), CorpusError> {
        let infeasible = |msg: String| Err(CorpusError::SpecInfeasible(msg));
        let (w, h) = (self.face.width, self.face.height);
        if gate_verdict(h, w) != Verdict::Face {
            return infeasible(format!("face {w}x{h} cannot pass the face gate"));
        }
        if !self.face.fits_within(self.canvas_width, self.canvas_height) {
            return infeasible("face does not fit on the canvas".into());
        }
        let jitter = 3 * u32::from(self.noise);
        let bright = 3 * u32::from(GENERATOR_THRESHOLD + TONE_MARGIN);
        let dark = 3 * u32::from(GENERATOR_THRESHOLD - TONE_MARGIN);
        if self.skin.channel_sum() < bright + jitter {
            return infeasible("skin tone too dark for the noise level".into());
        }
        for (name, tone) in [("background", self.background), ("feature", self.feature_tone)] {
            if tone.channel_sum() + jitter > dark {
                return infeasible(format!("{name} tone too bright for the noise level"));
            }
        }
        let rois = locate_rois(w, h, &RoiFractions::<Rational>::default()).map_err(|e| CorpusError::SpecInfeasible(e.to_string()))?;
        for tag in RoiTag::ALL {
            let e = self.ellipse(tag);
            if e.semi_x == 0 || e.semi_y == 0 {
                return infeasible(format!("{tag} ellipse has a zero semi-axis"));
            }
            if !e.strictly_inside(&rois.get(tag)) {
                return infeasible(format!("{tag} ellipse leaves its ROI {:?}", rois.get(tag)));
            }
        }
        Ok(())
    }

    /// Ellipse apexes translated to canvas coordinates.
    pub fn image_apexes(&self, tag: RoiTag) -> [Point; 4] {
        self.ellipse(tag).apexes().map(|p| p.offset(self.face.x0, self.face.y0))
    }
}

fn jitter(rng: &mut ChaCha8Rng, base: Pixel, amp: u8) -> Pixel {
    if amp == 0 {
        return base;
    }
    let mut ch = |v: u8| (i16::from(v) + rng.gen_range(-i16::from(amp)..=i16::from(amp))).clamp(0, 255) as u8;
    Pixel::new(ch(base.r), ch(base.g), ch(base.b))
}

/// Renders the face described by `spec`.
pub fn generate_face(spec: &SyntheticFaceSpec) -> Result<(RgbImage, GroundTruthLabel), CorpusError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let face = spec.face;
    let ellipses = [spec.left_eye, spec.right_eye, spec.lips];
    let image = RgbImage::from_fn(spec.canvas_width, spec.canvas_height, |x, y| {
        let tone = if face.contains(Point::new(x, y)) {
            let (lx, ly) = (x - face.x0, y - face.y0);
            if ellipses.iter().any(|e| e.contains(lx, ly)) {
                spec.feature_tone
            } else {
                spec.skin
            }
        } else {
            spec.background
        };
        jitter(&mut rng, tone, spec.noise)
    })
    .map_err(|e| CorpusError::SpecInfeasible(e.to_string()))?;
    Ok((image, GroundTruthLabel::face(format!("face-{}", spec.seed))))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NonFaceKind {
    /// Scattered bright pixels whose components all stay below the
    /// default `min_region_pixels` (checked under 8-connectivity).
    Noise,
    /// A bright rectangle shorter or narrower than the gate minimum.
    TooSmallBlob,
    /// A bright rectangle more than twice as tall as it is wide.
    WrongRatioBlob,
}

impl NonFaceKind {
    pub const ALL: [NonFaceKind; 3] = [NonFaceKind::Noise, NonFaceKind::TooSmallBlob, NonFaceKind::WrongRatioBlob];
}

fn bright_tone(rng: &mut ChaCha8Rng) -> Pixel {
    Pixel::new(rng.gen_range(190..=250), rng.gen_range(170..=230), rng.gen_range(150..=210))
}

fn dark_tone(rng: &mut ChaCha8Rng) -> Pixel {
    Pixel::new(rng.gen_range(0..=55), rng.gen_range(0..=55), rng.gen_range(0..=55))
}

/// Dark canvas with one bright rectangle `blob`.
pub fn blob_image(canvas_width: u32, canvas_height: u32, blob: Rect, seed: u64) -> RgbImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fg = bright_tone(&mut rng);
    let bg = dark_tone(&mut rng);
    RgbImage::from_fn(canvas_width, canvas_height, |x, y| if blob.contains(Point::new(x, y)) { fg } else { bg })
        .expect("non-empty canvas")
}

fn noise_image(rng: &mut ChaCha8Rng) -> RgbImage {
    let limit = u64::from(SkinConfig::default().min_region_pixels.get());
    let (w, h) = (rng.gen_range(48..=96), rng.gen_range(48..=96));
    loop {
        let img = RgbImage::from_fn(w, h, |_, _| if rng.gen_bool(0.2) { bright_tone(rng) } else { dark_tone(rng) })
            .expect("non-empty canvas");
        let mask = binarize(&img, GENERATOR_THRESHOLD);
        if skin_components(&mask, Connectivity::Eight).iter().all(|c| c.pixel_count < limit) {
            return img;
        }
    }
}

pub fn generate_nonface(kind: NonFaceKind, seed: u64) -> (RgbImage, GroundTruthLabel) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let image = match kind {
        NonFaceKind::Noise => noise_image(&mut rng),
        NonFaceKind::TooSmallBlob => {
            let (bw, bh) = (rng.gen_range(10..=49), rng.gen_range(10..=49));
            let (x0, y0) = (rng.gen_range(2..=20), rng.gen_range(2..=20));
            blob_image(x0 + bw + rng.gen_range(2..=20), y0 + bh + rng.gen_range(2..=20), Rect::new(x0, y0, bw, bh), rng.gen())
        }
        NonFaceKind::WrongRatioBlob => {
            let bw = rng.gen_range(50..=70);
            let bh = rng.gen_range(2 * bw + 1..=2 * bw + 20);
            let (x0, y0) = (rng.gen_range(2..=20), rng.gen_range(2..=20));
            blob_image(x0 + bw + rng.gen_range(2..=20), y0 + bh + rng.gen_range(2..=20), Rect::new(x0, y0, bw, bh), rng.gen())
        }
    };
    (image, GroundTruthLabel::non_face(format!("nonface-{seed}")))
}

#[derive(Debug, Clone)]
pub struct CorpusItem {
    pub file_name: String,
    pub image: RgbImage,
    /// `label.image_id` equals `file_name`.
    pub label: GroundTruthLabel,
    /// Present for faces.
    pub face_spec: Option<SyntheticFaceSpec>,
}

/// `faces` random faces followed by `nonfaces` non-faces cycling through
/// every [`NonFaceKind`]. Item seeds derive from `seed` alone.
pub fn generate_corpus(faces: usize, nonfaces: usize, seed: u64) -> Vec<CorpusItem> {
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let mut items = Vec::with_capacity(faces + nonfaces);
    for i in 0..faces {
        let spec = SyntheticFaceSpec::from_seed(master.gen());
        let (image, mut label) = generate_face(&spec).expect("seeded specs are feasible");
        label.image_id = format!("face_{i:04}.ppm");
        items.push(CorpusItem { file_name: label.image_id.clone(), image, label, face_spec: Some(spec) });
    }
    for i in 0..nonfaces {
        let kind = NonFaceKind::ALL[i % NonFaceKind::ALL.len()];
        let (image, mut label) = generate_nonface(kind, master.gen());
        label.image_id = format!("nonface_{i:04}.ppm");
        items.push(CorpusItem { file_name: label.image_id.clone(), image, label, face_spec: None });
    }
    items
}
