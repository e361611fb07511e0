use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::num::NonZeroUsize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use facekit::corpus::generate_corpus;
use facekit::metrics::{evaluate as score, read_manifest, write_manifest};
use facekit::raster::{annotated_path, render_annotated};
use facekit::skin::FaceBox;
use facekit::{load_image, run_pipeline, save_image, AccuracyReport, DetectionRecord, PipelineResult, Rejection};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{OutputFormat, RunConfig};

pub const THREADS_ENV: &str = "FACEKIT_THREADS";

fn emit<T: Serialize>(value: &T, format: OutputFormat, text: impl FnOnce() -> String) -> anyhow::Result<()> {
    let body = match format {
        OutputFormat::Json => serde_json::to_string_pretty(value)? + "\n",
        OutputFormat::Text => text(),
    };
    match io::stdout().lock().write_all(body.as_bytes()) {
        // a closed pipe (`| head`) is not an error worth reporting
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn rejection_code(rejection: &Option<Rejection>) -> ExitCode {
    if rejection.is_some() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn process(image: &Path, cfg: &RunConfig, timing: bool) -> anyhow::Result<PipelineResult> {
    let img = load_image(image).with_context(|| image.display().to_string())?;
    let mut result = run_pipeline(&image.display().to_string(), &img, &cfg.pipeline());
    if !timing {
        result.timing_ms = None;
    }
    Ok(result)
}

#[derive(Serialize)]
struct Detection<'a> {
    image_id: &'a str,
    face_box: Option<FaceBox>,
    rejection: &'a Option<Rejection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing_ms: Option<f64>,
}

fn describe_box(b: &FaceBox) -> String {
    format!("{}x{} at ({}, {}), {} skin pixels", b.width, b.height, b.x0, b.y0, b.pixel_count)
}

pub fn detect(image: &Path, cfg: &RunConfig, timing: bool) -> anyhow::Result<ExitCode> {
    let r = process(image, cfg, timing)?;
    let out = Detection { image_id: &r.image_id, face_box: r.face_box, rejection: &r.rejection, timing_ms: r.timing_ms };
    emit(&out, cfg.format, || match (&r.face_box, &r.rejection) {
        (Some(b), rej) if b.is_face() => match rej {
            None => format!("{}: face {}\n", r.image_id, describe_box(b)),
            Some(rej) => format!("{}: face {}, rejected later: {rej}\n", r.image_id, describe_box(b)),
        },
        (_, Some(rej)) => format!("{}: not a face ({rej})\n", r.image_id),
        (_, None) => unreachable!("only accepted faces finish without a rejection"),
    })?;
    Ok(rejection_code(&r.rejection))
}

fn features_text(r: &PipelineResult) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "image: {}", r.image_id);
    match &r.face_box {
        Some(b) => {
            let _ = writeln!(s, "face box: {}", describe_box(b));
        }
        None => s.push_str("face box: none\n"),
    }
    if let Some(rej) = &r.rejection {
        let _ = writeln!(s, "rejected: {rej}");
    }
    if let Some(rois) = &r.rois {
        for (tag, rect) in rois.iter() {
            let _ = writeln!(s, "roi {tag}: x {}..={} y {}..={}", rect.x0, rect.x1(), rect.y0, rect.y1());
        }
    }
    for c in &r.curves {
        let _ = writeln!(s, "curve {}: {} pixels", c.roi, c.pixel_count);
    }
    for tag in &r.missing_curves {
        let _ = writeln!(s, "curve {tag}: missing");
    }
    if let Some(f) = &r.features {
        for p in &f.points {
            let _ = writeln!(s, "point {} {:?}: ({}, {})", p.roi_tag, p.kind, p.position.x, p.position.y);
        }
    }
    if let Some(ms) = r.timing_ms {
        let _ = writeln!(s, "time: {ms:.3} ms");
    }
    s
}

pub fn features(image: &Path, cfg: &RunConfig, timing: bool) -> anyhow::Result<ExitCode> {
    let r = process(image, cfg, timing)?;
    emit(&r, cfg.format, || features_text(&r))?;
    Ok(rejection_code(&r.rejection))
}

#[derive(Serialize)]
struct Annotation<'a> {
    image_id: &'a str,
    output: String,
    rejection: &'a Option<Rejection>,
}

pub fn annotate(image: &Path, output: Option<PathBuf>, cfg: &RunConfig) -> anyhow::Result<ExitCode> {
    let r = process(image, cfg, false)?;
    let output = output.unwrap_or_else(|| {
        let default = annotated_path(image);
        match (&cfg.output_dir, default.file_name()) {
            (Some(dir), Some(name)) => dir.join(name),
            _ => default,
        }
    });
    let img = load_image(image)?;
    let drawn = render_annotated(&img, &r.overlay(), cfg.marker_color)?;
    save_image(&drawn, &output).with_context(|| output.display().to_string())?;
    let out = Annotation { image_id: &r.image_id, output: output.display().to_string(), rejection: &r.rejection };
    emit(&out, cfg.format, || format!("wrote {}\n", out.output))?;
    Ok(rejection_code(&r.rejection))
}

#[derive(Serialize)]
struct Failure {
    image_id: String,
    error: String,
}

#[derive(Serialize)]
struct Evaluation {
    report: AccuracyReport<f64>,
    records: Vec<DetectionRecord>,
    failures: Vec<Failure>,
}

/// Requested jobs, defaulting to the machine's parallelism, capped by
/// [`THREADS_ENV`] when set.
fn worker_count(jobs: Option<NonZeroUsize>) -> anyhow::Result<usize> {
    let wanted = jobs.or_else(|| std::thread::available_parallelism().ok()).map_or(1, NonZeroUsize::get);
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<NonZeroUsize>() {
            Ok(cap) => Ok(wanted.min(cap.get())),
            Err(_) => bail!("{THREADS_ENV} must be a positive integer, got {v:?}"),
        },
        Err(_) => Ok(wanted),
    }
}

pub fn evaluate(manifest: &Path, jobs: Option<NonZeroUsize>, cfg: &RunConfig) -> anyhow::Result<ExitCode> {
    let entries = read_manifest(manifest)?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(worker_count(jobs)?).build()?;
    let pipeline = cfg.pipeline();
    let outcomes: Vec<(DetectionRecord, Option<String>)> = pool.install(|| {
        entries
            .par_iter()
            .map(|entry| {
                let id = &entry.label.image_id;
                match load_image(&entry.path) {
                    Ok(img) => (run_pipeline(id, &img, &pipeline).detection_record(), None),
                    Err(e) => (DetectionRecord::missed(id.clone()), Some(e.to_string())),
                }
            })
            .collect()
    });
    let mut records = Vec::with_capacity(outcomes.len());
    let mut failures = Vec::new();
    for (record, err) in outcomes {
        if let Some(error) = err {
            failures.push(Failure { image_id: record.image_id.clone(), error });
        }
        records.push(record);
    }
    records.sort_by(|a, b| a.image_id.cmp(&b.image_id));
    failures.sort_by(|a, b| a.image_id.cmp(&b.image_id));
    for f in &failures {
        eprintln!("facekit: {}: {}", f.image_id, f.error);
    }
    let labels: Vec<_> = entries.into_iter().map(|e| e.label).collect();
    let report = score::<f64>(&labels, &records)?;
    let out = Evaluation { report, records, failures };
    emit(&out, cfg.format, || {
        let mut s = out.report.to_string();
        if !out.failures.is_empty() {
            let _ = writeln!(s, "{} image(s) failed to load and count as not detected", out.failures.len());
        }
        s
    })?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct Generated {
    manifest: String,
    faces: usize,
    nonfaces: usize,
    seed: u64,
}

pub const MANIFEST_NAME: &str = "manifest.csv";

pub fn generate(faces: usize, nonfaces: usize, seed: u64, dir: &Path, cfg: &RunConfig) -> anyhow::Result<ExitCode> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let items = generate_corpus(faces, nonfaces, seed);
    for item in &items {
        let path = dir.join(&item.file_name);
        save_image(&item.image, &path).with_context(|| path.display().to_string())?;
    }
    let labels: Vec<_> = items.into_iter().map(|i| i.label).collect();
    let manifest = dir.join(MANIFEST_NAME);
    fs::write(&manifest, write_manifest(&labels)).with_context(|| manifest.display().to_string())?;
    let out = Generated { manifest: manifest.display().to_string(), faces, nonfaces, seed };
    emit(&out, cfg.format, || format!("wrote {} faces and {} non-faces, manifest {}\n", faces, nonfaces, out.manifest))?;
    Ok(ExitCode::SUCCESS)
}
