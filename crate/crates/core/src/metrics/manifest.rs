//! Ground-truth manifest: `image_path,is_face,left_eye,right_eye,lips` per
//! line with `0|1` flags. Lines starting with `#` and blank lines are skipped.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use super::{GroundTruthLabel, RoiFlags};

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("cannot read manifest {0}: {1}")]
    Io(PathBuf, std::io::Error),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    /// Image location resolved against the manifest's directory.
    pub path: PathBuf,
    /// `image_id` is the path exactly as written in the manifest.
    pub label: GroundTruthLabel,
}

fn flag(field: &str, name: &str, line: usize) -> Result<bool, ManifestError> {
    match field.trim() {
        "0" => Ok(false),
        "1" => Ok(true),
        other => Err(ManifestError::Syntax { line, message: format!("{name} must be 0 or 1, got {other:?}") }),
    }
}

pub fn parse_manifest(text: &str, base_dir: &Path) -> Result<Vec<ManifestEntry>, ManifestError> {
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').collect();
        if fields.len() != 5 {
            return Err(ManifestError::Syntax { line, message: format!("expected 5 fields, got {}", fields.len()) });
        }
        let id = fields[0].trim();
        if id.is_empty() {
            return Err(ManifestError::Syntax { line, message: "empty image path".into() });
        }
        let is_face = flag(fields[1], "is_face", line)?;
        let expected_rois = RoiFlags {
            left_eye: flag(fields[2], "left_eye", line)?,
            right_eye: flag(fields[3], "right_eye", line)?,
            lips: flag(fields[4], "lips", line)?,
        };
        if !is_face && !expected_rois.is_empty() {
            return Err(ManifestError::Syntax { line, message: "non-face image cannot expect ROIs".into() });
        }
        entries.push(ManifestEntry {
            path: base_dir.join(id),
            label: GroundTruthLabel { image_id: id.to_string(), is_face, expected_rois },
        });
    }
    Ok(entries)
}

pub fn read_manifest(path: &Path) -> Result<Vec<ManifestEntry>, ManifestError> {
    let text = fs::read_to_string(path).map_err(|e| ManifestError::Io(path.to_path_buf(), e))?;
    let base = path.parent().unwrap_or_else(|| Path::new(""));
    parse_manifest(&text, base)
}

pub fn write_manifest(labels: &[GroundTruthLabel]) -> String {
    let mut out = String::from("# image_path,is_face,left_eye,right_eye,lips\n");
    for l in labels {
        let b = |v: bool| u8::from(v);
        let r = &l.expected_rois;
        let _ = writeln!(out, "{},{},{},{},{}", l.image_id, b(l.is_face), b(r.left_eye), b(r.right_eye), b(r.lips));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_relative_paths() {
        let text = "# header\n\nfaces/a.ppm,1,1,1,0\n  b.ppm , 0,0,0,0 \n";
        let entries = parse_manifest(text, Path::new("/data")).unwrap();
        assert_eq!(entries.len(), 2);
        assert_eq!(entries[0].path, PathBuf::from("/data/faces/a.ppm"));
        assert_eq!(entries[0].label.image_id, "faces/a.ppm");
        assert!(entries[0].label.is_face);
        assert!(!entries[0].label.expected_rois.lips);
        assert_eq!(entries[1].label, GroundTruthLabel::non_face("b.ppm"));
    }

    #[test]
    fn rejects_malformed_lines() {
        for bad in ["a.ppm,1,1,1", "a.ppm,2,1,1,1", "a.ppm,0,1,0,0", ",1,1,1,1"] {
            assert!(matches!(parse_manifest(bad, Path::new(".")), Err(ManifestError::Syntax { line: 1, .. })), "{bad}");
        }
    }

    #[test]
    fn written_manifest_parses_back() {
        let labels = vec![GroundTruthLabel::face("f.ppm"), GroundTruthLabel::non_face("n.ppm")];
        let parsed: Vec<_> = parse_manifest(&write_manifest(&labels), Path::new("."))
            .unwrap()
            .into_iter()
            .map(|e| e.label)
            .collect();
        assert_eq!(parsed, labels);
    }
}
