//! Netpbm (P2/P3/P5/P6) decoding, P6 encoding, and optional PNG support.

use std::fs;
use std::io::ErrorKind;
use std::path::{Path, PathBuf};

use super::{Pixel, RasterError, RgbImage};

const PNG_SIGNATURE: &[u8] = b"\x89PNG\r\n\x1a\n";

pub fn load_image(path: impl AsRef<Path>) -> Result<RgbImage, RasterError> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| match e.kind() {
        ErrorKind::NotFound => RasterError::MissingFile(path.display().to_string()),
        _ => RasterError::IoFailure(format!("{}: {e}", path.display())),
    })?;
    decode_image(&bytes)
}

/// Decodes an in-memory image, sniffing the format from its magic bytes.
pub fn decode_image(bytes: &[u8]) -> Result<RgbImage, RasterError> {
    if bytes.is_empty() {
        return Err(RasterError::CorruptData("empty input".into()));
    }
    if bytes.starts_with(PNG_SIGNATURE) {
        return decode_png(bytes);
    }
    match bytes {
        [b'P', b'2', ..] => decode_pnm(bytes, PnmKind::Ascii, 1),
        [b'P', b'3', ..] => decode_pnm(bytes, PnmKind::Ascii, 3),
        [b'P', b'5', ..] => decode_pnm(bytes, PnmKind::Binary, 1),
        [b'P', b'6', ..] => decode_pnm(bytes, PnmKind::Binary, 3),
        [b'P', d, ..] if d.is_ascii_digit() => {
            Err(RasterError::UnsupportedFormat(format!("netpbm variant P{}", *d as char)))
        }
        [b'P'] => Err(RasterError::CorruptData("truncated magic".into())),
        _ => Err(RasterError::UnsupportedFormat("unrecognized magic number".into())),
    }
}

#[derive(Clone, Copy, PartialEq)]
enum PnmKind {
    Ascii,
    Binary,
}

struct Tokens<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Tokens<'a> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.data.get(self.pos) {
            if b == b'#' {
                while self.data.get(self.pos).is_some_and(|&c| c != b'\n') {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn next_uint(&mut self, what: &str) -> Result<u32, RasterError> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.data.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(RasterError::CorruptData(match self.data.get(self.pos) {
                None => format!("unexpected end of data reading {what}"),
                Some(b) => format!("unexpected byte {:?} reading {what}", *b as char),
            }));
        }
        std::str::from_utf8(&self.data[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| RasterError::CorruptData(format!("{what} out of range")))
    }
}

fn decode_pnm(bytes: &[u8], kind: PnmKind, channels: usize) -> Result<RgbImage, RasterError> {
    let mut tokens = Tokens { data: bytes, pos: 2 };
    let width = tokens.next_uint("width")?;
    let height = tokens.next_uint("height")?;
    let maxval = tokens.next_uint("maxval")?;
    if width == 0 || height == 0 {
        return Err(RasterError::CorruptData(format!("zero dimension {width}x{height}")));
    }
    if maxval == 0 {
        return Err(RasterError::CorruptData("maxval 0".into()));
    }
    if maxval > 255 {
        return Err(RasterError::UnsupportedFormat(format!("maxval {maxval} (16-bit samples)")));
    }
    let samples = (width as usize)
        .checked_mul(height as usize)
        .and_then(|n| n.checked_mul(channels))
        .ok_or_else(|| RasterError::CorruptData("dimensions overflow".into()))?;

    let raw: Vec<u32> = match kind {
        PnmKind::Ascii => {
            let mut v = Vec::with_capacity(samples.min(1 << 24));
            for _ in 0..samples {
                v.push(tokens.next_uint("sample")?);
            }
            v
        }
        PnmKind::Binary => {
            // exactly one whitespace byte separates the header from the raster
            match bytes.get(tokens.pos) {
                Some(b) if b.is_ascii_whitespace() => {}
                _ => return Err(RasterError::CorruptData("missing header terminator".into())),
            }
            let start = tokens.pos + 1;
            let body = bytes
                .get(start..start + samples)
                .ok_or_else(|| RasterError::CorruptData("truncated raster data".into()))?;
            body.iter().map(|&b| u32::from(b)).collect()
        }
    };

    let scale = |s: u32| -> Result<u8, RasterError> {
        if s > maxval {
            return Err(RasterError::CorruptData(format!("sample {s} exceeds maxval {maxval}")));
        }
        Ok(((s * 255 + maxval / 2) / maxval) as u8)
    };
    let mut pixels = Vec::with_capacity(samples / channels);
    for chunk in raw.chunks_exact(channels) {
        pixels.push(if channels == 3 {
            Pixel::new(scale(chunk[0])?, scale(chunk[1])?, scale(chunk[2])?)
        } else {
            Pixel::gray(scale(chunk[0])?)
        });
    }
    RgbImage::from_pixels(width, height, pixels)
}

/// Binary P6 encoding with maxval 255.
pub fn encode_ppm(image: &RgbImage) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", image.width(), image.height()).into_bytes();
    out.reserve(image.pixels().len() * 3);
    for p in image.pixels() {
        out.extend_from_slice(&[p.r, p.g, p.b]);
    }
    out
}

/// Writes `image` in the format implied by the extension of `path`.
pub fn save_image(image: &RgbImage, path: impl AsRef<Path>) -> Result<(), RasterError> {
    let path = path.as_ref();
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase)
        .unwrap_or_default();
    let bytes = match ext.as_str() {
        "ppm" | "pnm" => encode_ppm(image),
        "png" => encode_png(image)?,
        other => return Err(RasterError::UnsupportedFormat(format!("cannot write extension {other:?}"))),
    };
    fs::write(path, bytes).map_err(|e| RasterError::IoFailure(format!("{}: {e}", path.display())))
}

/// `dir/face.ppm` becomes `dir/face.annotated.ppm`.
pub fn annotated_path(path: &Path) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}.annotated.{}", ext.to_string_lossy()),
        None => format!("{stem}.annotated"),
    };
    path.with_file_name(name)
}

#[cfg(feature = "png")]
fn decode_png(bytes: &[u8]) -> Result<RgbImage, RasterError> {
    use png::{BitDepth, ColorType, Transformations};

    let mut decoder = png::Decoder::new(bytes);
    decoder.set_transformations(Transformations::EXPAND | Transformations::STRIP_16);
    let mut reader = decoder.read_info().map_err(|e| RasterError::CorruptData(e.to_string()))?;
    let mut buf = vec![0; reader.output_buffer_size()];
    let info = reader.next_frame(&mut buf).map_err(|e| RasterError::CorruptData(e.to_string()))?;
    if info.bit_depth != BitDepth::Eight {
        return Err(RasterError::UnsupportedFormat(format!("png bit depth {:?}", info.bit_depth)));
    }
    let data = &buf[..info.buffer_size()];
    let pixels: Vec<Pixel> = match info.color_type {
        ColorType::Rgb => data.chunks_exact(3).map(|c| Pixel::new(c[0], c[1], c[2])).collect(),
        ColorType::Rgba => data.chunks_exact(4).map(|c| Pixel::new(c[0], c[1], c[2])).collect(),
        ColorType::Grayscale => data.iter().map(|&v| Pixel::gray(v)).collect(),
        ColorType::GrayscaleAlpha => data.chunks_exact(2).map(|c| Pixel::gray(c[0])).collect(),
        ColorType::Indexed => return Err(RasterError::UnsupportedFormat("unexpanded palette png".into())),
    };
    RgbImage::from_pixels(info.width, info.height, pixels)
}

#[cfg(not(feature = "png"))]
fn decode_png(_bytes: &[u8]) -> Result<RgbImage, RasterError> {
    Err(RasterError::UnsupportedFormat("png support not compiled in".into()))
}

#[cfg(feature = "png")]
fn encode_png(image: &RgbImage) -> Result<Vec<u8>, RasterError> {
    let mut out = Vec::new();
    {
        let mut encoder = png::Encoder::new(&mut out, image.width(), image.height());
        encoder.set_color(png::ColorType::Rgb);
        encoder.set_depth(png::BitDepth::Eight);
        let mut writer = encoder.write_header().map_err(|e| RasterError::IoFailure(e.to_string()))?;
        let data: Vec<u8> = image.pixels().iter().flat_map(|p| [p.r, p.g, p.b]).collect();
        writer.write_image_data(&data).map_err(|e| RasterError::IoFailure(e.to_string()))?;
    }
    Ok(out)
}

#[cfg(not(feature = "png"))]
fn encode_png(_image: &RgbImage) -> Result<Vec<u8>, RasterError> {
    Err(RasterError::UnsupportedFormat("png support not compiled in".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_ppm_decodes_in_xy_order() {
        let img = decode_image(b"P3 2 2 255 0 0 0 255 255 255 10 20 30 0 0 0").unwrap();
        assert_eq!((img.width(), img.height()), (2, 2));
        assert_eq!(img.pixel(0, 0), Pixel::BLACK);
        assert_eq!(img.pixel(1, 0), Pixel::WHITE);
        assert_eq!(img.pixel(0, 1), Pixel::new(10, 20, 30));
    }

    #[test]
    fn comments_and_whitespace_in_header() {
        let img = decode_image(b"P3\n# a comment\n1 1 # trailing\n255\n1 2 3\n").unwrap();
        assert_eq!(img.pixel(0, 0), Pixel::new(1, 2, 3));
    }

    #[test]
    fn grayscale_is_promoted_by_replication() {
        let img = decode_image(b"P2 2 1 255 7 200").unwrap();
        assert_eq!(img.pixel(0, 0), Pixel::gray(7));
        let img = decode_image(b"P5 1 1 255\n\x2a").unwrap();
        assert_eq!(img.pixel(0, 0), Pixel::gray(42));
    }

    #[test]
    fn small_maxval_is_rescaled() {
        let img = decode_image(b"P3 1 1 1 1 0 1").unwrap();
        assert_eq!(img.pixel(0, 0), Pixel::new(255, 0, 255));
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(decode_image(b""), Err(RasterError::CorruptData(_))));
        assert!(matches!(decode_image(b"hello"), Err(RasterError::UnsupportedFormat(_))));
        assert!(matches!(decode_image(b"P6 2 2 255\n\x01\x02"), Err(RasterError::CorruptData(_))));
        assert!(matches!(decode_image(b"P3 2 2 255 1 2"), Err(RasterError::CorruptData(_))));
        assert!(matches!(decode_image(b"P3 1 1 255 256 0 0"), Err(RasterError::CorruptData(_))));
        assert!(matches!(decode_image(b"P3 0 1 255"), Err(RasterError::CorruptData(_))));
        assert!(matches!(decode_image(b"P6 1 1 65535\n\0\0\0\0\0\0"), Err(RasterError::UnsupportedFormat(_))));
        assert!(matches!(decode_image(b"P4 1 1\n\0"), Err(RasterError::UnsupportedFormat(_))));
        assert!(matches!(decode_image(b"P"), Err(RasterError::CorruptData(_))));
    }

    #[test]
    fn p6_round_trip_in_memory() {
        let img = RgbImage::from_fn(3, 2, |x, y| Pixel::new(x as u8 * 40, y as u8 * 90, 13)).unwrap();
        assert_eq!(decode_image(&encode_ppm(&img)).unwrap(), img);
    }

    #[test]
    fn annotated_suffix() {
        assert_eq!(annotated_path(Path::new("a/face.ppm")), PathBuf::from("a/face.annotated.ppm"));
        assert_eq!(annotated_path(Path::new("face")), PathBuf::from("face.annotated"));
    }

    #[cfg(not(feature = "png"))]
    #[test]
    fn png_requires_feature() {
        let mut bytes = PNG_SIGNATURE.to_vec();
        bytes.extend_from_slice(b"rest");
        assert!(matches!(decode_image(&bytes), Err(RasterError::UnsupportedFormat(_))));
    }
}
