//! Run configuration. Layers, lowest first: built-in defaults, a
//! `key=value` file, command-line flags.

use std::num::NonZeroU32;
use std::path::PathBuf;

use clap::ValueEnum;
use facekit::num::Fraction;
use facekit::roi::FRACTION_KEYS;
use facekit::{Pixel, PipelineConfig, Rational, RoiFractions, SkinConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub skin: SkinConfig,
    pub fractions: RoiFractions<Rational>,
    pub format: OutputFormat,
    pub marker_color: Pixel,
    pub output_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            skin: SkinConfig::default(),
            fractions: RoiFractions::default(),
            format: OutputFormat::Json,
            marker_color: Pixel::RED,
            output_dir: None,
        }
    }
}

/// Parses `r,g,b` with each channel in 0..=255.
pub fn parse_color(text: &str) -> Result<Pixel, String> {
    let channels: Vec<&str> = text.split(',').map(str::trim).collect();
    let [r, g, b] = channels[..] else {
        return Err(format!("expected r,g,b, got {text:?}"));
    };
    let channel = |s: &str| s.parse::<u8>().map_err(|_| format!("bad color channel {s:?}"));
    Ok(Pixel::new(channel(r)?, channel(g)?, channel(b)?))
}

impl RunConfig {
    /// Applies a configuration file on top of `self`. Blank lines and lines
    /// starting with `#` are ignored. Fraction fields are validated together
    /// once the whole file is read, so their order does not matter.
    pub fn apply_file(&mut self, text: &str) -> Result<(), String> {
        let mut fractions = self.fractions.values();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let at = |msg: String| format!("line {}: {msg}", i + 1);
            let (key, value) = line.split_once('=').ok_or_else(|| at(format!("expected key=value, got {line:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            if let Some(idx) = FRACTION_KEYS.iter().position(|k| *k == key) {
                fractions[idx] = Rational::parse_decimal(value).ok_or_else(|| at(format!("{key}: bad decimal {value:?}")))?;
            } else {
                self.set(key, value).map_err(at)?;
            }
        }
        self.fractions = RoiFractions::new(fractions).map_err(|e| e.to_string())?;
        Ok(())
    }

    /// Sets one non-fraction field.
    fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "threshold" => self.skin.threshold = value.parse().map_err(|_| format!("threshold: expected 0..=255, got {value:?}"))?,
            "connectivity" => self.skin.connectivity = value.parse()?,
            "min_region_pixels" => {
                self.skin.min_region_pixels =
                    value.parse::<NonZeroU32>().map_err(|_| format!("min_region_pixels: expected a positive integer, got {value:?}"))?
            }
            "format" => self.format = OutputFormat::from_str(value, true)?,
            "marker_color" => self.marker_color = parse_color(value)?,
            "output_dir" => self.output_dir = Some(PathBuf::from(value)),
            other => return Err(format!("unknown key {other:?}")),
        }
        Ok(())
    }

    pub fn pipeline(&self) -> PipelineConfig<Rational> {
        PipelineConfig { skin: self.skin, fractions: self.fractions }
    }
}
