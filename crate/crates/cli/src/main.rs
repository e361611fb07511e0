//! `facekit` command-line front end.
//!
//! Exit codes: 0 success, 1 the pipeline rejected the image (single-image
//! commands only), 2 usage or I/O error.

mod commands;
mod config;

use std::fs;
use std::num::{NonZeroU32, NonZeroUsize};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use facekit::skin::Connectivity;
use facekit::Pixel;

use config::{parse_color, OutputFormat, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "facekit", version, about = "Skin-threshold face localization and feature-point extraction")]
struct Cli {
    /// `key=value` configuration file, applied before the flags below.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Omit timing fields so output is byte-stable.
    #[arg(long, global = true)]
    no_timing: bool,
    /// Skin threshold T on the channel average.
    #[arg(long, global = true)]
    threshold: Option<u8>,
    /// Component connectivity: four or eight.
    #[arg(long, global = true)]
    connectivity: Option<Connectivity>,
    #[arg(long, global = true)]
    min_region_pixels: Option<NonZeroU32>,
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Overlay color as r,g,b.
    #[arg(long, global = true, value_parser = parse_color)]
    marker_color: Option<Pixel>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Report whether the image contains a face and where.
    Detect { image: PathBuf },
    /// Run the full pipeline and print every intermediate result.
    Features { image: PathBuf },
    /// Write a copy of the image with face box, ROI boxes and feature points drawn.
    Annotate {
        image: PathBuf,
        /// Defaults to `<stem>.annotated.<ext>` next to the input or in `output_dir`.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Score the pipeline against a ground-truth manifest.
    Evaluate {
        manifest: PathBuf,
        /// Worker threads; `FACEKIT_THREADS` caps this.
        #[arg(long)]
        jobs: Option<NonZeroUsize>,
    },
    /// Write a seeded synthetic corpus and its manifest.
    Generate {
        #[arg(long)]
        faces: usize,
        #[arg(long)]
        nonfaces: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Defaults to `output_dir` from the configuration.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn resolve_config(cli: &Cli) -> anyhow::Result<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &cli.config {
        let text = fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
        cfg.apply_file(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
    }
    if let Some(t) = cli.threshold {
        cfg.skin.threshold = t;
    }
    if let Some(c) = cli.connectivity {
        cfg.skin.connectivity = c;
    }
    if let Some(m) = cli.min_region_pixels {
        cfg.skin.min_region_pixels = m;
    }
    if let Some(f) = cli.format {
        cfg.format = f;
    }
    if let Some(c) = cli.marker_color {
        cfg.marker_color = c;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let cfg = resolve_config(&cli)?;
    let timing = !cli.no_timing;
    match cli.command {
        Command::Detect { image } => commands::detect(&image, &cfg, timing),
        Command::Features { image } => commands::features(&image, &cfg, timing),
        Command::Annotate { image, output } => commands::annotate(&image, output, &cfg),
        Command::Evaluate { manifest, jobs } => commands::evaluate(&manifest, jobs, &cfg),
        Command::Generate { faces, nonfaces, seed, output } => {
            let dir = output
                .or_else(|| cfg.output_dir.clone())
                .context("generate needs -o <dir> or output_dir in the config")?;
            commands::generate(faces, nonfaces, seed, &dir, &cfg)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("facekit: {e:#}");
            ExitCode::from(2)
        }
    }
}
