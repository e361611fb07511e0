//! Pixel grids: RGB images, binary masks, thresholding and overlay rendering.
//!
//! Coordinates are `(x, y)` with `x` the column (growing east) and `y` the
//! row (growing south), origin at the top-left corner.

mod codec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use codec::{annotated_path, decode_image, encode_ppm, load_image, save_image};

#[derive(Debug, Error)]
pub enum RasterError {
    #[error("missing file: {0}")]
    MissingFile(String),
    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),
    #[error("corrupt data: {0}")]
    CorruptData(String),
    #[error("i/o failure: {0}")]
    IoFailure(String),
    #[error("out of bounds: {0}")]
    OutOfBounds(String),
    #[error("invalid dimensions {width}x{height}")]
    InvalidDimensions { width: u32, height: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Pixel {
    pub r: u8,
    pub g: u8,
    pub b: u8,
}

impl Pixel {
    pub const BLACK: Pixel = Pixel::new(0, 0, 0);
    pub const WHITE: Pixel = Pixel::new(255, 255, 255);
    pub const RED: Pixel = Pixel::new(255, 0, 0);

    pub const fn new(r: u8, g: u8, b: u8) -> Self {
        Pixel { r, g, b }
    }

    pub const fn gray(v: u8) -> Self {
        Pixel { r: v, g: v, b: v }
    }

    /// Channel sum; the average is `channel_sum() / 3`.
    pub const fn channel_sum(self) -> u32 {
        self.r as u32 + self.g as u32 + self.b as u32
    }
}

/// Pixel coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point {
    pub x: u32,
    pub y: u32,
}

impl Point {
    pub const fn new(x: u32, y: u32) -> Self {
        Point { x, y }
    }

    pub fn offset(self, dx: u32, dy: u32) -> Self {
        Point::new(self.x + dx, self.y + dy)
    }
}

/// Axis-aligned rectangle with a non-zero size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rect {
    pub x0: u32,
    pub y0: u32,
    pub width: u32,
    pub height: u32,
}

impl Rect {
    pub const fn new(x0: u32, y0: u32, width: u32, height: u32) -> Self {
        Rect { x0, y0, width, height }
    }

    /// Builds a rectangle from inclusive corner coordinates.
    pub fn from_corners(x0: u32, y0: u32, x1: u32, y1: u32) -> Self {
        debug_assert!(x1 >= x0 && y1 >= y0);
        Rect::new(x0, y0, x1 - x0 + 1, y1 - y0 + 1)
    }

    /// Last column (inclusive).
    pub fn x1(&self) -> u32 {
        self.x0 + self.width - 1
    }

    /// Last row (inclusive).
    pub fn y1(&self) -> u32 {
        self.y0 + self.height - 1
    }

    pub fn area(&self) -> u64 {
        u64::from(self.width) * u64::from(self.height)
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.x0 && p.x <= self.x1() && p.y >= self.y0 && p.y <= self.y1()
    }

    /// Whether this rectangle lies fully inside a `width`×`height` grid.
    pub fn fits_within(&self, width: u32, height: u32) -> bool {
        self.width >= 1
            && self.height >= 1
            && u64::from(self.x0) + u64::from(self.width) <= u64::from(width)
            && u64::from(self.y0) + u64::from(self.height) <= u64::from(height)
    }

    pub fn intersects(&self, other: &Rect) -> bool {
        self.x0 <= other.x1() && other.x0 <= self.x1() && self.y0 <= other.y1() && other.y0 <= self.y1()
    }

    pub fn translate(&self, dx: u32, dy: u32) -> Rect {
        Rect::new(self.x0 + dx, self.y0 + dy, self.width, self.height)
    }
}

fn check_dimensions(width: u32, height: u32) -> Result<usize, RasterError> {
    if width == 0 || height == 0 {
        return Err(RasterError::InvalidDimensions { width, height });
    }
    usize::try_from(u64::from(width) * u64::from(height))
        .map_err(|_| RasterError::InvalidDimensions { width, height })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    width: u32,
    height: u32,
    pixels: Vec<Pixel>,
}

impl RgbImage {
    pub fn filled(width: u32, height: u32, fill: Pixel) -> Result<Self, RasterError> {
        let len = check_dimensions(width, height)?;
        Ok(RgbImage { width, height, pixels: vec![fill; len] })
    }

    pub fn from_pixels(width: u32, height: u32, pixels: Vec<Pixel>) -> Result<Self, RasterError> {
        let len = check_dimensions(width, height)?;
        if pixels.len() != len {
            return Err(RasterError::CorruptData(format!(
                "expected {len} pixels for {width}x{height}, got {}",
                pixels.len()
            )));
        }
        Ok(RgbImage { width, height, pixels })
    }

    pub fn from_fn(width: u32, height: u32, mut f: impl FnMut(u32, u32) -> Pixel) -> Result<Self, RasterError> {
        let len = check_dimensions(width, height)?;
        let mut pixels = Vec::with_capacity(len);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Ok(RgbImage { width, height, pixels })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn pixels(&self) -> &[Pixel] {
        &self.pixels
    }

    fn index(&self, x: u32, y: u32) -> usize {
        y as usize * self.width as usize + x as usize
    }

    pub fn get(&self, x: u32, y: u32) -> Option<Pixel> {
        (x < self.width && y < self.height).then(|| self.pixels[self.index(x, y)])
    }

    /// Panics when `(x, y)` is outside the image.
    pub fn pixel(&self, x: u32, y: u32) -> Pixel {
        self.get(x, y).expect("pixel coordinate out of bounds")
    }

    pub fn set(&mut self, x: u32, y: u32, p: Pixel) {
        let i = self.index(x, y);
        self.pixels[i] = p;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Cell {
    White,
    Black,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMask {
    width: u32,
    height: u32,
    cells: Vec<Cell>,
}

impl BinaryMask {
    pub fn filled(width: u32, height: u32, fill: Cell) -> Result<Self, RasterError> {
        let len = check_dimensions(width, height)?;
        Ok(BinaryMask { width, height, cells: vec![fill; len] })
    }

    pub fn from_cells(width: u32, height: u32, cells: Vec<Cell>) -> Result<Self, RasterError> {
        let len = check_dimensions(width, height)?;
        if cells.len() != len {
            return Err(RasterError::CorruptData(format!(
                "expected {len} cells for {width}x{height}, got {}",
                cells.len()
            )));
        }
        Ok(BinaryMask { width, height, cells })
    }

    /// Parses rows of `#` (White) and `.` (Black). Handy in tests.
    pub fn from_ascii(rows: &[&str]) -> Result<Self, RasterError> {
        let height = rows.len() as u32;
        let width = rows.first().map_or(0, |r| r.len()) as u32;
        let mut cells = Vec::with_capacity((width * height) as usize);
        for row in rows {
            if row.len() as u32 != width {
                return Err(RasterError::CorruptData("ragged mask rows".into()));
            }
            for c in row.bytes() {
                cells.push(match c {
                    b'#' => Cell::White,
                    b'.' => Cell::Black,
                    other => {
                        return Err(RasterError::CorruptData(format!("bad mask glyph {:?}", other as char)))
                    }
                });
            }
        }
        BinaryMask::from_cells(width, height, cells)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn get(&self, x: u32, y: u32) -> Option<Cell> {
        (x < self.width && y < self.height).then(|| self.cells[y as usize * self.width as usize + x as usize])
    }

    /// Panics when `(x, y)` is outside the mask.
    pub fn cell(&self, x: u32, y: u32) -> Cell {
        self.get(x, y).expect("mask coordinate out of bounds")
    }

    pub fn set(&mut self, x: u32, y: u32, c: Cell) {
        let i = y as usize * self.width as usize + x as usize;
        self.cells[i] = c;
    }

    pub fn count(&self, c: Cell) -> usize {
        self.cells.iter().filter(|&&v| v == c).count()
    }

    /// White cells render as (255,255,255), Black as (0,0,0).
    pub fn to_image(&self) -> RgbImage {
        let pixels = self
            .cells
            .iter()
            .map(|c| match c {
                Cell::White => Pixel::WHITE,
                Cell::Black => Pixel::BLACK,
            })
            .collect();
        RgbImage { width: self.width, height: self.height, pixels }
    }

    /// Copies the cells covered by `rect`.
    pub fn sub_mask(&self, rect: Rect) -> Result<BinaryMask, RasterError> {
        if !rect.fits_within(self.width, self.height) {
            return Err(RasterError::OutOfBounds(format!(
                "{rect:?} exceeds {}x{} mask",
                self.width, self.height
            )));
        }
        let mut cells = Vec::with_capacity(rect.area() as usize);
        for y in rect.y0..=rect.y1() {
            let start = y as usize * self.width as usize + rect.x0 as usize;
            cells.extend_from_slice(&self.cells[start..start + rect.width as usize]);
        }
        Ok(BinaryMask { width: rect.width, height: rect.height, cells })
    }
}

/// A pixel is White iff its channel average is at least `threshold`,
/// decided in integers as `r + g + b >= 3 * threshold`.
pub fn binarize(image: &RgbImage, threshold: u8) -> BinaryMask {
    let bound = 3 * u32::from(threshold);
    let cells = image
        .pixels
        .iter()
        .map(|p| if p.channel_sum() >= bound { Cell::White } else { Cell::Black })
        .collect();
    BinaryMask { width: image.width, height: image.height, cells }
}

/// Labelled rectangles and points drawn on top of an image.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overlay {
    pub boxes: Vec<(Rect, String)>,
    pub points: Vec<(Point, String)>,
}

impl Overlay {
    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty() && self.points.is_empty()
    }
}

/// Draws 1-pixel rectangle outlines and 3×3 point markers in `color`.
/// Markers near an edge are clipped to the image.
pub fn render_annotated(image: &RgbImage, overlay: &Overlay, color: Pixel) -> Result<RgbImage, RasterError> {
    for (rect, label) in &overlay.boxes {
        if !rect.fits_within(image.width, image.height) {
            return Err(RasterError::OutOfBounds(format!("box {label:?} {rect:?}")));
        }
    }
    for (p, label) in &overlay.points {
        if p.x >= image.width || p.y >= image.height {
            return Err(RasterError::OutOfBounds(format!("point {label:?} {p:?}")));
        }
    }

    let mut out = image.clone();
    for (rect, _) in &overlay.boxes {
        for x in rect.x0..=rect.x1() {
            out.set(x, rect.y0, color);
            out.set(x, rect.y1(), color);
        }
        for y in rect.y0..=rect.y1() {
            out.set(rect.x0, y, color);
            out.set(rect.x1(), y, color);
        }
    }
    for (p, _) in &overlay.points {
        for y in p.y.saturating_sub(1)..=(p.y + 1).min(image.height - 1) {
            for x in p.x.saturating_sub(1)..=(p.x + 1).min(image.width - 1) {
                out.set(x, y, color);
            }
        }
    }
    Ok(out)
}
