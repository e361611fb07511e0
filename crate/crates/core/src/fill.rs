//! Queue-based scanline flood fill and per-ROI curve extraction.
//!
//! The fill recolors whole east-west spans and queues the north and south
//! neighbours of every recolored cell, which reaches exactly the
//! 4-connected component of the start cell.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::raster::{BinaryMask, Cell, Point, Rect};
use crate::roi::{RoiSet, RoiTag};

pub type Color = u32;

/// Grid color of White (skin) mask cells.
pub const WHITE: Color = 0;
/// Grid color of Black (non-skin) mask cells.
pub const BLACK: Color = 1;
/// First color free for visitation labels.
pub const FIRST_LABEL: Color = 2;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FillError {
    #[error("start {0:?} lies outside the fill window")]
    OutOfBounds(Point),
    /// Target equals replacement; the grid is left as is.
    #[error("target and replacement colors are equal; nothing to do")]
    NoOpFill,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid {
    width: u32,
    height: u32,
    cells: Vec<Color>,
}

impl Grid {
    /// Panics if `cells.len() != width * height`.
    pub fn new(width: u32, height: u32, cells: Vec<Color>) -> Self {
        assert_eq!(cells.len(), width as usize * height as usize, "grid size mismatch");
        Grid { width, height, cells }
    }

    pub fn filled(width: u32, height: u32, color: Color) -> Self {
        Grid::new(width, height, vec![color; width as usize * height as usize])
    }

    pub fn from_mask(mask: &BinaryMask) -> Self {
        let cells = mask
            .cells()
            .iter()
            .map(|c| match c {
                Cell::White => WHITE,
                Cell::Black => BLACK,
            })
            .collect();
        Grid::new(mask.width(), mask.height(), cells)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn cells(&self) -> &[Color] {
        &self.cells
    }

    pub fn bounds(&self) -> Rect {
        Rect::new(0, 0, self.width, self.height)
    }

    pub fn get(&self, x: u32, y: u32) -> Color {
        self.cells[self.idx(x, y)]
    }

    pub fn set(&mut self, x: u32, y: u32, c: Color) {
        let i = self.idx(x, y);
        self.cells[i] = c;
    }

    fn idx(&self, x: u32, y: u32) -> usize {
        y as usize * self.width as usize + x as usize
    }
}

/// One recolored run `[x_west, x_east]` on row `y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub y: u32,
    pub x_west: u32,
    pub x_east: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FillStats {
    pub spans: Vec<Span>,
    pub recolored: usize,
    /// Total pushes onto the work queue, including the start node.
    pub enqueued: usize,
}

/// Flood fill on a copy of `grid`.
pub fn scanline_flood_fill(grid: &Grid, start: Point, target: Color, replacement: Color) -> Result<Grid, FillError> {
    let mut out = grid.clone();
    flood_fill_within(&mut out, grid.bounds(), start, target, replacement)?;
    Ok(out)
}

/// In-place flood fill that treats the edges of `window` as the grid edges.
///
/// A start cell whose color is not `target` leaves the grid untouched and
/// reports empty stats.
pub fn flood_fill_within(
    grid: &mut Grid,
    window: Rect,
    start: Point,
    target: Color,
    replacement: Color,
) -> Result<FillStats, FillError> {
    if !window.fits_within(grid.width, grid.height) || !window.contains(start) {
        return Err(FillError::OutOfBounds(start));
    }
    if target == replacement {
        return Err(FillError::NoOpFill);
    }
    let mut stats = FillStats::default();
    if grid.get(start.x, start.y) != target {
        return Ok(stats);
    }

    let mut queue = VecDeque::new();
    queue.push_back(start);
    stats.enqueued += 1;

    while let Some(n) = queue.pop_front() {
        if grid.get(n.x, n.y) != target {
            continue;
        }
        let mut w = n.x;
        while w > window.x0 && grid.get(w - 1, n.y) == target {
            w -= 1;
        }
        let mut e = n.x;
        while e < window.x1() && grid.get(e + 1, n.y) == target {
            e += 1;
        }
        for x in w..=e {
            grid.set(x, n.y, replacement);
        }
        stats.recolored += (e - w + 1) as usize;
        stats.spans.push(Span { y: n.y, x_west: w, x_east: e });
        for x in w..=e {
            if n.y > window.y0 && grid.get(x, n.y - 1) == target {
                queue.push_back(Point::new(x, n.y - 1));
                stats.enqueued += 1;
            }
            if n.y < window.y1() && grid.get(x, n.y + 1) == target {
                queue.push_back(Point::new(x, n.y + 1));
                stats.enqueued += 1;
            }
        }
    }
    Ok(stats)
}

/// Largest 4-connected non-skin component inside one ROI, in face-local
/// coordinates. Cells are stored in row-major order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Curve {
    cells: Vec<Point>,
    roi_tag: RoiTag,
}

impl Curve {
    /// Cells are sorted into row-major order and deduplicated.
    pub fn new(roi_tag: RoiTag, mut cells: Vec<Point>) -> Self {
        cells.sort_by_key(|p| (p.y, p.x));
        cells.dedup();
        Curve { cells, roi_tag }
    }

    pub fn cells(&self) -> &[Point] {
        &self.cells
    }

    pub fn roi_tag(&self) -> RoiTag {
        self.roi_tag
    }

    pub fn pixel_count(&self) -> usize {
        self.cells.len()
    }

    pub fn contains(&self, p: Point) -> bool {
        self.cells.binary_search_by_key(&(p.y, p.x), |c| (c.y, c.x)).is_ok()
    }

    pub fn translated(&self, dx: u32, dy: u32) -> Curve {
        Curve { cells: self.cells.iter().map(|p| p.offset(dx, dy)).collect(), roi_tag: self.roi_tag }
    }
}

fn spans_to_cells(spans: &[Span]) -> Vec<Point> {
    spans.iter().flat_map(|s| (s.x_west..=s.x_east).map(move |x| Point::new(x, s.y))).collect()
}

/// Largest non-skin component of one ROI of `grid`, labelling every
/// component it visits with fresh colors starting at `*next_label`.
fn largest_in_roi(grid: &mut Grid, roi: Rect, next_label: &mut Color) -> Option<Vec<Point>> {
    let mut best: Option<Vec<Point>> = None;
    for y in roi.y0..=roi.y1() {
        for x in roi.x0..=roi.x1() {
            if grid.get(x, y) != BLACK {
                continue;
            }
            let label = *next_label;
            *next_label += 1;
            let stats = flood_fill_within(grid, roi, Point::new(x, y), BLACK, label)
                .expect("start is inside the ROI and labels differ from BLACK");
            // strict comparison keeps the earliest component (topmost, then leftmost seed) on ties
            if best.as_ref().is_none_or(|b| stats.recolored > b.len()) {
                best = Some(spans_to_cells(&stats.spans));
            }
        }
    }
    best
}

/// One curve per ROI that contains at least one non-skin cell, ordered
/// left eye, right eye, lips. Fills never leave their ROI.
pub fn extract_curves(face_mask: &BinaryMask, rois: &RoiSet) -> Vec<Curve> {
    let mut grid = Grid::from_mask(face_mask);
    let mut next_label = FIRST_LABEL;
    let mut curves = Vec::new();
    for (tag, rect) in rois.iter() {
        if !rect.fits_within(grid.width, grid.height) {
            continue;
        }
        if let Some(cells) = largest_in_roi(&mut grid, rect, &mut next_label) {
            curves.push(Curve::new(tag, cells));
        }
    }
    curves
}
