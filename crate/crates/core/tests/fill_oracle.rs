mod common;

use facekit::fill::{extract_curves, flood_fill_within, scanline_flood_fill, FillError, Grid};
use facekit::raster::{BinaryMask, Cell, Point, Rect};
use facekit::roi::{RoiSet, RoiTag};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_grid(rng: &mut ChaCha8Rng) -> (Grid, Point, u32, u32) {
    let (w, h) = (rng.gen_range(1..=64u32), rng.gen_range(1..=64u32));
    let colors = rng.gen_range(2..=4u32);
    let cells = (0..w * h).map(|_| rng.gen_range(0..colors)).collect();
    let start = Point::new(rng.gen_range(0..w), rng.gen_range(0..h));
    (Grid::new(w, h, cells), start, rng.gen_range(0..colors), rng.gen_range(0..colors))
}

#[test]
fn matches_bfs_on_seeded_random_grids() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for case in 0..1500 {
        let (grid, start, _, repl) = random_grid(&mut rng);
        // half the cases fill the start's own color so something is recolored
        let target = if case % 2 == 0 { grid.get(start.x, start.y) } else { rng.gen_range(0..4) };
        let (w, h) = (grid.width() as usize, grid.height() as usize);
        let expected = common::bfs_fill(grid.cells(), w, h, (start.x as usize, start.y as usize), target, repl);
        match scanline_flood_fill(&grid, start, target, repl) {
            Ok(out) => assert_eq!(out.cells(), expected.as_slice(), "case {case}"),
            Err(FillError::NoOpFill) => {
                assert_eq!(target, repl);
                assert_eq!(expected.as_slice(), grid.cells());
            }
            Err(e) => panic!("case {case}: {e}"),
        }
    }
}

fn arb_grid() -> impl Strategy<Value = (Grid, Point, u32, u32)> {
    (1u32..=24, 1u32..=24, 2u32..=4).prop_flat_map(|(w, h, k)| {
        (
            proptest::collection::vec(0..k, (w * h) as usize),
            0..w,
            0..h,
            0..k,
            k..k + 3,
        )
            .prop_map(move |(cells, x, y, target, repl)| (Grid::new(w, h, cells), Point::new(x, y), target, repl))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn fill_is_sound_and_bounded((grid, start, target, repl) in arb_grid()) {
        let mut out = grid.clone();
        let stats = flood_fill_within(&mut out, grid.bounds(), start, target, repl).unwrap();
        let (w, h) = (grid.width() as usize, grid.height() as usize);
        let reach = common::bfs_fill(grid.cells(), w, h, (start.x as usize, start.y as usize), target, u32::MAX);

        for (i, r) in reach.iter().enumerate() {
            let in_component = *r == u32::MAX;
            if in_component {
                prop_assert_eq!(out.cells()[i], repl);
            } else {
                // frame invariance
                prop_assert_eq!(out.cells()[i], grid.cells()[i]);
            }
        }
        // nothing of the target color stays 4-connected to the start
        let again = common::bfs_fill(out.cells(), w, h, (start.x as usize, start.y as usize), target, u32::MAX);
        prop_assert!(!again.contains(&u32::MAX));

        let component = reach.iter().filter(|&&c| c == u32::MAX).count();
        prop_assert_eq!(stats.recolored, component);
        prop_assert!(stats.enqueued <= 2 * grid.cells().len());
        let span_cells: usize = stats.spans.iter().map(|s| (s.x_east - s.x_west + 1) as usize).sum();
        prop_assert_eq!(span_cells, component);
    }

    #[test]
    fn curves_stay_inside_their_roi(
        cells in proptest::collection::vec(prop::bool::weighted(0.6), 30 * 30),
        x0 in 0u32..20, y0 in 0u32..20, rw in 1u32..10, rh in 1u32..10,
    ) {
        let mask = BinaryMask::from_cells(30, 30, cells.iter().map(|&b| if b { Cell::Black } else { Cell::White }).collect()).unwrap();
        let roi = Rect::new(x0, y0, rw, rh);
        let rois = RoiSet { left_eye: roi, right_eye: Rect::new(29, 0, 1, 1), lips: Rect::new(29, 29, 1, 1) };
        for curve in extract_curves(&mask, &rois) {
            let rect = rois.get(curve.roi_tag());
            prop_assert!(curve.cells().iter().all(|p| rect.contains(*p)));
            prop_assert!(curve.cells().iter().all(|p| mask.cell(p.x, p.y) == Cell::Black));
        }
        // the left-eye curve is the largest black component of the ROI viewed on its own
        let sub = mask.sub_mask(roi).unwrap();
        let black: Vec<bool> = sub.cells().iter().map(|&c| c == Cell::Black).collect();
        let labels = common::propagate_labels(&black, rw as usize, rh as usize, false);
        let best = common::component_stats(&labels, rw as usize).into_iter().map(|s| s.0).max();
        let got = extract_curves(&mask, &rois).into_iter().find(|c| c.roi_tag() == RoiTag::LeftEye).map(|c| c.pixel_count() as u64);
        prop_assert_eq!(got, best);
    }
}
