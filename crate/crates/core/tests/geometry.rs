use facekit::num::Rational;
use facekit::roi::{locate_rois, RoiFractions, RoiTag};
use facekit::skin::{gate_verdict, Verdict};

#[test]
fn gate_truth_table() {
    for h in 1..=200u32 {
        for w in 1..=200u32 {
            let accept = h >= 50 && w >= 50 && w <= h && h <= 2 * w;
            assert_eq!(gate_verdict(h, w) == Verdict::Face, accept, "h={h} w={w}");
        }
    }
    assert_eq!(gate_verdict(50, 50), Verdict::Face);
    assert_eq!(gate_verdict(100, 50), Verdict::Face);
}

#[test]
fn roi_layout_holds_for_every_gated_face() {
    let f = RoiFractions::<Rational>::default();
    for w in 50..=200u32 {
        for h in w..=(2 * w).min(200) {
            let rois = locate_rois(w, h, &f).unwrap_or_else(|e| panic!("{w}x{h}: {e}"));
            for (_, r) in rois.iter() {
                assert!(r.fits_within(w, h) && r.area() > 0, "{w}x{h}");
            }
            for (i, (a, ra)) in rois.iter().enumerate() {
                for (b, rb) in rois.iter().skip(i + 1) {
                    assert!(!ra.intersects(&rb), "{a} meets {b} at {w}x{h}");
                }
            }
            assert!(rois.left_eye.y1() < rois.lips.y0 && rois.right_eye.y1() < rois.lips.y0);
            assert!(rois.left_eye.x1() < rois.right_eye.x0);
        }
    }
}

#[test]
fn doubling_moves_boundaries_by_at_most_one_pixel() {
    let f = RoiFractions::<Rational>::default();
    for w in 50..=100u32 {
        for h in w..=(2 * w).min(100) {
            let small = locate_rois(w, h, &f).unwrap();
            let big = locate_rois(2 * w, 2 * h, &f).unwrap();
            for tag in RoiTag::ALL {
                let (s, b) = (small.get(tag), big.get(tag));
                // compare half-open boundaries: start and one-past-end
                for (lo, hi) in [(s.x0, b.x0), (s.y0, b.y0), (s.x1() + 1, b.x1() + 1), (s.y1() + 1, b.y1() + 1)] {
                    assert!((2 * lo).abs_diff(hi) <= 1, "{tag} {w}x{h}");
                }
            }
        }
    }
}
