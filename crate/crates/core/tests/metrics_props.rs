use facekit::metrics::{evaluate, score_face_recognition, score_roi_detection, DetectionRecord, GroundTruthLabel, RoiFlags};
use facekit::num::percentage;
use proptest::prelude::*;

fn corpus(faces: usize, nonfaces: usize, bits: &[u8]) -> (Vec<GroundTruthLabel>, Vec<DetectionRecord>) {
    let mut labels = Vec::new();
    let mut records = Vec::new();
    for i in 0..faces + nonfaces {
        let b = bits[i % bits.len()];
        let id = format!("img{i}");
        if i < faces {
            let mut label = GroundTruthLabel::face(&id);
            label.expected_rois.lips = b & 16 == 0;
            labels.push(label);
            let detected = b & 1 != 0;
            let found = if detected {
                RoiFlags { left_eye: b & 2 != 0, right_eye: b & 4 != 0, lips: b & 8 != 0 }
            } else {
                RoiFlags::NONE
            };
            records.push(DetectionRecord { image_id: id, face_detected: detected, rois_found: found });
        } else {
            labels.push(GroundTruthLabel::non_face(&id));
            records.push(DetectionRecord { image_id: id, face_detected: b & 1 != 0, rois_found: RoiFlags::NONE });
        }
    }
    (labels, records)
}

fn shuffle<T: Clone>(v: &[T], key: &[u32]) -> Vec<T> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by_key(|&i| (key[i % key.len()].wrapping_mul(i as u32 + 1), i));
    idx.into_iter().map(|i| v[i].clone()).collect()
}

#[test]
fn roi_rates_with_every_roi_expected() {
    let (labels, mut records) = corpus(8, 0, &[1 | 2 | 4 | 8]);
    for r in records.iter_mut().skip(6) {
        r.rois_found.left_eye = false;
    }
    records[7].rois_found.right_eye = false;
    let s = score_roi_detection::<f64>(&labels, &records).unwrap();
    assert_eq!((s.roi_l_eye, s.roi_r_eye, s.roi_lip), (6, 7, 8));
    assert_eq!((s.a_l_eye, s.a_r_eye, s.a_lip), (Some(75.0), Some(87.5), Some(100.0)));
}

/// |r - 100·count/n| <= ulp(r), decided in integers from r = m·2^e.
fn within_one_ulp(r: f64, count: u64, n: u64) -> bool {
    use num_traits::Float;
    if r == 0.0 {
        return count == 0;
    }
    let (m, e, sign) = r.integer_decode();
    assert_eq!(sign, 1);
    let (m, n, target) = (m as i128, n as i128, 100 * count as i128);
    if e >= 0 {
        ((m << e) * n - target).abs() <= n << e
    } else {
        (m * n - (target << -e)).abs() <= n
    }
}

#[test]
fn rates_through_the_scorer_are_exact() {
    for n in 1..=12usize {
        for hit in 0..=n {
            let labels: Vec<_> = (0..n).map(|i| GroundTruthLabel::face(format!("{i}"))).collect();
            let records: Vec<_> = (0..n)
                .map(|i| DetectionRecord { image_id: format!("{i}"), face_detected: i < hit, rois_found: RoiFlags::NONE })
                .collect();
            let a_f = score_face_recognition::<f64>(&labels, &records).unwrap().a_f.unwrap();
            assert!(within_one_ulp(a_f, hit as u64, n as u64), "{hit}/{n}");
        }
    }
}

proptest! {
    #[test]
    fn permutation_invariance(faces in 0usize..20, nonfaces in 0usize..20, bits in proptest::collection::vec(any::<u8>(), 1..40), key in proptest::collection::vec(any::<u32>(), 1..40)) {
        prop_assume!(faces + nonfaces > 0);
        let (labels, records) = corpus(faces, nonfaces, &bits);
        let a = evaluate::<f64>(&labels, &records).unwrap();
        let b = evaluate::<f64>(&shuffle(&labels, &key), &shuffle(&records, &key[1..].iter().chain(&key[..1]).copied().collect::<Vec<_>>())).unwrap();
        prop_assert_eq!(a, b);
        prop_assert!(a.counts_consistent());
    }

    #[test]
    fn flipping_one_detection_adds_one_nth(faces in 1usize..50, bits in proptest::collection::vec(any::<u8>(), 1..40), pick in any::<usize>()) {
        let (labels, mut records) = corpus(faces, 3, &bits);
        let undetected: Vec<usize> = (0..faces).filter(|&i| !records[i].face_detected).collect();
        prop_assume!(!undetected.is_empty());
        let before = score_face_recognition::<f64>(&labels, &records).unwrap();
        records[undetected[pick % undetected.len()]].face_detected = true;
        let after = score_face_recognition::<f64>(&labels, &records).unwrap();
        prop_assert_eq!(after.i_f, before.i_f + 1);
        let step = after.a_f.unwrap() - before.a_f.unwrap();
        prop_assert!((step - 100.0 / faces as f64).abs() < 1e-9);
    }

    #[test]
    fn rate_is_within_one_ulp(n in 1u64..=1_000_000, frac in 0.0f64..=1.0) {
        let count = ((n as f64) * frac) as u64;
        let r = percentage::<f64>(count, n).unwrap();
        prop_assert!(within_one_ulp(r, count, n));
        prop_assert!((0.0..=100.0).contains(&r));
    }
}
