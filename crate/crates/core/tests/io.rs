use std::fs;

use facekit::raster::{load_image, save_image, Pixel, RasterError, RgbImage};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn random_image_round_trips_through_disk() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let img = RgbImage::from_fn(16, 16, |_, _| Pixel::new(rng.gen(), rng.gen(), rng.gen())).unwrap();
    let path = dir.path().join("random.ppm");
    save_image(&img, &path).unwrap();
    assert_eq!(load_image(&path).unwrap(), img);
}

#[test]
fn one_pixel_image() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dot.ppm");
    save_image(&RgbImage::filled(1, 1, Pixel::new(1, 2, 3)).unwrap(), &path).unwrap();
    let back = load_image(&path).unwrap();
    assert_eq!((back.width(), back.height()), (1, 1));
}

#[test]
fn unwritable_destination_is_io_failure() {
    let dir = tempfile::tempdir().unwrap();
    // a regular file used as a directory fails even with elevated privileges
    let blocker = dir.path().join("file");
    fs::write(&blocker, b"x").unwrap();
    let err = save_image(&RgbImage::filled(2, 2, Pixel::BLACK).unwrap(), blocker.join("out.ppm")).unwrap_err();
    assert!(matches!(err, RasterError::IoFailure(_)), "{err:?}");
}

#[test]
fn load_errors() {
    let dir = tempfile::tempdir().unwrap();
    assert!(matches!(load_image(dir.path().join("absent.ppm")), Err(RasterError::MissingFile(_))));
    let empty = dir.path().join("empty.ppm");
    fs::write(&empty, b"").unwrap();
    assert!(matches!(load_image(&empty), Err(RasterError::CorruptData(_))));
    let text = dir.path().join("hello.txt");
    fs::write(&text, b"hello").unwrap();
    assert!(matches!(load_image(&text), Err(RasterError::UnsupportedFormat(_))));
}

#[test]
fn unknown_extension_cannot_be_written() {
    let dir = tempfile::tempdir().unwrap();
    let err = save_image(&RgbImage::filled(1, 1, Pixel::BLACK).unwrap(), dir.path().join("x.bmp")).unwrap_err();
    assert!(matches!(err, RasterError::UnsupportedFormat(_)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn ppm_round_trip_is_pixel_exact(w in 1u32..20, h in 1u32..20, seed in any::<u64>()) {
        let dir = tempfile::tempdir().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let img = RgbImage::from_fn(w, h, |_, _| Pixel::new(rng.gen(), rng.gen(), rng.gen())).unwrap();
        let path = dir.path().join("img.ppm");
        save_image(&img, &path).unwrap();
        prop_assert_eq!(load_image(&path).unwrap(), img);
    }
}

#[cfg(feature = "png")]
#[test]
fn png_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let img = RgbImage::from_fn(9, 7, |x, y| Pixel::new(x as u8 * 20, y as u8 * 30, 99)).unwrap();
    let path = dir.path().join("img.png");
    save_image(&img, &path).unwrap();
    assert_eq!(load_image(&path).unwrap(), img);
}
