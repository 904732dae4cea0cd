use proptest::prelude::*;
use sir_core::{load_image, save_image, ImagePlane, ImageRGB};

fn byte_image() -> impl Strategy<Value = ImageRGB> {
    (1usize..12, 1usize..12).prop_flat_map(|(w, h)| {
        prop::collection::vec(0u8..=255, w * h * 3).prop_map(move |bytes| {
            let plane = |c: usize| {
                ImagePlane::new(
                    w,
                    h,
                    bytes[c * w * h..(c + 1) * w * h]
                        .iter()
                        .map(|&b| f64::from(b))
                        .collect(),
                )
                .unwrap()
            };
            ImageRGB::new(plane(0), plane(1), plane(2)).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn byte_images_round_trip(img in byte_image(), ppm in any::<bool>()) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join(if ppm { "x.ppm" } else { "x.png" });
        save_image(&img, &path).unwrap();
        prop_assert_eq!(load_image(&path).unwrap(), img);
    }
}

#[test]
fn ppm_output_is_binary_p6() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.ppm");
    save_image(&ImageRGB::from_gray(ImagePlane::constant(2, 1, 9.0).unwrap()), &path).unwrap();
    let bytes = std::fs::read(&path).unwrap();
    assert!(bytes.starts_with(b"P6"));
    assert!(bytes.ends_with(&[9; 6]));
}
