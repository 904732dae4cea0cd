mod common;

use proptest::prelude::*;
use sir_core::edgebench::sobel;
use sir_core::restore::{op_h, op_v, path_weights, range_filter_2d, separable_range_filter, snn_filter, SnnMode};
use sir_core::smoothing::{box_blur_iterated, gaussian_blur, Kernel1D};
use sir_core::{ImagePlane, RangeSpec, SeparableOrder};

use common::*;

fn impulse(size: usize, value: f64) -> ImagePlane {
    let c = size / 2;
    ImagePlane::from_fn(size, size, |x, y| if (x, y) == (c, c) { value } else { 0.0 }).unwrap()
}

#[test]
fn gaussian_impulse_is_kernel_outer_product() {
    let out = gaussian_blur(&impulse(9, 255.0), 5.0, 3).unwrap();
    let taps = gaussian_taps(5.0, 3);
    for y in 0..9 {
        for x in 0..9 {
            let (dx, dy) = (x as i64 - 4, y as i64 - 4);
            let expected = if dx.abs() <= 3 && dy.abs() <= 3 {
                255.0 * taps[(dx + 3) as usize] * taps[(dy + 3) as usize]
            } else {
                0.0
            };
            assert!((out.at(x, y) - expected).abs() < 1e-12, "({x},{y})");
        }
    }
}

#[test]
fn iterated_box_impulse_is_triangle() {
    let img = impulse(11, 255.0);
    let out = box_blur_iterated(&img, 1, 2).unwrap();
    let third = [1.0 / 3.0; 3];
    let oracle = convolve_2d(&convolve_2d(&img, &third), &third);
    assert!(out.max_abs_diff(&oracle).unwrap() < 1e-12);
    let tri = [1.0, 2.0, 3.0, 2.0, 1.0];
    for y in 0..11 {
        for x in 0..11 {
            let (dx, dy) = (x as i64 - 5, y as i64 - 5);
            let expected = if dx.abs() <= 2 && dy.abs() <= 2 {
                255.0 * tri[(dx + 2) as usize] * tri[(dy + 2) as usize] / 81.0
            } else {
                0.0
            };
            assert!((out.at(x, y) - expected).abs() < 1e-12, "({x},{y})");
        }
    }
}

#[test]
fn separable_blur_matches_direct_2d() {
    let mut rng = rng(11);
    let taps = gaussian_taps(5.0, 3);
    for _ in 0..10 {
        let img = random_plane(&mut rng, 32, 32);
        let fast = gaussian_blur(&img, 5.0, 3).unwrap();
        assert!(fast.max_abs_diff(&convolve_2d(&img, &taps)).unwrap() < 1e-9);
        let boxed = box_blur_iterated(&img, 2, 1).unwrap();
        assert!(boxed.max_abs_diff(&convolve_2d(&img, &[0.2; 5])).unwrap() < 1e-9);
    }
}

#[test]
fn range_filters_match_brute_force() {
    let mut rng = rng(12);
    let spec = RangeSpec { sigma: 20.0, radius: 3 };
    for _ in 0..10 {
        let j = random_plane(&mut rng, 16, 16);
        let g = random_plane(&mut rng, 16, 16);
        let d2 = range_filter_2d(&j, &g, &spec).unwrap();
        assert!(d2.max_abs_diff(&range_2d(&j, &g, 20.0, 3)).unwrap() < 1e-9);
        let h = op_h(&j, &g, &spec).unwrap();
        assert!(h.max_abs_diff(&range_h(&j, &g, 20.0, 3)).unwrap() < 1e-9);
        let v = op_v(&j, &g, &spec).unwrap();
        assert!(v.max_abs_diff(&range_v(&j, &g, 20.0, 3)).unwrap() < 1e-9);
        let hv = separable_range_filter(&j, &g, &spec, SeparableOrder::HV).unwrap();
        assert!(hv.max_abs_diff(&separable_hv_two_stage(&j, &g, 20.0, 3)).unwrap() < 1e-9);
        let vh = separable_range_filter(&j, &g, &spec, SeparableOrder::VH).unwrap();
        let vh_oracle = range_v(&range_h(&j, &g, 20.0, 3), &g, 20.0, 3);
        assert!(vh.max_abs_diff(&vh_oracle).unwrap() < 1e-9);
    }
}

#[test]
fn single_row_op_h_matches_1d_oracle() {
    let mut rng = rng(13);
    let j = random_plane(&mut rng, 24, 1);
    let g = random_plane(&mut rng, 24, 1);
    let out = op_h(&j, &g, &RangeSpec::new(20.0)).unwrap();
    assert!(out.max_abs_diff(&range_h(&j, &g, 20.0, 3)).unwrap() < 1e-9);
    // a single row has nothing to mix vertically
    assert!(op_v(&j, &g, &RangeSpec::new(20.0)).unwrap().max_abs_diff(&j).unwrap() < 1e-12);
}

#[test]
fn unguided_special_case() {
    // guide = j is the plain range filter on j
    let mut rng = rng(14);
    let j = random_plane(&mut rng, 12, 12);
    let out = range_filter_2d(&j, &j, &RangeSpec::new(25.0)).unwrap();
    assert!(out.max_abs_diff(&range_2d(&j, &j, 25.0, 3)).unwrap() < 1e-9);
}

#[test]
fn pass_order_matters() {
    let (j, guide) = commutativity_witness();
    let spec = RangeSpec::new(20.0);
    let hv = separable_range_filter(&j, &guide, &spec, SeparableOrder::HV).unwrap();
    let vh = separable_range_filter(&j, &guide, &spec, SeparableOrder::VH).unwrap();
    assert!(hv.at(3, 3) < 1e-6);
    assert!(vh.at(3, 3) > 1.0);
    assert!(hv.max_abs_diff(&vh).unwrap() > 1e-6);
}

#[test]
fn separable_impulse_support() {
    // Every output pixel depends only on inputs within its (2r+1)^2 window.
    let mut rng = rng(15);
    let g = random_plane(&mut rng, 15, 15);
    let base = ImagePlane::constant(15, 15, 0.0).unwrap();
    let spec = RangeSpec {
        sigma: 200.0,
        radius: 2,
    };
    let bumped = ImagePlane::from_fn(15, 15, |x, y| if (x, y) == (7, 7) { 100.0 } else { 0.0 }).unwrap();
    for order in [SeparableOrder::HV, SeparableOrder::VH] {
        let a = separable_range_filter(&base, &g, &spec, order).unwrap();
        let b = separable_range_filter(&bumped, &g, &spec, order).unwrap();
        for y in 0..15usize {
            for x in 0..15usize {
                let touched = (a.at(x, y) - b.at(x, y)).abs() > 0.0;
                let inside = x.abs_diff(7) <= 2 && y.abs_diff(7) <= 2;
                assert!(!touched || inside, "({x},{y}) changed outside the window");
                if inside {
                    assert!(touched, "({x},{y}) should see the impulse");
                }
            }
        }
    }
}

fn plane_strategy(w: usize, h: usize) -> impl Strategy<Value = ImagePlane> {
    prop::collection::vec(0.0f64..=255.0, w * h).prop_map(move |d| ImagePlane::new(w, h, d).unwrap())
}

fn window_bounds(p: &ImagePlane, x: usize, y: usize, r: isize) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for dy in -r..=r {
        for dx in -r..=r {
            let v = p.sample(x as isize + dx, y as isize + dy, Default::default());
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    (lo, hi)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn restorers_stay_within_window(j in plane_strategy(10, 9), g in plane_strategy(10, 9), sigma in 1.0f64..60.0) {
        let spec = RangeSpec { sigma, radius: 3 };
        let outputs = [
            (range_filter_2d(&j, &g, &spec).unwrap(), 3),
            (separable_range_filter(&j, &g, &spec, SeparableOrder::HV).unwrap(), 3),
            (separable_range_filter(&j, &g, &spec, SeparableOrder::VH).unwrap(), 3),
            (snn_filter(&j, &g, SnnMode::Mean).unwrap(), 1),
            (snn_filter(&j, &g, SnnMode::Median).unwrap(), 1),
        ];
        for (out, r) in outputs {
            for y in 0..9 {
                for x in 0..10 {
                    let (lo, hi) = window_bounds(&j, x, y, r);
                    let v = out.at(x, y);
                    prop_assert!(v >= lo - 1e-9 && v <= hi + 1e-9);
                }
            }
        }
    }

    #[test]
    fn smoothers_stay_within_range(img in plane_strategy(12, 7), sigma in 0.5f64..8.0, r in 1usize..4, times in 1usize..4) {
        let (lo, hi) = img.min_max();
        for out in [gaussian_blur(&img, sigma, r).unwrap(), box_blur_iterated(&img, r, times).unwrap()] {
            let (olo, ohi) = out.min_max();
            prop_assert!(olo >= lo - 1e-9 && ohi <= hi + 1e-9);
        }
    }

    #[test]
    fn constants_are_fixed_points(v in 0.0f64..=255.0, w in 1usize..9, h in 1usize..9, sigma in 1.0f64..40.0) {
        let c = ImagePlane::constant(w, h, v).unwrap();
        let spec = RangeSpec { sigma, radius: 3 };
        let outs = [
            gaussian_blur(&c, sigma, 3).unwrap(),
            box_blur_iterated(&c, 2, 2).unwrap(),
            range_filter_2d(&c, &c, &spec).unwrap(),
            separable_range_filter(&c, &c, &spec, SeparableOrder::HV).unwrap(),
            snn_filter(&c, &c, SnnMode::Mean).unwrap(),
            snn_filter(&c, &c, SnnMode::Median).unwrap(),
        ];
        for out in outs {
            prop_assert!(out.max_abs_diff(&c).unwrap() < 1e-9);
        }
    }

    #[test]
    fn snn_selection_ignores_positive_affine_guide_maps(
        j in plane_strategy(8, 8),
        g in plane_strategy(8, 8),
        scale in 1u32..6,
        shift in -100i32..100,
    ) {
        // Integer guide values and maps keep distance ties exact.
        let g = ImagePlane::new(8, 8, g.data().iter().map(|v| v.round()).collect()).unwrap();
        let mapped = ImagePlane::new(
            8,
            8,
            g.data().iter().map(|v| v * f64::from(scale) + f64::from(shift)).collect(),
        )
        .unwrap();
        for mode in [SnnMode::Mean, SnnMode::Median] {
            prop_assert_eq!(snn_filter(&j, &g, mode).unwrap(), snn_filter(&j, &mapped, mode).unwrap());
        }
    }

    #[test]
    fn weight_trichotomy(ip in 0.0f64..=255.0, it1 in 0.0f64..=255.0, iq in 0.0f64..=255.0, sigma in 1.0f64..50.0, snap in 0u8..3) {
        let it1 = match snap { 0 => ip, 1 => iq, _ => it1 };
        let wp = path_weights(ip, it1, iq, sigma);
        let product = -(it1 - ip) * (it1 - iq);
        let diff = wp.log_w2 - wp.log_w1;
        if it1 == ip || it1 == iq {
            prop_assert_eq!(wp.log_w1, wp.log_w2);
        } else if product.abs() > 1e-6 {
            prop_assert_eq!(diff.signum(), product.signum());
        }
        let log_factor = -(it1 - iq) * (it1 - ip) / (sigma * sigma);
        let log_identity = wp.log_w1 + log_factor;
        prop_assert!((wp.log_w2 - log_identity).abs() <= 1e-9 * (1.0 + log_identity.abs()));
        let identity = wp.w1() * log_factor.exp();
        if identity.is_finite() {
            prop_assert!((wp.w2() - identity).abs() <= 1e-12);
        }
    }

    #[test]
    fn sobel_commutes_with_transpose(img in plane_strategy(9, 6)) {
        let a = sobel(&img.transpose());
        let b = sobel(&img);
        for y in 0..6 {
            for x in 0..9 {
                prop_assert!((a.at(y, x) - b.at(x, y)).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn kernel_invariants() {
    for sigma in [0.3, 1.0, 3.0, 5.0, 40.0] {
        for radius in 0..6 {
            let k = Kernel1D::gaussian(sigma, radius).unwrap();
            let w = k.weights();
            assert_eq!(w.len(), 2 * radius + 1);
            assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(w.iter().all(|&v| v > 0.0));
            for i in 0..w.len() {
                assert_eq!(w[i], w[w.len() - 1 - i]);
            }
        }
    }
}
