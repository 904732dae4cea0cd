//! Brute-force reference implementations, written straight from the
//! filter definitions and sharing no code with the crate's filters.
#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sir_core::ImagePlane;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn clamped(p: &ImagePlane, x: i64, y: i64) -> f64 {
    let cx = x.max(0).min(p.width() as i64 - 1) as usize;
    let cy = y.max(0).min(p.height() as i64 - 1) as usize;
    p.data()[cy * p.width() + cx]
}

fn gauss(diff: f64, sigma: f64) -> f64 {
    (-(diff * diff) / (2.0 * sigma * sigma)).exp()
}

fn plane_from(w: usize, h: usize, f: impl Fn(i64, i64) -> f64) -> ImagePlane {
    ImagePlane::from_fn(w, h, |x, y| f(x as i64, y as i64)).unwrap()
}

/// Guided 2D range filter, nested sums over the full window.
pub fn range_2d(j: &ImagePlane, g: &ImagePlane, sigma: f64, r: i64) -> ImagePlane {
    plane_from(j.width(), j.height(), |x, y| {
        let (mut num, mut den) = (0.0, 0.0);
        for yy in y - r..=y + r {
            for xx in x - r..=x + r {
                let wt = gauss(clamped(g, x, y) - clamped(g, xx, yy), sigma);
                num += wt * clamped(j, xx, yy);
                den += wt;
            }
        }
        num / den
    })
}

/// Horizontal 1D guided range filter.
pub fn range_h(j: &ImagePlane, g: &ImagePlane, sigma: f64, r: i64) -> ImagePlane {
    plane_from(j.width(), j.height(), |x, y| {
        let (mut num, mut den) = (0.0, 0.0);
        for xx in x - r..=x + r {
            let wt = gauss(clamped(g, x, y) - clamped(g, xx, y), sigma);
            num += wt * clamped(j, xx, y);
            den += wt;
        }
        num / den
    })
}

/// Vertical 1D guided range filter.
pub fn range_v(j: &ImagePlane, g: &ImagePlane, sigma: f64, r: i64) -> ImagePlane {
    plane_from(j.width(), j.height(), |x, y| {
        let (mut num, mut den) = (0.0, 0.0);
        for yy in y - r..=y + r {
            let wt = gauss(clamped(g, x, y) - clamped(g, x, yy), sigma);
            num += wt * clamped(j, x, yy);
            den += wt;
        }
        num / den
    })
}

/// Closed-form separable filter with per-stage normalization, evaluated
/// directly at each output pixel: for every column offset, a vertical
/// weighted mean around the intermediate pixel in the output row, then a
/// horizontal weighted mean of those.
pub fn separable_hv_two_stage(j: &ImagePlane, g: &ImagePlane, sigma: f64, r: i64) -> ImagePlane {
    plane_from(j.width(), j.height(), |x, y| {
        let (mut outer_num, mut outer_den) = (0.0, 0.0);
        for xx in x - r..=x + r {
            // intermediate pixel t1 = (xx, y); its clamped position carries the
            // inner sum
            let tx = xx.max(0).min(j.width() as i64 - 1);
            let (mut num, mut den) = (0.0, 0.0);
            for yy in y - r..=y + r {
                let wt = gauss(clamped(g, tx, y) - clamped(g, tx, yy), sigma);
                num += wt * clamped(j, tx, yy);
                den += wt;
            }
            let inner = num / den;
            let wt = gauss(clamped(g, x, y) - clamped(g, tx, y), sigma);
            outer_num += wt * inner;
            outer_den += wt;
        }
        outer_num / outer_den
    })
}

/// Direct 2D correlation with the outer product of a 1D kernel.
pub fn convolve_2d(img: &ImagePlane, k: &[f64]) -> ImagePlane {
    let r = (k.len() / 2) as i64;
    plane_from(img.width(), img.height(), |x, y| {
        let mut acc = 0.0;
        for dy in -r..=r {
            for dx in -r..=r {
                acc += k[(dy + r) as usize] * k[(dx + r) as usize] * clamped(img, x + dx, y + dy);
            }
        }
        acc
    })
}

pub fn gaussian_taps(sigma: f64, r: i64) -> Vec<f64> {
    let raw: Vec<f64> = (-r..=r).map(|i| gauss(i as f64, sigma)).collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / s).collect()
}

pub fn random_plane(rng: &mut ChaCha8Rng, w: usize, h: usize) -> ImagePlane {
    sir_core::synth::random_plane(rng, w, h)
}

/// A bright guide pixel to the right of `p` cuts the horizontal-first path
/// from `p` to its lower-right diagonal neighbour `q`, the vertical-first
/// path stays open.
pub fn commutativity_witness() -> (ImagePlane, ImagePlane) {
    let guide = ImagePlane::from_fn(7, 7, |x, y| if (x, y) == (4, 3) { 255.0 } else { 0.0 }).unwrap();
    let j = ImagePlane::from_fn(7, 7, |x, y| if (x, y) == (4, 4) { 100.0 } else { 0.0 }).unwrap();
    (j, guide)
}
