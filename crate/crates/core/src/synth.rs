//! Deterministic synthetic images with known structure.
//!
//! Used by the tests, the acceptance suite and the benchmarks, and handy for
//! trying the CLI without real data.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::edgebench::{sobel, BoundaryMap, CorpusItem};
use crate::image::{ImagePlane, ImageRGB};

/// Plane of independent uniform samples in `[0, 255)`.
pub fn random_plane<R: Rng>(rng: &mut R, width: usize, height: usize) -> ImagePlane {
    let data = (0..width * height).map(|_| rng.gen_range(0.0..255.0)).collect();
    ImagePlane::new(width, height, data).expect("finite samples")
}

/// A large bright square and isolated small dots of the same intensity on a
/// black background.
#[derive(Debug, Clone)]
pub struct SquareAndDots {
    pub image: ImageRGB,
    /// Left, top, side length.
    pub square: (usize, usize, usize),
    /// Top-left corners of the 2×2 dots.
    pub dots: Vec<(usize, usize)>,
    pub intensity: f64,
}

impl SquareAndDots {
    /// 128×128, a 50×50 square and 2×2 dots, intensity 200 on 0.
    pub fn standard() -> Self {
        let (size, side, intensity) = (128, 50, 200.0);
        let square = (12, 12, side);
        let mut dots = Vec::new();
        for &y in &[14, 34, 54, 74, 94, 112] {
            for &x in &[82, 98, 114] {
                dots.push((x, y));
            }
        }
        for &y in &[82, 98, 114] {
            for &x in &[14, 34, 54] {
                dots.push((x, y));
            }
        }
        let inside = |x: usize, y: usize| {
            let in_square = x >= square.0 && x < square.0 + side && y >= square.1 && y < square.1 + side;
            in_square
                || dots
                    .iter()
                    .any(|&(dx, dy)| x >= dx && x < dx + 2 && y >= dy && y < dy + 2)
        };
        let plane =
            ImagePlane::from_fn(size, size, |x, y| if inside(x, y) { intensity } else { 0.0 }).expect("valid fixture");
        Self {
            image: ImageRGB::from_gray(plane),
            square,
            dots,
            intensity,
        }
    }

    /// Pixels directly on either side of the square's outline.
    pub fn boundary_pixels(&self) -> Vec<(usize, usize)> {
        let (x0, y0, s) = self.square;
        let (x1, y1) = (x0 + s - 1, y0 + s - 1);
        let mut px = Vec::new();
        for t in x0..=x1 {
            px.extend([(t, y0 - 1), (t, y0), (t, y1), (t, y1 + 1)]);
        }
        for t in y0..=y1 {
            px.extend([(x0 - 1, t), (x0, t), (x1, t), (x1 + 1, t)]);
        }
        px
    }

    /// Mean Sobel magnitude over [`Self::boundary_pixels`].
    pub fn boundary_gradient(&self, plane: &ImagePlane) -> f64 {
        let grad = sobel(plane);
        let px = self.boundary_pixels();
        px.iter().map(|&(x, y)| grad.at(x, y)).sum::<f64>() / px.len() as f64
    }

    /// Largest value left on any dot pixel, relative to the black background.
    pub fn dot_residual(&self, plane: &ImagePlane) -> f64 {
        self.dots
            .iter()
            .flat_map(|&(x, y)| [(x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1)])
            .map(|(x, y)| plane.at(x, y))
            .fold(0.0, f64::max)
    }
}

/// Parameters of a textured scene.
#[derive(Debug, Clone, Copy)]
pub struct SceneParams {
    pub width: usize,
    pub height: usize,
    /// Number of foreground shapes over the background.
    pub shapes: usize,
    /// Fraction of pixels seeding a texture speck.
    pub speck_density: f64,
    /// Intensity offset of a speck from its surroundings.
    pub speck_contrast: f64,
    /// Standard deviation of additive noise.
    pub noise: f64,
}

impl Default for SceneParams {
    fn default() -> Self {
        Self {
            width: 96,
            height: 96,
            shapes: 3,
            speck_density: 0.04,
            speck_contrast: 90.0,
            noise: 4.0,
        }
    }
}

/// A piecewise-constant scene of large shapes overlaid with small
/// high-contrast texture specks and noise. Ground truth marks pixels on both
/// sides of every shape boundary; the texture is not part of it.
pub fn textured_scene(seed: u64, params: &SceneParams) -> (ImageRGB, BoundaryMap) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (w, h) = (params.width, params.height);

    let mut levels = [30.0, 95.0, 160.0, 225.0];
    levels.shuffle(&mut rng);
    let mut colors = Vec::new();
    for label in 0..=params.shapes {
        let base = levels[label % levels.len()];
        colors.push([0, 1, 2].map(|_| (base + rng.gen_range(-12.0..12.0f64)).clamp(0.0, 255.0)));
    }

    let mut labels = vec![0usize; w * h];
    let min_side = (w.min(h) / 4).max(4);
    for label in 1..=params.shapes {
        let disc = rng.gen_bool(0.5);
        let sw = rng.gen_range(min_side..=w / 2);
        let sh = rng.gen_range(min_side..=h / 2);
        let x0 = rng.gen_range(2..w - sw - 1);
        let y0 = rng.gen_range(2..h - sh - 1);
        let (cx, cy) = (x0 as f64 + sw as f64 / 2.0, y0 as f64 + sh as f64 / 2.0);
        let (rx, ry) = (sw as f64 / 2.0, sh as f64 / 2.0);
        for y in y0..y0 + sh {
            for x in x0..x0 + sw {
                let inside = if disc {
                    let (u, v) = ((x as f64 + 0.5 - cx) / rx, (y as f64 + 0.5 - cy) / ry);
                    u * u + v * v <= 1.0
                } else {
                    true
                };
                if inside {
                    labels[y * w + x] = label;
                }
            }
        }
    }

    let mut channels = [vec![0.0; w * h], vec![0.0; w * h], vec![0.0; w * h]];
    for (i, &label) in labels.iter().enumerate() {
        for c in 0..3 {
            channels[c][i] = colors[label][c];
        }
    }

    // 2×2 specks, brighter or darker than their surroundings.
    let n_specks = (params.speck_density * (w * h) as f64) as usize;
    for _ in 0..n_specks {
        let x = rng.gen_range(0..w - 1);
        let y = rng.gen_range(0..h - 1);
        for (sx, sy) in [(x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1)] {
            let i = sy * w + sx;
            let base = colors[labels[i]];
            for c in 0..3 {
                let sign = if base[c] > 127.5 { -1.0 } else { 1.0 };
                channels[c][i] = base[c] + sign * params.speck_contrast;
            }
        }
    }

    for ch in channels.iter_mut() {
        for v in ch.iter_mut() {
            *v = (*v + params.noise * rng.sample::<f64, _>(StandardNormal))
                .clamp(0.0, 255.0)
                .round();
        }
    }

    let [r, g, b] = channels.map(|data| ImagePlane::new(w, h, data).expect("finite scene"));
    let image = ImageRGB::new(r, g, b).expect("same dims");

    let gt = BoundaryMap::from_fn(w, h, |x, y| {
        let l = labels[y * w + x];
        let differs = |nx: usize, ny: usize| labels[ny * w + nx] != l;
        (x > 0 && differs(x - 1, y))
            || (x + 1 < w && differs(x + 1, y))
            || (y > 0 && differs(x, y - 1))
            || (y + 1 < h && differs(x, y + 1))
    })
    .expect("same dims");
    (image, gt)
}

/// `count` textured scenes with seeds `0..count`.
pub fn textured_corpus(count: usize, params: &SceneParams) -> Vec<CorpusItem> {
    (0..count as u64)
        .map(|seed| {
            let (image, ground_truth) = textured_scene(seed, params);
            CorpusItem {
                name: format!("scene-{seed:02}"),
                image,
                ground_truth,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scenes_are_deterministic_and_in_range() {
        let p = SceneParams::default();
        let (a, ga) = textured_scene(3, &p);
        let (b, gb) = textured_scene(3, &p);
        assert_eq!(a, b);
        assert_eq!(ga, gb);
        for plane in a.planes() {
            let (lo, hi) = plane.min_max();
            assert!(lo >= 0.0 && hi <= 255.0);
        }
        assert!(ga.count() > 0);
    }

    #[test]
    fn square_fixture_layout() {
        let f = SquareAndDots::standard();
        assert_eq!(f.image.dims(), (128, 128));
        assert_eq!(f.image.r.at(12, 12), 200.0);
        assert_eq!(f.image.r.at(11, 12), 0.0);
        for &(x, y) in &f.dots {
            assert_eq!(f.image.r.at(x + 1, y + 1), 200.0);
            assert_eq!(f.image.r.at(x + 2, y), 0.0);
        }
        assert_eq!(f.dot_residual(&f.image.r), 200.0);
        assert!(f.boundary_gradient(&f.image.r) > 400.0);
    }
}
