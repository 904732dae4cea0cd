//! Smoothing filters that wipe out small structures before restoration.

use crate::error::{Result, SirError};
use crate::image::{clamp_index, ImagePlane};
use crate::par::build_rows;

/// Normalized, symmetric 1D kernel of length `2 * radius + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel1D {
    radius: usize,
    weights: Vec<f64>,
}

impl Kernel1D {
    /// Truncated Gaussian `exp(-i^2 / (2 sigma^2))` over `[-radius, radius]`,
    /// renormalized to sum to one.
    pub fn gaussian(sigma: f64, radius: usize) -> Result<Self> {
        if !sigma.is_finite() || sigma <= 0.0 {
            return Err(SirError::invalid(format!(
                "gaussian sigma must be positive, got {sigma}"
            )));
        }
        let denom = 2.0 * sigma * sigma;
        let raw: Vec<f64> = (0..=2 * radius)
            .map(|i| {
                let d = i as f64 - radius as f64;
                (-d * d / denom).exp()
            })
            .collect();
        Ok(Self::normalized(radius, raw))
    }

    /// Uniform mean over `2 * radius + 1` taps.
    pub fn uniform(radius: usize) -> Self {
        Self::normalized(radius, vec![1.0; 2 * radius + 1])
    }

    fn normalized(radius: usize, mut weights: Vec<f64>) -> Self {
        let sum: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= sum);
        Self { radius, weights }
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// See [`Kernel1D::gaussian`].
pub fn gaussian_kernel_1d(sigma: f64, radius: usize) -> Result<Kernel1D> {
    Kernel1D::gaussian(sigma, radius)
}

/// Smoothing filter choice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SmootherSpec {
    Gaussian { sigma: f64, radius: usize },
    IteratedBox { radius: usize, times: usize },
}

impl SmootherSpec {
    /// Gaussian with the 7×7 window used throughout the presets.
    pub fn gaussian(sigma: f64) -> Self {
        SmootherSpec::Gaussian { sigma, radius: 3 }
    }

    /// 5×5 box applied twice.
    pub fn default_box() -> Self {
        SmootherSpec::IteratedBox { radius: 2, times: 2 }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            SmootherSpec::Gaussian { sigma, radius } => {
                if !sigma.is_finite() || sigma <= 0.0 {
                    return Err(SirError::invalid(format!(
                        "gaussian sigma must be positive, got {sigma}"
                    )));
                }
                if radius < 1 {
                    return Err(SirError::invalid("gaussian radius must be at least 1"));
                }
            }
            SmootherSpec::IteratedBox { radius, times } => {
                if radius < 1 {
                    return Err(SirError::invalid("box radius must be at least 1"));
                }
                if times < 1 {
                    return Err(SirError::invalid("box repetitions must be at least 1"));
                }
            }
        }
        Ok(())
    }

    pub fn apply(&self, img: &ImagePlane) -> Result<ImagePlane> {
        self.validate()?;
        match *self {
            SmootherSpec::Gaussian { sigma, radius } => gaussian_blur(img, sigma, radius),
            SmootherSpec::IteratedBox { radius, times } => box_blur_iterated(img, radius, times),
        }
    }
}

/// Horizontal pass with `kernel`, replicate borders.
pub fn convolve_rows(img: &ImagePlane, kernel: &Kernel1D) -> ImagePlane {
    let (w, h) = img.dims();
    let r = kernel.radius() as isize;
    let weights = kernel.weights();
    let data = build_rows(w, h, |y, out| {
        let row = img.row(y);
        for (x, dst) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (k, &wt) in weights.iter().enumerate() {
                let sx = clamp_index(x as isize + k as isize - r, w);
                acc += wt * row[sx];
            }
            *dst = acc;
        }
    });
    ImagePlane::from_filter(w, h, data)
}

/// Vertical pass with `kernel`, replicate borders.
pub fn convolve_cols(img: &ImagePlane, kernel: &Kernel1D) -> ImagePlane {
    let (w, h) = img.dims();
    let r = kernel.radius() as isize;
    let weights = kernel.weights();
    let data = build_rows(w, h, |y, out| {
        out.fill(0.0);
        for (k, &wt) in weights.iter().enumerate() {
            let src = img.row(clamp_index(y as isize + k as isize - r, h));
            for (dst, &v) in out.iter_mut().zip(src) {
                *dst += wt * v;
            }
        }
    });
    ImagePlane::from_filter(w, h, data)
}

/// Separable blur: rows first, then columns, with the same kernel.
pub fn separable_blur(img: &ImagePlane, kernel: &Kernel1D) -> ImagePlane {
    convolve_cols(&convolve_rows(img, kernel), kernel)
}

pub fn gaussian_blur(img: &ImagePlane, sigma: f64, radius: usize) -> Result<ImagePlane> {
    let kernel = Kernel1D::gaussian(sigma, radius)?;
    Ok(separable_blur(img, &kernel))
}

/// `times` passes of the `(2r+1)×(2r+1)` mean, each pass feeding the next.
pub fn box_blur_iterated(img: &ImagePlane, radius: usize, times: usize) -> Result<ImagePlane> {
    if radius < 1 || times < 1 {
        return Err(SirError::invalid(format!(
            "box blur needs radius >= 1 and times >= 1, got radius={radius} times={times}"
        )));
    }
    let kernel = Kernel1D::uniform(radius);
    let mut out = separable_blur(img, &kernel);
    for _ in 1..times {
        out = separable_blur(&out, &kernel);
    }
    Ok(out)
}
