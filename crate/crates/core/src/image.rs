//! Raster types shared by every filter.

use crate::error::{Result, SirError};

/// How coordinates outside the raster are resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BorderPolicy {
    /// Out-of-range coordinates read the nearest in-range pixel.
    #[default]
    Replicate,
}

/// Single-channel raster of intensities on the 0–255 scale, row-major.
///
/// Planes are immutable once built; filters return new planes.
#[derive(Debug, Clone, PartialEq)]
pub struct ImagePlane {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl ImagePlane {
    /// Builds a plane from row-major samples.
    ///
    /// Fails on a zero dimension, a length that disagrees with
    /// `width * height`, or any non-finite sample.
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(SirError::ZeroDimension { width, height });
        }
        if data.len() != width * height {
            return Err(SirError::DataLength {
                expected: width * height,
                actual: data.len(),
            });
        }
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return Err(SirError::NonFinite(i));
        }
        Ok(Self { width, height, data })
    }

    /// Plane filled with a single value.
    pub fn constant(width: usize, height: usize, value: f64) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    /// Plane whose pixel `(x, y)` is `f(x, y)`.
    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self::new(width, height, data)
    }

    /// Wraps a buffer produced by a filter. Filters only form finite
    /// weighted means of finite inputs, so the checks are debug-only.
    pub(crate) fn from_filter(width: usize, height: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), width * height);
        debug_assert!(data.iter().all(|v| v.is_finite()));
        Self { width, height, data }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn row(&self, y: usize) -> &[f64] {
        &self.data[y * self.width..(y + 1) * self.width]
    }

    /// Value at an in-range coordinate.
    ///
    /// # Panics
    ///
    /// If `(x, y)` lies outside the plane.
    #[inline]
    pub fn at(&self, x: usize, y: usize) -> f64 {
        assert!(x < self.width && y < self.height, "({x}, {y}) out of range");
        self.data[y * self.width + x]
    }

    /// Value at any signed coordinate, resolved through `policy`.
    #[inline]
    pub fn sample(&self, x: isize, y: isize, policy: BorderPolicy) -> f64 {
        match policy {
            BorderPolicy::Replicate => {
                let xc = clamp_index(x, self.width);
                let yc = clamp_index(y, self.height);
                self.data[yc * self.width + xc]
            }
        }
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.data
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }

    pub fn mean(&self) -> f64 {
        self.data.iter().sum::<f64>() / self.data.len() as f64
    }

    pub fn transpose(&self) -> ImagePlane {
        let (w, h) = self.dims();
        let mut data = Vec::with_capacity(w * h);
        for x in 0..w {
            for y in 0..h {
                data.push(self.data[y * w + x]);
            }
        }
        ImagePlane::from_filter(h, w, data)
    }

    /// Largest absolute per-pixel difference. Planes must share dimensions.
    pub fn max_abs_diff(&self, other: &ImagePlane) -> Result<f64> {
        ensure_same_dims(self, other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

#[inline]
pub(crate) fn clamp_index(i: isize, len: usize) -> usize {
    if i <= 0 {
        0
    } else if i as usize >= len {
        len - 1
    } else {
        i as usize
    }
}

pub(crate) fn ensure_same_dims(a: &ImagePlane, b: &ImagePlane) -> Result<()> {
    if a.dims() != b.dims() {
        return Err(SirError::DimensionMismatch {
            left: a.dims(),
            right: b.dims(),
        });
    }
    Ok(())
}

/// Three equally sized planes.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageRGB {
    pub r: ImagePlane,
    pub g: ImagePlane,
    pub b: ImagePlane,
}

impl ImageRGB {
    pub fn new(r: ImagePlane, g: ImagePlane, b: ImagePlane) -> Result<Self> {
        ensure_same_dims(&r, &g)?;
        ensure_same_dims(&r, &b)?;
        Ok(Self { r, g, b })
    }

    /// Replicates one plane into all three channels.
    pub fn from_gray(plane: ImagePlane) -> Self {
        Self {
            r: plane.clone(),
            g: plane.clone(),
            b: plane,
        }
    }

    pub fn width(&self) -> usize {
        self.r.width()
    }

    pub fn height(&self) -> usize {
        self.r.height()
    }

    pub fn dims(&self) -> (usize, usize) {
        self.r.dims()
    }

    pub fn planes(&self) -> [&ImagePlane; 3] {
        [&self.r, &self.g, &self.b]
    }

    /// Applies `f` to every channel, keeping channel order.
    pub fn try_map_planes<F>(&self, mut f: F) -> Result<ImageRGB>
    where
        F: FnMut(&ImagePlane) -> Result<ImagePlane>,
    {
        ImageRGB::new(f(&self.r)?, f(&self.g)?, f(&self.b)?)
    }

    /// Arithmetic mean of the three channels.
    pub fn to_gray(&self) -> ImagePlane {
        let data = self
            .r
            .data()
            .iter()
            .zip(self.g.data())
            .zip(self.b.data())
            .map(|((r, g), b)| (r + g + b) / 3.0)
            .collect();
        ImagePlane::from_filter(self.width(), self.height(), data)
    }

    pub fn max_abs_diff(&self, other: &ImageRGB) -> Result<f64> {
        let mut worst = 0.0f64;
        for (a, b) in self.planes().into_iter().zip(other.planes()) {
            worst = worst.max(a.max_abs_diff(b)?);
        }
        Ok(worst)
    }
}
