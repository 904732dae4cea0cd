//! Guided edge-aware filters used to restore strong edges.
//!
//! Each filter averages values from the image being restored (`j`) with
//! weights decided by a guidance image (`guide`). Borders replicate.

use crate::error::{Result, SirError};
use crate::image::{clamp_index, ensure_same_dims, ImagePlane};
use crate::par::build_rows;

/// Range sigma (intensity units) and window half-width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeSpec {
    pub sigma: f64,
    pub radius: usize,
}

impl RangeSpec {
    /// 7×7 window.
    pub fn new(sigma: f64) -> Self {
        Self { sigma, radius: 3 }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.sigma.is_finite() || self.sigma <= 0.0 {
            return Err(SirError::invalid(format!(
                "range sigma must be positive, got {}",
                self.sigma
            )));
        }
        if self.radius < 1 {
            return Err(SirError::invalid("range radius must be at least 1"));
        }
        Ok(())
    }

    /// `1 / (2 sigma^2)`, the factor multiplying the squared difference.
    fn falloff(&self) -> f64 {
        0.5 / (self.sigma * self.sigma)
    }
}

/// Pass order of the separable filter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SeparableOrder {
    /// Vertical pass first, horizontal pass on its result.
    #[default]
    HV,
    /// Horizontal pass first, vertical pass on its result.
    VH,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnnMode {
    Mean,
    Median,
}

/// Guided restoring filter choice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RestorerSpec {
    Gauss2D(RangeSpec),
    SeparableGauss(RangeSpec, SeparableOrder),
    SnnMean,
    SnnMedian,
}

impl RestorerSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            RestorerSpec::Gauss2D(spec) | RestorerSpec::SeparableGauss(spec, _) => spec.validate(),
            RestorerSpec::SnnMean | RestorerSpec::SnnMedian => Ok(()),
        }
    }

    pub fn apply(&self, j: &ImagePlane, guide: &ImagePlane) -> Result<ImagePlane> {
        match *self {
            RestorerSpec::Gauss2D(spec) => range_filter_2d(j, guide, &spec),
            RestorerSpec::SeparableGauss(spec, order) => separable_range_filter(j, guide, &spec, order),
            RestorerSpec::SnnMean => snn_filter(j, guide, SnnMode::Mean),
            RestorerSpec::SnnMedian => snn_filter(j, guide, SnnMode::Median),
        }
    }
}

fn check_inputs(j: &ImagePlane, guide: &ImagePlane, spec: &RangeSpec) -> Result<()> {
    ensure_same_dims(j, guide)?;
    spec.validate()
}

/// Guided 2D Gaussian range filter over the full `(2r+1)×(2r+1)` window,
/// centre included.
pub fn range_filter_2d(j: &ImagePlane, guide: &ImagePlane, spec: &RangeSpec) -> Result<ImagePlane> {
    check_inputs(j, guide, spec)?;
    let (w, h) = j.dims();
    let r = spec.radius as isize;
    let falloff = spec.falloff();
    let data = build_rows(w, h, |y, out| {
        let center_row = guide.row(y);
        for (x, dst) in out.iter_mut().enumerate() {
            let g0 = center_row[x];
            let mut num = 0.0;
            let mut den = 0.0;
            for dy in -r..=r {
                let sy = clamp_index(y as isize + dy, h);
                let grow = guide.row(sy);
                let jrow = j.row(sy);
                for dx in -r..=r {
                    let sx = clamp_index(x as isize + dx, w);
                    let d = g0 - grow[sx];
                    let wt = (-falloff * d * d).exp();
                    num += wt * jrow[sx];
                    den += wt;
                }
            }
            *dst = num / den;
        }
    });
    Ok(ImagePlane::from_filter(w, h, data))
}

/// Horizontal 1D guided range filter.
pub fn op_h(j: &ImagePlane, guide: &ImagePlane, spec: &RangeSpec) -> Result<ImagePlane> {
    check_inputs(j, guide, spec)?;
    let (w, h) = j.dims();
    let r = spec.radius as isize;
    let falloff = spec.falloff();
    let data = build_rows(w, h, |y, out| {
        let grow = guide.row(y);
        let jrow = j.row(y);
        for (x, dst) in out.iter_mut().enumerate() {
            let g0 = grow[x];
            let mut num = 0.0;
            let mut den = 0.0;
            for dx in -r..=r {
                let sx = clamp_index(x as isize + dx, w);
                let d = g0 - grow[sx];
                let wt = (-falloff * d * d).exp();
                num += wt * jrow[sx];
                den += wt;
            }
            *dst = num / den;
        }
    });
    Ok(ImagePlane::from_filter(w, h, data))
}

/// Vertical 1D guided range filter.
pub fn op_v(j: &ImagePlane, guide: &ImagePlane, spec: &RangeSpec) -> Result<ImagePlane> {
    check_inputs(j, guide, spec)?;
    let (w, h) = j.dims();
    let r = spec.radius as isize;
    let falloff = spec.falloff();
    let data = build_rows(w, h, |y, out| {
        let center = guide.row(y);
        let mut den = vec![0.0; w];
        out.fill(0.0);
        for dy in -r..=r {
            let sy = clamp_index(y as isize + dy, h);
            let grow = guide.row(sy);
            let jrow = j.row(sy);
            for x in 0..w {
                let d = center[x] - grow[x];
                let wt = (-falloff * d * d).exp();
                out[x] += wt * jrow[x];
                den[x] += wt;
            }
        }
        for (o, d) in out.iter_mut().zip(&den) {
            *o /= d;
        }
    });
    Ok(ImagePlane::from_filter(w, h, data))
}

/// Composition of the two 1D passes, each normalized on its own.
///
/// [`SeparableOrder::HV`] evaluates `op_h(op_v(j))`, so a neighbour `q` is
/// reached from `p` through the intermediate pixel in `p`'s row and `q`'s
/// column. The two orders are different filters.
pub fn separable_range_filter(
    j: &ImagePlane,
    guide: &ImagePlane,
    spec: &RangeSpec,
    order: SeparableOrder,
) -> Result<ImagePlane> {
    check_inputs(j, guide, spec)?;
    match order {
        SeparableOrder::HV => op_h(&op_v(j, guide, spec)?, guide, spec),
        SeparableOrder::VH => op_v(&op_h(j, guide, spec)?, guide, spec),
    }
}

/// Direct and one-intermediate-pixel range weights between `p` and `q`.
///
/// Stored as natural logs so that strongly separated intensities do not
/// underflow to an uninformative `0 == 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightPair {
    pub log_w1: f64,
    pub log_w2: f64,
}

impl WeightPair {
    /// Weight of the direct comparison `p`–`q`.
    pub fn w1(&self) -> f64 {
        self.log_w1.exp()
    }

    /// Weight of the path `p`–`t1`–`q`.
    pub fn w2(&self) -> f64 {
        self.log_w2.exp()
    }
}

/// Weights a 2D range filter (`w1`) and the separable filter (`w2`) assign to
/// the pair `p`, `q` with intermediate pixel `t1`.
///
/// `w2 = w1 * exp(-(t1 - q)(t1 - p) / sigma^2)`: a monotone ramp through `t1`
/// raises the weight, a peak or valley at `t1` lowers it.
pub fn path_weights(ip: f64, it1: f64, iq: f64, sigma: f64) -> WeightPair {
    let denom = 2.0 * sigma * sigma;
    let direct = (ip - iq) * (ip - iq);
    let via = (ip - it1) * (ip - it1) + (it1 - iq) * (it1 - iq);
    WeightPair {
        log_w1: -direct / denom,
        log_w2: -via / denom,
    }
}

/// Guided symmetric nearest neighbour filter on a 3×3 window.
///
/// For every opposite pair (N/S, E/W, NE/SW, NW/SE) the member whose guide
/// value is closer to the centre's guide value is picked, the first member
/// on ties. The output is the mean or median of the four picked `j` values;
/// the median of four is the mean of the middle two.
pub fn snn_filter(j: &ImagePlane, guide: &ImagePlane, mode: SnnMode) -> Result<ImagePlane> {
    ensure_same_dims(j, guide)?;
    let (w, h) = j.dims();
    let data = build_rows(w, h, |y, out| {
        let window = Window3::new(j, guide, y);
        for (x, dst) in out.iter_mut().enumerate() {
            let picks = window.select(x);
            *dst = match mode {
                SnnMode::Mean => (picks[0] + picks[1] + picks[2] + picks[3]) / 4.0,
                SnnMode::Median => median4(picks),
            };
        }
    });
    Ok(ImagePlane::from_filter(w, h, data))
}

/// Rows above, at and below `y` (replicated at the borders) of both images.
struct Window3<'a> {
    j: [&'a [f64]; 3],
    g: [&'a [f64]; 3],
}

impl<'a> Window3<'a> {
    fn new(j: &'a ImagePlane, guide: &'a ImagePlane, y: usize) -> Self {
        let h = j.height();
        let ys = [clamp_index(y as isize - 1, h), y, clamp_index(y as isize + 1, h)];
        Self {
            j: ys.map(|r| j.row(r)),
            g: ys.map(|r| guide.row(r)),
        }
    }

    #[inline]
    fn select(&self, x: usize) -> [f64; 4] {
        const N: usize = 0;
        const M: usize = 1;
        const S: usize = 2;
        let w = self.g[M].len();
        let (l, r) = (clamp_index(x as isize - 1, w), clamp_index(x as isize + 1, w));
        let g0 = self.g[M][x];
        // (row, col) of the first and second member of each pair
        let pairs = [[(N, x), (S, x)], [(M, r), (M, l)], [(N, r), (S, l)], [(N, l), (S, r)]];
        pairs.map(|[(ay, ax), (by, bx)]| {
            let first = (self.g[ay][ax] - g0).abs() <= (self.g[by][bx] - g0).abs();
            // data-dependent choice; a table lookup avoids the branch
            [self.j[by][bx], self.j[ay][ax]][first as usize]
        })
    }
}

#[cfg(test)]
fn snn_select(j: &ImagePlane, guide: &ImagePlane, x: usize, y: usize) -> [f64; 4] {
    Window3::new(j, guide, y).select(x)
}

fn median4(mut v: [f64; 4]) -> f64 {
    v.sort_by(|a, b| a.total_cmp(b));
    (v[1] + v[2]) / 2.0
}
