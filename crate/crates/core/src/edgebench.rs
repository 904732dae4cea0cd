//! Sobel edge detection and boundary F-measure evaluation.
//!
//! The evaluation is a desk-scale stand-in for a BSDS-style benchmark:
//! Sobel magnitudes are binarized at a sweep of thresholds, each prediction
//! is matched one-to-one against ground-truth boundary pixels within a
//! distance tolerance, and the best F-measure per image is kept.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Result, SirError};
use crate::image::{clamp_index, ImagePlane, ImageRGB};
use crate::io::decode;
use crate::par::{build_rows, map_items};
use crate::pipeline::{sir_run, SirConfig};
use crate::restore::RestorerSpec;

/// Default matching tolerance in pixels.
pub const DEFAULT_TOLERANCE: f64 = 2.0;

/// Default number of thresholds in a sweep.
pub const DEFAULT_SWEEP_STEPS: usize = 64;

/// Sobel gradient magnitude per pixel.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientMap {
    width: usize,
    height: usize,
    magnitude: Vec<f64>,
}

impl GradientMap {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn magnitude(&self) -> &[f64] {
        &self.magnitude
    }

    pub fn at(&self, x: usize, y: usize) -> f64 {
        self.magnitude[y * self.width + x]
    }

    pub fn max(&self) -> f64 {
        self.magnitude.iter().copied().fold(0.0, f64::max)
    }
}

/// Binary edge map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryMap {
    width: usize,
    height: usize,
    edge: Vec<bool>,
}

impl BoundaryMap {
    pub fn new(width: usize, height: usize, edge: Vec<bool>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(SirError::ZeroDimension { width, height });
        }
        if edge.len() != width * height {
            return Err(SirError::DataLength {
                expected: width * height,
                actual: edge.len(),
            });
        }
        Ok(Self { width, height, edge })
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let edge = (0..height)
            .flat_map(|y| (0..width).map(move |x| (x, y)))
            .map(|(x, y)| f(x, y))
            .collect();
        Self::new(width, height, edge)
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn is_edge(&self, x: usize, y: usize) -> bool {
        self.edge[y * self.width + x]
    }

    pub fn edges(&self) -> &[bool] {
        &self.edge
    }

    pub fn count(&self) -> usize {
        self.edge.iter().filter(|&&e| e).count()
    }

    /// Reads a PNG (or PPM); any non-zero channel marks an edge.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let img = decode(path.as_ref())?.into_rgb8();
        let (w, h) = (img.width() as usize, img.height() as usize);
        let edge = img.pixels().map(|p| p.0.iter().any(|&c| c != 0)).collect();
        Self::new(w, h, edge)
    }

    /// Writes an 8-bit grayscale PNG, 255 for edges.
    pub fn save_png(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let bytes = self.edge.iter().map(|&e| if e { 255 } else { 0 }).collect();
        ::image::GrayImage::from_raw(self.width as u32, self.height as u32, bytes)
            .expect("buffer sized from dimensions")
            .save(path)
            .map_err(|source| SirError::Write {
                path: path.to_path_buf(),
                source,
            })
    }
}

/// Precision, recall and F-measure of one comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
    /// Threshold that produced the prediction, when one was swept.
    pub best_threshold: Option<f64>,
}

impl EvalResult {
    fn from_pr(precision: f64, recall: f64) -> Self {
        Self {
            precision,
            recall,
            f_measure: harmonic(precision, recall),
            best_threshold: None,
        }
    }
}

fn harmonic(p: f64, r: f64) -> f64 {
    if p + r > 0.0 {
        2.0 * p * r / (p + r)
    } else {
        0.0
    }
}

/// 3×3 Sobel magnitude `sqrt(gx^2 + gy^2)` with replicate borders.
pub fn sobel(img: &ImagePlane) -> GradientMap {
    let (w, h) = img.dims();
    let magnitude = build_rows(w, h, |y, out| {
        let up = img.row(clamp_index(y as isize - 1, h));
        let mid = img.row(y);
        let down = img.row(clamp_index(y as isize + 1, h));
        for (x, dst) in out.iter_mut().enumerate() {
            let l = clamp_index(x as isize - 1, w);
            let r = clamp_index(x as isize + 1, w);
            let gx = (up[r] - up[l]) + 2.0 * (mid[r] - mid[l]) + (down[r] - down[l]);
            let gy = (down[l] - up[l]) + 2.0 * (down[x] - up[x]) + (down[r] - up[r]);
            *dst = (gx * gx + gy * gy).sqrt();
        }
    });
    GradientMap {
        width: w,
        height: h,
        magnitude,
    }
}

/// Marks pixels with `magnitude >= t`.
pub fn threshold_boundary(grad: &GradientMap, t: f64) -> BoundaryMap {
    BoundaryMap {
        width: grad.width,
        height: grad.height,
        edge: grad.magnitude.iter().map(|&m| m >= t).collect(),
    }
}

/// Compares a predicted boundary against ground truth.
///
/// Predicted pixels are visited in scan order; each claims the nearest
/// still-unmatched ground-truth pixel within Euclidean `tolerance`
/// (earliest in scan order on distance ties). An empty prediction has
/// precision 1 and an empty ground truth has recall 1, so two empty maps
/// score F = 1 while an empty map against a non-empty one scores 0.
pub fn f_measure(pred: &BoundaryMap, gt: &BoundaryMap, tolerance: f64) -> Result<EvalResult> {
    if pred.dims() != gt.dims() {
        return Err(SirError::DimensionMismatch {
            left: pred.dims(),
            right: gt.dims(),
        });
    }
    if tolerance.is_nan() || tolerance < 0.0 {
        return Err(SirError::invalid(format!("tolerance must be >= 0, got {tolerance}")));
    }
    let (w, h) = pred.dims();
    let reach = tolerance.floor() as isize;
    let tol_sq = tolerance * tolerance;
    let mut claimed = vec![false; w * h];
    let mut matched = 0usize;
    let mut n_pred = 0usize;

    for y in 0..h {
        for x in 0..w {
            if !pred.is_edge(x, y) {
                continue;
            }
            n_pred += 1;
            let mut best: Option<(f64, usize)> = None;
            for dy in -reach..=reach {
                let gy = y as isize + dy;
                if gy < 0 || gy >= h as isize {
                    continue;
                }
                for dx in -reach..=reach {
                    let gx = x as isize + dx;
                    if gx < 0 || gx >= w as isize {
                        continue;
                    }
                    let idx = gy as usize * w + gx as usize;
                    if !gt.edge[idx] || claimed[idx] {
                        continue;
                    }
                    let d2 = (dx * dx + dy * dy) as f64;
                    if d2 > tol_sq {
                        continue;
                    }
                    if best.is_none_or(|(bd, bi)| d2 < bd || (d2 == bd && idx < bi)) {
                        best = Some((d2, idx));
                    }
                }
            }
            if let Some((_, idx)) = best {
                claimed[idx] = true;
                matched += 1;
            }
        }
    }

    let n_gt = gt.count();
    let precision = if n_pred == 0 {
        1.0
    } else {
        matched as f64 / n_pred as f64
    };
    let recall = if n_gt == 0 { 1.0 } else { matched as f64 / n_gt as f64 };
    Ok(EvalResult::from_pr(precision, recall))
}

/// `steps` evenly spaced thresholds over `(0, max magnitude]`.
pub fn default_thresholds(grad: &GradientMap, steps: usize) -> Vec<f64> {
    let max = grad.max();
    (1..=steps).map(|k| max * k as f64 / steps as f64).collect()
}

/// Best F-measure over `thresholds`; ties go to the lower threshold.
pub fn sweep_best_f(grad: &GradientMap, gt: &BoundaryMap, tolerance: f64, thresholds: &[f64]) -> Result<EvalResult> {
    if thresholds.is_empty() {
        return Err(SirError::invalid("threshold list is empty"));
    }
    let mut best: Option<EvalResult> = None;
    for &t in thresholds {
        let mut r = f_measure(&threshold_boundary(grad, t), gt, tolerance)?;
        r.best_threshold = Some(t);
        let better = match best {
            None => true,
            Some(b) => {
                r.f_measure > b.f_measure
                    || (r.f_measure == b.f_measure && t < b.best_threshold.unwrap_or(f64::INFINITY))
            }
        };
        if better {
            best = Some(r);
        }
    }
    Ok(best.expect("non-empty thresholds"))
}

/// What to run on an image before edge detection.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum Preprocess {
    #[default]
    None,
    /// One pass of the restorer, guided by the image itself, no blur.
    RestorerOnly(RestorerSpec),
    /// The full pipeline.
    Sir(SirConfig),
}

impl Preprocess {
    pub fn apply(&self, img: &ImageRGB) -> Result<ImageRGB> {
        match self {
            Preprocess::None => Ok(img.clone()),
            Preprocess::RestorerOnly(spec) => ImageRGB::new(
                spec.apply(&img.r, &img.r)?,
                spec.apply(&img.g, &img.g)?,
                spec.apply(&img.b, &img.b)?,
            ),
            Preprocess::Sir(config) => sir_run(img, config),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CorpusItem {
    pub name: String,
    pub image: ImageRGB,
    pub ground_truth: BoundaryMap,
}

/// Pre-processes, converts to gray, runs Sobel, and sweeps thresholds.
pub fn evaluate_image(
    image: &ImageRGB,
    gt: &BoundaryMap,
    preprocess: &Preprocess,
    tolerance: f64,
) -> Result<EvalResult> {
    if image.dims() != gt.dims() {
        return Err(SirError::DimensionMismatch {
            left: image.dims(),
            right: gt.dims(),
        });
    }
    let gray = preprocess.apply(image)?.to_gray();
    let grad = sobel(&gray);
    sweep_best_f(&grad, gt, tolerance, &default_thresholds(&grad, DEFAULT_SWEEP_STEPS))
}

#[derive(Debug)]
pub struct ItemOutcome {
    pub name: String,
    pub result: Result<EvalResult>,
}

#[derive(Debug)]
pub struct CorpusReport {
    pub items: Vec<ItemOutcome>,
    /// Means of precision, recall and F over the items that evaluated.
    pub aggregate: EvalResult,
    pub evaluated: usize,
}

impl CorpusReport {
    pub fn mean_f(&self) -> f64 {
        self.aggregate.f_measure
    }

    pub fn failures(&self) -> impl Iterator<Item = &ItemOutcome> {
        self.items.iter().filter(|i| i.result.is_err())
    }
}

/// Evaluates every item independently; failing items are reported and
/// excluded from the means. Errors only when nothing could be evaluated.
pub fn evaluate_corpus(items: &[CorpusItem], preprocess: &Preprocess, tolerance: f64) -> Result<CorpusReport> {
    if items.is_empty() {
        return Err(SirError::invalid("corpus is empty"));
    }
    let outcomes: Vec<ItemOutcome> = map_items(items, |item| ItemOutcome {
        name: item.name.clone(),
        result: evaluate_image(&item.image, &item.ground_truth, preprocess, tolerance),
    });
    aggregate(outcomes)
}

pub(crate) fn aggregate(items: Vec<ItemOutcome>) -> Result<CorpusReport> {
    let ok: Vec<&EvalResult> = items.iter().filter_map(|i| i.result.as_ref().ok()).collect();
    if ok.is_empty() {
        return Err(SirError::invalid("no corpus item could be evaluated"));
    }
    let n = ok.len() as f64;
    let aggregate = EvalResult {
        precision: ok.iter().map(|r| r.precision).sum::<f64>() / n,
        recall: ok.iter().map(|r| r.recall).sum::<f64>() / n,
        f_measure: ok.iter().map(|r| r.f_measure).sum::<f64>() / n,
        best_threshold: None,
    };
    let evaluated = ok.len();
    Ok(CorpusReport {
        items,
        aggregate,
        evaluated,
    })
}

/// One line of a corpus manifest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub line: usize,
    pub image: PathBuf,
    pub ground_truth: PathBuf,
}

impl ManifestEntry {
    pub fn name(&self) -> String {
        self.image.display().to_string()
    }

    pub fn load(&self) -> Result<CorpusItem> {
        let image = crate::io::load_image(&self.image)?;
        let ground_truth = BoundaryMap::load(&self.ground_truth)?;
        Ok(CorpusItem {
            name: self.name(),
            image,
            ground_truth,
        })
    }
}

/// Parses `<image>\t<ground-truth>` lines. Relative paths resolve against the
/// manifest's directory; blank lines and `#` comments are skipped.
pub fn parse_manifest(text: &str, base: &Path) -> Result<Vec<ManifestEntry>> {
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let (img, gt) = line
            .split_once('\t')
            .ok_or_else(|| SirError::Manifest(format!("line {}: expected <image>\\t<ground-truth>", i + 1)))?;
        if img.is_empty() || gt.is_empty() {
            return Err(SirError::Manifest(format!("line {}: empty path", i + 1)));
        }
        entries.push(ManifestEntry {
            line: i + 1,
            image: base.join(img),
            ground_truth: base.join(gt),
        });
    }
    Ok(entries)
}

pub fn read_manifest(path: impl AsRef<Path>) -> Result<Vec<ManifestEntry>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| SirError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_manifest(&text, path.parent().unwrap_or(Path::new(".")))
}

/// Loads and evaluates a manifest. Items that fail to load are reported in
/// the result alongside the evaluated ones.
pub fn evaluate_manifest(entries: &[ManifestEntry], preprocess: &Preprocess, tolerance: f64) -> Result<CorpusReport> {
    if entries.is_empty() {
        return Err(SirError::invalid("corpus is empty"));
    }
    let outcomes = map_items(entries, |entry| ItemOutcome {
        name: entry.name(),
        result: entry
            .load()
            .and_then(|item| evaluate_image(&item.image, &item.ground_truth, preprocess, tolerance)),
    });
    aggregate(outcomes)
}
