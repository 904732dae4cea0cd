//! Smooth once, then restore `n` times against a fixed guidance image.

use std::time::{Duration, Instant};

use crate::error::{Result, SirError};
use crate::image::{ImagePlane, ImageRGB};
use crate::restore::{RangeSpec, RestorerSpec, SeparableOrder};
use crate::smoothing::SmootherSpec;

/// A guided filter usable as the restoring step.
pub trait Restorer: Sync {
    fn restore(&self, current: &ImagePlane, guide: &ImagePlane) -> Result<ImagePlane>;
}

impl Restorer for RestorerSpec {
    fn restore(&self, current: &ImagePlane, guide: &ImagePlane) -> Result<ImagePlane> {
        self.apply(current, guide)
    }
}

/// Where restoration weights come from.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum Guidance {
    /// The unfiltered input image.
    #[default]
    Input,
    /// A separate image of the same size, e.g. a flash exposure.
    External(ImageRGB),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SirConfig {
    pub smoother: SmootherSpec,
    pub restorer: RestorerSpec,
    pub iterations: usize,
    pub guidance: Guidance,
}

impl SirConfig {
    pub fn new(smoother: SmootherSpec, restorer: RestorerSpec, iterations: usize) -> Self {
        Self {
            smoother,
            restorer,
            iterations,
            guidance: Guidance::Input,
        }
    }

    pub fn with_guidance(mut self, guidance: Guidance) -> Self {
        self.guidance = guidance;
        self
    }

    pub fn with_iterations(mut self, iterations: usize) -> Self {
        self.iterations = iterations;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.smoother.validate()?;
        self.restorer.validate()
    }
}

/// Result of a run with per-stage wall-clock times.
#[derive(Debug, Clone)]
pub struct SirOutcome {
    pub output: ImageRGB,
    pub smooth_time: Duration,
    pub restore_time: Duration,
    /// `max |O_i - O_(i-1)|` over all channels for each restore iteration.
    /// Empty unless requested.
    pub deltas: Vec<f64>,
}

/// Runs the configured pipeline on all three channels.
pub fn sir_run(input: &ImageRGB, config: &SirConfig) -> Result<ImageRGB> {
    Ok(run_config(input, config, false)?.output)
}

/// Like [`sir_run`], also recording stage times and per-iteration change.
pub fn sir_run_detailed(input: &ImageRGB, config: &SirConfig) -> Result<SirOutcome> {
    run_config(input, config, true)
}

fn run_config(input: &ImageRGB, config: &SirConfig, track: bool) -> Result<SirOutcome> {
    config.validate()?;
    let guide = match &config.guidance {
        Guidance::Input => input,
        Guidance::External(g) => {
            if g.dims() != input.dims() {
                return Err(SirError::DimensionMismatch {
                    left: input.dims(),
                    right: g.dims(),
                });
            }
            g
        }
    };
    smooth_and_restore(
        input,
        guide,
        &config.smoother,
        &config.restorer,
        config.iterations,
        track,
    )
}

/// The pipeline with an arbitrary restorer. `guide` is never modified.
pub fn smooth_and_restore<R: Restorer + ?Sized>(
    input: &ImageRGB,
    guide: &ImageRGB,
    smoother: &SmootherSpec,
    restorer: &R,
    iterations: usize,
    track_deltas: bool,
) -> Result<SirOutcome> {
    if guide.dims() != input.dims() {
        return Err(SirError::DimensionMismatch {
            left: input.dims(),
            right: guide.dims(),
        });
    }
    let start = Instant::now();
    let mut current = input.try_map_planes(|p| smoother.apply(p))?;
    let smooth_time = start.elapsed();

    let mut restore_time = Duration::ZERO;
    let mut deltas = Vec::new();
    for _ in 0..iterations {
        let start = Instant::now();
        let next = ImageRGB::new(
            restorer.restore(&current.r, &guide.r)?,
            restorer.restore(&current.g, &guide.g)?,
            restorer.restore(&current.b, &guide.b)?,
        )?;
        restore_time += start.elapsed();
        if track_deltas {
            deltas.push(next.max_abs_diff(&current)?);
        }
        current = next;
    }
    Ok(SirOutcome {
        output: current,
        smooth_time,
        restore_time,
        deltas,
    })
}

/// A named configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SirPreset {
    pub name: &'static str,
    pub config: SirConfig,
}

/// Texture-smoothing presets followed by the edge-detection preparation
/// variants, one per restorer.
pub fn builtin_presets() -> Vec<SirPreset> {
    let texture_range = RangeSpec::new(20.0);
    let edge_range = RangeSpec::new(8.0);
    let edge_blur = SmootherSpec::gaussian(3.0);
    vec![
        SirPreset {
            name: "SiRSNN",
            config: SirConfig::new(SmootherSpec::default_box(), RestorerSpec::SnnMean, 9),
        },
        SirPreset {
            name: "SiR2DGauss",
            config: SirConfig::new(SmootherSpec::gaussian(5.0), RestorerSpec::Gauss2D(texture_range), 5),
        },
        SirPreset {
            name: "SiRsep",
            config: SirConfig::new(
                SmootherSpec::gaussian(5.0),
                RestorerSpec::SeparableGauss(texture_range, SeparableOrder::HV),
                5,
            ),
        },
        SirPreset {
            name: "EdgePrep-snn",
            config: SirConfig::new(edge_blur, RestorerSpec::SnnMean, 5),
        },
        SirPreset {
            name: "EdgePrep-gauss2d",
            config: SirConfig::new(edge_blur, RestorerSpec::Gauss2D(edge_range), 5),
        },
        SirPreset {
            name: "EdgePrep-sep",
            config: SirConfig::new(
                edge_blur,
                RestorerSpec::SeparableGauss(edge_range, SeparableOrder::HV),
                5,
            ),
        },
    ]
}

/// Case-insensitive preset lookup.
pub fn find_preset(name: &str) -> Option<SirPreset> {
    builtin_presets()
        .into_iter()
        .find(|p| p.name.eq_ignore_ascii_case(name))
}
