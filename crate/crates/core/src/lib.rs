//! Scale-aware edge-preserving smoothing.
//!
//! The pipeline blurs an image once with a smoothing filter, then repeatedly
//! applies a guided edge-aware filter whose weights come from the original
//! image. Small structures have no colour information left after the blur
//! and stay suppressed; large edges survive the blur well enough to be
//! pulled back into shape by the guidance.
//!
//! All filters work on [`ImagePlane`]s holding `f64` intensities on the
//! 0–255 scale. Colour images are processed channel by channel.
//!
//! With the default `parallel` feature, filters split their output rows
//! across the rayon thread pool. Each pixel is accumulated in a fixed order,
//! so results are bit-identical to the sequential build.

pub mod edgebench;
mod error;
pub mod image;
pub mod io;
mod par;
pub mod pipeline;
pub mod restore;
pub mod smoothing;
pub mod synth;
pub mod timing;

pub use crate::error::{Result, SirError};
pub use crate::image::{BorderPolicy, ImagePlane, ImageRGB};
pub use crate::io::{load_image, save_image};
pub use crate::pipeline::{builtin_presets, find_preset, sir_run, Guidance, SirConfig, SirPreset};
pub use crate::restore::{RangeSpec, RestorerSpec, SeparableOrder, SnnMode};
pub use crate::smoothing::{Kernel1D, SmootherSpec};
