//! Wall-clock comparison of presets on one image.

use std::fmt::Write as _;
use std::time::Duration;

use crate::error::{Result, SirError};
use crate::image::ImageRGB;
use crate::pipeline::{sir_run_detailed, SirPreset};

/// Seconds floor so reported times stay positive.
const MIN_SECONDS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub variant: String,
    pub width: usize,
    pub height: usize,
    pub iterations: usize,
    pub smooth_s: f64,
    pub restore_s: f64,
    pub total_s: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

type Stage = fn(&BenchRow) -> f64;

pub const CSV_HEADER: &str = "variant,width,height,iters,smooth_s,restore_s,total_s";

impl BenchReport {
    pub fn row(&self, variant: &str) -> Option<&BenchRow> {
        self.rows.iter().find(|r| r.variant.eq_ignore_ascii_case(variant))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{:.6},{:.6},{:.6}",
                r.variant, r.width, r.height, r.iterations, r.smooth_s, r.restore_s, r.total_s
            );
        }
        out
    }

    /// Fixed-width table: one column per variant, rows per stage.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = write!(out, "{:<26}", "");
        for r in &self.rows {
            let _ = write!(out, "{:>12}", r.variant);
        }
        out.push('\n');
        let lines: [(&str, Stage); 3] = [
            ("Smooth step", |r| r.smooth_s),
            ("Iteratively restore step", |r| r.restore_s),
            ("Total", |r| r.total_s),
        ];
        for (label, get) in lines {
            let _ = write!(out, "{label:<26}");
            for r in &self.rows {
                let _ = write!(out, "{:>11.4}s", get(r));
            }
            out.push('\n');
        }
        if let Some(r) = self.rows.first() {
            let _ = writeln!(out, "image {}x{}", r.width, r.height);
        }
        out
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.total_cmp(b));
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

fn seconds(d: Duration) -> f64 {
    d.as_secs_f64().max(MIN_SECONDS)
}

/// Times each preset `repeat` times, one after another, and keeps the median
/// of each stage. The total is the sum of the stage medians.
pub fn run_bench(image: &ImageRGB, presets: &[SirPreset], repeat: usize) -> Result<BenchReport> {
    if repeat == 0 {
        return Err(SirError::invalid("repeat must be at least 1"));
    }
    let (width, height) = image.dims();
    let mut rows = Vec::with_capacity(presets.len());
    for preset in presets {
        let mut smooth = Vec::with_capacity(repeat);
        let mut restore = Vec::with_capacity(repeat);
        for _ in 0..repeat {
            let outcome = sir_run_detailed(image, &preset.config)?;
            smooth.push(seconds(outcome.smooth_time));
            restore.push(seconds(outcome.restore_time));
        }
        let smooth_s = median(smooth);
        let restore_s = median(restore);
        rows.push(BenchRow {
            variant: preset.name.to_string(),
            width,
            height,
            iterations: preset.config.iterations,
            smooth_s,
            restore_s,
            total_s: smooth_s + restore_s,
        });
    }
    Ok(BenchReport { rows })
}
