//! Argument model and command implementations behind the `sir-tool` binary.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use sir_core::edgebench::{evaluate_manifest, read_manifest, CorpusReport, Preprocess, DEFAULT_TOLERANCE};
use sir_core::pipeline::sir_run_detailed;
use sir_core::timing::run_bench;
use sir_core::{
    builtin_presets, find_preset, load_image, save_image, Guidance, RangeSpec, RestorerSpec, SeparableOrder, SirConfig,
    SmootherSpec,
};

/// Environment variable capping worker threads; 0 or unset means automatic.
pub const THREADS_ENV: &str = "SIR_THREADS";

#[derive(Debug, Parser)]
#[command(name = "sir-tool", version, about = "Smooth-and-iteratively-restore image filtering")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Filter one image.
    Sir(SirArgs),
    /// Time the SiRSNN, SiRsep and SiR2DGauss presets on one image.
    Bench(BenchArgs),
    /// Sobel boundary F-measure over a corpus manifest.
    Edges(EdgesArgs),
}

#[derive(Debug, Args)]
pub struct SirArgs {
    #[arg(short, long)]
    pub input: PathBuf,
    #[arg(short, long)]
    pub output: PathBuf,
    /// Built-in preset name (case-insensitive). Defaults to SiRsep.
    #[arg(long, conflicts_with_all = ["smoother", "restorer"])]
    pub preset: Option<String>,
    /// `gaussian:<sigma>[:<radius>]` or `box:<radius>[:<times>]`.
    #[arg(long)]
    pub smoother: Option<String>,
    /// `gauss2d:<sigma>[:<radius>]`, `sep:<sigma>[:<radius>[:hv|vh]]`, `snn-mean` or `snn-median`.
    #[arg(long)]
    pub restorer: Option<String>,
    /// Number of restore iterations; overrides the preset's.
    #[arg(long)]
    pub iters: Option<usize>,
    /// Fixed guidance image; the input guides itself when absent.
    #[arg(long)]
    pub guide: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(short, long)]
    pub input: PathBuf,
    /// Runs per preset; the median of each stage is reported.
    #[arg(long, default_value_t = 3)]
    pub repeat: usize,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Setting {
    None,
    FilterOnly,
    Sir,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EdgeRestorer {
    Snn,
    Gauss2d,
    Sep,
}

#[derive(Debug, Args)]
pub struct EdgesArgs {
    /// Lines of `<image>\t<ground-truth>`, paths relative to the manifest.
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long, value_enum)]
    pub setting: Setting,
    #[arg(long, value_enum, default_value = "sep")]
    pub restorer: EdgeRestorer,
    /// Matching distance in pixels.
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    pub tolerance: f64,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

fn number<T: std::str::FromStr>(text: &str, what: &str) -> Result<T> {
    text.parse().ok().with_context(|| format!("invalid {what} `{text}`"))
}

pub fn parse_smoother(text: &str) -> Result<SmootherSpec> {
    let parts: Vec<&str> = text.split(':').collect();
    let spec = match parts.as_slice() {
        ["gaussian", sigma] => SmootherSpec::gaussian(number(sigma, "sigma")?),
        ["gaussian", sigma, radius] => SmootherSpec::Gaussian {
            sigma: number(sigma, "sigma")?,
            radius: number(radius, "radius")?,
        },
        ["box", radius] => SmootherSpec::IteratedBox {
            radius: number(radius, "radius")?,
            times: 1,
        },
        ["box", radius, times] => SmootherSpec::IteratedBox {
            radius: number(radius, "radius")?,
            times: number(times, "repeat count")?,
        },
        _ => bail!("unknown smoother `{text}`; expected gaussian:<sigma>[:<radius>] or box:<radius>[:<times>]"),
    };
    spec.validate()?;
    Ok(spec)
}

pub fn parse_restorer(text: &str) -> Result<RestorerSpec> {
    let parts: Vec<&str> = text.split(':').collect();
    let range = |sigma: &str, radius: Option<&&str>| -> Result<RangeSpec> {
        let mut spec = RangeSpec::new(number(sigma, "sigma")?);
        if let Some(r) = radius {
            spec.radius = number(r, "radius")?;
        }
        Ok(spec)
    };
    let spec = match parts.as_slice() {
        ["snn-mean"] => RestorerSpec::SnnMean,
        ["snn-median"] => RestorerSpec::SnnMedian,
        ["gauss2d", sigma, rest @ ..] if rest.len() <= 1 => RestorerSpec::Gauss2D(range(sigma, rest.first())?),
        ["sep", sigma, rest @ ..] if rest.len() <= 2 => {
            let order = match rest.get(1) {
                None => SeparableOrder::HV,
                Some(o) if o.eq_ignore_ascii_case("hv") => SeparableOrder::HV,
                Some(o) if o.eq_ignore_ascii_case("vh") => SeparableOrder::VH,
                Some(o) => bail!("unknown pass order `{o}`; expected hv or vh"),
            };
            RestorerSpec::SeparableGauss(range(sigma, rest.first())?, order)
        }
        _ => bail!(
            "unknown restorer `{text}`; expected gauss2d:<sigma>[:<radius>], sep:<sigma>[:<radius>[:hv|vh]], snn-mean or snn-median"
        ),
    };
    spec.validate()?;
    Ok(spec)
}

/// Builds the pipeline configuration from `sir` flags, without guidance.
pub fn sir_config(args: &SirArgs) -> Result<SirConfig> {
    let mut config = match &args.preset {
        Some(name) => {
            find_preset(name)
                .with_context(|| {
                    let names: Vec<_> = builtin_presets().iter().map(|p| p.name).collect();
                    format!("unknown preset `{name}`; available: {}", names.join(", "))
                })?
                .config
        }
        None => find_preset("SiRsep").expect("built-in preset").config,
    };
    if let Some(s) = &args.smoother {
        config.smoother = parse_smoother(s)?;
    }
    if let Some(r) = &args.restorer {
        config.restorer = parse_restorer(r)?;
    }
    if let Some(n) = args.iters {
        config.iterations = n;
    }
    Ok(config)
}

pub fn cmd_sir(args: &SirArgs, out: &mut dyn Write) -> Result<()> {
    let mut config = sir_config(args)?;
    let input = load_image(&args.input)?;
    if let Some(path) = &args.guide {
        let guide = load_image(path)?;
        ensure!(
            guide.dims() == input.dims(),
            "guide {} is {:?} but input is {:?}",
            path.display(),
            guide.dims(),
            input.dims()
        );
        config = config.with_guidance(Guidance::External(guide));
    }
    let outcome = sir_run_detailed(&input, &config)?;
    save_image(&outcome.output, &args.output)?;
    let (smooth, restore) = (outcome.smooth_time.as_secs_f64(), outcome.restore_time.as_secs_f64());
    writeln!(
        out,
        "smooth={smooth:.6} restore={restore:.6} total={:.6}",
        smooth + restore
    )?;
    Ok(())
}

pub fn cmd_bench(args: &BenchArgs, out: &mut dyn Write) -> Result<()> {
    let input = load_image(&args.input)?;
    let presets: Vec<_> = ["SiRSNN", "SiRsep", "SiR2DGauss"]
        .iter()
        .map(|n| find_preset(n).expect("built-in preset"))
        .collect();
    let report = run_bench(&input, &presets, args.repeat)?;
    write!(out, "{}", report.to_table())?;
    if let Some(path) = &args.csv {
        fs::write(path, report.to_csv()).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

/// Pre-processing for an edge setting; restorer ranges and blur follow the
/// edge-preparation presets.
pub fn edge_preprocess(setting: Setting, restorer: EdgeRestorer) -> Preprocess {
    let preset = match restorer {
        EdgeRestorer::Snn => "EdgePrep-snn",
        EdgeRestorer::Gauss2d => "EdgePrep-gauss2d",
        EdgeRestorer::Sep => "EdgePrep-sep",
    };
    let config = find_preset(preset).expect("built-in preset").config;
    match setting {
        Setting::None => Preprocess::None,
        Setting::FilterOnly => Preprocess::RestorerOnly(config.restorer),
        Setting::Sir => Preprocess::Sir(config),
    }
}

fn edges_csv(report: &CorpusReport) -> String {
    let mut csv = String::from("image,precision,recall,f,threshold\n");
    for item in &report.items {
        if let Ok(r) = &item.result {
            let t = r.best_threshold.map(|t| format!("{t:.6}")).unwrap_or_default();
            csv.push_str(&format!(
                "{},{:.6},{:.6},{:.6},{t}\n",
                item.name, r.precision, r.recall, r.f_measure
            ));
        }
    }
    let a = &report.aggregate;
    csv.push_str(&format!(
        "mean,{:.6},{:.6},{:.6},\n",
        a.precision, a.recall, a.f_measure
    ));
    csv
}

/// Prints one line per image and the mean F. Items that fail to load or
/// evaluate are listed and make the command fail after the report is out.
pub fn cmd_edges(args: &EdgesArgs, out: &mut dyn Write) -> Result<()> {
    ensure!(
        args.tolerance.is_finite() && args.tolerance >= 0.0,
        "tolerance must be a non-negative number"
    );
    let entries = read_manifest(&args.manifest)?;
    let report = evaluate_manifest(&entries, &edge_preprocess(args.setting, args.restorer), args.tolerance)?;
    for item in &report.items {
        match &item.result {
            Ok(r) => writeln!(
                out,
                "{}\tP={:.4}\tR={:.4}\tF={:.4}",
                item.name, r.precision, r.recall, r.f_measure
            )?,
            Err(e) => writeln!(out, "{}\terror: {e}", item.name)?,
        }
    }
    writeln!(out, "mean F={:.4} over {} image(s)", report.mean_f(), report.evaluated)?;
    if let Some(path) = &args.csv {
        fs::write(path, edges_csv(&report)).with_context(|| format!("writing {}", path.display()))?;
    }
    let failed = report.failures().count();
    ensure!(failed == 0, "{failed} corpus item(s) could not be evaluated");
    Ok(())
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Sir(a) => cmd_sir(a, out),
        Command::Bench(a) => cmd_bench(a, out),
        Command::Edges(a) => cmd_edges(a, out),
    }
}

/// Reads the thread cap from the environment; `None` means automatic.
pub fn thread_cap(value: Option<&str>) -> Result<Option<usize>> {
    match value.map(str::trim) {
        None | Some("") => Ok(None),
        Some(v) => match number::<usize>(v, THREADS_ENV)? {
            0 => Ok(None),
            n => Ok(Some(n)),
        },
    }
}
