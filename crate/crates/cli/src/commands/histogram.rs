use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use serde::Serialize;

use mtula::io::{read_json, read_samples_csv, write_json};
use mtula::metrics::{histogram, ks_statistic, AnalyticCdf};
use mtula::potentials::{make_target, marginal_pdf, TargetKind};
use mtula::sampler::MeasureMeta;

use crate::manifest::{OutputPlan, WithManifest};
use crate::settings::{out_path, resolve, SharedArgs};
use crate::Status;

pub const DEFAULT_BINS: usize = 50;

#[derive(Debug, Args)]
pub struct HistogramArgs {
    #[command(flatten)]
    pub shared: SharedArgs,
    /// Samples CSV written by `sample`; its `.meta.json` supplies the target
    /// and β unless given as flags.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub bins: Option<usize>,
    /// Histogram range `LO,HI` (default: symmetric, covering every sample).
    #[arg(
        long,
        value_delimiter = ',',
        num_args = 2,
        allow_negative_numbers = true
    )]
    pub range: Option<Vec<f64>>,
}

#[derive(Debug, Serialize)]
struct HistogramConfig {
    input: PathBuf,
    target: TargetKind,
    beta: f64,
    dim: usize,
    bins: usize,
    range: (f64, f64),
}

#[derive(Debug, Serialize)]
struct Summary {
    input: PathBuf,
    target: TargetKind,
    beta: f64,
    dim: usize,
    samples: usize,
    ks_statistic: f64,
    /// `1.36/√n`, the asymptotic 95% band of the KS statistic.
    ks_band_95: f64,
    bins: usize,
    range: (f64, f64),
    mass_inside: f64,
}

fn meta_beside(input: &Path) -> Option<MeasureMeta> {
    let stem = input.file_stem()?.to_string_lossy().into_owned();
    let path = input.with_file_name(format!("{stem}.meta.json"));
    path.exists().then(|| read_json(&path).ok()).flatten()
}

pub fn run(args: HistogramArgs) -> Result<Status> {
    let (resolved, file) = resolve(&args.shared)?;
    let input = args
        .input
        .clone()
        .or(file.input.clone())
        .context("--input is required")?;
    let meta = meta_beside(&input);
    let samples = read_samples_csv(&input, meta.clone())
        .with_context(|| format!("reading {}", input.display()))?;
    let kind = match (resolved.target, &meta) {
        (Some(kind), _) => kind,
        (None, Some(m)) if !m.target.is_empty() => m.target.parse()?,
        _ => bail!(
            "--target is required when {} has no metadata",
            input.display()
        ),
    };
    let beta = args
        .shared
        .beta
        .or(file.beta)
        .or(meta.as_ref().map(|m| m.beta))
        .unwrap_or(resolved.beta);
    let bins = args.bins.or(file.bins).unwrap_or(DEFAULT_BINS);
    let xs = samples.first_component();
    let range = match args.range.as_deref().map(|r| (r[0], r[1])).or(file.range) {
        Some(r) => r,
        None => {
            let a = xs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            let a = if a > 0.0 { a } else { 1.0 };
            (-a, a)
        }
    };
    let plan = OutputPlan::new(
        out_path(&args.shared, &file, "histogram.csv"),
        &["summary.json"],
        resolved.force,
    )?;

    let target = make_target::<f64>(kind, samples.dim())?;
    let density = marginal_pdf(&target, beta)?;
    let cdf = AnalyticCdf::new(&density)?;
    let ks = ks_statistic(&xs, |x| cdf.cdf(x));
    let hist = histogram(&xs, bins, range.0, range.1)?;

    let out = File::create(plan.primary())
        .with_context(|| format!("creating {}", plan.primary().display()))?;
    let mut w = BufWriter::new(out);
    use std::io::Write;
    writeln!(w, "bin_center,empirical_density,analytic_density")?;
    for &(center, empirical) in &hist.bins {
        writeln!(w, "{center},{empirical},{}", density.pdf(center))?;
    }
    w.flush()?;

    let summary = Summary {
        input: input.clone(),
        target: kind,
        beta,
        dim: samples.dim(),
        samples: xs.len(),
        ks_statistic: ks,
        ks_band_95: 1.36 / (xs.len() as f64).sqrt(),
        bins,
        range,
        mass_inside: hist.mass_inside,
    };
    write_json(
        plan.companion(0),
        &WithManifest {
            manifest: plan.manifest_name(),
            body: &summary,
        },
    )?;
    plan.write_manifest(&HistogramConfig {
        input,
        target: kind,
        beta,
        dim: samples.dim(),
        bins,
        range,
    })?;
    println!(
        "KS statistic {ks:.5} over {} samples -> {}",
        xs.len(),
        plan.primary().display()
    );
    Ok(Status::Clean)
}
