use std::fs::File;
use std::io::BufWriter;

use anyhow::{Context, Result};
use clap::Args;
use serde::Serialize;

use mtula::io::{write_json, write_samples_csv};
use mtula::potentials::make_target;
use mtula::sampler::{run_chains, Algorithm, MeasureMeta};
use mtula::Config;

use super::{warn, with_pool};
use crate::manifest::{OutputPlan, WithManifest};
use crate::settings::{out_path, resolve, Resolved, SharedArgs};
use crate::Status;

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub shared: SharedArgs,
    /// mtula, ula or reference.
    #[arg(long)]
    pub algorithm: Option<String>,
    /// With `--algorithm reference` on the Gaussian, draw exactly.
    #[arg(long)]
    pub exact: bool,
}

#[derive(Debug, Serialize)]
struct SampleConfig {
    #[serde(flatten)]
    shared: Resolved,
    algorithm: Algorithm,
    exact: bool,
}

#[derive(Debug, Serialize)]
struct SampleMeta<'a> {
    #[serde(flatten)]
    meta: &'a MeasureMeta,
    warnings: &'a [String],
}

pub fn run(args: SampleArgs) -> Result<Status> {
    let (resolved, file) = resolve(&args.shared)?;
    let algorithm: Algorithm = args
        .algorithm
        .as_deref()
        .or(file.algorithm.as_deref())
        .unwrap_or("mtula")
        .parse()?;
    let exact = args.exact || file.exact.unwrap_or(false);
    let kind = resolved.target()?;
    let lambda = resolved.lambda()?;
    let target = make_target::<f64>(kind, resolved.dim)?;
    let config = Config::new(
        resolved.dim,
        lambda,
        resolved.beta,
        resolved.chains,
        resolved.horizon,
        resolved.seed,
    )
    .with_algorithm(algorithm)
    .with_exact_gaussian(exact);
    config.validate()?;
    let plan = OutputPlan::new(
        out_path(&args.shared, &file, "samples.csv"),
        &["meta.json"],
        resolved.force,
    )?;

    let measure = with_pool(resolved.workers, || run_chains(&config, &target))??;
    warn(&measure.warnings);
    for d in &measure.meta.diverged_chains {
        eprintln!("warning: chain {} diverged at step {}", d.chain, d.step);
    }

    let csv = File::create(plan.primary())
        .with_context(|| format!("creating {}", plan.primary().display()))?;
    write_samples_csv(&measure, BufWriter::new(csv))?;
    let meta = SampleMeta {
        meta: &measure.meta,
        warnings: &measure.warnings,
    };
    write_json(
        plan.companion(0),
        &WithManifest {
            manifest: plan.manifest_name(),
            body: &meta,
        },
    )?;
    plan.write_manifest(&SampleConfig {
        shared: resolved,
        algorithm,
        exact,
    })?;
    println!(
        "{} rows x {} columns -> {}",
        measure.len(),
        measure.dim(),
        plan.primary().display()
    );
    Ok(Status::Clean)
}
