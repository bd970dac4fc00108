use std::fs::File;
use std::io::BufWriter;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use serde::Serialize;

use mtula::io::{write_json, write_rate_csv, RateRow};
use mtula::metrics::{fit_rate, sliced_wasserstein, wasserstein_1d, RateFit, DEFAULT_PROJECTIONS};
use mtula::numerics::RngStream;
use mtula::potentials::{make_target, TargetKind};
use mtula::sampler::{run_chains, tamed_gradient, Algorithm};
use mtula::{Config, Measure, Target};

use super::{warn, with_pool};
use crate::manifest::{OutputPlan, WithManifest};
use crate::settings::{out_path, resolve, Resolved, SharedArgs, DEFAULT_LAMBDAS};
use crate::Status;

pub const DEFAULT_BOOTSTRAP: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    W1,
    W2,
    /// `W₂` to exact Gaussian draws, or in closed form with `--analytic`.
    GaussianExact,
}

impl Metric {
    fn order(self) -> f64 {
        match self {
            Metric::W1 => 1.0,
            Metric::W2 | Metric::GaussianExact => 2.0,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Metric::W1 => "w1",
            Metric::W2 => "w2",
            Metric::GaussianExact => "gaussian-exact",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Projection {
    /// Exact distance between first components.
    First,
    /// Sliced distance over random directions.
    Sliced,
}

#[derive(Debug, Args)]
pub struct RateArgs {
    #[command(flatten)]
    pub shared: SharedArgs,
    /// Step-size grid, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub lambdas: Option<Vec<f64>>,
    #[arg(long, value_enum)]
    pub metric: Option<Metric>,
    #[arg(long, value_enum)]
    pub projection: Option<Projection>,
    /// Directions for `--projection sliced`.
    #[arg(long)]
    pub projections: Option<usize>,
    /// Reference step (default: a tenth of the smallest λ).
    #[arg(long)]
    pub fine_step: Option<f64>,
    /// Reference horizon (default: `--horizon`).
    #[arg(long)]
    pub reference_horizon: Option<f64>,
    /// Gaussian only: closed-form stationary distance, no sampling.
    #[arg(long)]
    pub analytic: bool,
    /// Bootstrap resamples for the standard errors (first-component only).
    #[arg(long)]
    pub bootstrap: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
struct RateConfig {
    #[serde(flatten)]
    shared: Resolved,
    lambdas: Vec<f64>,
    metric: Metric,
    projection: Projection,
    projections: usize,
    analytic: bool,
    reference: Option<ReferenceConfig>,
    bootstrap: usize,
}

#[derive(Debug, Clone, Serialize)]
struct ReferenceConfig {
    kind: &'static str,
    fine_step: Option<f64>,
    horizon: Option<f64>,
    seed: u64,
}

#[derive(Debug, Serialize)]
struct RateSummary<'a> {
    metric: Metric,
    projection: Projection,
    lambdas: &'a [f64],
    distances: &'a [f64],
    /// Bootstrap standard errors, when computed.
    standard_errors: Option<Vec<f64>>,
    diverged_chains: Vec<usize>,
    fit: &'a RateFit,
}

/// Stationary `W₂` between the tamed chain on the Gaussian target and
/// `N(0, I/β)`. The chain is the AR(1) recursion `θ ← ρθ + √(2λ/β)ξ` with
/// `ρ = 1 - λ·g`, `g` the tamed gradient slope, so its stationary law is
/// `N(0, σ²I)` with `σ² = (2λ/β)/(1 - ρ²)`.
pub fn gaussian_stationary_distance(target: &Target, lambda: f64, beta: f64) -> Result<f64> {
    if target.kind() != Some(TargetKind::Gaussian) || target.constants().r != 0 {
        bail!("--analytic needs the gaussian target");
    }
    let d = target.dim();
    let mut e1 = vec![0.0; d];
    e1[0] = 1.0;
    let rho = 1.0 - lambda * tamed_gradient(target, &e1, lambda)[0];
    if rho.abs() >= 1.0 {
        bail!("λ = {lambda} gives an unstable recursion (ρ = {rho})");
    }
    let sigma = (2.0 * lambda / beta / (1.0 - rho * rho)).sqrt();
    Ok((d as f64).sqrt() * (sigma - beta.recip().sqrt()).abs())
}

fn bootstrap_se(
    xs: &[f64],
    ys: &[f64],
    p: f64,
    resamples: usize,
    stream: &mut RngStream,
) -> Result<f64> {
    let n = xs.len();
    let draw = |src: &[f64], stream: &mut RngStream| -> Vec<f64> {
        (0..n)
            .map(|_| src[((stream.uniform() * n as f64) as usize).min(n - 1)])
            .collect()
    };
    let mut values = Vec::with_capacity(resamples);
    for _ in 0..resamples {
        let a = draw(xs, stream);
        let b = draw(ys, stream);
        values.push(wasserstein_1d(&a, &b, p)?);
    }
    let m = values.iter().sum::<f64>() / resamples as f64;
    Ok(
        (values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (resamples as f64 - 1.0).max(1.0))
            .sqrt(),
    )
}

pub fn run(args: RateArgs) -> Result<Status> {
    let (resolved, file) = resolve(&args.shared)?;
    let kind = resolved.target()?;
    let lambdas = args
        .lambdas
        .clone()
        .or(file.lambdas.clone())
        .unwrap_or_else(|| DEFAULT_LAMBDAS.to_vec());
    if lambdas.len() < 2 || lambdas.iter().any(|l| !(*l > 0.0 && l.is_finite())) {
        bail!("--lambdas needs two or more positive step sizes");
    }
    let metric = match args.metric {
        Some(m) => m,
        None => match file.metric.as_deref() {
            Some(s) => Metric::from_str(s, true).map_err(|e| anyhow::anyhow!("metric: {e}"))?,
            None => Metric::W1,
        },
    };
    let projection = match args.projection {
        Some(p) => p,
        None => match file.projection.as_deref() {
            Some(s) => {
                Projection::from_str(s, true).map_err(|e| anyhow::anyhow!("projection: {e}"))?
            }
            None => Projection::First,
        },
    };
    let projections = args
        .projections
        .or(file.projections)
        .unwrap_or(DEFAULT_PROJECTIONS);
    let analytic = args.analytic || file.analytic.unwrap_or(false);
    let bootstrap = match projection {
        Projection::First if !analytic => args
            .bootstrap
            .or(file.bootstrap)
            .unwrap_or(DEFAULT_BOOTSTRAP),
        _ => 0,
    };
    if analytic && metric != Metric::GaussianExact {
        bail!("--analytic goes with --metric gaussian-exact");
    }
    if metric == Metric::GaussianExact && kind != TargetKind::Gaussian {
        bail!("--metric gaussian-exact needs the gaussian target");
    }
    let target = make_target::<f64>(kind, resolved.dim)?;
    let smallest = lambdas.iter().cloned().fold(f64::INFINITY, f64::min);
    let reference = (!analytic).then(|| {
        let seed = resolved.seed.wrapping_add(1);
        if kind == TargetKind::Gaussian {
            ReferenceConfig {
                kind: "exact",
                fine_step: None,
                horizon: None,
                seed,
            }
        } else {
            ReferenceConfig {
                kind: "fine-step",
                fine_step: Some(args.fine_step.or(file.fine_step).unwrap_or(smallest / 10.0)),
                horizon: Some(
                    args.reference_horizon
                        .or(file.reference_horizon)
                        .unwrap_or(resolved.horizon),
                ),
                seed,
            }
        }
    });
    let config = RateConfig {
        shared: resolved.clone(),
        lambdas: lambdas.clone(),
        metric,
        projection,
        projections,
        analytic,
        reference: reference.clone(),
        bootstrap,
    };
    let plan = OutputPlan::new(
        out_path(&args.shared, &file, "rate.csv"),
        &["fit.json"],
        resolved.force,
    )?;

    let (distances, standard_errors, diverged) = with_pool(resolved.workers, || -> Result<_> {
        if analytic {
            let d = lambdas
                .iter()
                .map(|&l| gaussian_stationary_distance(&target, l, resolved.beta))
                .collect::<Result<Vec<_>>>()?;
            return Ok((d, None, Vec::new()));
        }
        let reference = reference.as_ref().expect("sampled runs have a reference");
        let ref_config = Config::new(
            resolved.dim,
            reference.fine_step.unwrap_or(smallest),
            resolved.beta,
            resolved.chains,
            reference.horizon.unwrap_or(resolved.horizon),
            reference.seed,
        )
        .with_algorithm(Algorithm::Reference)
        .with_exact_gaussian(reference.kind == "exact");
        let ref_measure = run_chains(&ref_config, &target).context("reference run")?;
        warn(&ref_measure.warnings);
        let mut distances = Vec::with_capacity(lambdas.len());
        let mut errors = Vec::with_capacity(lambdas.len());
        let mut diverged = Vec::with_capacity(lambdas.len());
        for (k, &lambda) in lambdas.iter().enumerate() {
            // Every λ reuses the chain streams: common random numbers.
            let cfg = Config::new(
                resolved.dim,
                lambda,
                resolved.beta,
                resolved.chains,
                resolved.horizon,
                resolved.seed,
            );
            let measure = run_chains(&cfg, &target).with_context(|| format!("λ = {lambda}"))?;
            warn(&measure.warnings);
            diverged.push(measure.meta.diverged_chains.len());
            let (a, b) = matched(&measure, &ref_measure);
            let p = metric.order();
            let mut stream = RngStream::new(resolved.seed, u64::MAX - k as u64);
            match projection {
                Projection::First => {
                    let xs: Vec<f64> = a.first_component();
                    let ys: Vec<f64> = b.first_component();
                    distances.push(wasserstein_1d(&xs, &ys, p)?);
                    if bootstrap > 1 {
                        errors.push(bootstrap_se(&xs, &ys, p, bootstrap, &mut stream)?);
                    }
                }
                Projection::Sliced => {
                    distances.push(sliced_wasserstein(&a, &b, p, projections, &mut stream)?)
                }
            }
        }
        let errors = (errors.len() == distances.len()).then_some(errors);
        Ok((distances, errors, diverged))
    })??;

    let fit = fit_rate(&lambdas, &distances)?;
    let rows: Vec<RateRow> = lambdas
        .iter()
        .zip(&distances)
        .map(|(&lambda, &distance)| RateRow {
            lambda,
            distance,
            metric: metric.name().to_string(),
        })
        .collect();
    let out = File::create(plan.primary())
        .with_context(|| format!("creating {}", plan.primary().display()))?;
    write_rate_csv(&rows, BufWriter::new(out))?;
    let summary = RateSummary {
        metric,
        projection,
        lambdas: &lambdas,
        distances: &distances,
        standard_errors,
        diverged_chains: diverged,
        fit: &fit,
    };
    write_json(
        plan.companion(0),
        &WithManifest {
            manifest: plan.manifest_name(),
            body: &summary,
        },
    )?;
    plan.write_manifest(&config)?;
    println!(
        "slope {:.4} (r² {:.4}) over {} step sizes -> {}",
        fit.slope,
        fit.r_squared,
        lambdas.len(),
        plan.primary().display()
    );
    Ok(Status::Clean)
}

/// Equal-size measures: the rows of chains that survived in both.
fn matched(a: &Measure, b: &Measure) -> (Measure, Measure) {
    let n = a.len().min(b.len());
    let take = |m: &Measure| -> Measure {
        let rows: Vec<Vec<f64>> = m.rows().take(n).map(|r| r.to_vec()).collect();
        Measure::from_rows(&rows).expect("rows of a valid measure")
    };
    (take(a), take(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analytic_distance_matches_the_recursion() {
        let t = make_target::<f64>(TargetKind::Gaussian, 1).unwrap();
        let lambda: f64 = 0.1;
        let rho = 1.0 - lambda / (1.0 + lambda).sqrt();
        let sigma = (2.0 * lambda / (1.0 - rho * rho)).sqrt();
        let d = gaussian_stationary_distance(&t, lambda, 1.0).unwrap();
        assert!((d - (sigma - 1.0).abs()).abs() < 1e-15);
        assert!(gaussian_stationary_distance(
            &make_target::<f64>(TargetKind::DoubleWell, 1).unwrap(),
            0.1,
            1.0
        )
        .is_err());
    }
}
