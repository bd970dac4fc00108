use anyhow::{bail, Context, Result};
use clap::Args;
use serde::Serialize;

use mtula::constants::run_certificates;
use mtula::io::write_json;
use mtula::numerics::RngStream;
use mtula::potentials::{
    check_assumption_2, check_assumption_3, check_assumption_4, make_target, AssumptionReport,
    CheckOptions, TargetKind,
};

use super::with_pool;
use crate::manifest::{OutputPlan, WithManifest};
use crate::settings::{out_path, resolve, Resolved, SharedArgs};
use crate::Status;

/// Violations listed per report on stdout; the JSON output has all of them.
const SHOWN_VIOLATIONS: usize = 5;

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub shared: SharedArgs,
    /// Random points (or pairs) per inequality.
    #[arg(long)]
    pub points: Option<usize>,
    /// Points are drawn uniformly from the ball of this radius.
    #[arg(long)]
    pub radius: Option<f64>,
    /// Replace a certified constant, `KEY=VALUE` (e.g. `L=0.01`); repeatable.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

#[derive(Debug, Serialize)]
struct CheckConfig {
    #[serde(flatten)]
    shared: Resolved,
    targets: Vec<TargetKind>,
    points: usize,
    radius: f64,
    overrides: Vec<(String, f64)>,
}

#[derive(Debug, Serialize)]
struct CheckOutput {
    passed: bool,
    reports: Vec<AssumptionReport>,
}

fn parse_override(s: &str) -> Result<(String, f64)> {
    let (key, value) = s
        .split_once('=')
        .with_context(|| format!("override `{s}` is not KEY=VALUE"))?;
    let value: f64 = value
        .trim()
        .parse()
        .with_context(|| format!("override `{s}`: bad number"))?;
    Ok((key.trim().to_string(), value))
}

pub fn run(args: CheckArgs) -> Result<Status> {
    let (resolved, file) = resolve(&args.shared)?;
    let points = args
        .points
        .or(file.points)
        .unwrap_or(CheckOptions::default().n_points);
    let radius = args
        .radius
        .or(file.radius)
        .unwrap_or(CheckOptions::default().radius);
    if points == 0 {
        bail!("--points must be at least 1");
    }
    if !(radius > 0.0 && radius.is_finite()) {
        bail!("--radius must be positive, got {radius}");
    }
    let raw = if args.overrides.is_empty() {
        file.overrides.clone().unwrap_or_default()
    } else {
        args.overrides.clone()
    };
    let overrides = raw
        .iter()
        .map(|s| parse_override(s))
        .collect::<Result<Vec<_>>>()?;
    let kinds = match resolved.target {
        Some(kind) => vec![kind],
        None => TargetKind::ALL.to_vec(),
    };
    let mut targets = Vec::with_capacity(kinds.len());
    for &kind in &kinds {
        let base = make_target::<f64>(kind, resolved.dim)?;
        let mut constants = *base.constants();
        for (key, value) in &overrides {
            constants.apply_override(key, *value)?;
        }
        targets.push(base.with_constants(constants)?);
    }
    let plan = OutputPlan::new(
        out_path(&args.shared, &file, "check.json"),
        &[],
        resolved.force,
    )?;

    let options = CheckOptions {
        n_points: points,
        radius,
    };
    let reports = with_pool(resolved.workers, || -> Result<Vec<AssumptionReport>> {
        let mut reports = Vec::new();
        for (k, target) in targets.iter().enumerate() {
            let stream = |i: u64| RngStream::new(resolved.seed, 8 * k as u64 + i);
            reports.push(check_assumption_2(target, options, &mut stream(0)));
            reports.push(check_assumption_3(target, options, &mut stream(1)));
            reports.push(check_assumption_4(target, options, &mut stream(2)));
            reports.extend(run_certificates(target, options, &stream(3))?);
        }
        Ok(reports)
    })??;

    let passed = reports.iter().all(AssumptionReport::passed);
    for r in &reports {
        let verdict = if r.passed() {
            "ok".to_string()
        } else {
            format!("{} violations", r.violations.len())
        };
        println!(
            "{:<12} {:<22} {:>6} points  {verdict}",
            r.target, r.assumption, r.points
        );
        for v in r.violations.iter().take(SHOWN_VIOLATIONS) {
            println!(
                "    {}: lhs {:e} > rhs {:e} at |theta| = {:.4}",
                v.condition,
                v.lhs,
                v.rhs,
                norm(&v.theta)
            );
        }
    }
    let output = CheckOutput { passed, reports };
    write_json(
        plan.primary(),
        &WithManifest {
            manifest: plan.manifest_name(),
            body: &output,
        },
    )?;
    plan.write_manifest(&CheckConfig {
        shared: resolved,
        targets: kinds,
        points,
        radius,
        overrides,
    })?;
    Ok(if passed {
        Status::Clean
    } else {
        Status::Violations
    })
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}
