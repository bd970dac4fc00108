use anyhow::Result;
use clap::Args;
use serde::Serialize;

use mtula::constants::{v2_integral, ConstantsReport, DerivedConstants, MonteCarloOptions};
use mtula::io::write_json;
use mtula::potentials::make_target;

use super::with_pool;
use crate::manifest::{OutputPlan, WithManifest};
use crate::settings::{out_path, resolve, Resolved, SharedArgs};
use crate::Status;

#[derive(Debug, Args)]
pub struct ConstantsArgs {
    #[command(flatten)]
    pub shared: SharedArgs,
    /// Extra moment degrees `p` to tabulate, comma separated.
    #[arg(long = "p-list", value_delimiter = ',')]
    pub degrees: Option<Vec<u32>>,
}

#[derive(Debug, Serialize)]
struct ConstantsConfig {
    #[serde(flatten)]
    shared: Resolved,
    degrees: Vec<u32>,
}

pub fn run(args: ConstantsArgs) -> Result<Status> {
    let (resolved, file) = resolve(&args.shared)?;
    let kind = resolved.target()?;
    let degrees = args
        .degrees
        .clone()
        .or(file.degrees.clone())
        .unwrap_or_default();
    let target = make_target::<f64>(kind, resolved.dim)?;
    let plan = OutputPlan::new(
        out_path(&args.shared, &file, "constants.json"),
        &[],
        resolved.force,
    )?;

    let mc = MonteCarloOptions {
        seed: resolved.seed,
        ..MonteCarloOptions::default()
    };
    let report = with_pool(resolved.workers, || -> Result<ConstantsReport> {
        let v2 = v2_integral(&target, resolved.beta, &mc)?;
        let derived = DerivedConstants::derive(&target, resolved.beta, v2, &degrees)?;
        Ok(ConstantsReport::from(&derived))
    })??;

    write_json(
        plan.primary(),
        &WithManifest {
            manifest: plan.manifest_name(),
            body: &report,
        },
    )?;
    plan.write_manifest(&ConstantsConfig {
        shared: resolved,
        degrees,
    })?;
    let show = |key: &str| {
        report.get(key).map_or_else(
            || "n/a".to_string(),
            |e| match (e.value, e.log10_value) {
                (Some(v), _) => format!("{v}"),
                (None, Some(l)) => format!("10^{l:.3}"),
                (None, None) => "inf".to_string(),
            },
        )
    };
    println!(
        "lambda_max = {}, C_bar_0 = {} -> {}",
        show("lambda_max"),
        show("C_bar_0"),
        plan.primary().display()
    );
    Ok(Status::Clean)
}
