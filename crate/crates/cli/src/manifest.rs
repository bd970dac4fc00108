//! Run manifests and output-file bookkeeping.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub resolved_config: serde_json::Value,
    pub version: String,
    /// RFC 3339 / ISO-8601, UTC.
    pub timestamp: String,
    pub outputs: Vec<String>,
}

/// The files one command writes: a primary output plus companions named
/// `<stem>.<suffix>` beside it, and `<stem>.manifest.json`.
#[derive(Debug, Clone)]
pub struct OutputPlan {
    primary: PathBuf,
    companions: Vec<PathBuf>,
    manifest: PathBuf,
}

fn sibling(primary: &Path, suffix: &str) -> PathBuf {
    let stem = primary
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into());
    primary.with_file_name(format!("{stem}.{suffix}"))
}

impl OutputPlan {
    /// Refuses to proceed if any planned file exists, unless `force`.
    pub fn new(primary: PathBuf, companion_suffixes: &[&str], force: bool) -> Result<Self> {
        let companions: Vec<PathBuf> = companion_suffixes
            .iter()
            .map(|s| sibling(&primary, s))
            .collect();
        let manifest = sibling(&primary, "manifest.json");
        let plan = Self {
            primary,
            companions,
            manifest,
        };
        if !force {
            if let Some(existing) = plan.all().find(|p| p.exists()) {
                bail!(
                    "{} already exists (pass --force to overwrite)",
                    existing.display()
                );
            }
        }
        if let Some(dir) = plan.primary.parent().filter(|d| !d.as_os_str().is_empty()) {
            if !dir.is_dir() {
                bail!("output directory {} does not exist", dir.display());
            }
        }
        Ok(plan)
    }

    fn all(&self) -> impl Iterator<Item = &PathBuf> {
        std::iter::once(&self.primary)
            .chain(&self.companions)
            .chain(std::iter::once(&self.manifest))
    }

    pub fn primary(&self) -> &Path {
        &self.primary
    }

    pub fn companion(&self, i: usize) -> &Path {
        &self.companions[i]
    }

    /// File name of the manifest, as referenced from the other outputs.
    pub fn manifest_name(&self) -> String {
        file_name(&self.manifest)
    }

    pub fn write_manifest<C: Serialize>(&self, config: &C) -> Result<()> {
        let manifest = RunManifest {
            command: std::env::args().collect::<Vec<_>>().join(" "),
            resolved_config: serde_json::to_value(config)?,
            version: format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION")),
            timestamp: chrono::Utc::now().to_rfc3339(),
            outputs: std::iter::once(&self.primary)
                .chain(&self.companions)
                .map(|p| file_name(p))
                .collect(),
        };
        mtula::io::write_json(&self.manifest, &manifest)
            .with_context(|| format!("writing {}", self.manifest.display()))
    }
}

fn file_name(p: &Path) -> String {
    p.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

/// Wraps a JSON output with a pointer to its manifest.
#[derive(Debug, Serialize)]
pub struct WithManifest<'a, T: Serialize> {
    pub manifest: String,
    #[serde(flatten)]
    pub body: &'a T,
}
