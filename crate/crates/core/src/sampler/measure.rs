use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivergenceRecord {
    pub chain: usize,
    pub step: u64,
}

/// Run metadata; also the sibling JSON file of a samples CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureMeta {
    pub target: String,
    pub algorithm: String,
    pub lambda: f64,
    pub beta: f64,
    pub d: usize,
    pub horizon: f64,
    pub seed: u64,
    pub n_chains: usize,
    pub steps: u64,
    pub diverged_chains: Vec<DivergenceRecord>,
}

/// Iterates of the surviving chains after a fixed number of steps.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot<T> {
    pub step: u64,
    pub chain_ids: Vec<usize>,
    /// Row-major, one row per entry of `chain_ids`.
    pub samples: Vec<T>,
}

/// An `N × d` sample matrix, one row per surviving chain, ordered by chain
/// index.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalMeasure<T: Real> {
    dim: usize,
    samples: Vec<T>,
    chain_ids: Vec<usize>,
    pub meta: MeasureMeta,
    pub snapshots: Vec<Snapshot<T>>,
    pub warnings: Vec<String>,
}

impl<T: Real> EmpiricalMeasure<T> {
    /// Builds a measure from row-major samples; rejects empty or non-finite
    /// input.
    pub fn new(
        dim: usize,
        samples: Vec<T>,
        chain_ids: Vec<usize>,
        meta: MeasureMeta,
    ) -> Result<Self> {
        if dim == 0 || samples.is_empty() || samples.len() != dim * chain_ids.len() {
            return Err(Error::SizeMismatch(format!(
                "{} values for {} rows of dimension {dim}",
                samples.len(),
                chain_ids.len()
            )));
        }
        if let Some(i) = samples.iter().position(|x| !x.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "non-finite sample in row {}",
                i / dim
            )));
        }
        Ok(Self {
            dim,
            samples,
            chain_ids,
            meta,
            snapshots: Vec::new(),
            warnings: Vec::new(),
        })
    }

    /// Rows labelled `0..N` with placeholder metadata.
    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let dim = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::SizeMismatch("rows of unequal length".into()));
        }
        let meta = MeasureMeta {
            target: String::new(),
            algorithm: String::new(),
            lambda: 0.0,
            beta: 1.0,
            d: dim,
            horizon: 0.0,
            seed: 0,
            n_chains: rows.len(),
            steps: 0,
            diverged_chains: Vec::new(),
        };
        Self::new(dim, rows.concat(), (0..rows.len()).collect(), meta)
    }

    pub fn len(&self) -> usize {
        self.chain_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain_ids.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.samples[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.samples.chunks_exact(self.dim)
    }

    pub fn chain_ids(&self) -> &[usize] {
        &self.chain_ids
    }

    pub fn as_flat(&self) -> &[T] {
        &self.samples
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        self.rows().map(|r| r[j]).collect()
    }

    pub fn first_component(&self) -> Vec<f64> {
        self.rows().map(|r| r[0].as_f64()).collect()
    }

    pub fn snapshot(&self, step: u64) -> Option<&Snapshot<T>> {
        self.snapshots.iter().find(|s| s.step == step)
    }
}
