//! CSV and JSON formats of samples, run metadata and rate tables.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::Real;
use crate::sampler::{EmpiricalMeasure, MeasureMeta};

fn csv_error(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}

/// Header `chain,x1,...,xd`, then one row per chain.
pub fn write_samples_csv<T: Real, W: Write>(measure: &EmpiricalMeasure<T>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["chain".to_string()];
    header.extend((1..=measure.dim()).map(|j| format!("x{j}")));
    w.write_record(&header).map_err(csv_error)?;
    for (id, row) in measure.chain_ids().iter().zip(measure.rows()) {
        let mut record = vec![id.to_string()];
        record.extend(row.iter().map(|x| x.to_string()));
        w.write_record(&record).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a samples CSV back; metadata is taken from `meta` when given.
pub fn read_samples_csv(path: &Path, meta: Option<MeasureMeta>) -> Result<EmpiricalMeasure<f64>> {
    let mut r = csv::Reader::from_path(path).map_err(csv_error)?;
    let headers = r.headers().map_err(csv_error)?.clone();
    if headers.get(0) != Some("chain") || headers.len() < 2 {
        return Err(Error::Parse(format!(
            "{}: expected header `chain,x1,...`",
            path.display()
        )));
    }
    let dim = headers.len() - 1;
    let mut ids = Vec::new();
    let mut samples = Vec::new();
    for record in r.records() {
        let record = record.map_err(csv_error)?;
        let parse = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("`{s}`: {e}")))
        };
        ids.push(
            record[0]
                .trim()
                .parse::<usize>()
                .map_err(|e| Error::Parse(e.to_string()))?,
        );
        for j in 1..=dim {
            samples.push(parse(&record[j])?);
        }
    }
    if ids.is_empty() {
        return Err(Error::Parse(format!("{}: no sample rows", path.display())));
    }
    let meta = meta.unwrap_or(MeasureMeta {
        target: String::new(),
        algorithm: String::new(),
        lambda: 0.0,
        beta: 1.0,
        d: dim,
        horizon: 0.0,
        seed: 0,
        n_chains: ids.len(),
        steps: 0,
        diverged_chains: Vec::new(),
    });
    EmpiricalMeasure::new(dim, samples, ids, meta)
}

pub fn write_json<S: Serialize>(path: &Path, value: &S) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

pub fn read_json<D: for<'de> Deserialize<'de>>(path: &Path) -> Result<D> {
    Ok(serde_json::from_reader(std::io::BufReader::new(
        File::open(path)?,
    ))?)
}

/// One row of a rate table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateRow {
    pub lambda: f64,
    pub distance: f64,
    pub metric: String,
}

/// Header `lambda,distance,metric`.
pub fn write_rate_csv<W: Write>(rows: &[RateRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}
