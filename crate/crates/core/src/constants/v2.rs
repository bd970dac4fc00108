//! `∫ V₂ dπ_β = 1 + E|θ|²` under the target.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::norm_sq;
use crate::potentials::{double_well_second_moment, TargetKind, TargetSpec};
use crate::real::Real;
use crate::sampler::{run_chains, Algorithm, SamplerConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum V2Method {
    /// Closed form.
    Analytic,
    /// One-dimensional radial quadrature.
    RadialQuadrature,
    /// Average over reference draws.
    MonteCarlo,
    /// Given by the caller.
    Supplied,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct V2Integral {
    pub value: f64,
    pub standard_error: Option<f64>,
    pub method: V2Method,
}

/// Reference-sampler settings for the Monte Carlo fallback.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloOptions {
    pub draws: usize,
    pub fine_step: f64,
    pub horizon: f64,
    pub seed: u64,
}

impl Default for MonteCarloOptions {
    fn default() -> Self {
        Self {
            draws: 100_000,
            fine_step: 1e-3,
            horizon: 20.0,
            seed: 0,
        }
    }
}

/// Closed forms where available (Gaussian: `1 + d/β`; mixture at `β = 1`:
/// `1 + d + |ȧ|²`), radial quadrature for the double-well, and a Monte
/// Carlo average with its standard error otherwise.
pub fn v2_integral<T: Real>(
    target: &TargetSpec<T>,
    beta: f64,
    mc: &MonteCarloOptions,
) -> Result<V2Integral> {
    let d = target.dim();
    let analytic = |value: f64| V2Integral {
        value,
        standard_error: None,
        method: V2Method::Analytic,
    };
    match target.kind() {
        Some(TargetKind::Gaussian) => return Ok(analytic(1.0 + d as f64 / beta)),
        Some(TargetKind::Mixture) if beta == 1.0 => {
            if let Some(center) = target.mixture_center() {
                return Ok(analytic(1.0 + d as f64 + norm_sq(center).as_f64()));
            }
        }
        Some(TargetKind::DoubleWell) => {
            return Ok(V2Integral {
                value: 1.0 + double_well_second_moment(d, beta)?,
                standard_error: None,
                method: V2Method::RadialQuadrature,
            })
        }
        _ => {}
    }
    let cfg = SamplerConfig::<T>::new(d, mc.fine_step, beta, mc.draws, mc.horizon, mc.seed)
        .with_algorithm(Algorithm::Reference);
    let draws = run_chains(&cfg, target)?;
    let values: Vec<f64> = draws.rows().map(|r| 1.0 + norm_sq(r).as_f64()).collect();
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    Ok(V2Integral {
        value: mean,
        standard_error: Some((var / n).sqrt()),
        method: V2Method::MonteCarlo,
    })
}
