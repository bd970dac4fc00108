//! Distances between empirical measures and analytic laws, moments,
//! histograms and log-log rate fits.

mod cdf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot, norm_sq};
use crate::numerics::RngStream;
use crate::real::Real;
use crate::sampler::EmpiricalMeasure;

pub use cdf::{AnalyticCdf, CDF_GRID_POINTS};

/// Default number of projection directions for [`sliced_wasserstein`].
pub const DEFAULT_PROJECTIONS: usize = 256;

fn sorted(xs: &[f64]) -> Vec<f64> {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

fn check_order(p: f64) -> Result<()> {
    if p >= 1.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!(
            "Wasserstein order must be at least 1, got {p}"
        )))
    }
}

/// Mean of `|x_(i) - y_(i)|^p` over sorted samples, i.e. `W_p^p`.
fn wasserstein_1d_pow(xs: &[f64], ys: &[f64], p: f64) -> f64 {
    let (a, b) = (sorted(xs), sorted(ys));
    let total: f64 = a.iter().zip(&b).map(|(x, y)| (x - y).abs().powf(p)).sum();
    total / a.len() as f64
}

/// Exact `W_p` between two equal-size empirical measures on the line,
/// through the sorted coupling.
pub fn wasserstein_1d(xs: &[f64], ys: &[f64], p: f64) -> Result<f64> {
    check_order(p)?;
    if xs.len() != ys.len() || xs.is_empty() {
        return Err(Error::SizeMismatch(format!(
            "samples of sizes {} and {}",
            xs.len(),
            ys.len()
        )));
    }
    Ok(wasserstein_1d_pow(xs, ys, p).powf(1.0 / p))
}

/// Sliced `W_p`: the `p`-mean over `n_proj` random directions of the 1-D
/// distance between projections. A lower bound on `W_p`.
///
/// Directions are drawn sequentially from `stream` before the projections
/// are evaluated in parallel.
pub fn sliced_wasserstein<T: Real>(
    a: &EmpiricalMeasure<T>,
    b: &EmpiricalMeasure<T>,
    p: f64,
    n_proj: usize,
    stream: &mut RngStream,
) -> Result<f64> {
    check_order(p)?;
    if a.len() != b.len() || a.dim() != b.dim() {
        return Err(Error::SizeMismatch(format!(
            "measures of shape {}x{} and {}x{}",
            a.len(),
            a.dim(),
            b.len(),
            b.dim()
        )));
    }
    if n_proj == 0 {
        return Err(Error::InvalidConfig(
            "at least one projection is required".into(),
        ));
    }
    let directions: Vec<Vec<T>> = (0..n_proj).map(|_| stream.unit_vector(a.dim())).collect();
    let project = |m: &EmpiricalMeasure<T>, u: &[T]| -> Vec<f64> {
        m.rows().map(|r| dot(r, u).as_f64()).collect()
    };
    let costs: Vec<f64> = directions
        .par_iter()
        .map(|u| wasserstein_1d_pow(&project(a, u), &project(b, u), p))
        .collect();
    Ok((costs.iter().sum::<f64>() / n_proj as f64).powf(1.0 / p))
}

/// `sup_i max(|i/N - F(x_(i))|, |(i-1)/N - F(x_(i))|)`.
pub fn ks_statistic<F: Fn(f64) -> f64>(xs: &[f64], cdf: F) -> f64 {
    let n = xs.len() as f64;
    sorted(xs)
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            ((i as f64 + 1.0) / n - f)
                .abs()
                .max((f - i as f64 / n).abs())
        })
        .fold(0.0, f64::max)
}

/// `(1/N) Σ |row|^p`.
pub fn empirical_moment<T: Real>(a: &EmpiricalMeasure<T>, p: u32) -> f64 {
    let total: f64 = a
        .rows()
        .map(|r| norm_sq(r).as_f64().powf(0.5 * p as f64))
        .sum();
    total / a.len() as f64
}

/// Least-squares fit of `log(distance)` on `log(λ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// `(log λ, log distance)` pairs.
    pub points: Vec<(f64, f64)>,
}

pub fn fit_rate(step_sizes: &[f64], distances: &[f64]) -> Result<RateFit> {
    if step_sizes.len() != distances.len() || step_sizes.len() < 2 {
        return Err(Error::SizeMismatch(format!(
            "need two or more (step, distance) pairs, got {} and {}",
            step_sizes.len(),
            distances.len()
        )));
    }
    for (index, &value) in step_sizes.iter().chain(distances).enumerate() {
        if !(value > 0.0) {
            return Err(Error::NonPositive {
                index: index % step_sizes.len(),
                value,
            });
        }
    }
    let points: Vec<(f64, f64)> = step_sizes
        .iter()
        .zip(distances)
        .map(|(l, d)| (l.ln(), d.ln()))
        .collect();
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidConfig(
            "step sizes must not all be equal".into(),
        ));
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0)
    };
    Ok(RateFit {
        slope,
        intercept: my - slope * mx,
        r_squared,
        points,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub width: f64,
    /// `(bin center, density)`, densities normalized by the total count.
    pub bins: Vec<(f64, f64)>,
    /// Fraction of samples inside `[lo, hi]`.
    pub mass_inside: f64,
}

/// Equal-width histogram on `[lo, hi]` (last bin closed) normalized so that
/// `Σ density · width` is the fraction of samples inside the range.
pub fn histogram(xs: &[f64], n_bins: usize, lo: f64, hi: f64) -> Result<Histogram> {
    if n_bins == 0 || !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "histogram needs n_bins >= 1 and lo < hi, got {n_bins}, [{lo}, {hi}]"
        )));
    }
    let width = (hi - lo) / n_bins as f64;
    let mut counts = vec![0usize; n_bins];
    let mut inside = 0usize;
    for &x in xs {
        if x >= lo && x <= hi {
            let k = (((x - lo) / width) as usize).min(n_bins - 1);
            counts[k] += 1;
            inside += 1;
        }
    }
    let n = xs.len().max(1) as f64;
    let bins = counts
        .iter()
        .enumerate()
        .map(|(k, &c)| (lo + (k as f64 + 0.5) * width, c as f64 / (n * width)))
        .collect();
    Ok(Histogram {
        lo,
        hi,
        width,
        bins,
        mass_inside: inside as f64 / n,
    })
}
