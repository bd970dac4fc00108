//! Analytic densities of the first coordinate under `π_β`.

use std::f64::consts::PI;

use super::{TargetKind, TargetSpec};
use crate::error::{Error, Result};
use crate::numerics::{
    golden_section_max, integrate, integrate_semi_infinite, log_gamma, QuadratureConfig,
    DEFAULT_TRUNCATION_TOL,
};
use crate::real::Real;

#[derive(Debug, Clone)]
enum Law {
    /// `N(0, 1/β)`
    Normal { beta: f64 },
    /// `½ N(a¹, 1) + ½ N(-a¹, 1)`
    Mixture { a1: f64 },
    /// Double-well with `d = 1`: `exp(-βU(x)) / Z`.
    DoubleWellLine { beta: f64, log_z: f64 },
    /// Double-well with `d ≥ 2`: ratio of radial integrals.
    DoubleWell {
        d: usize,
        beta: f64,
        log_prefactor: f64,
        log_denominator: f64,
    },
}

/// First-coordinate density of one of the built-in targets.
#[derive(Debug, Clone)]
pub struct MarginalDensity {
    target: String,
    law: Law,
    normalization_check: f64,
}

/// `log ∫_0^∞ exp(g(u)) du` for unimodal `g`, split at the maximizer so the
/// peak sits at a panel endpoint.
fn log_radial_integral<G: Fn(f64) -> f64>(g: G, hi: f64) -> Result<f64> {
    let u_star = golden_section_max(&g, 0.0, hi, 1e-12);
    let g_star = g(u_star);
    let cfg = QuadratureConfig::default();
    let left = integrate(|u| (g(u) - g_star).exp(), 0.0, u_star, &cfg)?;
    let right = integrate_semi_infinite(
        |v| (g(u_star + v) - g_star).exp(),
        DEFAULT_TRUNCATION_TOL,
        &cfg,
    )?;
    Ok(g_star + (left.value + right.value).ln())
}

/// `ln 2 + k ln u - β(s²/4 - s/2)` with `s = u² + x²`, the log integrand of
/// the radial integrals after substituting `r = u²`.
fn radial_log_integrand(k: usize, beta: f64, x_sq: f64) -> impl Fn(f64) -> f64 {
    move |u: f64| {
        let s = u * u + x_sq;
        let power = if k == 0 { 0.0 } else { k as f64 * u.ln() };
        std::f64::consts::LN_2 + power - beta * (0.25 * s * s - 0.5 * s)
    }
}

fn radial_bracket(d: usize, beta: f64, x_sq: f64) -> f64 {
    ((1.0 - x_sq).max(0.0) + (d as f64 / beta).sqrt() + 1.0).sqrt() + 1.0
}

impl Law {
    fn pdf(&self, x: f64) -> f64 {
        match *self {
            Law::Normal { beta } => (beta / (2.0 * PI)).sqrt() * (-0.5 * beta * x * x).exp(),
            Law::Mixture { a1 } => {
                0.5 / (2.0 * PI).sqrt()
                    * ((-0.5 * (x - a1).powi(2)).exp() + (-0.5 * (x + a1).powi(2)).exp())
            }
            Law::DoubleWellLine { beta, log_z } => {
                let s = x * x;
                (-beta * (0.25 * s * s - 0.5 * s) - log_z).exp()
            }
            Law::DoubleWell {
                d,
                beta,
                log_prefactor,
                log_denominator,
            } => {
                let x_sq = x * x;
                let g = radial_log_integrand(d - 2, beta, x_sq);
                match log_radial_integral(g, radial_bracket(d, beta, x_sq)) {
                    Ok(log_num) => (log_prefactor + log_num - log_denominator).exp(),
                    Err(_) => f64::NAN,
                }
            }
        }
    }
}

impl MarginalDensity {
    pub fn pdf(&self, x: f64) -> f64 {
        self.law.pdf(x)
    }

    pub fn target(&self) -> &str {
        &self.target
    }

    /// `∫ pdf` over the real line, computed once at construction.
    pub fn normalization_check(&self) -> f64 {
        self.normalization_check
    }

    /// Standard deviation scale used to lay out grids.
    pub fn scale(&self) -> f64 {
        match self.law {
            Law::Normal { beta } => beta.recip().sqrt(),
            Law::Mixture { a1 } => (1.0 + a1 * a1).sqrt(),
            Law::DoubleWellLine { beta, .. } | Law::DoubleWell { beta, .. } => {
                beta.recip().sqrt().max(1.0)
            }
        }
    }
}

/// `E|θ|²` under the double-well law in dimension `d` at inverse
/// temperature `β`, as a ratio of radial integrals.
pub(crate) fn double_well_second_moment(d: usize, beta: f64) -> Result<f64> {
    let hi = radial_bracket(d, beta, 0.0);
    let num = log_radial_integral(radial_log_integrand(d + 1, beta, 0.0), hi)?;
    let den = log_radial_integral(radial_log_integrand(d - 1, beta, 0.0), hi)?;
    Ok((num - den).exp())
}

/// First-coordinate marginal of a built-in target at inverse temperature `β`.
///
/// The mixture marginal is a two-component normal mixture only at `β = 1`;
/// other temperatures are rejected.
pub fn marginal_pdf<T: Real>(target: &TargetSpec<T>, beta: f64) -> Result<MarginalDensity> {
    if !(beta > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "beta must be positive, got {beta}"
        )));
    }
    let unsupported = || Error::UnsupportedTarget(target.name().to_string());
    let d = target.dim();
    let law = match target.kind().ok_or_else(unsupported)? {
        TargetKind::Gaussian => Law::Normal { beta },
        TargetKind::Mixture => {
            if beta != 1.0 {
                return Err(unsupported());
            }
            let a1 = target.mixture_center().ok_or_else(unsupported)?[0].as_f64();
            Law::Mixture { a1 }
        }
        TargetKind::DoubleWell if d == 1 => {
            let log_z = log_radial_integral(
                radial_log_integrand(0, beta, 0.0),
                radial_bracket(1, beta, 0.0),
            )?;
            Law::DoubleWellLine { beta, log_z }
        }
        TargetKind::DoubleWell => {
            let half_d = 0.5 * d as f64;
            let log_prefactor =
                log_gamma(half_d)? - 0.5 * PI.ln() - log_gamma(0.5 * (d as f64 - 1.0))?;
            let log_denominator = log_radial_integral(
                radial_log_integrand(d - 1, beta, 0.0),
                radial_bracket(d, beta, 0.0),
            )?;
            Law::DoubleWell {
                d,
                beta,
                log_prefactor,
                log_denominator,
            }
        }
    };
    // Every built-in marginal is symmetric about 0.
    let half = integrate_semi_infinite(
        |x| law.pdf(x),
        DEFAULT_TRUNCATION_TOL,
        &QuadratureConfig::default(),
    )?;
    Ok(MarginalDensity {
        target: target.name().to_string(),
        law,
        normalization_check: 2.0 * half.value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::RngStream;
    use crate::potentials::{
        default_mixture_center, make_double_well, make_gaussian, make_gaussian_mixture, make_target,
    };

    #[test]
    fn gaussian_mode() {
        let m = marginal_pdf(&make_gaussian::<f64>(3).unwrap(), 1.0).unwrap();
        assert!((m.pdf(0.0) - 0.398_942_280_401_432_7).abs() < 1e-15);
    }

    #[test]
    fn mixture_is_symmetric() {
        let d = 10;
        let t = make_gaussian_mixture::<f64>(d, default_mixture_center(d)).unwrap();
        let m = marginal_pdf(&t, 1.0).unwrap();
        let mut s = RngStream::new(1, 0);
        for _ in 0..100 {
            let x = 8.0 * s.uniform() - 4.0;
            assert!((m.pdf(x) - m.pdf(-x)).abs() < 1e-15);
        }
        assert!(marginal_pdf(&t, 2.0).is_err());
    }

    #[test]
    fn normalization_for_all_targets() {
        for d in [2, 20, 100] {
            for kind in TargetKind::ALL {
                let t = make_target::<f64>(kind, d).unwrap();
                let m = marginal_pdf(&t, 1.0).unwrap();
                assert!(
                    (m.normalization_check() - 1.0).abs() <= 1e-6,
                    "{kind} d={d}: {}",
                    m.normalization_check()
                );
            }
        }
    }

    #[test]
    fn double_well_matches_direct_two_dimensional_integration() {
        // d = 2: p(x) = ∫ exp(-U(x, y)) dy / Z computed by brute-force
        // quadrature in Cartesian coordinates.
        let t = make_double_well::<f64>(2).unwrap();
        let m = marginal_pdf(&t, 1.0).unwrap();
        let u = |x: f64, y: f64| {
            let s = x * x + y * y;
            0.25 * s * s - 0.5 * s
        };
        let cfg = QuadratureConfig::default();
        let row = |x: f64| {
            2.0 * integrate(|y| (-u(x, y)).exp(), 0.0, 6.0, &cfg)
                .unwrap()
                .value
        };
        let z = 2.0 * integrate(row, 0.0, 6.0, &cfg).unwrap().value;
        for x in [0.0, 0.3, 0.9, 1.4, 2.2] {
            let direct = row(x) / z;
            assert!(
                (m.pdf(x) - direct).abs() < 1e-8,
                "x={x}: {} vs {direct}",
                m.pdf(x)
            );
        }
    }

    #[test]
    fn double_well_second_moment_by_cartesian_quadrature() {
        // d = 1: E x² = ∫ x² e^{-U} / ∫ e^{-U}
        let cfg = QuadratureConfig::default();
        let u = |x: f64| 0.25 * x.powi(4) - 0.5 * x * x;
        let num = integrate(|x| x * x * (-u(x)).exp(), -8.0, 8.0, &cfg)
            .unwrap()
            .value;
        let den = integrate(|x| (-u(x)).exp(), -8.0, 8.0, &cfg).unwrap().value;
        assert!((double_well_second_moment(1, 1.0).unwrap() - num / den).abs() < 1e-9);
        // Large d concentrates |θ|² near the root of s² - s = d, i.e. s ≈ (1 + √(1+4d))/2.
        let m = double_well_second_moment(400, 1.0).unwrap();
        let s = 0.5 * (1.0 + (1.0f64 + 1600.0).sqrt());
        assert!((m - s).abs() / s < 0.01, "{m} vs {s}");
    }

    #[test]
    fn double_well_line_and_temperature() {
        let t = make_double_well::<f64>(1).unwrap();
        let m = marginal_pdf(&t, 1.0).unwrap();
        assert!((m.normalization_check() - 1.0).abs() < 1e-8);
        // mass concentrates near ±1
        assert!(m.pdf(1.0) > m.pdf(0.0));
        let t = make_double_well::<f64>(5).unwrap();
        let m = marginal_pdf(&t, 3.0).unwrap();
        assert!((m.normalization_check() - 1.0).abs() < 1e-6);
        assert!(m.pdf(0.0) >= 0.0 && m.pdf(5.0) >= 0.0);
    }
}
