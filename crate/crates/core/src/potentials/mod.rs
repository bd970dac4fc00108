//! Benchmark targets `π_β ∝ exp(-β U)`: potentials, gradients, Hessians,
//! their growth/convexity constants, analytic first-component marginals and
//! numeric verifiers for the growth and convexity conditions.

pub(crate) mod assumptions;
mod double_well;
mod gaussian;
mod marginal;
mod mixture;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::SquareMatrix;
use crate::real::Real;

pub use assumptions::{
    check_assumption_2, check_assumption_3, check_assumption_4, AssumptionReport, CheckOptions,
    Violation,
};
pub use double_well::DoubleWell;
pub use gaussian::StandardGaussian;
pub(crate) use marginal::double_well_second_moment;
pub use marginal::{marginal_pdf, MarginalDensity};
pub use mixture::{default_mixture_center, GaussianMixture};

/// A twice differentiable potential `U` on R^d.
pub trait Potential<T: Real>: Send + Sync {
    fn value(&self, theta: &[T]) -> T;

    /// Writes `h(θ) = ∇U(θ)` into `out`.
    fn gradient_into(&self, theta: &[T], out: &mut [T]);

    /// `∇h(θ)`, the Hessian of `U`.
    fn hessian(&self, theta: &[T]) -> SquareMatrix<T>;
}

/// The built-in targets, selected by name on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TargetKind {
    Gaussian,
    Mixture,
    DoubleWell,
}

impl TargetKind {
    pub const ALL: [TargetKind; 3] = [
        TargetKind::Gaussian,
        TargetKind::Mixture,
        TargetKind::DoubleWell,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TargetKind::Gaussian => "gaussian",
            TargetKind::Mixture => "mixture",
            TargetKind::DoubleWell => "double-well",
        }
    }
}

impl fmt::Display for TargetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TargetKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(TargetKind::Gaussian),
            "mixture" => Ok(TargetKind::Mixture),
            "double-well" => Ok(TargetKind::DoubleWell),
            other => Err(Error::UnknownTarget(other.to_string())),
        }
    }
}

/// The convexity constants: convex at infinity when `r > 0`, dissipative
/// when `r = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Convexity {
    AtInfinity { a: f64, b: f64, r_bar: f64 },
    Dissipative { a_tilde: f64, b_tilde: f64 },
}

/// Growth, convexity and smoothness constants of a target.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AssumptionConstants {
    /// Polynomial growth exponent of the gradient.
    pub r: u32,
    /// Polynomial growth exponent of the Hessian.
    pub nu: u32,
    /// `L`: polynomial Lipschitz constant of the gradient.
    pub lipschitz: f64,
    /// `K`: polynomial growth constant of the gradient.
    pub growth: f64,
    pub convexity: Convexity,
    /// `L_∇`: polynomial Lipschitz constant of the Hessian.
    pub hessian_lipschitz: f64,
}

impl AssumptionConstants {
    /// `r_* = max{8r + 8, 4ν + 4, 2ν + 2r + 4}`.
    pub fn r_star(&self) -> u32 {
        (8 * self.r + 8)
            .max(4 * self.nu + 4)
            .max(2 * self.nu + 2 * self.r + 4)
    }

    pub fn validate(&self, target: &str) -> Result<()> {
        let bad = |reason: String| {
            Err(Error::MalformedTarget {
                target: target.to_string(),
                reason,
            })
        };
        for (name, v) in [
            ("L", self.lipschitz),
            ("K", self.growth),
            ("L_grad", self.hessian_lipschitz),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return bad(format!("{name} must be positive and finite, got {v}"));
            }
        }
        match (self.r, self.convexity) {
            (0, Convexity::Dissipative { a_tilde, b_tilde }) => {
                if !(a_tilde > 0.0 && b_tilde > 0.0) {
                    return bad(format!(
                        "a_tilde, b_tilde must be positive, got {a_tilde}, {b_tilde}"
                    ));
                }
            }
            (0, Convexity::AtInfinity { .. }) => {
                return bad("r = 0 requires the dissipativity constants (a_tilde, b_tilde)".into())
            }
            (_, Convexity::Dissipative { .. }) => {
                return bad(
                    "r > 0 requires the convexity-at-infinity constants (a, b, r_bar)".into(),
                )
            }
            (r, Convexity::AtInfinity { a, b, r_bar }) => {
                if !(a > 0.0 && b > 0.0) {
                    return bad(format!("a, b must be positive, got {a}, {b}"));
                }
                if !(r_bar >= 0.0 && r_bar < r as f64) {
                    return bad(format!("r_bar must lie in [0, r) = [0, {r}), got {r_bar}"));
                }
            }
        }
        Ok(())
    }

    /// Applies a `KEY=VALUE` override, keys as in the constants report
    /// (`L`, `K`, `L_grad`, `a`, `b`, `r_bar`, `a_tilde`, `b_tilde`).
    pub fn apply_override(&mut self, key: &str, value: f64) -> Result<()> {
        let wrong_case =
            || Error::InvalidConfig(format!("override `{key}` does not apply to this target"));
        match key {
            "L" => self.lipschitz = value,
            "K" => self.growth = value,
            "L_grad" | "L_nabla" => self.hessian_lipschitz = value,
            "a" | "b" | "r_bar" => match &mut self.convexity {
                Convexity::AtInfinity { a, b, r_bar } => match key {
                    "a" => *a = value,
                    "b" => *b = value,
                    _ => *r_bar = value,
                },
                Convexity::Dissipative { .. } => return Err(wrong_case()),
            },
            "a_tilde" | "b_tilde" => match &mut self.convexity {
                Convexity::Dissipative { a_tilde, b_tilde } => {
                    if key == "a_tilde" {
                        *a_tilde = value
                    } else {
                        *b_tilde = value
                    }
                }
                Convexity::AtInfinity { .. } => return Err(wrong_case()),
            },
            other => return Err(Error::InvalidConfig(format!("unknown constant `{other}`"))),
        }
        Ok(())
    }
}

/// A target: potential, dimension and the constants certified for it.
#[derive(Clone)]
pub struct TargetSpec<T: Real> {
    name: String,
    kind: Option<TargetKind>,
    dim: usize,
    potential: Arc<dyn Potential<T>>,
    constants: AssumptionConstants,
    mixture_center: Option<Vec<T>>,
}

impl<T: Real> fmt::Debug for TargetSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TargetSpec")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("constants", &self.constants)
            .finish_non_exhaustive()
    }
}

fn check_dim(d: usize) -> Result<()> {
    if d == 0 {
        Err(Error::InvalidConfig("dimension must be at least 1".into()))
    } else {
        Ok(())
    }
}

impl<T: Real> TargetSpec<T> {
    /// A user-supplied target. Built-ins come from the `make_*` constructors.
    pub fn custom(
        name: impl Into<String>,
        dim: usize,
        potential: Arc<dyn Potential<T>>,
        constants: AssumptionConstants,
    ) -> Result<Self> {
        check_dim(dim)?;
        let name = name.into();
        constants.validate(&name)?;
        Ok(Self {
            name,
            kind: None,
            dim,
            potential,
            constants,
            mixture_center: None,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> Option<TargetKind> {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constants(&self) -> &AssumptionConstants {
        &self.constants
    }

    pub fn mixture_center(&self) -> Option<&[T]> {
        self.mixture_center.as_deref()
    }

    /// Same potential with replaced constants (used for falsification runs).
    pub fn with_constants(&self, constants: AssumptionConstants) -> Result<Self> {
        constants.validate(&self.name)?;
        Ok(Self {
            constants,
            ..self.clone()
        })
    }

    #[inline]
    pub fn value(&self, theta: &[T]) -> T {
        self.potential.value(theta)
    }

    #[inline]
    pub fn gradient_into(&self, theta: &[T], out: &mut [T]) {
        self.potential.gradient_into(theta, out)
    }

    pub fn gradient(&self, theta: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); theta.len()];
        self.potential.gradient_into(theta, &mut out);
        out
    }

    pub fn hessian(&self, theta: &[T]) -> SquareMatrix<T> {
        self.potential.hessian(theta)
    }

    /// `|∇h(0)|` in operator norm.
    pub fn hessian_norm_at_origin(&self) -> f64 {
        let zero = vec![T::zero(); self.dim];
        let h = self.hessian(&zero);
        let start: Vec<T> = (0..self.dim).map(|i| T::of(1.0 + 0.1 * i as f64)).collect();
        h.symmetric_operator_norm(&start, 500, 1e-13).as_f64()
    }
}

/// `N(0, I_d)`: `U(θ) = |θ|²/2`.
pub fn make_gaussian<T: Real>(d: usize) -> Result<TargetSpec<T>> {
    check_dim(d)?;
    Ok(TargetSpec {
        name: TargetKind::Gaussian.name().into(),
        kind: Some(TargetKind::Gaussian),
        dim: d,
        potential: Arc::new(StandardGaussian),
        constants: StandardGaussian::constants(),
        mixture_center: None,
    })
}

/// Two-component mixture `½N(ȧ, I) + ½N(-ȧ, I)`:
/// `U(θ) = |θ - ȧ|²/2 - log(1 + exp(-2⟨ȧ, θ⟩))`.
pub fn make_gaussian_mixture<T: Real>(d: usize, center: Vec<T>) -> Result<TargetSpec<T>> {
    check_dim(d)?;
    if center.len() != d {
        return Err(Error::SizeMismatch(format!(
            "mixture center has {} components, dimension is {d}",
            center.len()
        )));
    }
    let mixture = GaussianMixture::new(center.clone());
    let constants = mixture.constants();
    Ok(TargetSpec {
        name: TargetKind::Mixture.name().into(),
        kind: Some(TargetKind::Mixture),
        dim: d,
        potential: Arc::new(mixture),
        constants,
        mixture_center: Some(center),
    })
}

/// `U(θ) = |θ|⁴/4 - |θ|²/2`.
pub fn make_double_well<T: Real>(d: usize) -> Result<TargetSpec<T>> {
    check_dim(d)?;
    Ok(TargetSpec {
        name: TargetKind::DoubleWell.name().into(),
        kind: Some(TargetKind::DoubleWell),
        dim: d,
        potential: Arc::new(DoubleWell),
        constants: DoubleWell::constants(),
        mixture_center: None,
    })
}

/// Built-in target by kind; the mixture uses the default center.
pub fn make_target<T: Real>(kind: TargetKind, d: usize) -> Result<TargetSpec<T>> {
    match kind {
        TargetKind::Gaussian => make_gaussian(d),
        TargetKind::Mixture => make_gaussian_mixture(d, default_mixture_center(d)),
        TargetKind::DoubleWell => make_double_well(d),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{default_step, finite_diff_gradient, finite_diff_jacobian, RngStream};

    fn targets(d: usize) -> Vec<TargetSpec<f64>> {
        TargetKind::ALL
            .iter()
            .map(|&k| make_target(k, d).unwrap())
            .collect()
    }

    #[test]
    fn names_round_trip() {
        for k in TargetKind::ALL {
            assert_eq!(k.name().parse::<TargetKind>().unwrap(), k);
        }
        assert!(matches!(
            "banana".parse::<TargetKind>(),
            Err(Error::UnknownTarget(_))
        ));
    }

    #[test]
    fn r_star_is_at_least_eight() {
        for t in targets(2) {
            assert!(t.constants().r_star() >= 8);
        }
        assert_eq!(make_double_well::<f64>(2).unwrap().constants().r_star(), 24);
    }

    #[test]
    fn gradients_match_finite_differences() {
        let mut s = RngStream::new(5, 0);
        for d in [2, 10] {
            for t in targets(d) {
                for _ in 0..100 {
                    let x: Vec<f64> = s.in_ball(d, 5.0);
                    let h = t.gradient(&x);
                    let fd = finite_diff_gradient(|y: &[f64]| t.value(y), &x, default_step(&x));
                    let err = crate::linalg::distance(&h, &fd);
                    assert!(
                        err <= 1e-6 * (1.0 + crate::linalg::norm(&h)),
                        "{} d={d}: {err}",
                        t.name()
                    );
                }
            }
        }
    }

    #[test]
    fn hessians_match_finite_differences() {
        let mut s = RngStream::new(6, 0);
        for d in [2, 10] {
            for t in targets(d) {
                for _ in 0..100 {
                    let x: Vec<f64> = s.in_ball(d, 5.0);
                    let hess = t.hessian(&x);
                    let fd = finite_diff_jacobian(|y: &[f64]| t.gradient(y), &x, default_step(&x));
                    for j in 0..d {
                        let col = hess.column(j);
                        let err = crate::linalg::distance(&col, &fd.column(j));
                        assert!(
                            err <= 1e-5 * (1.0 + crate::linalg::norm(&col)),
                            "{} col {j}: {err}",
                            t.name()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn constants_validation_rejects_mismatched_case() {
        let mut c = *make_double_well::<f64>(2).unwrap().constants();
        c.r = 0;
        assert!(c.validate("x").is_err());
        let mut c = *make_gaussian::<f64>(2).unwrap().constants();
        c.r = 1;
        assert!(c.validate("x").is_err());
        let mut c = *make_double_well::<f64>(2).unwrap().constants();
        c.convexity = Convexity::AtInfinity {
            a: 0.5,
            b: 1.0,
            r_bar: 2.0,
        };
        assert!(c.validate("x").is_err());
    }

    #[test]
    fn overrides() {
        let mut c = *make_double_well::<f64>(2).unwrap().constants();
        c.apply_override("L", 0.01).unwrap();
        assert_eq!(c.lipschitz, 0.01);
        assert!(c.apply_override("a_tilde", 1.0).is_err());
        assert!(c.apply_override("zzz", 1.0).is_err());
    }

    #[test]
    fn zero_dimension_is_rejected() {
        assert!(make_gaussian::<f64>(0).is_err());
        assert!(make_gaussian_mixture::<f64>(2, vec![1.0]).is_err());
    }
}
