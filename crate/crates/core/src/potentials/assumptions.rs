//! Randomized verifiers for the growth, convexity and Hessian-smoothness
//! inequalities. Violations are data, not errors.

use serde::{Deserialize, Serialize};

use super::{Convexity, TargetSpec};
use crate::linalg::{distance, dot, norm, pow_norm, sub};
use crate::numerics::RngStream;
use crate::real::Real;

/// Relative slack applied to both sides before declaring a violation, so
/// that inequalities holding with equality survive rounding.
pub const CHECK_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub condition: String,
    pub theta: Vec<f64>,
    pub theta_prime: Option<Vec<f64>>,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssumptionReport {
    pub target: String,
    pub assumption: String,
    pub points: usize,
    pub violations: Vec<Violation>,
}

impl AssumptionReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CheckOptions {
    pub n_points: usize,
    pub radius: f64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            n_points: 10_000,
            radius: 10.0,
        }
    }
}

pub(crate) fn exceeds(lhs: f64, rhs: f64) -> bool {
    !(lhs <= rhs + CHECK_SLACK * (1.0 + lhs.abs() + rhs.abs()))
}

pub(crate) fn to_f64<T: Real>(x: &[T]) -> Vec<f64> {
    x.iter().map(|v| v.as_f64()).collect()
}

pub(crate) struct Recorder {
    pub violations: Vec<Violation>,
}

impl Recorder {
    pub fn new() -> Self {
        Self {
            violations: Vec::new(),
        }
    }

    /// Records a violation unless `lhs ≤ rhs` (up to slack).
    pub fn upper<T: Real>(
        &mut self,
        condition: &str,
        theta: &[T],
        theta_prime: Option<&[T]>,
        lhs: f64,
        rhs: f64,
    ) {
        if exceeds(lhs, rhs) {
            self.violations.push(Violation {
                condition: condition.to_string(),
                theta: to_f64(theta),
                theta_prime: theta_prime.map(to_f64),
                lhs,
                rhs,
            });
        }
    }

    /// Records a violation unless `lhs ≥ rhs` (up to slack).
    pub fn lower<T: Real>(
        &mut self,
        condition: &str,
        theta: &[T],
        theta_prime: Option<&[T]>,
        lhs: f64,
        rhs: f64,
    ) {
        if exceeds(rhs, lhs) {
            self.violations.push(Violation {
                condition: condition.to_string(),
                theta: to_f64(theta),
                theta_prime: theta_prime.map(to_f64),
                lhs,
                rhs,
            });
        }
    }

    pub fn finish<T: Real>(
        self,
        target: &TargetSpec<T>,
        assumption: &str,
        points: usize,
    ) -> AssumptionReport {
        AssumptionReport {
            target: target.name().to_string(),
            assumption: assumption.to_string(),
            points,
            violations: self.violations,
        }
    }
}

/// `|h(θ) - h(θ')| ≤ L(1 + |θ| + |θ'|)^r |θ - θ'|` and `|h(θ)| ≤ K(1 + |θ|^{r+1})`.
pub fn check_assumption_2<T: Real>(
    target: &TargetSpec<T>,
    options: CheckOptions,
    stream: &mut RngStream,
) -> AssumptionReport {
    let c = target.constants();
    let d = target.dim();
    let mut rec = Recorder::new();
    for _ in 0..options.n_points {
        let x: Vec<T> = stream.in_ball(d, options.radius);
        let y: Vec<T> = stream.in_ball(d, options.radius);
        let hx = target.gradient(&x);
        let hy = target.gradient(&y);
        let nx = norm(&x).as_f64();
        let ny = norm(&y).as_f64();
        let lhs = distance(&hx, &hy).as_f64();
        let rhs = c.lipschitz * pow_norm(1.0 + nx + ny, c.r) * distance(&x, &y).as_f64();
        rec.upper("polynomial_lipschitz", &x, Some(&y), lhs, rhs);
        let lhs = norm(&hx).as_f64();
        let rhs = c.growth * (1.0 + pow_norm(nx, c.r + 1));
        rec.upper::<T>("polynomial_growth", &x, None, lhs, rhs);
    }
    rec.finish(target, "assumption_2", options.n_points)
}

/// Convexity at infinity (`r > 0`):
/// `⟨θ-θ', h(θ)-h(θ')⟩ ≥ a|θ-θ'|²(|θ|^r + |θ'|^r) - b|θ-θ'|²(|θ|^r̄ + |θ'|^r̄)`;
/// dissipativity (`r = 0`): `⟨θ, h(θ)⟩ ≥ ã|θ|² - b̃`.
pub fn check_assumption_3<T: Real>(
    target: &TargetSpec<T>,
    options: CheckOptions,
    stream: &mut RngStream,
) -> AssumptionReport {
    let c = target.constants();
    let d = target.dim();
    let mut rec = Recorder::new();
    for _ in 0..options.n_points {
        match c.convexity {
            Convexity::AtInfinity { a, b, r_bar } => {
                let x: Vec<T> = stream.in_ball(d, options.radius);
                let y: Vec<T> = stream.in_ball(d, options.radius);
                convexity_at_infinity(target, &mut rec, &x, &y, a, b, r_bar);
            }
            Convexity::Dissipative { a_tilde, b_tilde } => {
                let x: Vec<T> = stream.in_ball(d, options.radius);
                let lhs = dot(&x, &target.gradient(&x)).as_f64();
                let n = norm(&x).as_f64();
                rec.lower::<T>("dissipativity", &x, None, lhs, a_tilde * n * n - b_tilde);
            }
        }
    }
    rec.finish(target, "assumption_3", options.n_points)
}

fn real_pow(x: f64, p: f64) -> f64 {
    if p == 0.0 {
        1.0
    } else {
        x.powf(p)
    }
}

pub(crate) fn convexity_at_infinity<T: Real>(
    target: &TargetSpec<T>,
    rec: &mut Recorder,
    x: &[T],
    y: &[T],
    a: f64,
    b: f64,
    r_bar: f64,
) {
    let r = target.constants().r;
    let diff = sub(x, y);
    let lhs = dot(&diff, &sub(&target.gradient(x), &target.gradient(y))).as_f64();
    let dsq = dot(&diff, &diff).as_f64();
    let nx = norm(x).as_f64();
    let ny = norm(y).as_f64();
    let rhs = a * dsq * (pow_norm(nx, r) + pow_norm(ny, r))
        - b * dsq * (real_pow(nx, r_bar) + real_pow(ny, r_bar));
    rec.lower("convex_at_infinity", x, Some(y), lhs, rhs);
}

/// Power-iteration budget for operator norms.
pub(crate) const POWER_ITERATIONS: usize = 50;
pub(crate) const POWER_TOL: f64 = 1e-10;

/// `|∇h(θ) - ∇h(θ')| ≤ L_∇(1 + |θ| + |θ'|)^ν |θ - θ'|` in operator norm.
pub fn check_assumption_4<T: Real>(
    target: &TargetSpec<T>,
    options: CheckOptions,
    stream: &mut RngStream,
) -> AssumptionReport {
    let c = target.constants();
    let d = target.dim();
    let mut rec = Recorder::new();
    for _ in 0..options.n_points {
        let x: Vec<T> = stream.in_ball(d, options.radius);
        let y: Vec<T> = stream.in_ball(d, options.radius);
        let start: Vec<T> = stream.unit_vector(d);
        let delta = target.hessian(&x).sub(&target.hessian(&y));
        let lhs = delta
            .symmetric_operator_norm(&start, POWER_ITERATIONS, POWER_TOL)
            .as_f64();
        let rhs = c.hessian_lipschitz
            * pow_norm(1.0 + norm(&x).as_f64() + norm(&y).as_f64(), c.nu)
            * distance(&x, &y).as_f64();
        rec.upper("hessian_lipschitz", &x, Some(&y), lhs, rhs);
    }
    rec.finish(target, "assumption_4", options.n_points)
}
