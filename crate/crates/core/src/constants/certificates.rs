//! Randomized checks of the inequalities satisfied by the derived
//! constants: dissipativity, one-sided Lipschitz, Hessian growth and the
//! Taylor remainder bound.

use super::{derive_bar_constants, derive_lipschitz_constants};
use crate::error::Result;
use crate::linalg::{dot, norm, norm_sq, pow_norm, sub};
use crate::numerics::RngStream;
use crate::potentials::assumptions::{Recorder, POWER_ITERATIONS, POWER_TOL};
use crate::potentials::{AssumptionReport, CheckOptions, TargetSpec};
use crate::real::Real;

/// `⟨θ, h(θ)⟩ ≥ ā|θ|^{r+2} - b̄` and `⟨θ, h(θ)⟩ ≥ ā|θ|² - b̄′`.
pub fn check_dissipativity<T: Real>(
    target: &TargetSpec<T>,
    options: CheckOptions,
    stream: &mut RngStream,
) -> Result<AssumptionReport> {
    let bar = derive_bar_constants(target)?;
    let r = target.constants().r;
    let mut rec = Recorder::new();
    for _ in 0..options.n_points {
        let x: Vec<T> = stream.in_ball(target.dim(), options.radius);
        let lhs = dot(&x, &target.gradient(&x)).as_f64();
        let n = norm(&x).as_f64();
        rec.lower::<T>(
            "dissipativity",
            &x,
            None,
            lhs,
            bar.a_bar * pow_norm(n, r + 2) - bar.b_bar,
        );
        rec.lower::<T>(
            "quadratic_dissipativity",
            &x,
            None,
            lhs,
            bar.a_bar * n * n - bar.b_bar_prime,
        );
    }
    Ok(rec.finish(target, "dissipativity", options.n_points))
}

/// `⟨θ - θ′, h(θ) - h(θ′)⟩ ≥ -L̄|θ - θ′|²`.
pub fn check_one_sided_lipschitz<T: Real>(
    target: &TargetSpec<T>,
    options: CheckOptions,
    stream: &mut RngStream,
) -> AssumptionReport {
    let l_bar = derive_lipschitz_constants(target).l_bar;
    let mut rec = Recorder::new();
    for _ in 0..options.n_points {
        let x: Vec<T> = stream.in_ball(target.dim(), options.radius);
        let y: Vec<T> = stream.in_ball(target.dim(), options.radius);
        let diff = sub(&x, &y);
        let lhs = dot(&diff, &sub(&target.gradient(&x), &target.gradient(&y))).as_f64();
        rec.lower(
            "one_sided_lipschitz",
            &x,
            Some(&y),
            lhs,
            -l_bar * norm_sq(&diff).as_f64(),
        );
    }
    rec.finish(target, "one_sided_lipschitz", options.n_points)
}

/// `|∇h(θ)| ≤ C_∇(1 + |θ|^{ν+1})` in operator norm.
pub fn check_hessian_growth<T: Real>(
    target: &TargetSpec<T>,
    options: CheckOptions,
    stream: &mut RngStream,
) -> AssumptionReport {
    let c_grad = derive_lipschitz_constants(target).c_grad;
    let nu = target.constants().nu;
    let mut rec = Recorder::new();
    for _ in 0..options.n_points {
        let x: Vec<T> = stream.in_ball(target.dim(), options.radius);
        let start: Vec<T> = stream.unit_vector(target.dim());
        let lhs = target
            .hessian(&x)
            .symmetric_operator_norm(&start, POWER_ITERATIONS, POWER_TOL)
            .as_f64();
        rec.upper::<T>(
            "hessian_growth",
            &x,
            None,
            lhs,
            c_grad * (1.0 + pow_norm(norm(&x).as_f64(), nu + 1)),
        );
    }
    rec.finish(target, "hessian_growth", options.n_points)
}

/// `|h(θ) - h(θ′) - ∇h(θ′)(θ - θ′)| ≤ L̄_∇(1 + |θ|^ν + |θ′|^ν)|θ - θ′|²`.
pub fn check_taylor_remainder<T: Real>(
    target: &TargetSpec<T>,
    options: CheckOptions,
    stream: &mut RngStream,
) -> AssumptionReport {
    let l_grad_bar = derive_lipschitz_constants(target).l_grad_bar;
    let nu = target.constants().nu;
    let mut rec = Recorder::new();
    for _ in 0..options.n_points {
        let x: Vec<T> = stream.in_ball(target.dim(), options.radius);
        let y: Vec<T> = stream.in_ball(target.dim(), options.radius);
        let diff = sub(&x, &y);
        let linear = target.hessian(&y).mul_vec(&diff);
        let remainder: Vec<T> = target
            .gradient(&x)
            .iter()
            .zip(target.gradient(&y))
            .zip(linear)
            .map(|((&hx, hy), l)| hx - hy - l)
            .collect();
        let lhs = norm(&remainder).as_f64();
        let weight = 1.0 + pow_norm(norm(&x).as_f64(), nu) + pow_norm(norm(&y).as_f64(), nu);
        rec.upper(
            "taylor_remainder",
            &x,
            Some(&y),
            lhs,
            l_grad_bar * weight * norm_sq(&diff).as_f64(),
        );
    }
    rec.finish(target, "taylor_remainder", options.n_points)
}

/// All four checks, each drawing from its own sibling stream.
pub fn run_certificates<T: Real>(
    target: &TargetSpec<T>,
    options: CheckOptions,
    stream: &RngStream,
) -> Result<Vec<AssumptionReport>> {
    Ok(vec![
        check_dissipativity(target, options, &mut stream.sibling(0))?,
        check_one_sided_lipschitz(target, options, &mut stream.sibling(1)),
        check_hessian_growth(target, options, &mut stream.sibling(2)),
        check_taylor_remainder(target, options, &mut stream.sibling(3)),
    ])
}
