//! Closed-form constants of the convergence bounds, evaluated from a
//! target's growth and convexity constants.
//!
//! Quantities that can leave the range of `f64` (moment constants of high
//! degree, the contraction constants and everything built on them) are
//! carried as [`LogPos`].

mod certificates;
mod logspace;
mod report;
mod v2;

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::norm_sq;
use crate::numerics::{
    integrate, log_binomial, log_binomial_real, log_factorial, QuadratureConfig,
};
use crate::potentials::{AssumptionConstants, Convexity, TargetSpec};
use crate::real::Real;

pub use certificates::{
    check_dissipativity, check_hessian_growth, check_one_sided_lipschitz, check_taylor_remainder,
    run_certificates,
};
pub use logspace::{LogPos, REPRESENTABLE_LOG10};
pub use report::{ConstantsReport, ReportEntry};
pub use v2::{v2_integral, MonteCarloOptions, V2Integral, V2Method};

/// `κ`, the contraction factor of the second-moment recursion.
pub const KAPPA: f64 = FRAC_1_SQRT_2;

/// `V_p(θ) = (1 + |θ|²)^{p/2}`.
pub fn lyapunov_v<T: Real>(p: u32, theta: &[T]) -> T {
    if p == 0 {
        return T::one();
    }
    (T::one() + norm_sq(theta)).powf(T::of(0.5 * p as f64))
}

/// `v_p(w) = (1 + w²)^{p/2}`.
pub fn lyapunov_v_scalar(p: u32, w: f64) -> f64 {
    if p == 0 {
        return 1.0;
    }
    (1.0 + w * w).powf(0.5 * p as f64)
}

fn lyapunov_v_log(p: u32, w: f64) -> LogPos {
    if p == 0 {
        return LogPos::ONE;
    }
    LogPos::new(1.0 + w * w).powf(0.5 * p as f64)
}

/// Dissipativity constants `ā, b̄, b̄′` and the radius `R` beyond which the
/// convexity lower bound dominates (`None` when `r = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BarConstants {
    pub a_bar: f64,
    pub b_bar: f64,
    pub b_bar_prime: f64,
    pub radius: Option<f64>,
}

pub fn bar_constants(c: &AssumptionConstants) -> Result<BarConstants> {
    match (c.r, c.convexity) {
        (0, Convexity::Dissipative { a_tilde, b_tilde }) => Ok(BarConstants {
            a_bar: a_tilde,
            b_bar: b_tilde,
            b_bar_prime: b_tilde,
            radius: None,
        }),
        (r, Convexity::AtInfinity { a, b, r_bar }) if r > 0 && (r as f64) > r_bar => {
            let r = r as f64;
            let radius = (4.0 * b / a)
                .powf(1.0 / (r - r_bar))
                .max(2f64.powf(1.0 / r));
            let a_bar = a / 2.0;
            let b_bar = (b + a / 2.0) * radius.powf(r_bar + 2.0) + c.growth * c.growth / (2.0 * a);
            let b_bar_prime = b_bar + 2f64.powf(2.0 / r) * a_bar;
            Ok(BarConstants {
                a_bar,
                b_bar,
                b_bar_prime,
                radius: Some(radius),
            })
        }
        (r, convexity) => Err(Error::MalformedTarget {
            target: String::new(),
            reason: format!("convexity constants {convexity:?} are inconsistent with r = {r}"),
        }),
    }
}

pub fn derive_bar_constants<T: Real>(target: &TargetSpec<T>) -> Result<BarConstants> {
    bar_constants(target.constants()).map_err(|e| name_target(e, target.name()))
}

fn name_target(e: Error, name: &str) -> Error {
    match e {
        Error::MalformedTarget { reason, .. } => Error::MalformedTarget {
            target: name.to_string(),
            reason,
        },
        other => other,
    }
}

/// One-sided Lipschitz constant `L̄` (with its radius `R̄`) and the Hessian
/// constants `C_∇` (growth) and `L̄_∇` (Taylor remainder).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LipschitzConstants {
    pub radius_bar: f64,
    pub l_bar: f64,
    pub c_grad: f64,
    pub l_grad_bar: f64,
}

/// `hessian_at_origin` is the operator norm `|∇h(0)|`.
pub fn lipschitz_constants(c: &AssumptionConstants, hessian_at_origin: f64) -> LipschitzConstants {
    let radius_bar = match c.convexity {
        Convexity::AtInfinity { a, b, r_bar } if c.r > 0 => {
            (b / a).powf(1.0 / (c.r as f64 - r_bar))
        }
        _ => 0.0,
    };
    let nu = c.nu as f64;
    LipschitzConstants {
        radius_bar,
        l_bar: c.lipschitz * (1.0 + 2.0 * radius_bar).powi(c.r as i32),
        c_grad: 2.0 * (2f64.powf(nu - 1.0) * c.hessian_lipschitz).max(hessian_at_origin),
        l_grad_bar: 3f64.powf(nu - 1.0) * c.hessian_lipschitz,
    }
}

pub fn derive_lipschitz_constants<T: Real>(target: &TargetSpec<T>) -> LipschitzConstants {
    lipschitz_constants(target.constants(), target.hessian_norm_at_origin())
}

/// Moment-bound constants of one degree `p ≥ 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentRow {
    pub p: u32,
    pub m1: LogPos,
    pub kappa_tilde: f64,
    pub m2: LogPos,
    pub c1: LogPos,
    pub c2: LogPos,
    pub c3: LogPos,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentConstants {
    pub kappa: f64,
    pub c0: f64,
    pub kappa_star: f64,
    pub rows: BTreeMap<u32, MomentRow>,
    pub c_star: BTreeMap<u32, LogPos>,
}

impl MomentConstants {
    pub fn c_star(&self, p: u32) -> LogPos {
        self.c_star[&p]
    }
}

/// Inputs shared by every moment formula.
#[derive(Debug, Clone, Copy)]
struct MomentInputs {
    a_bar: f64,
    b_bar: f64,
    growth: f64,
    r: u32,
    beta: f64,
    d: f64,
}

impl MomentInputs {
    fn c0(&self) -> f64 {
        self.a_bar * KAPPA
            + 2.0 * self.b_bar
            + 2.0 * self.d / self.beta
            + 2.0 * self.growth * self.growth
    }

    /// `4p C(p, ⌊p/2⌋+1) (1 + 2b̄ + 2K²)^p / min{1, ā}` for `p ≥ 1`.
    fn m1(&self, p: u32) -> LogPos {
        let p64 = p as u64;
        let base = 1.0 + 2.0 * self.b_bar + 2.0 * self.growth * self.growth;
        LogPos::new(4.0 * p as f64)
            * LogPos::from_ln(log_binomial(p64, p64 / 2 + 1))
            * LogPos::new(base).powi(p)
            / LogPos::new(self.a_bar.min(1.0))
    }

    /// `M₁^r / (2(1 + M₁^{2r})^{1/2})`, rewritten as `1/(2(M₁^{-2r} + 1)^{1/2})`.
    fn kappa_tilde(&self, p: u32) -> f64 {
        let inv = (-2.0 * self.r as f64 * self.m1(p).ln()).exp();
        0.5 / (inv + 1.0).sqrt()
    }

    fn m2(&self, p: u32) -> LogPos {
        let p_f = p as f64;
        (LogPos::new(p_f * (2.0 * p_f - 1.0))
            * LogPos::new(2.0).powi(2 * p - 1)
            * LogPos::new(self.d / self.beta)
            / LogPos::new(self.a_bar * self.kappa_tilde(p)))
        .sqrt()
    }

    fn c1(&self, p: u32) -> LogPos {
        let m1 = self.m1(p);
        let drift = LogPos::new(2.0 * self.b_bar + 2.0 * self.growth * self.growth);
        let head = LogPos::new(self.a_bar * self.kappa_tilde(p)) * m1.powi(2 * p);
        let tail = LogPos::sum((1..=p).map(|k| {
            LogPos::from_ln(log_binomial(p as u64, k as u64))
                * drift.powi(k)
                * m1.powi(2 * p - 2 * k)
        }));
        head + tail
    }

    /// `p(2p-1) 2^{2p-2} β^{-1} d`, the prefactor shared by `c₂` and `c₃`.
    fn noise_prefactor(&self, p: u32) -> LogPos {
        let p_f = p as f64;
        LogPos::new(p_f * (2.0 * p_f - 1.0))
            * LogPos::new(2.0).powi(2 * p - 2)
            * LogPos::new(self.d / self.beta)
    }

    fn c2(&self, p: u32) -> LogPos {
        let p_f = p as f64;
        let gaussian_moment = LogPos::new(p_f * (2.0 * p_f - 1.0))
            * LogPos::new(2.0).powi(4 * p - 3)
            * LogPos::new(self.beta).powi(p).recip()
            * LogPos::from_ln(log_factorial(p as u64))
            * LogPos::from_ln(log_binomial_real(self.d / 2.0 + p_f - 1.0, p as u64));
        self.c1(p) + self.noise_prefactor(p) * self.c1(p - 1) + gaussian_moment
    }

    fn c3(&self, p: u32) -> LogPos {
        self.c2(p) + self.noise_prefactor(p) * self.m2(p).powi(2 * p - 2)
    }

    fn row(&self, p: u32) -> MomentRow {
        MomentRow {
            p,
            m1: self.m1(p),
            kappa_tilde: self.kappa_tilde(p),
            m2: self.m2(p),
            c1: self.c1(p),
            c2: self.c2(p),
            c3: self.c3(p),
        }
    }

    /// `c_*(0) = 1 + c₀`, `c_*(1) = c₀`, `c_*(p) = max{c₀, c₃(p)}` for `p ≥ 2`.
    fn c_star(&self, p: u32) -> LogPos {
        match p {
            0 => LogPos::new(1.0 + self.c0()),
            1 => LogPos::new(self.c0()),
            _ => LogPos::new(self.c0()).max(self.c3(p)),
        }
    }
}

fn moment_inputs<T: Real>(
    target: &TargetSpec<T>,
    beta: f64,
) -> Result<(MomentInputs, BarConstants)> {
    check_beta(beta)?;
    let bar = derive_bar_constants(target)?;
    let c = target.constants();
    Ok((
        MomentInputs {
            a_bar: bar.a_bar,
            b_bar: bar.b_bar,
            growth: c.growth,
            r: c.r,
            beta,
            d: target.dim() as f64,
        },
        bar,
    ))
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!(
            "beta must be positive and finite, got {beta}"
        )))
    }
}

/// Moment constants in dimension `target.dim()`; tables cover every degree
/// in `degrees` (degree 2 is always included since `κ_*` needs it).
pub fn derive_moment_constants<T: Real>(
    target: &TargetSpec<T>,
    beta: f64,
    degrees: &[u32],
) -> Result<MomentConstants> {
    let (m, _) = moment_inputs(target, beta)?;
    let mut all: BTreeSet<u32> = degrees.iter().copied().collect();
    all.insert(2);
    let rows = all
        .iter()
        .filter(|&&p| p >= 2)
        .map(|&p| (p, m.row(p)))
        .collect();
    let c_star = all.iter().map(|&p| (p, m.c_star(p))).collect();
    Ok(MomentConstants {
        kappa: KAPPA,
        c0: m.c0(),
        kappa_star: KAPPA.min(m.kappa_tilde(2) / 2.0),
        rows,
        c_star,
    })
}

/// Drift-condition constants of `V_p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DriftRow {
    pub p: u32,
    pub m_v: f64,
    pub c_v1: f64,
    /// `v_p(M_V(p))`.
    pub v_at_m_v: LogPos,
    pub c_v2: LogPos,
}

fn drift_row(bar: &BarConstants, beta: f64, d: f64, p: u32) -> DriftRow {
    let p_f = p as f64;
    let m_v = (1.0 + (2.0 * bar.b_bar_prime + 2.0 * (d + p_f - 2.0) / beta) / bar.a_bar).sqrt();
    let c_v1 = bar.a_bar * p_f / 2.0;
    let v_at_m_v = lyapunov_v_log(p, m_v);
    DriftRow {
        p,
        m_v,
        c_v1,
        v_at_m_v,
        c_v2: v_at_m_v * c_v1,
    }
}

pub fn derive_drift_constants<T: Real>(
    target: &TargetSpec<T>,
    beta: f64,
    degrees: &[u32],
) -> Result<BTreeMap<u32, DriftRow>> {
    let (_, bar) = moment_inputs(target, beta)?;
    let d = target.dim() as f64;
    Ok(degrees
        .iter()
        .map(|&p| (p, drift_row(&bar, beta, d, p)))
        .collect())
}

/// Constants of the weighted-distance contraction: the radii `R̄₁, R̄₂`,
/// the weight `ε` (set to its largest admissible value), the multiplier
/// `ĉ` and the rate `ċ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContractionConstants {
    pub r1: f64,
    pub r2: f64,
    /// `∫₀^{R̄₁} exp{(s√(βL̄/8) + √(8/(βL̄)))²} ds`.
    pub epsilon_integral: LogPos,
    pub epsilon: LogPos,
    pub c_hat: LogPos,
    pub c_dot: LogPos,
}

/// `ln ∫₀^{upper} exp{(αs + γ)²} ds`.
///
/// With `t = q(upper) - q(s)`, `q(s) = (αs + γ)²`, the integral becomes
/// `e^{q(upper)} ∫₀^{q(upper) - γ²} e^{-t} / (2α√(q(upper) - t)) dt`, whose
/// integrand is bounded and decays on the unit scale.
pub(crate) fn log_exp_square_integral(alpha: f64, gamma: f64, upper: f64) -> Result<f64> {
    if upper <= 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    let q_top = (alpha * upper + gamma).powi(2);
    let t_max = q_top - gamma * gamma;
    let cfg = QuadratureConfig {
        abs_tol: 0.0,
        rel_tol: 1e-13,
        ..QuadratureConfig::default()
    };
    let mut total = 0.0;
    let mut lo = 0.0;
    for cut in [1.0, 4.0, 16.0, 64.0, f64::INFINITY] {
        let hi = cut.min(t_max);
        if hi > lo {
            total += integrate(
                |t| (-t).exp() / (2.0 * alpha * (q_top - t).sqrt()),
                lo,
                hi,
                &cfg,
            )?
            .value;
        }
        lo = hi;
        if lo >= t_max {
            break;
        }
    }
    Ok(q_top + total.ln())
}

fn contraction(beta: f64, l_bar: f64, drift2: &DriftRow) -> Result<ContractionConstants> {
    let c_v1 = drift2.c_v1;
    let c_v2 = drift2.c_v2.value();
    let r1 = 2.0 * (2.0 * c_v2 / c_v1 - 1.0).sqrt();
    let r2 = 2.0 * (4.0 * c_v2 * (1.0 + c_v1) / c_v1 - 1.0).sqrt();
    let alpha = (beta * l_bar / 8.0).sqrt();
    let gamma = (8.0 / (beta * l_bar)).sqrt();
    let epsilon_integral = LogPos::from_ln(log_exp_square_integral(alpha, gamma, r1)?);
    let epsilon = LogPos::ONE.min(
        (LogPos::new(4.0 * c_v2 * (2.0 * PI * beta / l_bar).sqrt()) * epsilon_integral).recip(),
    );
    let c_hat = LogPos::new(2.0 * (1.0 + r2))
        * LogPos::exp(beta * l_bar * r2 * r2 / 8.0 + 2.0 * r2)
        / epsilon;
    let first = (LogPos::new(r2 * (8.0 * PI * beta / l_bar).sqrt())
        * LogPos::exp((r2 * alpha + gamma).powi(2)))
    .recip();
    let c_dot = first
        .min(LogPos::new(c_v1 / 2.0))
        .min(LogPos::new(2.0 * c_v2 * c_v1) * epsilon);
    Ok(ContractionConstants {
        r1,
        r2,
        epsilon_integral,
        epsilon,
        c_hat,
        c_dot,
    })
}

pub fn derive_contraction_constants<T: Real>(
    target: &TargetSpec<T>,
    beta: f64,
) -> Result<ContractionConstants> {
    let (_, bar) = moment_inputs(target, beta)?;
    let lip = derive_lipschitz_constants(target);
    contraction(
        beta,
        lip.l_bar,
        &drift_row(&bar, beta, target.dim() as f64, 2),
    )
}

/// Step-size limits: `λ̃_max = min{1, ā²/(8K⁴), 1/ā²}` for the convergence
/// results and `λ_{1,max} = min{1, ā²/(8K⁴)}` for the moment bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepSizeLimits {
    pub lambda_max: f64,
    pub lambda_1_max: f64,
}

pub fn step_size_limits(bar: &BarConstants, growth: f64) -> StepSizeLimits {
    let a2 = bar.a_bar * bar.a_bar;
    let lambda_1_max = 1f64.min(a2 / (8.0 * growth.powi(4)));
    StepSizeLimits {
        lambda_max: lambda_1_max.min(1.0 / a2),
        lambda_1_max,
    }
}

/// The constants of the fourth/second-moment increment bounds, the
/// one-step error bounds, and the final `W₁` and `W₂` bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TheoremConstants {
    pub c_bar_11: LogPos,
    pub c_bar_21: LogPos,
    pub c_bar_12: LogPos,
    pub c_bar_22: LogPos,
    pub c_bar_0: LogPos,
    pub c_bar_1: LogPos,
    pub c_bar_2: LogPos,
    pub c_bar_3: LogPos,
    pub c_bar_4: LogPos,
    pub c_bar_5: LogPos,
    /// `W₁` rate; zero (degenerate) when `r = 0`.
    pub c0: LogPos,
    pub c1: LogPos,
    pub c2: LogPos,
    /// `W₂` rate; zero (degenerate) when `r = 0`.
    pub c3: LogPos,
    pub c4: LogPos,
    pub c5: LogPos,
}

/// Degrees `p` at which `c_*(p)` enters the theorem constants.
pub fn required_c_star_degrees(c: &AssumptionConstants) -> Vec<u32> {
    let (r, nu) = (c.r, c.nu);
    let set: BTreeSet<u32> = [
        2,
        4 * r + 4,
        2 * r + 2,
        2 * nu,
        nu + r + 2,
        2 * r,
        2 * nu + 2,
        3 * r + 1,
    ]
    .into_iter()
    .collect();
    set.into_iter().collect()
}

/// Degrees `p` at which `v_p(M_V(p))` enters the theorem constants.
pub fn required_drift_degrees(c: &AssumptionConstants) -> Vec<u32> {
    let set: BTreeSet<u32> = [2, 4, 4 * c.r, 4 * c.r + 4].into_iter().collect();
    set.into_iter().collect()
}

struct TheoremInputs<'a> {
    c: &'a AssumptionConstants,
    beta: f64,
    d: f64,
    bar: &'a BarConstants,
    lip: &'a LipschitzConstants,
    moments: &'a MomentConstants,
    drift: &'a BTreeMap<u32, DriftRow>,
    contraction: &'a ContractionConstants,
    v2_integral: f64,
}

fn theorem(inp: &TheoremInputs<'_>) -> TheoremConstants {
    let c = inp.c;
    let (r, nu) = (c.r, c.nu);
    let k = c.growth;
    let (beta, d) = (inp.beta, inp.d);
    let a_bar = inp.bar.a_bar;
    let kappa_star = inp.moments.kappa_star;
    let c_star = |p: u32| inp.moments.c_star(p);
    let v_mv = |p: u32| inp.drift[&p].v_at_m_v;
    let lp = LogPos::new;
    // 1 + 1/(ā κ_*)
    let inflate = lp(1.0 + 1.0 / (a_bar * kappa_star));
    let two = lp(2.0);

    let c_bar_11 = lp(16384.0) * lp(k).powi(8);
    let c_bar_21 = c_bar_11 * (c_star(4 * r + 4) * inflate + 1.0)
        + lp(2048.0 * (d * (d + 2.0) * (d + 4.0) * (d + 6.0))) / lp(beta).powi(4);
    let c_bar_12 = two.powi(2 * r + 7) * lp(k).powi(4);
    let c_bar_22 = lp(64.0)
        * lp(k).powi(4)
        * (two.powi(2 * r + 1)
            + two.powi(2 * r + 1) * c_star(2 * r + 2) * inflate
            + v_mv(4 * r + 4))
        + lp(32.0 * d * (d + 2.0)) / lp(beta).powi(2);

    let l_bar = lp(inp.lip.l_bar);
    let l_grad_sq = lp(inp.lip.l_grad_bar).powi(2);
    let c_grad_sq = lp(inp.lip.c_grad).powi(2);
    let k_sq = lp(k * k);
    let noise = lp((2.0 / beta).sqrt());
    let l_sq_6r = lp(c.lipschitz * c.lipschitz) * lp(6.0).powi(r);
    // 2^{2r-2}, which is 1/4 when r = 0
    let four_r = two.powf(2.0 * r as f64 - 2.0);
    let e5l = LogPos::exp(5.0 * inp.lip.l_bar);
    let half = 0.5;

    let c_bar_0 = e5l
        * LogPos::sum([
            lp(27.0) * l_grad_sq / l_bar,
            l_grad_sq * c_bar_11 * half / l_bar,
            lp(12.0) * c_grad_sq * k_sq / l_bar,
            noise * l_sq_6r * four_r,
            noise * l_sq_6r * c_bar_12 * half,
            noise * c_grad_sq * half,
            lp(4.0) * k_sq / l_bar,
        ]);
    let c_bar_1 = c_bar_0
        + e5l
            * LogPos::sum([
                l_grad_sq / l_bar
                    * (lp(13.5) + lp(27.0) * c_star(2 * nu) * inflate + c_bar_21 * half),
                lp(12.0) * c_grad_sq * k_sq / l_bar * (c_star(nu + r + 2) * inflate + 1.0),
                noise
                    * l_sq_6r
                    * (four_r * (c_star(2 * r) * inflate + 1.0)
                        + v_mv(4 * r) * half
                        + c_bar_22 * half),
                noise
                    * c_grad_sq
                    * half
                    * (c_star(2 * nu + 2) * inflate + (8.0 * d * (d + 2.0) + 1.0)),
                two * k_sq / l_bar * (two * c_star(3 * r + 1) * inflate + 1.0),
            ]);

    let ctr = inp.contraction;
    // ċ can be far below the f64 range, so the rates stay in log form.
    let c_dot = ctr.c_dot.value();
    let r_f = r as f64;
    let c0 = (ctr.c_dot * 0.25)
        .min(lp(a_bar / 2.0))
        .min(lp(a_bar * r_f / 2.0))
        .min(lp(a_bar * kappa_star / 4.0));
    let c3 = (ctr.c_dot * 0.125)
        .min(lp(a_bar / 4.0))
        .min(lp(a_bar * r_f / 4.0))
        .min(lp(a_bar * kappa_star / 8.0));
    // e^x (1 + 1/x), infinite at x = 0
    let growth_factor = |x: LogPos| x.exp_of() * (LogPos::ONE + x.recip());

    let c_bar_2 = ctr.c_hat * growth_factor(c0) * (c_bar_0 + 3.0);
    let c_bar_3 = two * ctr.c_hat * LogPos::exp(c_dot / 2.0) / ctr.c_dot
        * LogPos::sum([
            c_bar_1,
            lp(27.0 / 4.0),
            lp(3.0) * c_star(2) * inflate,
            lp(0.75) * v_mv(4),
        ]);
    let c1 = c0.exp_of() * (c_bar_0.sqrt() + c_bar_2 + ctr.c_hat * (3.0 + inp.v2_integral));
    let c2 = c_bar_1.sqrt() + c_bar_3;

    let sqrt_2c_hat = (two * ctr.c_hat).sqrt();
    let c_bar_4 = sqrt_2c_hat * growth_factor(c3) * (c_bar_0.sqrt() + FRAC_1_SQRT_2);
    let c_bar_5 = lp(4.0) * sqrt_2c_hat * LogPos::exp(c_dot / 4.0) / ctr.c_dot
        * LogPos::sum([
            c_bar_1.sqrt(),
            lp((1.0 + 2.0 * 2f64.sqrt()) / 4.0),
            (c_star(2) * half).sqrt() * inflate.sqrt(),
            v_mv(4).sqrt() * 0.25,
        ]);
    let c4 = c3.exp_of()
        * LogPos::sum([
            c_bar_0.sqrt(),
            c_bar_4,
            sqrt_2c_hat * (LogPos::ONE + lp(2.0 + inp.v2_integral).sqrt()),
        ]);
    let c5 = c_bar_1.sqrt() + c_bar_5;

    TheoremConstants {
        c_bar_11,
        c_bar_21,
        c_bar_12,
        c_bar_22,
        c_bar_0,
        c_bar_1,
        c_bar_2,
        c_bar_3,
        c_bar_4,
        c_bar_5,
        c0,
        c1,
        c2,
        c3,
        c4,
        c5,
    }
}

/// Every constant of the convergence bounds for one target, `β` and `d`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerivedConstants {
    pub target: String,
    pub beta: f64,
    pub d: usize,
    pub assumptions: AssumptionConstants,
    pub bar: BarConstants,
    pub lipschitz: LipschitzConstants,
    pub moments: MomentConstants,
    pub drift: BTreeMap<u32, DriftRow>,
    pub contraction: ContractionConstants,
    pub theorem: TheoremConstants,
    pub step_sizes: StepSizeLimits,
    pub v2: V2Integral,
}

impl DerivedConstants {
    /// Derives everything; `extra_degrees` adds rows to the moment and drift
    /// tables beyond the degrees the theorem constants need.
    pub fn derive<T: Real>(
        target: &TargetSpec<T>,
        beta: f64,
        v2: V2Integral,
        extra_degrees: &[u32],
    ) -> Result<Self> {
        let (_, bar) = moment_inputs(target, beta)?;
        let c = *target.constants();
        let d = target.dim();
        let lipschitz = derive_lipschitz_constants(target);
        let mut moment_degrees = required_c_star_degrees(&c);
        moment_degrees.extend_from_slice(extra_degrees);
        let moments = derive_moment_constants(target, beta, &moment_degrees)?;
        let mut drift_degrees = required_drift_degrees(&c);
        drift_degrees.extend(extra_degrees.iter().filter(|&&p| p >= 2));
        let drift = derive_drift_constants(target, beta, &drift_degrees)?;
        let contraction = contraction(beta, lipschitz.l_bar, &drift[&2])?;
        let theorem = theorem(&TheoremInputs {
            c: &c,
            beta,
            d: d as f64,
            bar: &bar,
            lip: &lipschitz,
            moments: &moments,
            drift: &drift,
            contraction: &contraction,
            v2_integral: v2.value,
        });
        Ok(Self {
            target: target.name().to_string(),
            beta,
            d,
            assumptions: c,
            bar,
            lipschitz,
            moments,
            drift,
            contraction,
            theorem,
            step_sizes: step_size_limits(&bar, c.growth),
            v2,
        })
    }
}

/// The theorem constants alone, for a given `∫V₂ dπ_β`.
pub fn derive_theorem_constants<T: Real>(
    target: &TargetSpec<T>,
    beta: f64,
    v2_integral: f64,
) -> Result<TheoremConstants> {
    let v2 = V2Integral {
        value: v2_integral,
        standard_error: None,
        method: V2Method::Supplied,
    };
    Ok(DerivedConstants::derive(target, beta, v2, &[])?.theorem)
}
