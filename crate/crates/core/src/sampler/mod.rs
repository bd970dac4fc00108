//! The tamed Langevin chain, the untamed baseline, the fine-step reference
//! sampler and the multi-chain runner.

mod measure;
mod runner;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::constants::{bar_constants, step_size_limits, StepSizeLimits};
use crate::error::{Error, Result};
use crate::linalg::norm_sq;
use crate::numerics::RngStream;
use crate::potentials::{AssumptionConstants, TargetKind, TargetSpec};
use crate::real::Real;

pub use measure::{DivergenceRecord, EmpiricalMeasure, MeasureMeta, Snapshot};
pub use runner::{reference_sample, run_chains, step_count};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    /// Tamed chain.
    Mtula,
    /// Untamed Euler scheme.
    Ula,
    /// Tamed chain at a fine step, from the origin; the Gaussian target may
    /// instead be sampled exactly (see [`SamplerConfig::exact_gaussian`]).
    Reference,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Mtula => "mtula",
            Algorithm::Ula => "ula",
            Algorithm::Reference => "reference",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mtula" => Ok(Algorithm::Mtula),
            "ula" => Ok(Algorithm::Ula),
            "reference" => Ok(Algorithm::Reference),
            other => Err(Error::InvalidConfig(format!(
                "unknown algorithm `{other}` (expected mtula, ula or reference)"
            ))),
        }
    }
}

/// Which intermediate iterates a chain keeps besides the final one.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Record {
    #[default]
    FinalOnly,
    /// Every `k`-th iterate.
    Every(u64),
    /// The iterates after the listed step counts.
    At(Vec<u64>),
}

impl Record {
    fn wants(&self, step: u64) -> bool {
        match self {
            Record::FinalOnly => false,
            Record::Every(k) => *k > 0 && step.is_multiple_of(*k),
            Record::At(steps) => steps.contains(&step),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplerConfig<T: Real> {
    /// `λ`; the fine step for [`Algorithm::Reference`].
    pub step_size: f64,
    /// `β`.
    pub beta: f64,
    /// `θ₀`, shared by every chain; its length fixes the dimension.
    pub initial: Vec<T>,
    pub n_chains: usize,
    /// Simulated time `λn`.
    pub horizon: f64,
    pub master_seed: u64,
    pub algorithm: Algorithm,
    /// Under [`Algorithm::Reference`], sample the Gaussian target exactly.
    pub exact_gaussian: bool,
    pub record: Record,
}

impl<T: Real> SamplerConfig<T> {
    /// A tamed run from the origin.
    pub fn new(
        d: usize,
        step_size: f64,
        beta: f64,
        n_chains: usize,
        horizon: f64,
        master_seed: u64,
    ) -> Self {
        Self {
            step_size,
            beta,
            initial: vec![T::zero(); d],
            n_chains,
            horizon,
            master_seed,
            algorithm: Algorithm::Mtula,
            exact_gaussian: false,
            record: Record::FinalOnly,
        }
    }

    pub fn with_algorithm(mut self, algorithm: Algorithm) -> Self {
        self.algorithm = algorithm;
        self
    }

    pub fn with_initial(mut self, initial: Vec<T>) -> Self {
        self.initial = initial;
        self
    }

    pub fn with_record(mut self, record: Record) -> Self {
        self.record = record;
        self
    }

    pub fn with_exact_gaussian(mut self, exact: bool) -> Self {
        self.exact_gaussian = exact;
        self
    }

    pub fn dim(&self) -> usize {
        self.initial.len()
    }

    /// `⌈horizon/λ⌉`, at least one.
    pub fn n_steps(&self) -> u64 {
        step_count(self.horizon, self.step_size)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(self.step_size > 0.0 && self.step_size.is_finite()) {
            return bad(format!(
                "step size must be positive, got {}",
                self.step_size
            ));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return bad(format!("beta must be positive, got {}", self.beta));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return bad(format!("horizon must be positive, got {}", self.horizon));
        }
        if self.n_chains == 0 {
            return bad("at least one chain is required".into());
        }
        if self.initial.is_empty() {
            return bad("dimension must be at least 1".into());
        }
        if self.initial.iter().any(|x| !x.is_finite()) {
            return bad("initial point must be finite".into());
        }
        Ok(())
    }
}

/// Position and step counter of one chain together with its private stream.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainState<T: Real> {
    pub theta: Vec<T>,
    pub step: u64,
    pub stream: RngStream,
}

impl<T: Real> ChainState<T> {
    pub fn new(theta: Vec<T>, stream: RngStream) -> Self {
        Self {
            theta,
            step: 0,
            stream,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.theta.iter().all(|x| x.is_finite())
    }
}

/// `(1 + λ|θ|^{2r})^{1/2}` from `|θ|²`, with `0⁰ = 1`.
#[inline]
fn taming_divisor<T: Real>(norm_sq: T, r: u32, lambda: T) -> T {
    let pow = if r == 0 {
        T::one()
    } else {
        norm_sq.powi(r as i32)
    };
    (T::one() + lambda * pow).sqrt()
}

/// `h_λ(θ) = h(θ) / (1 + λ|θ|^{2r})^{1/2}`.
pub fn tamed_gradient<T: Real>(target: &TargetSpec<T>, theta: &[T], lambda: f64) -> Vec<T> {
    let div = taming_divisor(norm_sq(theta), target.constants().r, T::of(lambda));
    target
        .gradient(theta)
        .into_iter()
        .map(|g| g / div)
        .collect()
}

/// One step with caller-supplied noise `ξ`:
/// `θ ← θ - λ h_λ(θ) + √(2λ/β) ξ` (tamed) or with `h` in place of `h_λ`.
/// `scratch` receives the gradient and must have the length of `theta`.
pub fn langevin_update<T: Real>(
    target: &TargetSpec<T>,
    theta: &mut [T],
    lambda: f64,
    beta: f64,
    tamed: bool,
    noise: &[T],
    scratch: &mut [T],
) {
    let lam = T::of(lambda);
    let sigma = T::of((2.0 * lambda / beta).sqrt());
    target.gradient_into(theta, scratch);
    let drift = if tamed {
        lam / taming_divisor(norm_sq(theta), target.constants().r, lam)
    } else {
        lam
    };
    for ((x, &g), &xi) in theta.iter_mut().zip(scratch.iter()).zip(noise) {
        *x = *x - drift * g + sigma * xi;
    }
}

/// Reusable buffers for advancing chains of one run.
pub(crate) struct Kernel<'a, T: Real> {
    target: &'a TargetSpec<T>,
    lambda: f64,
    beta: f64,
    tamed: bool,
    grad: Vec<T>,
    noise: Vec<T>,
}

impl<'a, T: Real> Kernel<'a, T> {
    pub(crate) fn new(target: &'a TargetSpec<T>, lambda: f64, beta: f64, tamed: bool) -> Self {
        let d = target.dim();
        Self {
            target,
            lambda,
            beta,
            tamed,
            grad: vec![T::zero(); d],
            noise: vec![T::zero(); d],
        }
    }

    /// Advances one step; a non-finite coordinate is reported as a
    /// divergence of the state's stream index at the new step count.
    pub(crate) fn advance(&mut self, state: &mut ChainState<T>) -> Result<()> {
        state.stream.fill_normal(&mut self.noise);
        langevin_update(
            self.target,
            &mut state.theta,
            self.lambda,
            self.beta,
            self.tamed,
            &self.noise,
            &mut self.grad,
        );
        state.step += 1;
        if state.is_finite() {
            Ok(())
        } else {
            Err(Error::Divergence {
                chain: state.stream.stream_index() as usize,
                step: state.step,
            })
        }
    }
}

fn check_dims<T: Real>(
    state: &ChainState<T>,
    config: &SamplerConfig<T>,
    target: &TargetSpec<T>,
) -> Result<()> {
    if state.theta.len() != target.dim() || config.dim() != target.dim() {
        return Err(Error::SizeMismatch(format!(
            "state has dimension {}, config {}, target {}",
            state.theta.len(),
            config.dim(),
            target.dim()
        )));
    }
    Ok(())
}

/// One tamed step drawing fresh noise from the state's stream.
pub fn mtula_step<T: Real>(
    state: &mut ChainState<T>,
    config: &SamplerConfig<T>,
    target: &TargetSpec<T>,
) -> Result<()> {
    check_dims(state, config, target)?;
    Kernel::new(target, config.step_size, config.beta, true).advance(state)
}

/// One untamed step drawing fresh noise from the state's stream.
pub fn ula_step<T: Real>(
    state: &mut ChainState<T>,
    config: &SamplerConfig<T>,
    target: &TargetSpec<T>,
) -> Result<()> {
    check_dims(state, config, target)?;
    Kernel::new(target, config.step_size, config.beta, false).advance(state)
}

/// `λ̃_max` and `λ_{1,max}` for a target's constants.
pub fn max_step_size(constants: &AssumptionConstants) -> Result<StepSizeLimits> {
    Ok(step_size_limits(
        &bar_constants(constants)?,
        constants.growth,
    ))
}

/// A warning when `λ` exceeds the step-size limit of the convergence
/// results, or a reference fine step exceeds a tenth of it.
pub fn step_size_warning<T: Real>(
    target: &TargetSpec<T>,
    step_size: f64,
    algorithm: Algorithm,
) -> Option<String> {
    let limit = max_step_size(target.constants()).ok()?.lambda_max;
    match algorithm {
        Algorithm::Reference if step_size > limit / 10.0 => Some(format!(
            "reference fine step {step_size} exceeds lambda_max/10 = {:e} for `{}`",
            limit / 10.0,
            target.name()
        )),
        Algorithm::Mtula | Algorithm::Ula if step_size > limit => Some(format!(
            "step size {step_size} exceeds lambda_max = {limit:e} for `{}`; the convergence bounds do not cover it",
            target.name()
        )),
        _ => None,
    }
}

pub(crate) fn is_gaussian<T: Real>(target: &TargetSpec<T>) -> bool {
    target.kind() == Some(TargetKind::Gaussian)
}
