//! Tamed Langevin sampling for targets with super-linearly growing
//! gradients: the sampler, benchmark potentials, explicit convergence
//! constants and distance estimators.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constants;
pub mod error;
pub mod io;
pub mod linalg;
pub mod metrics;
pub mod numerics;
pub mod potentials;
pub mod real;
pub mod sampler;

pub use error::{Error, Result};
pub use real::Real;

/// Double-precision instantiations.
pub type Target = potentials::TargetSpec<f64>;
pub type Measure = sampler::EmpiricalMeasure<f64>;
pub type Config = sampler::SamplerConfig<f64>;
pub type State = sampler::ChainState<f64>;
