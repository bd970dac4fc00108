use std::collections::BTreeMap;

use rayon::prelude::*;

use super::measure::{DivergenceRecord, EmpiricalMeasure, MeasureMeta, Snapshot};
use super::{is_gaussian, step_size_warning, Algorithm, ChainState, Kernel, SamplerConfig};
use crate::error::{Error, Result};
use crate::numerics::RngStream;
use crate::potentials::TargetSpec;
use crate::real::Real;

/// `⌈horizon/λ⌉` (at least 1). Quotients within `1e-9` relative of an
/// integer are rounded, so `400/0.01` gives 40000 despite `0.01` being
/// inexact in binary.
pub fn step_count(horizon: f64, step_size: f64) -> u64 {
    let q = horizon / step_size;
    let nearest = q.round();
    let n = if (q - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        nearest
    } else {
        q.ceil()
    };
    (n as u64).max(1)
}

/// One draw approximating `π_β`: the tamed chain from the origin run for
/// `⌈horizon/fine_step⌉` steps, or an exact `N(0, I/β)` draw when
/// `exact_gaussian` is set and the target is the standard Gaussian.
pub fn reference_sample<T: Real>(
    target: &TargetSpec<T>,
    beta: f64,
    horizon: f64,
    fine_step: f64,
    stream: &mut RngStream,
    exact_gaussian: bool,
) -> Result<Vec<T>> {
    let d = target.dim();
    if exact_gaussian && is_gaussian(target) {
        let scale = T::of(beta.recip().sqrt());
        let mut x = vec![T::zero(); d];
        stream.fill_normal(&mut x);
        return Ok(x.into_iter().map(|v| v * scale).collect());
    }
    let mut state = ChainState::new(vec![T::zero(); d], stream.clone());
    let mut kernel = Kernel::new(target, fine_step, beta, true);
    for _ in 0..step_count(horizon, fine_step) {
        kernel.advance(&mut state)?;
    }
    *stream = state.stream;
    Ok(state.theta)
}

struct ChainOutcome<T> {
    result: std::result::Result<Vec<T>, u64>,
    snapshots: Vec<(u64, Vec<T>)>,
}

fn run_chain<T: Real>(
    config: &SamplerConfig<T>,
    target: &TargetSpec<T>,
    index: usize,
    n_steps: u64,
) -> ChainOutcome<T> {
    let mut stream = RngStream::new(config.master_seed, index as u64);
    if config.algorithm == Algorithm::Reference && config.exact_gaussian && is_gaussian(target) {
        let draw = reference_sample(
            target,
            config.beta,
            config.horizon,
            config.step_size,
            &mut stream,
            true,
        );
        return ChainOutcome {
            result: draw.map_err(|_| 0),
            snapshots: Vec::new(),
        };
    }
    let tamed = config.algorithm != Algorithm::Ula;
    let mut kernel = Kernel::new(target, config.step_size, config.beta, tamed);
    let mut state = ChainState::new(config.initial.clone(), stream);
    let mut snapshots = Vec::new();
    for _ in 0..n_steps {
        if kernel.advance(&mut state).is_err() {
            return ChainOutcome {
                result: Err(state.step),
                snapshots,
            };
        }
        if config.record.wants(state.step) {
            snapshots.push((state.step, state.theta.clone()));
        }
    }
    ChainOutcome {
        result: Ok(state.theta),
        snapshots,
    }
}

/// Runs `n_chains` independent chains for `⌈horizon/λ⌉` steps each and
/// returns their final iterates, one row per surviving chain.
///
/// Chain `i` draws from stream `i` of the master seed and rows are ordered
/// by chain index, so the result does not depend on the thread pool.
/// Diverged chains are dropped and listed in `meta.diverged_chains`; if no
/// chain survives the run fails with [`Error::UniversalDivergence`].
pub fn run_chains<T: Real>(
    config: &SamplerConfig<T>,
    target: &TargetSpec<T>,
) -> Result<EmpiricalMeasure<T>> {
    config.validate()?;
    if config.dim() != target.dim() {
        return Err(Error::SizeMismatch(format!(
            "initial point has dimension {}, target `{}` has {}",
            config.dim(),
            target.name(),
            target.dim()
        )));
    }
    let n_steps = config.n_steps();
    let outcomes: Vec<ChainOutcome<T>> = (0..config.n_chains)
        .into_par_iter()
        .map(|i| run_chain(config, target, i, n_steps))
        .collect();

    let d = config.dim();
    let mut samples = Vec::with_capacity(config.n_chains * d);
    let mut chain_ids = Vec::with_capacity(config.n_chains);
    let mut diverged = Vec::new();
    let mut by_step: BTreeMap<u64, Snapshot<T>> = BTreeMap::new();
    for (i, outcome) in outcomes.into_iter().enumerate() {
        for (step, theta) in outcome.snapshots {
            let snap = by_step.entry(step).or_insert_with(|| Snapshot {
                step,
                chain_ids: Vec::new(),
                samples: Vec::new(),
            });
            snap.chain_ids.push(i);
            snap.samples.extend(theta);
        }
        match outcome.result {
            Ok(theta) => {
                samples.extend(theta);
                chain_ids.push(i);
            }
            Err(step) => diverged.push(DivergenceRecord { chain: i, step }),
        }
    }
    if chain_ids.is_empty() {
        return Err(Error::UniversalDivergence(config.n_chains));
    }
    let meta = MeasureMeta {
        target: target.name().to_string(),
        algorithm: config.algorithm.name().to_string(),
        lambda: config.step_size,
        beta: config.beta,
        d,
        horizon: config.horizon,
        seed: config.master_seed,
        n_chains: config.n_chains,
        steps: n_steps,
        diverged_chains: diverged,
    };
    let mut measure = EmpiricalMeasure::new(d, samples, chain_ids, meta)?;
    measure.snapshots = by_step.into_values().collect();
    let exact =
        config.algorithm == Algorithm::Reference && config.exact_gaussian && is_gaussian(target);
    if !exact {
        measure.warnings.extend(step_size_warning(
            target,
            config.step_size,
            config.algorithm,
        ));
    }
    Ok(measure)
}
