use std::time::Instant;

use super::config::ExperimentConfig;
use super::results::{SweepCell, SweepResult};
use super::trial::run_trial;
use crate::ensemble::{gen_sensing_matrix, RngSeed};
use crate::error::{Error, Result};
use crate::metrics::{Aggregate, TrialRecord};

/// Sums for one measurement fraction.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaAggregate {
    pub alpha: f64,
    pub m: usize,
    pub aggregate: Aggregate,
}

/// A finished sweep: the tabulated cells plus the raw aggregates behind them.
#[derive(Debug, Clone)]
pub struct Sweep {
    pub result: SweepResult,
    pub aggregates: Vec<AlphaAggregate>,
}

/// Progress notification, emitted once per completed alpha.
#[derive(Debug, Clone, Copy)]
pub struct Progress {
    pub alpha_index: usize,
    pub alphas: usize,
    pub alpha: f64,
    pub elapsed_s: f64,
}

/// Runs every `(alpha, matrix, signal)` trial and aggregates per alpha.
///
/// `workers` sets the size of the thread pool; 1 (or building without the
/// `parallel` feature) runs sequentially. Results do not depend on it: each
/// trial draws from its own stream and records are folded in trial order.
pub fn run_sweep(config: &ExperimentConfig, workers: usize) -> Result<Sweep> {
    run_sweep_with_progress(config, workers, |_| {})
}

pub fn run_sweep_with_progress<F>(config: &ExperimentConfig, workers: usize, progress: F) -> Result<Sweep>
where
    F: Fn(Progress) + Sync,
{
    config.validate()?;
    if workers == 0 {
        return Err(Error::ConfigInvalid("workers must be at least 1".into()));
    }
    let seed = RngSeed::new(config.seed);
    let signal = config.signal_spec()?;
    let pursuit = config.pursuit_config();
    let started = Instant::now();

    let mut aggregates = Vec::with_capacity(config.alphas.len());
    for (ai, &alpha) in config.alphas.iter().enumerate() {
        let m = config.measurements(alpha);
        let trials_on_matrix = |s: usize| -> Result<Vec<TrialRecord>> {
            let a = gen_sensing_matrix(m, config.n, &mut seed.matrix_rng(ai, s))?;
            let one = |t: usize| {
                run_trial(
                    &a,
                    &signal,
                    &config.noise,
                    &pursuit,
                    &config.algorithms,
                    &mut seed.trial_rng(ai, s, t),
                )
            };
            par_map(workers, config.signals_per_matrix, one)
        };
        let per_matrix = par_map(workers, config.matrices, trials_on_matrix)?;

        let mut aggregate = Aggregate::new();
        for record in per_matrix.iter().flatten() {
            aggregate.push(record);
        }
        aggregates.push(AlphaAggregate { alpha, m, aggregate });
        progress(Progress {
            alpha_index: ai,
            alphas: config.alphas.len(),
            alpha,
            elapsed_s: started.elapsed().as_secs_f64(),
        });
    }

    let result = tabulate(config, &aggregates);
    Ok(Sweep { result, aggregates })
}

fn tabulate(config: &ExperimentConfig, aggregates: &[AlphaAggregate]) -> SweepResult {
    let trials = config.trials_per_alpha() as u64;
    let mut cells = Vec::new();
    for aa in aggregates {
        let fusion = aa.aggregate.mean_fusion();
        for &alg in &config.algorithms {
            let agg = &aa.aggregate.algorithms[&alg];
            cells.push(SweepCell {
                alpha: aa.alpha,
                m: aa.m,
                algorithm: alg,
                trials,
                failed: agg.failed,
                srer_db: aa.aggregate.srer_db(alg).ok(),
                avg_true_atoms: aa.aggregate.mean_true_atoms(alg).ok(),
                avg_common: fusion.map(|f| f.0),
                avg_joint: fusion.map(|f| f.1),
                avg_joint_true: fusion.map(|f| f.2),
                wall_s: agg.wall_s,
            });
        }
    }
    SweepResult { cells }
}

/// Order-preserving map over `0..len`, on a `workers`-thread pool when the
/// `parallel` feature is enabled and `workers > 1`.
fn par_map<T, F>(workers: usize, len: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if workers > 1 {
        use rayon::prelude::*;
        return match rayon::current_thread_index() {
            // already inside a pool: reuse it
            Some(_) => (0..len).into_par_iter().map(&f).collect(),
            None => rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .map_err(|e| Error::ConfigInvalid(format!("thread pool: {e}")))?
                .install(|| (0..len).into_par_iter().map(&f).collect()),
        };
    }
    let _ = workers;
    (0..len).map(f).collect()
}
