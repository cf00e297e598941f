use std::time::Instant;

use rand::Rng;

use crate::ensemble::{gen_sparse_signal, measure, NoiseSpec, SignalSpec};
use crate::error::{Error, Result};
use crate::linalg::{squared_distance, DenseMatrix, SparseEstimate, SupportSet};
use crate::metrics::{support_fusion_stats, true_atom_count, AlgorithmOutcome, TrialRecord};
use crate::pursuits::{fuse_supports, ifugp, omp, sp, Algorithm, PursuitConfig};

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64())
}

/// Rank-deficient least squares marks a trial as failed; anything else is a
/// caller error.
fn tolerate(r: Result<SparseEstimate>) -> Result<Option<SparseEstimate>> {
    match r {
        Ok(e) => Ok(Some(e)),
        Err(Error::RankDeficient { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Draws one signal, measures it through `a` and runs every algorithm in
/// `algorithms` on the same measurement.
///
/// OMP and SP are computed once and shared with FuGP whenever any of the
/// three is requested; their joint-support statistics are recorded then too.
pub fn run_trial<R: Rng + ?Sized>(
    a: &DenseMatrix,
    signal: &SignalSpec,
    noise: &NoiseSpec,
    cfg: &PursuitConfig,
    algorithms: &[Algorithm],
    rng: &mut R,
) -> Result<TrialRecord> {
    let (x, true_support) = gen_sparse_signal(signal, rng);
    let (b, w) = measure(a, &x, signal, noise, rng)?;
    let empty = SupportSet::empty();

    let wants = |alg| algorithms.contains(&alg);
    let need_ingredients = wants(Algorithm::Omp) || wants(Algorithm::Sp) || wants(Algorithm::Fugp);
    let (omp_est, omp_t) = if need_ingredients {
        let (r, t) = timed(|| omp(a, &b, cfg, &empty).map(|r| r.0));
        (tolerate(r)?, t)
    } else {
        (None, 0.0)
    };
    let (sp_est, sp_t) = if need_ingredients {
        let (r, t) = timed(|| sp(a, &b, cfg, &empty).map(|r| r.0));
        (tolerate(r)?, t)
    } else {
        (None, 0.0)
    };

    let outcome = |algorithm, est: Option<&SparseEstimate>, elapsed_s| match est {
        Some(e) => AlgorithmOutcome {
            algorithm,
            support: Some(e.support.clone()),
            error_energy: Some(squared_distance(&x, &e.densify())),
            true_atoms: Some(true_atom_count(&true_support, &e.support)),
            elapsed_s,
        },
        None => AlgorithmOutcome {
            algorithm,
            support: None,
            error_energy: None,
            true_atoms: None,
            elapsed_s,
        },
    };

    let mut outcomes = Vec::with_capacity(algorithms.len());
    for &alg in algorithms {
        let o = match alg {
            Algorithm::Omp => outcome(alg, omp_est.as_ref(), omp_t),
            Algorithm::Sp => outcome(alg, sp_est.as_ref(), sp_t),
            Algorithm::Fugp => match (&omp_est, &sp_est) {
                (Some(o), Some(s)) => {
                    let (r, t) = timed(|| fuse_supports(a, &b, cfg.sparsity, &o.support, &s.support).map(|r| r.0));
                    outcome(alg, tolerate(r)?.as_ref(), t + omp_t + sp_t)
                }
                _ => outcome(alg, None, omp_t + sp_t),
            },
            Algorithm::Ifugp => {
                let (r, t) = timed(|| ifugp(a, &b, cfg).map(|r| r.0));
                outcome(alg, tolerate(r)?.as_ref(), t)
            }
        };
        outcomes.push(o);
    }

    let fusion = match (&omp_est, &sp_est) {
        (Some(o), Some(s)) => Some(support_fusion_stats(&true_support, &o.support, &s.support)),
        _ => None,
    };

    Ok(TrialRecord {
        signal_energy: x.iter().map(|v| v * v).sum(),
        noise_energy: w.iter().map(|v| v * v).sum(),
        true_support,
        outcomes,
        fusion,
    })
}
