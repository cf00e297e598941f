//! Reconstruction quality (SRER), noise calibration (SMNR) and
//! support-recovery counts, accumulated into mergeable aggregates.

mod exact;

pub use exact::ExactSum;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::SupportSet;
use crate::pursuits::Algorithm;

/// `|T_true ∩ T_hat|`.
pub fn true_atom_count(true_support: &SupportSet, estimate: &SupportSet) -> usize {
    true_support.intersection_len(estimate)
}

/// Sizes of the common and joint supports of two estimates, and how many
/// true atoms the joint support holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FusionStats {
    pub common: usize,
    pub joint: usize,
    pub joint_true: usize,
}

pub fn support_fusion_stats(true_support: &SupportSet, omp: &SupportSet, sp: &SupportSet) -> FusionStats {
    let joint = omp.union(sp);
    FusionStats {
        common: omp.intersection_len(sp),
        joint: joint.len(),
        joint_true: true_support.intersection_len(&joint),
    }
}

/// `10 log10(signal / error)`, `+inf` when the error is exactly zero.
pub fn ratio_db(signal: f64, error: f64) -> f64 {
    if error == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (signal / error).log10()
    }
}

/// One algorithm's result on one trial. `None` fields mean the run failed.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgorithmOutcome {
    pub algorithm: Algorithm,
    pub support: Option<SupportSet>,
    /// `||x - x_hat||^2`.
    pub error_energy: Option<f64>,
    pub true_atoms: Option<usize>,
    pub elapsed_s: f64,
}

impl AlgorithmOutcome {
    pub fn failed(&self) -> bool {
        self.support.is_none()
    }
}

/// Everything measured on a single Monte Carlo trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub true_support: SupportSet,
    /// `||x||^2`.
    pub signal_energy: f64,
    /// `||w||^2`.
    pub noise_energy: f64,
    pub outcomes: Vec<AlgorithmOutcome>,
    /// Present when both OMP and SP supports were computed.
    pub fusion: Option<FusionStats>,
}

impl TrialRecord {
    pub fn outcome(&self, algorithm: Algorithm) -> Option<&AlgorithmOutcome> {
        self.outcomes.iter().find(|o| o.algorithm == algorithm)
    }

    /// Copy with timings zeroed, for determinism comparisons.
    pub fn without_timing(&self) -> Self {
        let mut r = self.clone();
        r.outcomes.iter_mut().for_each(|o| o.elapsed_s = 0.0);
        r
    }
}

/// Per-algorithm running sums.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AlgorithmAggregate {
    pub completed: u64,
    pub failed: u64,
    /// Signal energy over completed trials only.
    pub signal_energy: ExactSum,
    pub error_energy: ExactSum,
    pub true_atoms: u64,
    pub wall_s: f64,
}

impl AlgorithmAggregate {
    fn merge(&mut self, other: &Self) {
        self.completed += other.completed;
        self.failed += other.failed;
        self.signal_energy.merge(&other.signal_energy);
        self.error_energy.merge(&other.error_energy);
        self.true_atoms += other.true_atoms;
        self.wall_s += other.wall_s;
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FusionAggregate {
    pub trials: u64,
    pub common: u64,
    pub joint: u64,
    pub joint_true: u64,
}

/// Mergeable sums over a set of trials. Sample means are taken by dividing
/// sums only when a statistic is read out.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Aggregate {
    pub trials: u64,
    pub signal_energy: ExactSum,
    pub noise_energy: ExactSum,
    pub algorithms: BTreeMap<Algorithm, AlgorithmAggregate>,
    pub fusion: FusionAggregate,
}

impl Aggregate {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, record: &TrialRecord) {
        self.trials += 1;
        self.signal_energy.add(record.signal_energy);
        self.noise_energy.add(record.noise_energy);
        for o in &record.outcomes {
            let agg = self.algorithms.entry(o.algorithm).or_default();
            agg.wall_s += o.elapsed_s;
            match (o.error_energy, o.true_atoms) {
                (Some(err), Some(hits)) => {
                    agg.completed += 1;
                    agg.signal_energy.add(record.signal_energy);
                    agg.error_energy.add(err);
                    agg.true_atoms += hits as u64;
                }
                _ => agg.failed += 1,
            }
        }
        if let Some(f) = record.fusion {
            self.fusion.trials += 1;
            self.fusion.common += f.common as u64;
            self.fusion.joint += f.joint as u64;
            self.fusion.joint_true += f.joint_true as u64;
        }
    }

    pub fn merge(&mut self, other: &Aggregate) {
        self.trials += other.trials;
        self.signal_energy.merge(&other.signal_energy);
        self.noise_energy.merge(&other.noise_energy);
        for (alg, agg) in &other.algorithms {
            self.algorithms.entry(*alg).or_default().merge(agg);
        }
        self.fusion.trials += other.fusion.trials;
        self.fusion.common += other.fusion.common;
        self.fusion.joint += other.fusion.joint;
        self.fusion.joint_true += other.fusion.joint_true;
    }

    fn completed(&self, algorithm: Algorithm) -> Result<&AlgorithmAggregate> {
        match self.algorithms.get(&algorithm) {
            Some(a) if a.completed > 0 => Ok(a),
            _ => Err(Error::EmptyAggregate),
        }
    }

    /// Ratio of summed signal energy to summed reconstruction error, in dB.
    pub fn srer_db(&self, algorithm: Algorithm) -> Result<f64> {
        let a = self.completed(algorithm)?;
        Ok(ratio_db(a.signal_energy.value(), a.error_energy.value()))
    }

    pub fn mean_true_atoms(&self, algorithm: Algorithm) -> Result<f64> {
        let a = self.completed(algorithm)?;
        Ok(a.true_atoms as f64 / a.completed as f64)
    }

    /// Mean `(|common|, |joint|, |T ∩ joint|)` over trials with fusion stats.
    pub fn mean_fusion(&self) -> Option<(f64, f64, f64)> {
        let f = &self.fusion;
        (f.trials > 0).then(|| {
            let n = f.trials as f64;
            (f.common as f64 / n, f.joint as f64 / n, f.joint_true as f64 / n)
        })
    }

    /// Measured signal-to-measurement-noise ratio in dB.
    pub fn empirical_smnr_db(&self) -> Result<f64> {
        if self.trials == 0 {
            return Err(Error::EmptyAggregate);
        }
        Ok(ratio_db(self.signal_energy.value(), self.noise_energy.value()))
    }
}

/// SRER of one algorithm over an aggregate.
pub fn srer_db(agg: &Aggregate, algorithm: Algorithm) -> Result<f64> {
    agg.srer_db(algorithm)
}
