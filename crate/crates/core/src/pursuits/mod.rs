//! Greedy recovery algorithms: OMP and SP with an initial support, and the
//! two fusion schemes built on top of them.

mod fusion;
mod omp;
mod sp;

pub use fusion::{fugp, fuse_supports, ifugp, FusionReport};
pub use omp::omp;
pub use sp::sp;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, SelectionRule, SupportSet};

/// Tuning shared by all pursuits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PursuitConfig {
    /// Target sparsity K.
    pub sparsity: usize,
    pub max_sp_iterations: usize,
    pub max_ifugp_iterations: usize,
    /// OMP picks the atom maximising `|a_i^T r|` when set, `a_i^T r` otherwise.
    pub correlation_uses_magnitude: bool,
}

impl PursuitConfig {
    pub fn new(sparsity: usize) -> Self {
        Self {
            sparsity,
            max_sp_iterations: 100,
            max_ifugp_iterations: 50,
            correlation_uses_magnitude: true,
        }
    }

    pub fn with_signed_omp(mut self, signed: bool) -> Self {
        self.correlation_uses_magnitude = !signed;
        self
    }

    pub(crate) fn omp_rule(&self) -> SelectionRule {
        if self.correlation_uses_magnitude {
            SelectionRule::Magnitude
        } else {
            SelectionRule::Signed
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sparsity == 0 {
            return Err(Error::ConfigInvalid("sparsity must be at least 1".into()));
        }
        if self.max_sp_iterations == 0 || self.max_ifugp_iterations == 0 {
            return Err(Error::ConfigInvalid("iteration caps must be at least 1".into()));
        }
        Ok(())
    }
}

/// One iteration of a pursuit.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub iteration: usize,
    pub support: SupportSet,
    pub residual_norm: f64,
    /// False for the final iterate an until-test rejected.
    pub accepted: bool,
}

/// Per-iteration history of a pursuit run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PursuitTrace {
    pub records: Vec<TraceRecord>,
    /// The iteration cap ended the loop; the output is the best iterate so far.
    pub cap_reached: bool,
    /// SP exited before improving on a short initial support and the output
    /// was topped up from the initial matched filter.
    pub padded: bool,
}

impl PursuitTrace {
    pub(crate) fn push(&mut self, iteration: usize, support: &SupportSet, residual_norm: f64, accepted: bool) {
        self.records.push(TraceRecord {
            iteration,
            support: support.clone(),
            residual_norm,
            accepted,
        });
    }

    /// Residual norms of the accepted iterates, in order.
    pub fn accepted_norms(&self) -> Vec<f64> {
        self.records
            .iter()
            .filter(|r| r.accepted)
            .map(|r| r.residual_norm)
            .collect()
    }
}

/// Residual-decrease slack relative to `||b||`.
pub(crate) const LOOP_SLACK: f64 = 1e-12;

/// The four recovery algorithms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Omp,
    Sp,
    Fugp,
    Ifugp,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::Omp, Algorithm::Sp, Algorithm::Fugp, Algorithm::Ifugp];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Omp => "omp",
            Algorithm::Sp => "sp",
            Algorithm::Fugp => "fugp",
            Algorithm::Ifugp => "ifugp",
        }
    }

    /// Runs the algorithm from an empty initial support.
    pub fn run(self, a: &DenseMatrix, b: &[f64], cfg: &PursuitConfig) -> Result<crate::linalg::SparseEstimate> {
        let empty = SupportSet::empty();
        Ok(match self {
            Algorithm::Omp => omp(a, b, cfg, &empty)?.0,
            Algorithm::Sp => sp(a, b, cfg, &empty)?.0,
            Algorithm::Fugp => fugp(a, b, cfg)?.0,
            Algorithm::Ifugp => ifugp(a, b, cfg)?.0,
        })
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
        match s.trim().to_ascii_lowercase().as_str() {
            "omp" => Ok(Algorithm::Omp),
            "sp" => Ok(Algorithm::Sp),
            "fugp" => Ok(Algorithm::Fugp),
            "ifugp" => Ok(Algorithm::Ifugp),
            other => Err(Error::Parse(format!("unknown algorithm `{other}`"))),
        }
    }
}

/// Shared precondition checks for a `(A, b, K, T_init)` call.
pub(crate) fn check_problem(a: &DenseMatrix, b: &[f64], cfg: &PursuitConfig, init: &SupportSet) -> Result<()> {
    cfg.validate()?;
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "measurement of length {} against {} rows",
            b.len(),
            a.rows()
        )));
    }
    let k = cfg.sparsity;
    if k > a.rows() || k > a.cols() {
        return Err(Error::InvalidSparsity {
            sparsity: k,
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if init.len() >= k {
        return Err(Error::InvalidInitialSupport {
            given: init.len(),
            sparsity: k,
        });
    }
    init.check_bounds(a.cols())
}

pub(crate) fn check_fusion(a: &DenseMatrix, cfg: &PursuitConfig) -> Result<()> {
    let needed = 2 * cfg.sparsity;
    if needed > a.rows() {
        return Err(Error::InsufficientMeasurements {
            needed,
            rows: a.rows(),
        });
    }
    Ok(())
}
