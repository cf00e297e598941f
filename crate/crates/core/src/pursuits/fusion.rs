use super::{check_fusion, check_problem, omp, sp, PursuitConfig, PursuitTrace, LOOP_SLACK};
use crate::error::Result;
use crate::linalg::{least_squares_on_support, norm2, top_k_magnitude, DenseMatrix, SparseEstimate, SupportSet};

/// What went into a fused estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct FusionReport {
    pub omp_support: SupportSet,
    pub sp_support: SupportSet,
    /// Atoms both ingredients agree on.
    pub common: SupportSet,
    /// Atoms either ingredient picked.
    pub joint: SupportSet,
}

/// Picks K atoms out of the union of two supports.
///
/// Every atom of the intersection is kept. The remaining slots go to the
/// largest-magnitude least-squares coefficients on the union, excluding the
/// intersection; the final coefficients are a fresh fit on the chosen atoms.
pub fn fuse_supports(
    a: &DenseMatrix,
    b: &[f64],
    sparsity: usize,
    omp_support: &SupportSet,
    sp_support: &SupportSet,
) -> Result<(SparseEstimate, FusionReport)> {
    let common = omp_support.intersection(sp_support);
    let joint = omp_support.union(sp_support);
    let support = if common.len() >= sparsity {
        common.clone()
    } else {
        let intermediate = least_squares_on_support(a, b, &joint)?;
        // positions of the common atoms inside the joint set
        let local_common = SupportSet::new(
            joint
                .iter()
                .enumerate()
                .filter(|(_, j)| common.contains(*j))
                .map(|(p, _)| p),
        );
        let picked = top_k_magnitude(&intermediate.coefficients, sparsity - common.len(), &local_common)?;
        let idx = joint.as_slice();
        common.union(&picked.iter().map(|p| idx[p]).collect())
    };
    let fit = least_squares_on_support(a, b, &support)?;
    let report = FusionReport {
        omp_support: omp_support.clone(),
        sp_support: sp_support.clone(),
        common,
        joint,
    };
    Ok((SparseEstimate::from_fit(support, fit, a.cols()), report))
}

/// Runs both ingredient pursuits from `init`, concurrently when the
/// `parallel` feature is on.
fn run_ingredients(
    a: &DenseMatrix,
    b: &[f64],
    cfg: &PursuitConfig,
    init: &SupportSet,
) -> Result<(SparseEstimate, SparseEstimate)> {
    #[cfg(feature = "parallel")]
    let (o, s) = rayon::join(|| omp(a, b, cfg, init), || sp(a, b, cfg, init));
    #[cfg(not(feature = "parallel"))]
    let (o, s) = (omp(a, b, cfg, init), sp(a, b, cfg, init));
    Ok((o?.0, s?.0))
}

/// Fusion of OMP and SP.
pub fn fugp(a: &DenseMatrix, b: &[f64], cfg: &PursuitConfig) -> Result<(SparseEstimate, FusionReport)> {
    check_problem(a, b, cfg, &SupportSet::empty())?;
    check_fusion(a, cfg)?;
    let (o, s) = run_ingredients(a, b, cfg, &SupportSet::empty())?;
    fuse_supports(a, b, cfg.sparsity, &o.support, &s.support)
}

/// Iterated fusion: OMP and SP are rerun warm-started from the previous
/// common support, and the fused estimate is refined while the residual norm
/// keeps strictly decreasing.
///
/// The first pass is plain FuGP and is returned when nothing later improves
/// on it. A pass on which both ingredients agree completely ends the loop.
pub fn ifugp(a: &DenseMatrix, b: &[f64], cfg: &PursuitConfig) -> Result<(SparseEstimate, PursuitTrace)> {
    check_problem(a, b, cfg, &SupportSet::empty())?;
    check_fusion(a, cfg)?;
    let k = cfg.sparsity;
    let slack = LOOP_SLACK * norm2(b);
    let mut trace = PursuitTrace::default();

    let mut common = SupportSet::empty();
    let mut best: Option<SparseEstimate> = None;
    let mut iteration = 0;
    loop {
        if iteration == cfg.max_ifugp_iterations {
            trace.cap_reached = true;
            break;
        }
        iteration += 1;

        let (o, s) = run_ingredients(a, b, cfg, &common)?;
        let (est, report) = fuse_supports(a, b, k, &o.support, &s.support)?;

        if let Some(prev) = &best {
            if est.residual_norm >= prev.residual_norm - slack {
                trace.push(iteration, &est.support, est.residual_norm, false);
                break;
            }
        }
        trace.push(iteration, &est.support, est.residual_norm, true);
        best = Some(est);
        if report.common.len() >= k {
            break;
        }
        common = report.common;
    }

    let est = best.expect("at least one fusion pass runs");
    Ok((est, trace))
}
