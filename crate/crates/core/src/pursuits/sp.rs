use super::{check_problem, PursuitConfig, PursuitTrace, LOOP_SLACK};
use crate::error::Result;
use crate::linalg::{
    least_squares_on_support, matched_filter, norm2, top_k_magnitude, DenseMatrix, LeastSquaresFit, SparseEstimate,
    SupportSet,
};

/// Subspace pursuit warm-started from `init`.
///
/// Each pass merges the K strongest matched-filter atoms into the current
/// support, refits on the union, prunes back to the K largest coefficients and
/// refits again. The loop ends once the residual norm stops decreasing and the
/// previous support is returned.
///
/// If the very first pass fails to improve on a short `init`, the output is
/// `init` topped up with the strongest atoms of the initial matched filter;
/// `trace.padded` records that case.
pub fn sp(
    a: &DenseMatrix,
    b: &[f64],
    cfg: &PursuitConfig,
    init: &SupportSet,
) -> Result<(SparseEstimate, PursuitTrace)> {
    check_problem(a, b, cfg, init)?;
    let k = cfg.sparsity;
    let slack = LOOP_SLACK * norm2(b);
    let mut trace = PursuitTrace::default();

    let mut prev_support = init.clone();
    let mut prev_fit = least_squares_on_support(a, b, &prev_support)?;
    let mut prev_norm = prev_fit.residual_norm();
    trace.push(0, &prev_support, prev_norm, true);

    let mut iteration = 0;
    loop {
        if iteration == cfg.max_sp_iterations {
            trace.cap_reached = true;
            break;
        }
        iteration += 1;

        let corr = matched_filter(a, &prev_fit.residual)?;
        let strongest = top_k_magnitude(&corr, k, &SupportSet::empty())?;
        let candidates = strongest.union(&prev_support);
        let candidate_fit = least_squares_on_support(a, b, &candidates)?;
        let support = prune(&candidates, &candidate_fit, k)?;
        let fit = least_squares_on_support(a, b, &support)?;
        let norm = fit.residual_norm();

        if norm >= prev_norm - slack {
            trace.push(iteration, &support, norm, false);
            break;
        }
        trace.push(iteration, &support, norm, true);
        prev_support = support;
        prev_fit = fit;
        prev_norm = norm;
    }

    if prev_support.len() < k {
        // only reachable when the first pass was rejected
        let r0 = least_squares_on_support(a, b, init)?;
        let corr = matched_filter(a, &r0.residual)?;
        let extra = top_k_magnitude(&corr, k - init.len(), init)?;
        prev_support = init.union(&extra);
        prev_fit = least_squares_on_support(a, b, &prev_support)?;
        trace.padded = true;
    }

    Ok((SparseEstimate::from_fit(prev_support, prev_fit, a.cols()), trace))
}

/// Keeps the `k` candidates carrying the largest coefficient magnitudes.
pub(crate) fn prune(candidates: &SupportSet, fit: &LeastSquaresFit, k: usize) -> Result<SupportSet> {
    let local = top_k_magnitude(&fit.coefficients, k, &SupportSet::empty())?;
    let idx = candidates.as_slice();
    Ok(local.iter().map(|p| idx[p]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn identity_terminates_on_second_pass() {
        let a = DenseMatrix::identity(6);
        let b = [1.0, 0.0, 2.0, 0.0, 3.0, 0.0];
        let (est, trace) = sp(&a, &b, &PursuitConfig::new(3), &SupportSet::empty()).unwrap();
        assert_eq!(est.support.as_slice(), &[0, 2, 4]);
        assert_eq!(est.residual_norm, 0.0);
        let last = trace.records.last().unwrap();
        assert_eq!(last.iteration, 2);
        assert!(!last.accepted);
        assert!(!trace.padded);
    }

    #[test]
    fn short_init_is_padded_when_first_pass_fails() {
        // b lies exactly on atom 0; warm start {0} leaves zero residual, so
        // the first pass cannot strictly improve
        let a = DenseMatrix::identity(4);
        let b = [2.0, 0.0, 0.0, 0.0];
        let (est, trace) = sp(&a, &b, &PursuitConfig::new(2), &SupportSet::from([0])).unwrap();
        assert!(trace.padded);
        assert_eq!(est.support.len(), 2);
        assert!(est.support.contains(0));
        assert_eq!(est.residual_norm, 0.0);
    }

    #[test]
    fn cap_returns_best_so_far() {
        let a = DenseMatrix::identity(6);
        let b = [1.0, 0.0, 2.0, 0.0, 3.0, 0.0];
        let mut cfg = PursuitConfig::new(3);
        cfg.max_sp_iterations = 1;
        let (est, trace) = sp(&a, &b, &cfg, &SupportSet::empty()).unwrap();
        assert!(trace.cap_reached);
        assert_eq!(est.support.as_slice(), &[0, 2, 4]);
    }

    #[test]
    fn rejects_full_initial_support() {
        let a = DenseMatrix::identity(4);
        assert!(matches!(
            sp(&a, &[1.0; 4], &PursuitConfig::new(1), &SupportSet::from([2])),
            Err(Error::InvalidInitialSupport { .. })
        ));
    }
}
