use super::{check_problem, PursuitConfig, PursuitTrace};
use crate::error::{Error, Result};
use crate::linalg::{argmax, least_squares_on_support, matched_filter, DenseMatrix, SparseEstimate, SupportSet};

/// Orthogonal matching pursuit warm-started from `init`.
///
/// The residual starts as the projection of `b` off `span(A_init)`; each step
/// adds the unselected atom most correlated with the residual and refits, until
/// the support holds K atoms. An empty `init` is textbook OMP.
pub fn omp(
    a: &DenseMatrix,
    b: &[f64],
    cfg: &PursuitConfig,
    init: &SupportSet,
) -> Result<(SparseEstimate, PursuitTrace)> {
    check_problem(a, b, cfg, init)?;
    let rule = cfg.omp_rule();
    let mut trace = PursuitTrace::default();

    let mut support = init.clone();
    let mut fit = least_squares_on_support(a, b, &support)?;
    trace.push(support.len(), &support, fit.residual_norm(), true);

    while support.len() < cfg.sparsity {
        let corr = matched_filter(a, &fit.residual)?;
        let next = argmax(&corr, &support, rule).ok_or(Error::InsufficientCandidates {
            requested: 1,
            available: 0,
        })?;
        support.insert(next);
        fit = least_squares_on_support(a, b, &support)?;
        trace.push(support.len(), &support, fit.residual_norm(), true);
    }

    Ok((SparseEstimate::from_fit(support, fit, a.cols()), trace))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_one_atom() {
        let a = DenseMatrix::identity(5);
        let (est, trace) = omp(&a, &[0.0, 0.0, 7.0, 0.0, 0.0], &PursuitConfig::new(1), &SupportSet::empty()).unwrap();
        assert_eq!(est.support.as_slice(), &[2]);
        assert_eq!(est.coefficients, vec![7.0]);
        assert_eq!(est.residual_norm, 0.0);
        assert_eq!(trace.records.len(), 2);
    }

    #[test]
    fn warm_start_is_retained() {
        let a = DenseMatrix::identity(5);
        let (est, trace) = omp(&a, &[4.0, 0.0, 7.0, 0.0, 0.0], &PursuitConfig::new(2), &SupportSet::from([0])).unwrap();
        assert_eq!(est.support.as_slice(), &[0, 2]);
        assert_eq!(est.coefficients, vec![4.0, 7.0]);
        // initial refit plus exactly one greedy step
        assert_eq!(trace.records.len(), 2);
        assert_eq!(trace.records[0].iteration, 1);
    }

    #[test]
    fn oversized_initial_support_is_rejected() {
        let a = DenseMatrix::identity(5);
        let err = omp(&a, &[1.0; 5], &PursuitConfig::new(2), &SupportSet::from([0, 1])).unwrap_err();
        assert_eq!(err, Error::InvalidInitialSupport { given: 2, sparsity: 2 });
        assert!(matches!(
            omp(&a, &[1.0; 5], &PursuitConfig::new(6), &SupportSet::empty()),
            Err(Error::InvalidSparsity { .. })
        ));
    }

    #[test]
    fn signed_rule_misses_negative_coefficient() {
        let a = DenseMatrix::identity(4);
        let b = [0.5, -3.0, 0.0, 0.0];
        let cfg = PursuitConfig::new(1);
        let (mag, _) = omp(&a, &b, &cfg, &SupportSet::empty()).unwrap();
        let (signed, _) = omp(&a, &b, &cfg.with_signed_omp(true), &SupportSet::empty()).unwrap();
        assert_eq!(mag.support.as_slice(), &[1]);
        assert_eq!(signed.support.as_slice(), &[0]);
    }
}
