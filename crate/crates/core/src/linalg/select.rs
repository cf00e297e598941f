use std::cmp::Ordering;

use super::matrix::{dot, DenseMatrix};
use super::support::SupportSet;
use crate::error::{Error, Result};

/// How candidate entries are ranked during selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SelectionRule {
    /// Rank by `|v_i|`.
    #[default]
    Magnitude,
    /// Rank by the signed value `v_i`.
    Signed,
}

impl SelectionRule {
    #[inline]
    fn score(self, v: f64) -> f64 {
        match self {
            SelectionRule::Magnitude => v.abs(),
            SelectionRule::Signed => v,
        }
    }
}

/// Correlation of every atom with `r`, i.e. `A^T r`.
pub fn matched_filter(a: &DenseMatrix, r: &[f64]) -> Result<Vec<f64>> {
    if r.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "residual of length {} against {} rows",
            r.len(),
            a.rows()
        )));
    }
    Ok(a.columns().map(|col| dot(col, r)).collect())
}

/// The `k` entries of `v` with largest magnitude, skipping `exclude`.
///
/// Ties go to the lower index.
pub fn top_k_magnitude(v: &[f64], k: usize, exclude: &SupportSet) -> Result<SupportSet> {
    top_k(v, k, exclude, SelectionRule::Magnitude)
}

/// The `k` highest-scoring entries of `v` under `rule`, skipping `exclude`.
pub fn top_k(v: &[f64], k: usize, exclude: &SupportSet, rule: SelectionRule) -> Result<SupportSet> {
    let mut eligible: Vec<usize> = (0..v.len()).filter(|&i| !exclude.contains(i)).collect();
    if eligible.len() < k {
        return Err(Error::InsufficientCandidates {
            requested: k,
            available: eligible.len(),
        });
    }
    if k == 0 {
        return Ok(SupportSet::empty());
    }
    let order = |&i: &usize, &j: &usize| -> Ordering {
        rule.score(v[j])
            .total_cmp(&rule.score(v[i]))
            .then(i.cmp(&j))
    };
    if k < eligible.len() {
        eligible.select_nth_unstable_by(k - 1, order);
        eligible.truncate(k);
    }
    Ok(SupportSet::new(eligible))
}

/// Index of the single best entry outside `exclude`.
pub fn argmax(v: &[f64], exclude: &SupportSet, rule: SelectionRule) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, &x) in v.iter().enumerate() {
        if exclude.contains(i) {
            continue;
        }
        let s = rule.score(x);
        // strict comparison keeps the lower index on ties
        if best.is_none_or(|(_, bs)| s > bs) {
            best = Some((i, s));
        }
    }
    best.map(|(i, _)| i)
}
