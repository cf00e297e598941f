//! Dense kernels shared by every pursuit: least squares on a column
//! subset, the matched filter and magnitude-ranked index selection.

mod lstsq;
mod matrix;
mod select;
mod support;

pub use lstsq::{least_squares_on_support, LeastSquaresFit, RANK_TOLERANCE};
pub use matrix::{dot, norm2, squared_distance, DenseMatrix};
pub use select::{argmax, matched_filter, top_k, top_k_magnitude, SelectionRule};
pub use support::SupportSet;

/// Output of any recovery algorithm: a support, the least-squares
/// coefficients on it and the norm of the remaining residual.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseEstimate {
    pub support: SupportSet,
    /// Aligned with `support` in ascending index order.
    pub coefficients: Vec<f64>,
    pub residual_norm: f64,
    pub ambient_dim: usize,
}

impl SparseEstimate {
    pub(crate) fn from_fit(support: SupportSet, fit: LeastSquaresFit, ambient_dim: usize) -> Self {
        let residual_norm = fit.residual_norm();
        Self {
            support,
            coefficients: fit.coefficients,
            residual_norm,
            ambient_dim,
        }
    }

    /// Length-N vector with the coefficients placed at their indices.
    pub fn densify(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.ambient_dim];
        for (i, c) in self.support.iter().zip(&self.coefficients) {
            x[i] = *c;
        }
        x
    }
}
