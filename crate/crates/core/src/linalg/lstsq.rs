use super::matrix::{norm2, DenseMatrix};
use super::support::SupportSet;
use crate::error::{Error, Result};

/// Pivots smaller than this fraction of the leading pivot mark rank deficiency.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// Least-squares fit of `b` on the atoms of a support.
#[derive(Debug, Clone, PartialEq)]
pub struct LeastSquaresFit {
    /// Coefficients aligned with the support in ascending index order.
    pub coefficients: Vec<f64>,
    /// `b - A_T c`.
    pub residual: Vec<f64>,
}

impl LeastSquaresFit {
    pub fn residual_norm(&self) -> f64 {
        norm2(&self.residual)
    }
}

/// Applies the pseudoinverse of the column submatrix `A_T` to `b`.
///
/// Uses Householder QR with column pivoting on the gathered submatrix; the
/// residual is recomputed directly as `b - A_T c`.
pub fn least_squares_on_support(
    a: &DenseMatrix,
    b: &[f64],
    support: &SupportSet,
) -> Result<LeastSquaresFit> {
    let m = a.rows();
    if b.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "measurement of length {} against {m} rows",
            b.len()
        )));
    }
    support.check_bounds(a.cols())?;
    let k = support.len();
    if k == 0 {
        return Ok(LeastSquaresFit {
            coefficients: Vec::new(),
            residual: b.to_vec(),
        });
    }
    if k > m {
        return Err(Error::RankDeficient { rank: m, size: k });
    }

    let mut work = Vec::with_capacity(m * k);
    for j in support.iter() {
        work.extend_from_slice(a.column(j));
    }
    let z = pivoted_qr_solve(m, k, &mut work, b.to_vec())?;

    let coefficients = z;
    let fitted = a.mul_support(support.as_slice(), &coefficients);
    let residual = b.iter().zip(&fitted).map(|(bi, fi)| bi - fi).collect();
    Ok(LeastSquaresFit {
        coefficients,
        residual,
    })
}

/// Solves `min ||W z - y||` for an `m x k` column-major `W` (k <= m), in place.
fn pivoted_qr_solve(m: usize, k: usize, w: &mut [f64], mut y: Vec<f64>) -> Result<Vec<f64>> {
    let mut perm: Vec<usize> = (0..k).collect();
    let mut diag = vec![0.0; k];
    let mut lead = 0.0_f64;

    for j in 0..k {
        // pivot: largest remaining column norm below row j
        let mut best = j;
        let mut best_norm = -1.0;
        for c in j..k {
            let col = &w[c * m + j..(c + 1) * m];
            let nrm = col.iter().map(|v| v * v).sum::<f64>();
            if nrm > best_norm {
                best_norm = nrm;
                best = c;
            }
        }
        if best != j {
            for i in 0..m {
                w.swap(j * m + i, best * m + i);
            }
            perm.swap(j, best);
        }

        let col_norm = best_norm.sqrt();
        if j == 0 {
            lead = col_norm;
        }
        if col_norm == 0.0 || col_norm < RANK_TOLERANCE * lead {
            return Err(Error::RankDeficient { rank: j, size: k });
        }

        // Householder reflector for w[j.., j]
        let x0 = w[j * m + j];
        let alpha = if x0 >= 0.0 { -col_norm } else { col_norm };
        let mut v: Vec<f64> = w[j * m + j..(j + 1) * m].to_vec();
        v[0] -= alpha;
        let vtv: f64 = v.iter().map(|t| t * t).sum();
        diag[j] = alpha;

        if vtv > 0.0 {
            for c in j + 1..k {
                let col = &mut w[c * m + j..(c + 1) * m];
                let s = 2.0 * dot_slices(&v, col) / vtv;
                for (ci, vi) in col.iter_mut().zip(&v) {
                    *ci -= s * vi;
                }
            }
            let tail = &mut y[j..];
            let s = 2.0 * dot_slices(&v, tail) / vtv;
            for (yi, vi) in tail.iter_mut().zip(&v) {
                *yi -= s * vi;
            }
        }
    }

    // back substitution on R z = (Q^T y)[..k]
    let mut z = vec![0.0; k];
    for j in (0..k).rev() {
        let mut acc = y[j];
        for c in j + 1..k {
            acc -= w[c * m + j] * z[c];
        }
        z[j] = acc / diag[j];
    }

    let mut out = vec![0.0; k];
    for (pos, &orig) in perm.iter().enumerate() {
        out[orig] = z[pos];
    }
    Ok(out)
}

#[inline]
fn dot_slices(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
