//! Seeded generation of sensing matrices, sparse signals and measurement
//! noise for Monte Carlo trials.
//!
//! Every random object is drawn from its own ChaCha8 stream. The key comes
//! from the master seed and the 64-bit stream id packs
//! `(kind, alpha index, matrix index, trial index)`, so a trial's draws do not
//! depend on which worker runs it or on what else is in the sweep.

use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, SupportSet};

pub type TrialRng = ChaCha8Rng;

/// Largest matrix or trial index a stream id can encode.
pub const MAX_STREAM_INDEX: usize = (1 << 24) - 1;
/// Largest alpha index a stream id can encode.
pub const MAX_ALPHA_INDEX: usize = (1 << 15) - 1;

/// Master seed plus the stream derivation scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngSeed {
    pub master: u64,
}

impl RngSeed {
    pub fn new(master: u64) -> Self {
        Self { master }
    }

    fn stream(&self, id: u64) -> TrialRng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master);
        rng.set_stream(id);
        rng
    }

    /// Stream for the `s`-th sensing matrix at alpha index `alpha`.
    pub fn matrix_rng(&self, alpha: usize, s: usize) -> TrialRng {
        self.stream(pack(1, alpha, s, 0))
    }

    /// Stream for signal and noise of trial `t` on matrix `s`.
    pub fn trial_rng(&self, alpha: usize, s: usize, t: usize) -> TrialRng {
        self.stream(pack(0, alpha, s, t))
    }
}

fn pack(kind: u64, alpha: usize, s: usize, t: usize) -> u64 {
    debug_assert!(alpha <= MAX_ALPHA_INDEX && s <= MAX_STREAM_INDEX && t <= MAX_STREAM_INDEX);
    (kind << 63) | ((alpha as u64) << 48) | ((s as u64) << 24) | t as u64
}

/// Distribution of the nonzero signal entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignalDistribution {
    /// i.i.d. standard normal.
    Gaussian,
    /// +1 or -1 with equal probability.
    Rademacher,
}

impl SignalDistribution {
    /// Per-entry power of a nonzero.
    pub fn power(self) -> f64 {
        1.0
    }

    pub fn name(self) -> &'static str {
        match self {
            SignalDistribution::Gaussian => "gaussian",
            SignalDistribution::Rademacher => "rademacher",
        }
    }
}

impl fmt::Display for SignalDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SignalDistribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gaussian" | "gauss" => Ok(SignalDistribution::Gaussian),
            "rademacher" | "bernoulli" => Ok(SignalDistribution::Rademacher),
            other => Err(Error::Parse(format!("unknown signal distribution `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignalSpec {
    pub n: usize,
    pub k: usize,
    pub distribution: SignalDistribution,
}

impl SignalSpec {
    pub fn new(n: usize, k: usize, distribution: SignalDistribution) -> Result<Self> {
        if k == 0 || k >= n {
            return Err(Error::ConfigInvalid(format!("need 0 < K < N, got K={k}, N={n}")));
        }
        Ok(Self { n, k, distribution })
    }
}

/// Measurement noise setting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseSpec {
    Clean,
    /// White Gaussian noise scaled to a signal-to-measurement-noise ratio in dB.
    Smnr(f64),
}

impl NoiseSpec {
    /// Per-element noise standard deviation for a K-sparse signal observed
    /// through M measurements: `sqrt(K sigma_s^2 / (M 10^(smnr/10)))`.
    pub fn sigma(&self, k: usize, m: usize, signal_power: f64) -> f64 {
        match *self {
            NoiseSpec::Clean => 0.0,
            NoiseSpec::Smnr(db) => (k as f64 * signal_power / (m as f64 * 10f64.powf(db / 10.0))).sqrt(),
        }
    }
}

impl fmt::Display for NoiseSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NoiseSpec::Clean => f.write_str("clean"),
            NoiseSpec::Smnr(db) => write!(f, "{db}"),
        }
    }
}

/// Entries i.i.d. `N(0, std^2)`, column-major, without normalization.
pub fn gen_gaussian_matrix<R: Rng + ?Sized>(m: usize, n: usize, std: f64, rng: &mut R) -> Result<DenseMatrix> {
    let data = (0..m * n)
        .map(|_| { let z: f64 = StandardNormal.sample(rng); std * z })
        .collect::<Vec<f64>>();
    DenseMatrix::from_col_major(m, n, data)
}

/// Sensing matrix with `N(0, 1/M)` entries, each column scaled to unit norm.
pub fn gen_sensing_matrix<R: Rng + ?Sized>(m: usize, n: usize, rng: &mut R) -> Result<DenseMatrix> {
    if m == 0 || m > n {
        return Err(Error::DimensionMismatch(format!("sensing matrix needs 1 <= M <= N, got {m}x{n}")));
    }
    let mut a = gen_gaussian_matrix(m, n, 1.0 / (m as f64).sqrt(), rng)?;
    a.normalize_columns();
    Ok(a)
}

/// K-sparse signal on a uniformly drawn support.
pub fn gen_sparse_signal<R: Rng + ?Sized>(spec: &SignalSpec, rng: &mut R) -> (Vec<f64>, SupportSet) {
    let support = SupportSet::new(index::sample(rng, spec.n, spec.k));
    let mut x = vec![0.0; spec.n];
    for i in support.iter() {
        x[i] = match spec.distribution {
            SignalDistribution::Gaussian => StandardNormal.sample(rng),
            SignalDistribution::Rademacher => {
                if rng.gen_bool(0.5) {
                    1.0
                } else {
                    -1.0
                }
            }
        };
    }
    (x, support)
}

/// `b = A x + w`; returns `(b, w)`.
pub fn measure<R: Rng + ?Sized>(
    a: &DenseMatrix,
    x: &[f64],
    signal: &SignalSpec,
    noise: &NoiseSpec,
    rng: &mut R,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut b = a.mul_vec(x)?;
    let sigma = noise.sigma(signal.k, a.rows(), signal.distribution.power());
    let w: Vec<f64> = if sigma > 0.0 {
        let normal = Normal::new(0.0, sigma).map_err(|e| Error::ConfigInvalid(e.to_string()))?;
        (0..a.rows()).map(|_| normal.sample(rng)).collect()
    } else {
        vec![0.0; a.rows()]
    };
    for (bi, wi) in b.iter_mut().zip(&w) {
        *bi += wi;
    }
    Ok((b, w))
}
