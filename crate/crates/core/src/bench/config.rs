use std::fmt::Write as _;
use std::path::PathBuf;

use crate::ensemble::{NoiseSpec, SignalDistribution, SignalSpec, MAX_ALPHA_INDEX, MAX_STREAM_INDEX};
use crate::error::{Error, Result};
use crate::pursuits::{Algorithm, PursuitConfig};

/// Tolerance when checking that `alpha * N` is a whole number.
const INTEGRALITY_TOL: f64 = 1e-9;

/// Parameters of a Monte Carlo sweep over measurement fractions.
///
/// Read from flat `key = value` text (`#` starts a comment). Keys:
/// `N`, `K`, `alphas` (comma list), `S` (matrices per alpha), `T` (signals per
/// matrix), `distribution` (`gaussian`|`rademacher`), `smnr_db` (number or
/// `clean`), `algorithms` (comma list of `omp,sp,fugp,ifugp`), `seed`,
/// `output`, `signed_omp`, `max_sp_iterations`, `max_ifugp_iterations`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub n: usize,
    pub k: usize,
    pub alphas: Vec<f64>,
    pub matrices: usize,
    pub signals_per_matrix: usize,
    pub distribution: SignalDistribution,
    pub noise: NoiseSpec,
    pub algorithms: Vec<Algorithm>,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub signed_omp: bool,
    pub max_sp_iterations: usize,
    pub max_ifugp_iterations: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n: 500,
            k: 20,
            alphas: vec![0.10, 0.11, 0.12, 0.13, 0.14],
            matrices: 10,
            signals_per_matrix: 100,
            distribution: SignalDistribution::Gaussian,
            noise: NoiseSpec::Clean,
            algorithms: Algorithm::ALL.to_vec(),
            seed: 1,
            output: None,
            signed_omp: false,
            max_sp_iterations: 100,
            max_ifugp_iterations: 50,
        }
    }
}

/// Splits `key = value` lines, skipping blanks and `#` comments.
pub fn parse_entries(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = parse_entry(line).map_err(|_| Error::ConfigInvalid(format!("line {}: expected key=value", no + 1)))?;
        out.push((k, v));
    }
    Ok(out)
}

/// One `key=value` pair, as passed to `--set`.
pub fn parse_entry(s: &str) -> Result<(String, String)> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| Error::ConfigInvalid(format!("expected key=value, got `{s}`")))?;
    Ok((k.trim().to_string(), v.trim().to_string()))
}

fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::ConfigInvalid(format!("`{key}` has invalid value `{v}`")))
}

fn list<T, F: Fn(&str) -> Result<T>>(v: &str, f: F) -> Result<Vec<T>> {
    v.split(',').map(str::trim).filter(|s| !s.is_empty()).map(f).collect()
}

impl ExperimentConfig {
    pub fn from_text(text: &str) -> Result<Self> {
        Self::from_entries(parse_entries(text)?)
    }

    /// Defaults overridden by `entries` in order, then validated.
    pub fn from_entries<I, K, V>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (K, V)>,
        K: AsRef<str>,
        V: AsRef<str>,
    {
        let mut cfg = Self::default();
        for (k, v) in entries {
            cfg.set(k.as_ref(), v.as_ref())?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Applies one key without validating the result.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "N" | "n" => self.n = num(key, value)?,
            "K" | "k" => self.k = num(key, value)?,
            "alphas" | "alpha" => self.alphas = list(value, |s| num("alphas", s))?,
            "S" | "s" | "matrices" => self.matrices = num(key, value)?,
            "T" | "t" | "signals_per_matrix" => self.signals_per_matrix = num(key, value)?,
            "distribution" | "signal" => {
                self.distribution = value.parse().map_err(|e: Error| Error::ConfigInvalid(e.to_string()))?
            }
            "smnr_db" | "noise" => {
                self.noise = if value.eq_ignore_ascii_case("clean") || value.is_empty() {
                    NoiseSpec::Clean
                } else {
                    let db: f64 = num(key, value)?;
                    if !db.is_finite() {
                        return Err(Error::ConfigInvalid(format!("`{key}` must be finite")));
                    }
                    NoiseSpec::Smnr(db)
                }
            }
            "algorithms" | "algos" => {
                self.algorithms = list(value, |s| s.parse().map_err(|e: Error| Error::ConfigInvalid(e.to_string())))?
            }
            "seed" => self.seed = num(key, value)?,
            "output" => self.output = (!value.is_empty()).then(|| PathBuf::from(value)),
            "signed_omp" => self.signed_omp = num(key, value)?,
            "max_sp_iterations" => self.max_sp_iterations = num(key, value)?,
            "max_ifugp_iterations" => self.max_ifugp_iterations = num(key, value)?,
            other => return Err(Error::ConfigInvalid(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    /// Number of measurements for a measurement fraction.
    pub fn measurements(&self, alpha: f64) -> usize {
        (alpha * self.n as f64).round() as usize
    }

    pub fn signal_spec(&self) -> Result<SignalSpec> {
        SignalSpec::new(self.n, self.k, self.distribution)
    }

    pub fn pursuit_config(&self) -> PursuitConfig {
        PursuitConfig {
            sparsity: self.k,
            max_sp_iterations: self.max_sp_iterations,
            max_ifugp_iterations: self.max_ifugp_iterations,
            correlation_uses_magnitude: !self.signed_omp,
        }
    }

    pub fn trials_per_alpha(&self) -> usize {
        self.matrices * self.signals_per_matrix
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::ConfigInvalid(m));
        if self.n == 0 || self.k == 0 || self.k >= self.n {
            return bad(format!("need 0 < K < N, got K={}, N={}", self.k, self.n));
        }
        if self.alphas.is_empty() {
            return bad("no alphas given".into());
        }
        if self.alphas.len() > MAX_ALPHA_INDEX + 1 {
            return bad(format!("at most {} alphas per sweep", MAX_ALPHA_INDEX + 1));
        }
        if self.matrices == 0 || self.signals_per_matrix == 0 {
            return bad("S and T must be at least 1".into());
        }
        if self.matrices > MAX_STREAM_INDEX + 1 || self.signals_per_matrix > MAX_STREAM_INDEX + 1 {
            return bad(format!("S and T must not exceed {}", MAX_STREAM_INDEX + 1));
        }
        if self.algorithms.is_empty() {
            return bad("no algorithms given".into());
        }
        let mut seen = self.algorithms.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.algorithms.len() {
            return bad("algorithm listed twice".into());
        }
        if self.max_sp_iterations == 0 || self.max_ifugp_iterations == 0 {
            return bad("iteration caps must be at least 1".into());
        }
        let fusion = self
            .algorithms
            .iter()
            .any(|a| matches!(a, Algorithm::Fugp | Algorithm::Ifugp));
        for &alpha in &self.alphas {
            if !(alpha > 0.0 && alpha <= 1.0) {
                return bad(format!("alpha {alpha} is outside (0, 1]"));
            }
            let exact = alpha * self.n as f64;
            if (exact - exact.round()).abs() > INTEGRALITY_TOL * self.n as f64 {
                return bad(format!(
                    "alpha {alpha} gives M = {exact} measurements for N = {}, which is not an integer",
                    self.n
                ));
            }
            let m = self.measurements(alpha);
            if self.k >= m {
                return bad(format!("alpha {alpha} gives M = {m}, need K = {} < M", self.k));
            }
            if fusion && 2 * self.k > m {
                return bad(format!(
                    "alpha {alpha} gives M = {m}; fusion algorithms need M >= 2K = {}",
                    2 * self.k
                ));
            }
        }
        Ok(())
    }

    /// Config echo in the same `key = value` format it is read from.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let join = |v: Vec<String>| v.join(",");
        let _ = writeln!(s, "N = {}", self.n);
        let _ = writeln!(s, "K = {}", self.k);
        let _ = writeln!(s, "alphas = {}", join(self.alphas.iter().map(f64::to_string).collect()));
        let _ = writeln!(s, "S = {}", self.matrices);
        let _ = writeln!(s, "T = {}", self.signals_per_matrix);
        let _ = writeln!(s, "distribution = {}", self.distribution);
        let _ = writeln!(s, "smnr_db = {}", self.noise);
        let _ = writeln!(s, "algorithms = {}", join(self.algorithms.iter().map(|a| a.name().to_string()).collect()));
        let _ = writeln!(s, "seed = {}", self.seed);
        if let Some(p) = &self.output {
            let _ = writeln!(s, "output = {}", p.display());
        }
        let _ = writeln!(s, "signed_omp = {}", self.signed_omp);
        let _ = writeln!(s, "max_sp_iterations = {}", self.max_sp_iterations);
        let _ = writeln!(s, "max_ifugp_iterations = {}", self.max_ifugp_iterations);
        s
    }
}
