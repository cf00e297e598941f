use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use super::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::pursuits::Algorithm;

pub const CSV_HEADER: [&str; 11] = [
    "alpha",
    "M",
    "algorithm",
    "trials",
    "failed",
    "srer_db",
    "avg_true_atoms",
    "avg_common",
    "avg_joint",
    "avg_joint_true",
    "wall_s",
];

/// One `(alpha, algorithm)` row of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub alpha: f64,
    pub m: usize,
    pub algorithm: Algorithm,
    /// Attempted trials, `S * T`.
    pub trials: u64,
    /// Trials excluded from the statistics after a rank-deficient fit.
    pub failed: u64,
    /// `None` when no trial completed.
    pub srer_db: Option<f64>,
    pub avg_true_atoms: Option<f64>,
    /// Joint-support statistics; `None` when OMP and SP were not both run.
    pub avg_common: Option<f64>,
    pub avg_joint: Option<f64>,
    pub avg_joint_true: Option<f64>,
    /// Summed per-trial run time of the algorithm.
    pub wall_s: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepResult {
    pub cells: Vec<SweepCell>,
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn parse_opt(s: &str, col: &str) -> Result<Option<f64>> {
    if s.is_empty() {
        return Ok(None);
    }
    parse_num(s, col).map(Some)
}

fn parse_num<T: std::str::FromStr>(s: &str, col: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::Parse(format!("column `{col}`: bad value `{s}`")))
}

impl SweepResult {
    pub fn cell(&self, alpha: f64, algorithm: Algorithm) -> Option<&SweepCell> {
        self.cells
            .iter()
            .find(|c| c.algorithm == algorithm && (c.alpha - alpha).abs() < 1e-12)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        let io = |e: csv::Error| Error::Io(e.to_string());
        wr.write_record(CSV_HEADER).map_err(io)?;
        for c in &self.cells {
            wr.write_record([
                c.alpha.to_string(),
                c.m.to_string(),
                c.algorithm.name().to_string(),
                c.trials.to_string(),
                c.failed.to_string(),
                opt(c.srer_db),
                opt(c.avg_true_atoms),
                opt(c.avg_common),
                opt(c.avg_joint),
                opt(c.avg_joint_true),
                c.wall_s.to_string(),
            ])
            .map_err(io)?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(r);
        let header = rd.headers().map_err(|e| Error::Parse(e.to_string()))?.clone();
        if header.iter().ne(CSV_HEADER.iter().copied()) {
            return Err(Error::Parse(format!("unexpected header `{}`", header.iter().collect::<Vec<_>>().join(","))));
        }
        let mut cells = Vec::new();
        for rec in rd.records() {
            let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
            let f = |i: usize| rec.get(i).unwrap_or("");
            cells.push(SweepCell {
                alpha: parse_num(f(0), "alpha")?,
                m: parse_num(f(1), "M")?,
                algorithm: f(2).parse()?,
                trials: parse_num(f(3), "trials")?,
                failed: parse_num(f(4), "failed")?,
                srer_db: parse_opt(f(5), "srer_db")?,
                avg_true_atoms: parse_opt(f(6), "avg_true_atoms")?,
                avg_common: parse_opt(f(7), "avg_common")?,
                avg_joint: parse_opt(f(8), "avg_joint")?,
                avg_joint_true: parse_opt(f(9), "avg_joint_true")?,
                wall_s: parse_num(f(10), "wall_s")?,
            });
        }
        Ok(SweepResult { cells })
    }
}

/// Identifies the library build that produced a result.
pub fn build_identifier() -> String {
    let mode = if cfg!(feature = "parallel") { "parallel" } else { "sequential" };
    let profile = if cfg!(debug_assertions) { "debug" } else { "release" };
    format!("gpfusion-core {} ({mode}, {profile})", env!("CARGO_PKG_VERSION"))
}

/// Path of the manifest written beside a results CSV.
pub fn manifest_path(csv_path: &Path) -> PathBuf {
    let mut name = csv_path.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".manifest");
    csv_path.with_file_name(name)
}

/// Run manifest: the config echo followed by the seed, worker count and build.
pub fn manifest_text(config: &ExperimentConfig, workers: usize) -> String {
    format!(
        "# gpfusion run manifest\n{}# seed above is the one actually used\nworkers = {workers}\nbuild = {}\n",
        config.to_text(),
        build_identifier()
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SweepResult {
        SweepResult {
            cells: vec![
                SweepCell {
                    alpha: 0.18,
                    m: 90,
                    algorithm: Algorithm::Fugp,
                    trials: 100,
                    failed: 1,
                    srer_db: Some(f64::INFINITY),
                    avg_true_atoms: Some(19.87),
                    avg_common: Some(17.0),
                    avg_joint: Some(23.0),
                    avg_joint_true: Some(19.9),
                    wall_s: 0.125,
                },
                SweepCell {
                    alpha: 0.1,
                    m: 50,
                    algorithm: Algorithm::Omp,
                    trials: 10,
                    failed: 10,
                    srer_db: None,
                    avg_true_atoms: None,
                    avg_common: None,
                    avg_joint: None,
                    avg_joint_true: None,
                    wall_s: 0.0,
                },
            ],
        }
    }

    #[test]
    fn csv_round_trip_and_inf() {
        let s = sample();
        let text = s.to_csv_string();
        assert!(text.starts_with("alpha,M,algorithm,trials,failed,srer_db,"));
        assert!(text.contains(",inf,"));
        assert_eq!(SweepResult::read_csv(text.as_bytes()).unwrap(), s);
        assert!(s.cell(0.18, Algorithm::Fugp).is_some());
    }

    #[test]
    fn rejects_wrong_header() {
        assert!(SweepResult::read_csv("a,b\n1,2\n".as_bytes()).is_err());
    }

    #[test]
    fn manifest_beside_csv() {
        assert_eq!(manifest_path(Path::new("out/run.csv")), PathBuf::from("out/run.csv.manifest"));
        let text = manifest_text(&ExperimentConfig::default(), 4);
        assert!(text.contains("seed = 1"));
        assert!(text.contains("build = gpfusion-core"));
    }
}
