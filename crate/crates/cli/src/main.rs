//! `gpfusion` command-line front end.

mod selftest;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gpfusion_core::bench::{self, ExperimentConfig};
use gpfusion_core::pursuits::{fugp, ifugp, omp, sp, Algorithm, PursuitConfig};
use gpfusion_core::{io as fileio, Error, SparseEstimate, SupportSet};

const EXIT_FAILED_CHECK: u8 = 1;
const EXIT_BAD_INPUT: u8 = 2;
const EXIT_IO: u8 = 3;
const EXIT_ALGORITHM: u8 = 4;

const SEED_ENV: &str = "GPFUSION_SEED";

#[derive(Parser)]
#[command(name = "gpfusion", version, about = "Greedy pursuits and their fusion for sparse recovery")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a Monte Carlo sweep described by a key=value config file.
    Bench {
        #[arg(long)]
        config: PathBuf,
        /// Override one config key, e.g. `--set alphas=0.18,0.2`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        #[arg(long, default_value_t = default_workers())]
        workers: usize,
        /// Seed; takes precedence over the config file and GPFUSION_SEED.
        #[arg(long)]
        seed: Option<u64>,
        /// Write the CSV to standard output instead of the configured path.
        #[arg(long)]
        stdout: bool,
    },
    /// Recover a sparse vector from a matrix file and a measurement file.
    Recover {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        measurement: PathBuf,
        #[arg(long)]
        sparsity: usize,
        #[arg(long, value_parser = parse_algorithm)]
        algo: Algorithm,
        /// Write the full-length estimate as a vector file.
        #[arg(long)]
        out: Option<PathBuf>,
        /// OMP selects by signed correlation instead of magnitude.
        #[arg(long)]
        signed_omp: bool,
        /// Print support indices starting from 1.
        #[arg(long)]
        one_based: bool,
    },
    /// Run the built-in invariant checks and a small sweep.
    Selftest,
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Bench {
            config,
            overrides,
            workers,
            seed,
            stdout,
        } => cmd_bench(&config, &overrides, workers, seed, stdout),
        Command::Recover {
            matrix,
            measurement,
            sparsity,
            algo,
            out,
            signed_omp,
            one_based,
        } => cmd_recover(&matrix, &measurement, sparsity, algo, out.as_deref(), signed_omp, one_based),
        Command::Selftest => {
            if selftest::run() {
                Ok(())
            } else {
                Err(Failure::new(EXIT_FAILED_CHECK, "self test failed"))
            }
        }
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn cmd_bench(
    config_path: &std::path::Path,
    overrides: &[String],
    workers: usize,
    seed: Option<u64>,
    to_stdout: bool,
) -> Result<(), Failure> {
    let bad = |e: Error| Failure::new(EXIT_BAD_INPUT, e.to_string());
    let text = fs::read_to_string(config_path)
        .map_err(|e| Failure::new(EXIT_BAD_INPUT, format!("cannot read {}: {e}", config_path.display())))?;
    let mut entries = bench::parse_entries(&text).map_err(bad)?;
    for o in overrides {
        entries.push(bench::parse_entry(o).map_err(bad)?);
    }
    let has_seed = entries.iter().any(|(k, _)| k == "seed");
    if let Some(s) = seed {
        entries.push(("seed".into(), s.to_string()));
    } else if !has_seed {
        if let Ok(s) = std::env::var(SEED_ENV) {
            entries.push(("seed".into(), s));
        }
    }
    let config = ExperimentConfig::from_entries(entries).map_err(bad)?;
    if workers == 0 {
        return Err(Failure::new(EXIT_BAD_INPUT, "--workers must be at least 1"));
    }
    if !to_stdout && config.output.is_none() {
        return Err(Failure::new(
            EXIT_BAD_INPUT,
            "no output path: set `output` in the config or pass --stdout",
        ));
    }

    eprintln!(
        "sweep: N={} K={} {} alphas, {} trials each, {} workers, seed {}",
        config.n,
        config.k,
        config.alphas.len(),
        config.trials_per_alpha(),
        workers,
        config.seed
    );
    let sweep = bench::run_sweep_with_progress(&config, workers, |p| {
        eprintln!(
            "  [{}/{}] alpha={} done ({:.1}s)",
            p.alpha_index + 1,
            p.alphas,
            p.alpha,
            p.elapsed_s
        );
    })
    .map_err(|e| match e {
        Error::ConfigInvalid(_) => bad(e),
        other => Failure::new(EXIT_ALGORITHM, other.to_string()),
    })?;

    let io_err = |e: Error| Failure::new(EXIT_IO, e.to_string());
    if to_stdout {
        sweep.result.write_csv(io::stdout().lock()).map_err(io_err)?;
    } else if let Some(path) = &config.output {
        let file = fs::File::create(path)
            .map_err(|e| Failure::new(EXIT_IO, format!("cannot create {}: {e}", path.display())))?;
        sweep.result.write_csv(io::BufWriter::new(file)).map_err(io_err)?;
        eprintln!("wrote {}", path.display());
    }
    if let Some(path) = &config.output {
        let manifest = bench::manifest_path(path);
        fs::write(&manifest, bench::manifest_text(&config, workers))
            .map_err(|e| Failure::new(EXIT_IO, format!("cannot write {}: {e}", manifest.display())))?;
    }
    Ok(())
}

fn cmd_recover(
    matrix: &std::path::Path,
    measurement: &std::path::Path,
    sparsity: usize,
    algo: Algorithm,
    out: Option<&std::path::Path>,
    signed_omp: bool,
    one_based: bool,
) -> Result<(), Failure> {
    let bad = |what: &std::path::Path, e: Error| Failure::new(EXIT_BAD_INPUT, format!("{}: {e}", what.display()));
    let a = fileio::read_matrix(matrix).map_err(|e| bad(matrix, e))?;
    let b = fileio::read_vector(measurement).map_err(|e| bad(measurement, e))?;
    if b.len() != a.rows() {
        return Err(Failure::new(
            EXIT_BAD_INPUT,
            format!("measurement has {} entries but the matrix has {} rows", b.len(), a.rows()),
        ));
    }
    if sparsity == 0 || sparsity >= a.rows() {
        return Err(Failure::new(
            EXIT_BAD_INPUT,
            format!("sparsity must satisfy 0 < K < M = {}, got {sparsity}", a.rows()),
        ));
    }

    let cfg = PursuitConfig::new(sparsity).with_signed_omp(signed_omp);
    let empty = SupportSet::empty();
    let result: Result<SparseEstimate, Error> = match algo {
        Algorithm::Omp => omp(&a, &b, &cfg, &empty).map(|r| r.0),
        Algorithm::Sp => sp(&a, &b, &cfg, &empty).map(|r| r.0),
        Algorithm::Fugp => fugp(&a, &b, &cfg).map(|r| r.0),
        Algorithm::Ifugp => ifugp(&a, &b, &cfg).map(|r| r.0),
    };
    let est = result.map_err(|e| match e {
        Error::InsufficientMeasurements { .. } | Error::DimensionMismatch(_) | Error::InvalidSparsity { .. } => {
            Failure::new(EXIT_BAD_INPUT, e.to_string())
        }
        other => Failure::new(EXIT_ALGORITHM, other.to_string()),
    })?;

    let base = usize::from(one_based);
    let coefs: Vec<String> = est.coefficients.iter().map(f64::to_string).collect();
    let mut stdout = io::stdout().lock();
    let w = |e: io::Error| Failure::new(EXIT_IO, e.to_string());
    writeln!(stdout, "support: {}", est.support.display_with_base(base)).map_err(w)?;
    writeln!(stdout, "coefficients: {}", coefs.join(" ")).map_err(w)?;
    writeln!(stdout, "residual_norm: {}", est.residual_norm).map_err(w)?;
    if let Some(path) = out {
        fileio::write_vector(path, &est.densify()).map_err(|e| Failure::new(EXIT_IO, e.to_string()))?;
    }
    Ok(())
}
