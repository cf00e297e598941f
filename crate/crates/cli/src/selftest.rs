//! Fast invariant checks run by `gpfusion selftest`.

use gpfusion_core::bench::{run_sweep, ExperimentConfig};
use gpfusion_core::ensemble::{gen_sensing_matrix, gen_sparse_signal, measure, NoiseSpec, RngSeed, SignalDistribution, SignalSpec};
use gpfusion_core::linalg::{dot, least_squares_on_support, norm2};
use gpfusion_core::pursuits::{omp, Algorithm, PursuitConfig};
use gpfusion_core::{DenseMatrix, SupportSet};

type Check = (&'static str, fn() -> Result<String, String>);

const CHECKS: [Check; 6] = [
    ("least-squares orthogonality", ls_orthogonality),
    ("support cardinality", cardinality),
    ("tie rule", tie_rule),
    ("determinism", determinism),
    ("worker invariance", worker_invariance),
    ("union bound mini-sweep", union_mini_sweep),
];

/// Runs every check, prints a table to stderr and reports overall success.
pub fn run() -> bool {
    let mut ok = true;
    for (name, check) in CHECKS {
        let (status, detail) = match check() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                ok = false;
                ("FAIL", d)
            }
        };
        eprintln!("{status}  {name:<30} {detail}");
    }
    eprintln!("{}", if ok { "all checks passed" } else { "some checks failed" });
    ok
}

fn instance(seed: u64, m: usize, n: usize, k: usize, i: usize) -> (DenseMatrix, Vec<f64>) {
    let seed = RngSeed::new(seed);
    let a = gen_sensing_matrix(m, n, &mut seed.matrix_rng(0, i)).expect("valid dims");
    let spec = SignalSpec::new(n, k, SignalDistribution::Gaussian).expect("valid spec");
    let mut rng = seed.trial_rng(0, i, 0);
    let (x, _) = gen_sparse_signal(&spec, &mut rng);
    let (b, _) = measure(&a, &x, &spec, &NoiseSpec::Smnr(20.0), &mut rng).expect("dims agree");
    (a, b)
}

fn ls_orthogonality() -> Result<String, String> {
    let mut worst = 0.0f64;
    for i in 0..50 {
        let (a, b) = instance(11, 40, 120, 8, i);
        let support = SupportSet::new((0..15).map(|j| (j * 7 + i) % 120));
        let fit = least_squares_on_support(&a, &b, &support).map_err(|e| e.to_string())?;
        for j in support.iter() {
            worst = worst.max(dot(a.column(j), &fit.residual).abs() / norm2(&b));
        }
    }
    if worst <= 1e-8 {
        Ok(format!("max |a_j^T r| / |b| = {worst:.2e}"))
    } else {
        Err(format!("max |a_j^T r| / |b| = {worst:.2e} > 1e-8"))
    }
}

fn cardinality() -> Result<String, String> {
    let cfg = PursuitConfig::new(6);
    for i in 0..40 {
        let (a, b) = instance(12, 30, 90, 6, i);
        for alg in Algorithm::ALL {
            let est = alg.run(&a, &b, &cfg).map_err(|e| format!("{alg}: {e}"))?;
            if est.support.len() != 6 {
                return Err(format!("{alg} returned {} atoms on instance {i}", est.support.len()));
            }
        }
    }
    Ok("40 instances x 4 algorithms".into())
}

fn tie_rule() -> Result<String, String> {
    let a = DenseMatrix::identity(4);
    let (est, _) = omp(&a, &[0.0, 3.0, -3.0, 0.0], &PursuitConfig::new(1), &SupportSet::empty())
        .map_err(|e| e.to_string())?;
    if est.support.as_slice() == [1] {
        Ok("equal magnitudes resolve to the lower index".into())
    } else {
        Err(format!("expected {{1}}, got {}", est.support))
    }
}

fn determinism() -> Result<String, String> {
    let cfg = PursuitConfig::new(5);
    for i in 0..20 {
        let (a, b) = instance(13, 30, 100, 5, i);
        for alg in Algorithm::ALL {
            let first = alg.run(&a, &b, &cfg).map_err(|e| e.to_string())?;
            let second = alg.run(&a, &b, &cfg).map_err(|e| e.to_string())?;
            if first != second {
                return Err(format!("{alg} differs between runs on instance {i}"));
            }
        }
    }
    Ok("repeat runs are bit-identical".into())
}

fn strip_wall(csv: &str) -> String {
    csv.lines()
        .map(|l| l.rsplit_once(',').map_or(l, |(head, _)| head))
        .collect::<Vec<_>>()
        .join("\n")
}

fn mini_config() -> ExperimentConfig {
    ExperimentConfig::from_entries([
        ("N", "100"),
        ("K", "5"),
        ("alphas", "0.15,0.2"),
        ("S", "10"),
        ("T", "20"),
        ("seed", "2024"),
    ])
    .expect("valid mini config")
}

fn worker_invariance() -> Result<String, String> {
    let cfg = mini_config();
    let one = run_sweep(&cfg, 1).map_err(|e| e.to_string())?;
    let many = run_sweep(&cfg, 3).map_err(|e| e.to_string())?;
    if strip_wall(&one.result.to_csv_string()) == strip_wall(&many.result.to_csv_string()) {
        Ok("1 vs 3 workers: identical CSV bodies".into())
    } else {
        Err("CSV bodies differ between 1 and 3 workers".into())
    }
}

fn union_mini_sweep() -> Result<String, String> {
    let cfg = mini_config();
    let sweep = run_sweep(&cfg, 1).map_err(|e| e.to_string())?;
    let mut notes = Vec::new();
    for aa in &sweep.aggregates {
        let omp = aa.aggregate.mean_true_atoms(Algorithm::Omp).map_err(|e| e.to_string())?;
        let sp = aa.aggregate.mean_true_atoms(Algorithm::Sp).map_err(|e| e.to_string())?;
        let (_, _, union) = aa.aggregate.mean_fusion().ok_or("no fusion statistics")?;
        if union < omp.max(sp) {
            return Err(format!("alpha {}: union {union} < max(omp {omp}, sp {sp})", aa.alpha));
        }
        notes.push(format!("a={}: {omp:.2}/{sp:.2}/{union:.2}", aa.alpha));
    }
    Ok(format!("omp/sp/union true atoms {}", notes.join(", ")))
}
