//! Recover one seeded instance with every algorithm and print the results.
//!
//! `cargo run --release --example compare -- [alpha] [seed]`

use gpfusion_core::ensemble::{gen_sensing_matrix, gen_sparse_signal, measure, NoiseSpec, RngSeed, SignalDistribution, SignalSpec};
use gpfusion_core::linalg::squared_distance;
use gpfusion_core::metrics::true_atom_count;
use gpfusion_core::pursuits::{Algorithm, PursuitConfig};

fn main() {
    let mut args = std::env::args().skip(1);
    let alpha: f64 = args.next().map_or(0.18, |s| s.parse().expect("alpha"));
    let seed: u64 = args.next().map_or(1, |s| s.parse().expect("seed"));
    let (n, k) = (500, 20);
    let m = (alpha * n as f64).round() as usize;

    let seed = RngSeed::new(seed);
    let a = gen_sensing_matrix(m, n, &mut seed.matrix_rng(0, 0)).unwrap();
    let spec = SignalSpec::new(n, k, SignalDistribution::Gaussian).unwrap();
    let mut rng = seed.trial_rng(0, 0, 0);
    let (x, support) = gen_sparse_signal(&spec, &mut rng);
    let (b, _) = measure(&a, &x, &spec, &NoiseSpec::Clean, &mut rng).unwrap();

    println!("N={n} M={m} K={k}");
    let cfg = PursuitConfig::new(k);
    for alg in Algorithm::ALL {
        let est = alg.run(&a, &b, &cfg).unwrap();
        let err = squared_distance(&x, &est.densify());
        println!(
            "{:>6}  true atoms {:>2}/{k}  residual {:.3e}  error {:.3e}",
            alg.name(),
            true_atom_count(&support, &est.support),
            est.residual_norm,
            err
        );
    }
}
