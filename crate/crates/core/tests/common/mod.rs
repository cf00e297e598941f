#![allow(dead_code)]

use gpfusion_core::ensemble::{gen_sensing_matrix, gen_sparse_signal, measure, NoiseSpec, RngSeed, SignalDistribution, SignalSpec};
use gpfusion_core::linalg::least_squares_on_support;
use gpfusion_core::{DenseMatrix, SupportSet};

pub struct Instance {
    pub a: DenseMatrix,
    pub x: Vec<f64>,
    pub b: Vec<f64>,
    pub support: SupportSet,
}

pub fn instance(seed: u64, i: usize, m: usize, n: usize, k: usize, dist: SignalDistribution, noise: NoiseSpec) -> Instance {
    let seed = RngSeed::new(seed);
    let a = gen_sensing_matrix(m, n, &mut seed.matrix_rng(0, i)).unwrap();
    let spec = SignalSpec::new(n, k, dist).unwrap();
    let mut rng = seed.trial_rng(0, i, 0);
    let (x, support) = gen_sparse_signal(&spec, &mut rng);
    let (b, _) = measure(&a, &x, &spec, &noise, &mut rng).unwrap();
    Instance { a, x, b, support }
}

/// All `k`-subsets of `items`.
pub fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if items.len() < k {
        return vec![];
    }
    let mut out = Vec::new();
    for (p, &first) in items.iter().enumerate() {
        for mut rest in subsets(&items[p + 1..], k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Residual norm of the least-squares fit on `support`.
pub fn residual_norm(a: &DenseMatrix, b: &[f64], support: &SupportSet) -> f64 {
    least_squares_on_support(a, b, support).unwrap().residual_norm()
}
