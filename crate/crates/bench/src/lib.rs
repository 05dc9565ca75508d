//! Shared input builders for the kernel benchmarks.

use cperiod_core::pipeline::trial_seed;
use cperiod_core::tda::PersistenceDiagram;
use cperiod_core::PointCloud;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `n` points on the unit circle with jitter of the given magnitude.
pub fn noisy_circle(n: usize, jitter: f64, seed: u64) -> PointCloud {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let theta = std::f64::consts::TAU * i as f64 / n as f64;
            vec![
                theta.cos() + jitter * rng.gen_range(-1.0..1.0),
                theta.sin() + jitter * rng.gen_range(-1.0..1.0),
            ]
        })
        .collect();
    PointCloud::from_rows(&rows).unwrap()
}

/// A random diagram with `n` pairs inside `[0, cap]`.
pub fn random_diagram(n: usize, cap: f64, seed: u64) -> PersistenceDiagram {
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, 1));
    let pairs: Vec<(f64, f64)> = (0..n)
        .map(|_| {
            let b = rng.gen_range(0.0..cap * 0.8);
            let d = rng.gen_range(b..cap);
            (b, d)
        })
        .collect();
    PersistenceDiagram::new(pairs, 1, cap)
}
