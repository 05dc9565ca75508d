//! Shared test support: the brute-force persistence oracle and small
//! cloud generators. Everything here is independent of the library's
//! optimized reduction path.

// each integration-test target compiles this module separately and uses a
// different subset of it
#![allow(dead_code)]

pub mod oracle;

use cperiod_core::PointCloud;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Uniformly random cloud with coordinates in `[-1, 1]`.
pub fn random_cloud(n: usize, d: usize, seed: u64) -> PointCloud {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect();
    PointCloud::from_rows(&rows).unwrap()
}

/// `n` evenly spaced points on the unit circle.
pub fn circle_cloud(n: usize) -> PointCloud {
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let theta = std::f64::consts::TAU * i as f64 / n as f64;
            vec![theta.cos(), theta.sin()]
        })
        .collect();
    PointCloud::from_rows(&rows).unwrap()
}
