//! Sliding-window embeddings and point-cloud conditioning.
//!
//! The conditional sliding-window embedding evaluates the less periodic
//! signal `f1` at lags fixed by the more periodic signal's cycle count:
//! `τ = 2π/(w₂(M+1))`, with window start times covering one cycle of `f1`.
//! Window reads past 2π wrap modulo 2π, exact for periodic signals and the
//! only consistent choice for near-periodic data.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::pointcloud::PointCloud;
use crate::spline::SplineSignal;

/// Shape of a conditional sliding-window embedding. The lag is always
/// derived from `w2` and `m`, never free.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmbeddingConfig {
    m: usize,
    n: usize,
    w1: u32,
    w2: u32,
}

impl EmbeddingConfig {
    /// Validates `w2 ≥ w1 ≥ 1`, `m ≥ 1`, `n ≥ 1`.
    pub fn new(m: usize, n: usize, w1: u32, w2: u32) -> Result<Self> {
        if m < 1 {
            return Err(Error::validation(
                "M",
                "embedding dimension must be at least 1",
            ));
        }
        if n < 1 {
            return Err(Error::validation("N", "need at least one window"));
        }
        if w1 < 1 {
            return Err(Error::validation("w1", "cycle counts must be positive"));
        }
        if w2 < w1 {
            return Err(Error::validation(
                "w2",
                format!("w2 = {w2} must be at least w1 = {w1} (f2 is the more periodic signal)"),
            ));
        }
        Ok(EmbeddingConfig { m, n, w1, w2 })
    }

    /// Embedding dimension M; points live in `R^{M+1}`.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of window start times.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Cycle count of the less periodic signal.
    pub fn w1(&self) -> u32 {
        self.w1
    }

    /// Cycle count of the more periodic signal.
    pub fn w2(&self) -> u32 {
        self.w2
    }

    /// The derived lag `2π/(w₂(M+1))`.
    pub fn tau(&self) -> f64 {
        TAU / (self.w2 as f64 * (self.m + 1) as f64)
    }
}

/// Builds the conditional sliding-window embedding of `f1`: `n` uniform
/// start times on `[0, 2π/w₁)`, each mapped to
/// `(f1(t), f1(t+τ), …, f1(t+Mτ))` with the derived lag.
pub fn conditional_swe(f1: &SplineSignal, config: &EmbeddingConfig) -> Result<PointCloud> {
    windowed_cloud(f1, config.m, config.tau(), config.n, TAU / config.w1 as f64)
}

/// Sliding-window embedding with a caller-chosen lag: `n` start times on
/// `[0, t_end)`, coordinates `f(t + kτ)` for `k = 0..=m`, reads wrapping
/// modulo 2π.
pub fn swe(f: &SplineSignal, m: usize, tau: f64, n: usize, t_end: f64) -> Result<PointCloud> {
    if m < 1 {
        return Err(Error::validation(
            "M",
            "embedding dimension must be at least 1",
        ));
    }
    if n < 1 {
        return Err(Error::validation("N", "need at least one window"));
    }
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::validation("tau", "lag must be positive"));
    }
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(Error::validation("t_end", "window span must be positive"));
    }
    windowed_cloud(f, m, tau, n, t_end)
}

fn windowed_cloud(
    f: &SplineSignal,
    m: usize,
    tau: f64,
    n: usize,
    t_end: f64,
) -> Result<PointCloud> {
    let dim = m + 1;
    let mut data = Vec::with_capacity(n * dim);
    for i in 0..n {
        let start = t_end * i as f64 / n as f64;
        for k in 0..dim {
            let t = (start + k as f64 * tau).rem_euclid(TAU);
            data.push(f.eval(t)?);
        }
    }
    Ok(PointCloud::from_flat(data, n, dim))
}

/// Minimum embedding dimension `⌈2π/(w₂ε)⌉` that makes scores at any two
/// larger dimensions agree to within a linear function of `ε`.
///
/// ```
/// use cperiod_core::embedding::min_embedding_dimension;
/// assert_eq!(min_embedding_dimension(0.2, 2), 16);
/// ```
pub fn min_embedding_dimension(epsilon: f64, w2: u32) -> usize {
    assert!(
        epsilon.is_finite() && epsilon > 0.0,
        "epsilon must be positive"
    );
    assert!(w2 >= 1, "w2 must be positive");
    let m = (TAU / (w2 as f64 * epsilon)).ceil();
    (m as usize).max(1)
}

/// Minimum number of embedding points `⌈P/w₁⌉ − δ`, where `δ` counts the
/// uniform grid points `t_p = 2πp/P` with `t_p < π/w₂`, clamped below at 4
/// so downstream persistence always has enough points to form a 1-cycle.
pub fn min_embedding_points(points: usize, w1: u32, w2: u32) -> usize {
    assert!(w1 >= 1 && w2 >= w1, "need w2 >= w1 >= 1");
    assert!(points >= w1 as usize, "need at least w1 points");
    let base = points.div_ceil(w1 as usize);
    // t_p < π/w₂  <=>  2·p·w₂ < P, counted exactly in integers
    let delta = points.div_ceil(2 * w2 as usize);
    base.saturating_sub(delta).max(4)
}

/// Replaces each point by the arithmetic mean of itself and every angular
/// neighbor (angle below `angle_threshold`, via the clamped arccosine of
/// cosine similarity). Single pass over the input cloud.
pub fn mean_shift_denoise(cloud: &PointCloud, angle_threshold: f64) -> Result<PointCloud> {
    assert!(
        angle_threshold.is_finite() && angle_threshold > 0.0,
        "angle threshold must be positive"
    );
    let n = cloud.count();
    let d = cloud.dimension();
    let mut norms = Vec::with_capacity(n);
    for (i, p) in cloud.iter_points().enumerate() {
        let norm = p.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::DegeneratePoint {
                index: i,
                reason: "zero-norm point has no direction for angular neighbors".to_string(),
            });
        }
        norms.push(norm);
    }
    let mut data = Vec::with_capacity(n * d);
    for i in 0..n {
        let pi = cloud.point(i);
        let mut acc: Vec<f64> = pi.to_vec();
        let mut members = 1.0;
        for j in 0..n {
            if i == j {
                continue;
            }
            let pj = cloud.point(j);
            let dot: f64 = pi.iter().zip(pj).map(|(a, b)| a * b).sum();
            let angle = (dot / (norms[i] * norms[j])).clamp(-1.0, 1.0).acos();
            if angle < angle_threshold {
                for (a, &b) in acc.iter_mut().zip(pj) {
                    *a += b;
                }
                members += 1.0;
            }
        }
        data.extend(acc.into_iter().map(|a| a / members));
    }
    Ok(PointCloud::from_flat(data, n, d))
}

/// Subtracts the centroid, then scales every point to unit norm, leaving
/// the cloud on the unit sphere. This is what makes the √3 filtration cap
/// meaningful and the score land in `[0, 1]`.
pub fn center_normalize(cloud: &PointCloud) -> Result<PointCloud> {
    let centroid = cloud.centroid();
    let n = cloud.count();
    let d = cloud.dimension();
    let mut data = Vec::with_capacity(n * d);
    for (i, p) in cloud.iter_points().enumerate() {
        let centered: Vec<f64> = p.iter().zip(&centroid).map(|(x, c)| x - c).collect();
        let norm = centered.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-12 {
            return Err(Error::DegeneratePoint {
                index: i,
                reason: "point coincides with the cloud centroid".to_string(),
            });
        }
        data.extend(centered.into_iter().map(|x| x / norm));
    }
    Ok(PointCloud::from_flat(data, n, d))
}
