//! Distances between diagrams and between point sets.

use crate::error::{Error, Result};
use crate::pointcloud::{euclidean, PointCloud};

use super::PersistenceDiagram;

/// Exact bottleneck distance between two diagrams of the same dimension
/// and cap, with diagonal augmentation.
///
/// The optimum is always one of finitely many candidate values: a pairwise
/// ∞-norm cost or a point-to-diagonal cost `(death − birth)/2`. A binary
/// search over the sorted candidates finds the smallest one admitting a
/// perfect matching.
pub fn bottleneck_distance(d1: &PersistenceDiagram, d2: &PersistenceDiagram) -> Result<f64> {
    if d1.dimension() != d2.dimension() {
        return Err(Error::DimensionMismatch {
            left: d1.dimension(),
            right: d2.dimension(),
        });
    }
    if (d1.cap() - d2.cap()).abs() > 1e-12 {
        return Err(Error::validation(
            "cap",
            format!("diagram caps differ: {} vs {}", d1.cap(), d2.cap()),
        ));
    }
    let a = d1.pairs();
    let b = d2.pairs();
    if a.is_empty() && b.is_empty() {
        return Ok(0.0);
    }

    let mut candidates = vec![0.0f64];
    for &(b1, dth1) in a {
        candidates.push((dth1 - b1) / 2.0);
        for &(b2, dth2) in b {
            candidates.push((b1 - b2).abs().max((dth1 - dth2).abs()));
        }
    }
    for &(b2, dth2) in b {
        candidates.push((dth2 - b2) / 2.0);
    }
    candidates.sort_by(|x, y| x.partial_cmp(y).unwrap());
    candidates.dedup();

    let mut lo = 0usize;
    let mut hi = candidates.len() - 1;
    debug_assert!(matching_exists(a, b, candidates[hi]));
    while lo < hi {
        let mid = (lo + hi) / 2;
        if matching_exists(a, b, candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(candidates[lo])
}

/// Whether a perfect matching exists when pairs may match at ∞-cost ≤ eps
/// or retire to the diagonal at cost ≤ eps.
///
/// Left side: all of `a` plus one diagonal proxy per point of `b`; right
/// side symmetric. Kuhn's augmenting-path matching on the implicit graph.
fn matching_exists(a: &[(f64, f64)], b: &[(f64, f64)], eps: f64) -> bool {
    let eps = eps + 1e-12; // absorb rounding in candidate arithmetic
    let n_left = a.len() + b.len();
    let n_right = b.len() + a.len();

    // adjacency test: left u, right v
    let adj = |u: usize, v: usize| -> bool {
        match (u < a.len(), v < b.len()) {
            (true, true) => {
                let (b1, d1) = a[u];
                let (b2, d2) = b[v];
                (b1 - b2).abs().max((d1 - d2).abs()) <= eps
            }
            // real left point to a diagonal proxy
            (true, false) => (a[u].1 - a[u].0) / 2.0 <= eps,
            // diagonal proxy to a real right point
            (false, true) => (b[v].1 - b[v].0) / 2.0 <= eps,
            // diagonal to diagonal is free
            (false, false) => true,
        }
    };

    let mut match_right: Vec<Option<usize>> = vec![None; n_right];
    let mut matched = 0usize;

    fn augment(
        u: usize,
        adj: &dyn Fn(usize, usize) -> bool,
        match_right: &mut [Option<usize>],
        visited: &mut [bool],
    ) -> bool {
        for v in 0..match_right.len() {
            if visited[v] || !adj(u, v) {
                continue;
            }
            visited[v] = true;
            if match_right[v].is_none()
                || augment(match_right[v].unwrap(), adj, match_right, visited)
            {
                match_right[v] = Some(u);
                return true;
            }
        }
        false
    }

    for u in 0..n_left {
        let mut visited = vec![false; n_right];
        if augment(u, &adj, &mut match_right, &mut visited) {
            matched += 1;
        } else {
            return false;
        }
    }
    matched == n_left
}

/// Hausdorff distance between two clouds of equal dimension, by exhaustive
/// pairwise Euclidean distances.
pub fn hausdorff_distance(a: &PointCloud, b: &PointCloud) -> Result<f64> {
    if a.dimension() != b.dimension() {
        return Err(Error::DimensionMismatch {
            left: a.dimension(),
            right: b.dimension(),
        });
    }
    let directed = |from: &PointCloud, to: &PointCloud| -> f64 {
        from.iter_points()
            .map(|p| {
                to.iter_points()
                    .map(|q| euclidean(p, q))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    Ok(directed(a, b).max(directed(b, a)))
}
