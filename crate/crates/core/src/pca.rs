//! Principal component analysis of point clouds.
//!
//! Fitting eigendecomposes the scatter matrix of the centered cloud
//! (unnormalized covariance, `Xᶜᵀ Xᶜ`). Keeping the eigenvalues at scatter
//! scale matters: the projection stability bounds compare them against raw
//! pairwise distances, which carry no `1/N`. All D components and
//! eigenvalues are retained so the discarded-tail bounds can be evaluated
//! for any K at projection time.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::pointcloud::PointCloud;

/// Eigenvalues this far below the leading one (relatively) are snapped to
/// exact zero, so rank-deficient clouds report empty tails.
const EIGENVALUE_FLOOR: f64 = 1e-12;

/// A fitted PCA basis.
#[derive(Debug, Clone)]
pub struct PcaModel {
    mean: Vec<f64>,
    /// Orthonormal components, descending eigenvalue order; all D retained.
    components: Vec<Vec<f64>>,
    /// Scatter-matrix eigenvalues, descending, nonnegative.
    eigenvalues: Vec<f64>,
}

impl PcaModel {
    /// Cloud centroid used for centering.
    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    /// Orthonormal principal directions, strongest first.
    pub fn components(&self) -> &[Vec<f64>] {
        &self.components
    }

    /// Scatter-matrix eigenvalues, descending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Number of retained components (always the ambient dimension D).
    pub fn k(&self) -> usize {
        self.components.len()
    }

    /// Scree data as CSV rows `component_index,eigenvalue,cumulative_fraction`.
    pub fn scree_csv(&self) -> Result<String> {
        let total: f64 = self.eigenvalues.iter().sum();
        if total <= 0.0 {
            return Err(Error::DegenerateCloud(
                "zero total variance, no scree to report".to_string(),
            ));
        }
        let mut out = String::from("component_index,eigenvalue,cumulative_fraction\n");
        let mut acc = 0.0;
        for (i, &ev) in self.eigenvalues.iter().enumerate() {
            acc += ev;
            out.push_str(&format!(
                "{},{},{}\n",
                i + 1,
                crate::numfmt::g12(ev),
                crate::numfmt::g12(acc / total)
            ));
        }
        Ok(out)
    }
}

/// Fits a PCA model to `cloud` by symmetric eigendecomposition of the
/// scatter matrix. Eigenvector signs are fixed so each component's
/// largest-magnitude coordinate is positive, making outputs reproducible.
pub fn fit_pca(cloud: &PointCloud) -> Result<PcaModel> {
    let n = cloud.count();
    if n < 2 {
        return Err(Error::validation("points", "PCA needs at least two points"));
    }
    let d = cloud.dimension();
    let mean = cloud.centroid();

    let mut scatter = DMatrix::<f64>::zeros(d, d);
    for p in cloud.iter_points() {
        for a in 0..d {
            let pa = p[a] - mean[a];
            for b in a..d {
                scatter[(a, b)] += pa * (p[b] - mean[b]);
            }
        }
    }
    for a in 0..d {
        for b in 0..a {
            scatter[(a, b)] = scatter[(b, a)];
        }
    }

    let eigen = scatter.symmetric_eigen();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| {
        eigen.eigenvalues[b]
            .partial_cmp(&eigen.eigenvalues[a])
            .expect("finite eigenvalues")
    });

    let lead = eigen.eigenvalues[order[0]].max(0.0);
    let mut eigenvalues = Vec::with_capacity(d);
    let mut components = Vec::with_capacity(d);
    for &idx in &order {
        let ev = eigen.eigenvalues[idx];
        eigenvalues.push(if ev < EIGENVALUE_FLOOR * lead {
            0.0
        } else {
            ev
        });
        let col = eigen.eigenvectors.column(idx);
        let mut v: Vec<f64> = col.iter().copied().collect();
        let pivot = v
            .iter()
            .enumerate()
            .max_by(|(_, a), (_, b)| a.abs().partial_cmp(&b.abs()).unwrap())
            .map(|(i, _)| i)
            .unwrap();
        if v[pivot] < 0.0 {
            for x in &mut v {
                *x = -*x;
            }
        }
        components.push(v);
    }

    Ok(PcaModel {
        mean,
        components,
        eigenvalues,
    })
}

/// Projects `cloud` onto the model's top `k` components: an `N x k` cloud
/// of inner products of the centered points with those components.
pub fn project(model: &PcaModel, cloud: &PointCloud, k: usize) -> Result<PointCloud> {
    let d = cloud.dimension();
    if d != model.mean.len() {
        return Err(Error::DimensionMismatch {
            left: model.mean.len(),
            right: d,
        });
    }
    if k < 1 || k > d {
        return Err(Error::validation(
            "K",
            format!("projection rank {k} must lie in [1, {d}]"),
        ));
    }
    let n = cloud.count();
    let mut data = Vec::with_capacity(n * k);
    for p in cloud.iter_points() {
        for comp in &model.components[..k] {
            let dot: f64 = p
                .iter()
                .zip(&model.mean)
                .zip(comp)
                .map(|((x, m), c)| (x - m) * c)
                .sum();
            data.push(dot);
        }
    }
    Ok(PointCloud::from_flat(data, n, k))
}

/// The score-change bound for projecting onto `k` components:
/// `√(8/3) · (Σ_{i>k} λᵢ²)^{1/4}` over the discarded eigenvalue tail.
pub fn pca_score_bound(model: &PcaModel, k: usize) -> f64 {
    assert!(
        k >= 1 && k <= model.eigenvalues.len(),
        "K must lie in [1, D]"
    );
    let tail: f64 = model.eigenvalues[k..].iter().map(|ev| ev * ev).sum();
    (8.0f64 / 3.0).sqrt() * tail.powf(0.25)
}

/// Fraction of total variance captured by the top `k` components.
pub fn variance_captured(model: &PcaModel, k: usize) -> Result<f64> {
    assert!(
        k >= 1 && k <= model.eigenvalues.len(),
        "K must lie in [1, D]"
    );
    let total: f64 = model.eigenvalues.iter().sum();
    if total <= 0.0 {
        return Err(Error::DegenerateCloud("zero total variance".to_string()));
    }
    Ok(model.eigenvalues[..k].iter().sum::<f64>() / total)
}
