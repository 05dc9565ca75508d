//! Point clouds in D-dimensional Euclidean space.

use crate::error::{Error, Result};

/// An `N x D` collection of points, stored row-major.
///
/// Produced by the embedding operations, consumed by PCA, persistence,
/// and recurrence analysis. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    data: Vec<f64>,
    count: usize,
    dimension: usize,
}

impl PointCloud {
    /// Builds a cloud from row vectors, validating shape and finiteness.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::validation(
                "points",
                "a cloud needs at least one point",
            ));
        }
        let dimension = rows[0].len();
        if dimension == 0 {
            return Err(Error::validation(
                "points",
                "points need at least one coordinate",
            ));
        }
        let mut data = Vec::with_capacity(rows.len() * dimension);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dimension {
                return Err(Error::validation(
                    "points",
                    format!(
                        "row {i} has {} coordinates, expected {dimension}",
                        row.len()
                    ),
                ));
            }
            for &v in row {
                if !v.is_finite() {
                    return Err(Error::validation(
                        "points",
                        format!("non-finite coordinate in row {i}"),
                    ));
                }
            }
            data.extend_from_slice(row);
        }
        Ok(PointCloud {
            data,
            count: rows.len(),
            dimension,
        })
    }

    pub(crate) fn from_flat(data: Vec<f64>, count: usize, dimension: usize) -> Self {
        debug_assert_eq!(data.len(), count * dimension);
        debug_assert!(count >= 1 && dimension >= 1);
        PointCloud {
            data,
            count,
            dimension,
        }
    }

    /// Number of points N.
    pub fn count(&self) -> usize {
        self.count
    }

    /// Ambient dimension D.
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Coordinates of point `i`.
    pub fn point(&self, i: usize) -> &[f64] {
        &self.data[i * self.dimension..(i + 1) * self.dimension]
    }

    /// Iterates over points as coordinate slices.
    pub fn iter_points(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.dimension)
    }

    /// Arithmetic mean of all points.
    pub fn centroid(&self) -> Vec<f64> {
        let mut c = vec![0.0; self.dimension];
        for p in self.iter_points() {
            for (ci, &x) in c.iter_mut().zip(p) {
                *ci += x;
            }
        }
        let n = self.count as f64;
        for ci in &mut c {
            *ci /= n;
        }
        c
    }

    /// `true` if every coordinate is finite.
    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

/// Euclidean distance between two coordinate slices of equal length.
pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}
