//! Cross-recurrence and percent determinism (%DET).
//!
//! The baseline the conditional periodicity score is compared against:
//! embed both series with an index lag, project each onto its own top-K
//! principal components, mark which state pairs fall within `tol` of each
//! other, and measure the fraction of recurrences lying on diagonal runs of
//! length at least `minDL`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::numfmt::g12;
use crate::pca::{fit_pca, project};
use crate::pointcloud::{euclidean, PointCloud};
use crate::signals::TimeSeries;

/// Binary cross-recurrence matrix between two embeddings. Generally
/// asymmetric: `cells[i][j]` compares state `i` of the first cloud with
/// state `j` of the second.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossRecurrenceMatrix {
    cells: Vec<bool>,
    n1: usize,
    n2: usize,
    tol: f64,
}

impl CrossRecurrenceMatrix {
    /// Whether states `i` (first cloud) and `j` (second cloud) cross-recur.
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.cells[i * self.n2 + j]
    }

    /// Rows (states of the first cloud).
    pub fn rows(&self) -> usize {
        self.n1
    }

    /// Columns (states of the second cloud).
    pub fn cols(&self) -> usize {
        self.n2
    }

    /// Distance threshold the matrix was built with.
    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Number of ones.
    pub fn recurrence_count(&self) -> u64 {
        self.cells.iter().filter(|&&c| c).count() as u64
    }

    /// Text export for recurrence plots: one row of `0`/`1` characters per
    /// matrix row.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.n1 * (self.n2 + 1));
        for i in 0..self.n1 {
            for j in 0..self.n2 {
                out.push(if self.get(i, j) { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }
}

/// Marks `cells[i][j] = 1` iff `‖aᵢ − bⱼ‖₂ < tol` (strictly; ties at
/// exactly `tol` are non-recurrent).
pub fn cross_recurrence(a: &PointCloud, b: &PointCloud, tol: f64) -> Result<CrossRecurrenceMatrix> {
    if a.dimension() != b.dimension() {
        return Err(Error::DimensionMismatch {
            left: a.dimension(),
            right: b.dimension(),
        });
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::validation(
            "tol",
            "distance threshold must be positive",
        ));
    }
    let (n1, n2) = (a.count(), b.count());
    let mut cells = Vec::with_capacity(n1 * n2);
    for p in a.iter_points() {
        for q in b.iter_points() {
            cells.push(euclidean(p, q) < tol);
        }
    }
    Ok(CrossRecurrenceMatrix { cells, n1, n2, tol })
}

/// %DET output.
#[derive(Debug, Clone, PartialEq)]
pub struct DetResult {
    /// Fraction of recurrence points on diagonal runs of length ≥ minDL;
    /// 0 for an empty matrix.
    pub percent_det: f64,
    /// Total number of recurrence points.
    pub recurrence_count: u64,
    /// Count of maximal diagonal runs by length (all lengths ≥ 1).
    pub diagonal_histogram: BTreeMap<usize, u64>,
    /// Set when the matrix had no recurrences at all.
    pub empty: bool,
}

impl DetResult {
    /// JSON object with stable key order.
    pub fn to_json(&self) -> String {
        let mut hist = String::from("{");
        for (i, (len, count)) in self.diagonal_histogram.iter().enumerate() {
            if i > 0 {
                hist.push(',');
            }
            hist.push_str(&format!("\"{len}\":{count}"));
        }
        hist.push('}');
        format!(
            "{{\"percent_det\":{},\"recurrence_count\":{},\"empty\":{},\"diagonal_histogram\":{}}}",
            g12(self.percent_det),
            self.recurrence_count,
            self.empty,
            hist
        )
    }
}

/// Histograms maximal runs of ones along every constant-offset (`i−j`)
/// diagonal and reports the fraction of recurrence points on runs of
/// length at least `min_dl`.
pub fn percent_determinism(matrix: &CrossRecurrenceMatrix, min_dl: usize) -> Result<DetResult> {
    if min_dl < 2 {
        return Err(Error::validation(
            "minDL",
            format!("minimum diagonal length {min_dl} must be at least 2"),
        ));
    }
    let (n1, n2) = (matrix.rows(), matrix.cols());
    let mut histogram: BTreeMap<usize, u64> = BTreeMap::new();
    let mut total: u64 = 0;
    let mut deterministic: u64 = 0;

    // offsets run from the bottom-left diagonal to the top-right one
    for offset in -(n1 as i64 - 1)..=(n2 as i64 - 1) {
        let (mut i, mut j) = if offset >= 0 {
            (0usize, offset as usize)
        } else {
            ((-offset) as usize, 0usize)
        };
        let mut run = 0usize;
        while i < n1 && j < n2 {
            if matrix.get(i, j) {
                run += 1;
                total += 1;
            } else if run > 0 {
                *histogram.entry(run).or_insert(0) += 1;
                if run >= min_dl {
                    deterministic += run as u64;
                }
                run = 0;
            }
            i += 1;
            j += 1;
        }
        if run > 0 {
            *histogram.entry(run).or_insert(0) += 1;
            if run >= min_dl {
                deterministic += run as u64;
            }
        }
    }

    let empty = total == 0;
    Ok(DetResult {
        percent_det: if empty {
            0.0
        } else {
            deterministic as f64 / total as f64
        },
        recurrence_count: total,
        diagonal_histogram: histogram,
        empty,
    })
}

/// Index-lagged delay embedding of raw samples: state `i` is
/// `(v[i], v[i+τ], …, v[i+Mτ])`, windows running off the end dropped.
pub fn delay_embedding(values: &[f64], m: usize, tau_index: usize) -> Result<PointCloud> {
    if m < 1 {
        return Err(Error::validation(
            "M",
            "embedding dimension must be at least 1",
        ));
    }
    if tau_index < 1 {
        return Err(Error::validation("tau", "index lag must be at least 1"));
    }
    let span = m * tau_index;
    if values.len() <= span {
        return Err(Error::validation(
            "series",
            format!(
                "series of {} samples too short for M={m}, tau={tau_index} (needs > {span})",
                values.len()
            ),
        ));
    }
    let count = values.len() - span;
    let dim = m + 1;
    let mut data = Vec::with_capacity(count * dim);
    for i in 0..count {
        for k in 0..dim {
            data.push(values[i + k * tau_index]);
        }
    }
    Ok(PointCloud::from_flat(data, count, dim))
}

/// The %DET baseline end to end: index-lagged delay embeddings of both
/// series, each projected onto its own top-K principal components, then
/// cross-recurrence and percent determinism.
pub fn det_pipeline(
    f1: &TimeSeries,
    f2: &TimeSeries,
    m: usize,
    tau_index: usize,
    tol: f64,
    min_dl: usize,
    k: usize,
) -> Result<DetResult> {
    if f1.len() != f2.len() {
        return Err(Error::validation(
            "series",
            format!("series lengths differ: {} vs {}", f1.len(), f2.len()),
        ));
    }
    let e1 = delay_embedding(f1.values(), m, tau_index)?;
    let e2 = delay_embedding(f2.values(), m, tau_index)?;
    let p1 = project(&fit_pca(&e1)?, &e1, k)?;
    let p2 = project(&fit_pca(&e2)?, &e2, k)?;
    let matrix = cross_recurrence(&p1, &p2, tol)?;
    percent_determinism(&matrix, min_dl)
}

/// Advisory noise floor for the recurrence threshold: five times the noise
/// standard deviation. Never applied silently.
pub fn min_noise_tolerance(sigma: f64) -> f64 {
    5.0 * sigma
}
