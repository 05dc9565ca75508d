//! Vietoris-Rips persistence, the periodicity score, and diagram metrics.
//!
//! Persistence is computed in homology dimension 1 over the two-element
//! field, with the filtration capped at √3: on a centered, unit-normalized
//! cloud a dense circle's 1-cycle survives to exactly that scale, so
//! dividing the maximum persistence by √3 yields a score in `[0, 1]` that
//! approaches 1 for round embeddings. Classes still alive at the cap are
//! recorded as dying there, which is what lets a perfect circle score 1.

mod metrics;
mod rips;

pub use metrics::{bottleneck_distance, hausdorff_distance};
pub use rips::vr_persistence_h1;

use crate::error::{Error, Result};
use crate::numfmt::g12;
use crate::pointcloud::PointCloud;

/// √3, the default filtration ceiling (f64-rounded).
pub const FILTRATION_CAP: f64 = 1.732_050_807_568_877_2;

/// A persistence diagram for one homology dimension: a multiset of
/// `(birth, death)` pairs with `0 ≤ birth ≤ death ≤ cap`.
#[derive(Debug, Clone, PartialEq)]
pub struct PersistenceDiagram {
    pairs: Vec<(f64, f64)>,
    dimension: usize,
    cap: f64,
}

impl PersistenceDiagram {
    /// Builds a diagram, sorting pairs by `(birth, death)` for stable output.
    pub fn new(mut pairs: Vec<(f64, f64)>, dimension: usize, cap: f64) -> Self {
        debug_assert!(pairs
            .iter()
            .all(|&(b, d)| 0.0 <= b && b <= d && d <= cap + 1e-12));
        pairs.sort_by(|a, b| a.partial_cmp(b).expect("finite diagram entries"));
        PersistenceDiagram {
            pairs,
            dimension,
            cap,
        }
    }

    /// The `(birth, death)` pairs, sorted by birth then death.
    pub fn pairs(&self) -> &[(f64, f64)] {
        &self.pairs
    }

    /// Homology dimension of the recorded classes.
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Filtration ceiling; classes alive here are recorded with this death.
    pub fn cap(&self) -> f64 {
        self.cap
    }

    /// Whether the diagram carries no features.
    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Lifetime of the longest surviving class; 0 for an empty diagram.
    pub fn max_persistence(&self) -> f64 {
        self.pairs.iter().map(|(b, d)| d - b).fold(0.0, f64::max)
    }

    /// CSV export: a `# cap=` comment line, a header, then one
    /// `birth,death` row per pair.
    pub fn to_csv(&self) -> String {
        let mut out = format!("# cap={}\nbirth,death\n", g12(self.cap));
        for &(b, d) in &self.pairs {
            out.push_str(&g12(b));
            out.push(',');
            out.push_str(&g12(d));
            out.push('\n');
        }
        out
    }
}

/// A conditional periodicity score together with the evidence behind it.
#[derive(Debug, Clone)]
pub struct ScoreValue {
    /// `max_persistence / √3`, clamped to `[0, 1]`.
    pub score: f64,
    /// Maximum 1-dimensional persistence of the diagram.
    pub max_persistence: f64,
    /// The diagram the score was read from.
    pub diagram: PersistenceDiagram,
}

/// Scores a centered, unit-normalized cloud: VR H₁ persistence capped at
/// √3, maximum persistence divided by √3, clamped to `[0, 1]`.
///
/// The unit-norm contract is enforced (within 1e-9) because the √3 cap is
/// only meaningful on the unit sphere.
pub fn score_from_cloud(cloud: &PointCloud) -> Result<ScoreValue> {
    for (i, p) in cloud.iter_points().enumerate() {
        let norm = p.iter().map(|x| x * x).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::Contract(format!(
                "point {i} has norm {norm}; call center_normalize before scoring"
            )));
        }
    }
    let diagram = vr_persistence_h1(cloud, FILTRATION_CAP)?;
    let max_persistence = diagram.max_persistence();
    Ok(ScoreValue {
        score: (max_persistence / FILTRATION_CAP).clamp(0.0, 1.0),
        max_persistence,
        diagram,
    })
}
