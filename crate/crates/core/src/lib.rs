//! Conditional periodicity scoring for univariate time series.
//!
//! Quantifies how similar the periodicities of two time series are by
//! building a sliding-window embedding of the less periodic series with a
//! lag fixed by the more periodic one, reducing it with PCA, and reading
//! the maximum 1-dimensional persistence of its Vietoris-Rips filtration,
//! capped at √3. The score lands in `[0, 1]` and needs a single input
//! parameter (the embedding dimension, or a precision it is derived from).
//! A percent-determinism baseline and a sweep harness for the stability
//! experiments ride along.
//!
//! Typical use:
//!
//! ```
//! use cperiod_core::pipeline::{conditional_score, PipelineConfig};
//! use cperiod_core::signals::{generate, SignalFamily, SignalSpec};
//!
//! let f1 = generate(&SignalSpec::new(SignalFamily::Cosine, 3, 300)).unwrap();
//! let f2 = generate(&SignalSpec::new(SignalFamily::Cosine, 7, 300)).unwrap();
//! let report = conditional_score(&f1, &f2, &PipelineConfig::with_dimension(16)).unwrap();
//! assert_eq!((report.w1, report.w2), (3, 7));
//! assert!(report.score >= 0.0 && report.score <= 1.0);
//! ```

pub mod embedding;
pub mod error;
pub mod experiments;
pub mod numfmt;
pub mod pca;
pub mod pipeline;
pub mod pointcloud;
pub mod rqa;
pub mod signals;
pub mod spectrum;
pub mod spline;
pub mod tda;

pub use embedding::EmbeddingConfig;
pub use error::{Error, Result};
pub use pca::PcaModel;
pub use pipeline::{InputRole, PipelineConfig, ScoreReport};
pub use pointcloud::PointCloud;
pub use rqa::{CrossRecurrenceMatrix, DetResult};
pub use signals::{SignalFamily, SignalSpec, TimeSeries};
pub use spectrum::PeriodEstimate;
pub use spline::SplineSignal;
pub use tda::{PersistenceDiagram, ScoreValue, FILTRATION_CAP};
