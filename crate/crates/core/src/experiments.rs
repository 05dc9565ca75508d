//! Sweep harness for the stability experiments.
//!
//! Each sweep fans independent trials out over a rayon pool; per-trial
//! seeds come from [`trial_seed`] keyed by a global trial index, so
//! aggregation is order-independent and repeated runs are byte-identical.
//! Cell statistics are the sample mean with a two-sided 95% Student-t
//! confidence interval.

use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::Result;
use crate::numfmt::g12;
use crate::pipeline::{conditional_score, trial_seed, PipelineConfig};
use crate::rqa::det_pipeline;
use crate::signals::{generate, sma_smooth, SignalSpec};

/// Mean and confidence interval of one sweep cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    /// The swept coordinate (w₂, noise level, ...).
    pub x: f64,
    /// Sample mean over the cell's trials.
    pub mean: f64,
    /// Lower end of the 95% confidence interval.
    pub ci_low: f64,
    /// Upper end of the 95% confidence interval.
    pub ci_high: f64,
    /// Sample standard deviation.
    pub stddev: f64,
    /// Number of trials.
    pub samples: usize,
}

/// Sample mean with a two-sided Student-t confidence interval at the given
/// confidence level (e.g. 0.95). Returns `(mean, lo, hi, stddev)`.
pub fn mean_ci_t(samples: &[f64], confidence: f64) -> (f64, f64, f64, f64) {
    assert!(!samples.is_empty(), "no samples to aggregate");
    assert!((0.0..1.0).contains(&confidence));
    let n = samples.len();
    let mean = samples.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, mean, mean, 0.0);
    }
    let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64;
    let sd = var.sqrt();
    let t = StudentsT::new(0.0, 1.0, (n - 1) as f64)
        .expect("valid dof")
        .inverse_cdf(0.5 + confidence / 2.0);
    let half = t * sd / (n as f64).sqrt();
    (mean, mean - half, mean + half, sd)
}

/// Spearman rank correlation, with tied values receiving average ranks.
pub fn spearman_rho(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    assert!(xs.len() >= 2);
    let rx = ranks(xs);
    let ry = ranks(ys);
    let n = rx.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for (a, b) in rx.iter().zip(&ry) {
        cov += (a - mx) * (b - my);
        vx += (a - mx) * (a - mx);
        vy += (b - my) * (b - my);
    }
    cov / (vx.sqrt() * vy.sqrt())
}

fn ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("finite values"));
    let mut out = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            out[idx] = rank;
        }
        i = j + 1;
    }
    out
}

/// Score sweep over the periodicity of the second signal.
#[derive(Debug, Clone)]
pub struct PeriodicitySweep {
    /// Generator for the first signal (fixed cycle count).
    pub f1: SignalSpec,
    /// Generator template for the second signal; `cycles` is overridden
    /// per sweep cell.
    pub f2: SignalSpec,
    /// The w₂ values to sweep.
    pub w2_values: Vec<u32>,
    /// Scoring configuration.
    pub config: PipelineConfig,
    /// Trials per cell.
    pub samples: usize,
    /// Base seed for trial derivation.
    pub seed: u64,
}

/// Runs the periodicity sweep; one [`SweepPoint`] per w₂.
pub fn run_periodicity_sweep(sweep: &PeriodicitySweep) -> Result<Vec<SweepPoint>> {
    let cells: Vec<(usize, u32)> = sweep.w2_values.iter().copied().enumerate().collect();
    let per_cell: Vec<Result<Vec<f64>>> = cells
        .par_iter()
        .map(|&(cell_idx, w2)| {
            (0..sweep.samples)
                .into_par_iter()
                .map(|s| {
                    let t = (cell_idx * sweep.samples + s) as u64;
                    let f1 = generate(&SignalSpec {
                        seed: trial_seed(sweep.seed, 2 * t),
                        ..sweep.f1.clone()
                    })?;
                    let f2 = generate(&SignalSpec {
                        cycles: w2,
                        seed: trial_seed(sweep.seed, 2 * t + 1),
                        ..sweep.f2.clone()
                    })?;
                    Ok(conditional_score(&f1, &f2, &sweep.config)?.score)
                })
                .collect()
        })
        .collect();

    let mut points = Vec::with_capacity(cells.len());
    for ((_, w2), scores) in cells.iter().zip(per_cell) {
        let scores = scores?;
        let (mean, lo, hi, sd) = mean_ci_t(&scores, 0.95);
        points.push(SweepPoint {
            x: *w2 as f64,
            mean,
            ci_low: lo,
            ci_high: hi,
            stddev: sd,
            samples: scores.len(),
        });
    }
    Ok(points)
}

/// Score sweep over the Gaussian noise level applied to both signals.
#[derive(Debug, Clone)]
pub struct NoiseSweep {
    /// Generator for the first signal; `noise_sigma` is overridden.
    pub f1: SignalSpec,
    /// Generator for the second signal; `noise_sigma` is overridden.
    pub f2: SignalSpec,
    /// Noise levels to sweep.
    pub levels: Vec<f64>,
    /// Scoring configuration.
    pub config: PipelineConfig,
    /// Trials per cell.
    pub samples: usize,
    /// Base seed.
    pub seed: u64,
}

/// Runs the noise sweep; one [`SweepPoint`] per level.
pub fn run_noise_sweep(sweep: &NoiseSweep) -> Result<Vec<SweepPoint>> {
    let cells: Vec<(usize, f64)> = sweep.levels.iter().copied().enumerate().collect();
    let per_cell: Vec<Result<Vec<f64>>> = cells
        .par_iter()
        .map(|&(cell_idx, sigma)| {
            (0..sweep.samples)
                .into_par_iter()
                .map(|s| {
                    let t = (cell_idx * sweep.samples + s) as u64;
                    let f1 = generate(&SignalSpec {
                        noise_sigma: sigma,
                        seed: trial_seed(sweep.seed, 2 * t),
                        ..sweep.f1.clone()
                    })?;
                    let f2 = generate(&SignalSpec {
                        noise_sigma: sigma,
                        seed: trial_seed(sweep.seed, 2 * t + 1),
                        ..sweep.f2.clone()
                    })?;
                    Ok(conditional_score(&f1, &f2, &sweep.config)?.score)
                })
                .collect()
        })
        .collect();

    let mut points = Vec::with_capacity(cells.len());
    for ((_, sigma), scores) in cells.iter().zip(per_cell) {
        let scores = scores?;
        let (mean, lo, hi, sd) = mean_ci_t(&scores, 0.95);
        points.push(SweepPoint {
            x: *sigma,
            mean,
            ci_low: lo,
            ci_high: hi,
            stddev: sd,
            samples: scores.len(),
        });
    }
    Ok(points)
}

/// Single-pair score trace over a range of embedding dimensions, with the
/// minimum-dimension markers for a set of precisions.
#[derive(Debug, Clone)]
pub struct DimensionSweep {
    /// Generator for the first signal.
    pub f1: SignalSpec,
    /// Generator for the second signal.
    pub f2: SignalSpec,
    /// Embedding dimensions to score at.
    pub m_values: Vec<usize>,
    /// Configuration template; its `m`/`epsilon` choice is overridden per
    /// dimension.
    pub config: PipelineConfig,
    /// Precisions to mark with their derived minimum dimensions.
    pub epsilons: Vec<f64>,
}

/// Output of [`run_dimension_sweep`].
#[derive(Debug, Clone)]
pub struct DimensionSweepResult {
    /// `(M, score)` per swept dimension.
    pub scores: Vec<(usize, f64)>,
    /// `(ε, minimum M)` markers derived from the estimated w₂.
    pub markers: Vec<(f64, usize)>,
}

/// Scores one generated pair at every requested dimension.
pub fn run_dimension_sweep(sweep: &DimensionSweep) -> Result<DimensionSweepResult> {
    let f1 = generate(&sweep.f1)?;
    let f2 = generate(&sweep.f2)?;

    let scores: Vec<Result<(usize, f64)>> = sweep
        .m_values
        .par_iter()
        .map(|&m| {
            let config = PipelineConfig {
                m: Some(m),
                epsilon: None,
                ..sweep.config.clone()
            };
            Ok((m, conditional_score(&f1, &f2, &config)?.score))
        })
        .collect();
    let scores: Result<Vec<(usize, f64)>> = scores.into_iter().collect();
    let scores = scores?;

    // w2 for the markers comes from the same run; reuse any report
    let probe = PipelineConfig {
        m: Some(*sweep.m_values.first().unwrap_or(&2)),
        epsilon: None,
        ..sweep.config.clone()
    };
    let w2 = conditional_score(&f1, &f2, &probe)?.w2;
    let markers = sweep
        .epsilons
        .iter()
        .map(|&eps| (eps, crate::embedding::min_embedding_dimension(eps, w2)))
        .collect();

    Ok(DimensionSweepResult { scores, markers })
}

/// Which measure a comparison row belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    /// Conditional periodicity score.
    Score,
    /// Percent determinism.
    Det,
}

/// One aggregated cell of the score-vs-%DET comparison.
#[derive(Debug, Clone)]
pub struct CompareRow {
    /// Score or %DET.
    pub measure: Measure,
    /// Embedding dimension of the cell.
    pub m: usize,
    /// Index lag of the cell (0 for score rows; the score's lag is fixed
    /// by construction).
    pub tau: usize,
    /// Swept cycle count of the second signal.
    pub w2: u32,
    /// Sample mean.
    pub mean: f64,
    /// Lower 95% CI end.
    pub ci_low: f64,
    /// Upper 95% CI end.
    pub ci_high: f64,
    /// Sample standard deviation.
    pub stddev: f64,
    /// Trials per cell.
    pub samples: usize,
}

/// The comparative stability experiment: scores across several embedding
/// dimensions against %DET across several index lags, on the same
/// generated pairs.
#[derive(Debug, Clone)]
pub struct CompareDetSweep {
    /// Generator for the first signal.
    pub f1: SignalSpec,
    /// Generator template for the second signal; `cycles` overridden.
    pub f2: SignalSpec,
    /// The w₂ values to sweep.
    pub w2_values: Vec<u32>,
    /// Embedding dimensions for both measures.
    pub dims: Vec<usize>,
    /// Index lags for %DET.
    pub taus: Vec<usize>,
    /// Recurrence threshold.
    pub tol: f64,
    /// Minimum diagonal length.
    pub min_dl: usize,
    /// Principal components for both measures.
    pub k: usize,
    /// SMA window applied to both series in both arms (odd).
    pub sma_window: usize,
    /// Whether the score arm mean-shifts its embedding.
    pub mean_shift: bool,
    /// Trials per (w₂) cell; every (M, τ) cell reuses the same pairs.
    pub samples: usize,
    /// Base seed.
    pub seed: u64,
}

/// Runs the comparison; rows ordered measure-major, then by `(m, tau, w2)`.
pub fn run_compare_det(sweep: &CompareDetSweep) -> Result<Vec<CompareRow>> {
    struct TrialOut {
        scores: Vec<f64>, // one per dim
        dets: Vec<f64>,   // dims x taus, row-major
    }

    let cells: Vec<(usize, u32)> = sweep.w2_values.iter().copied().enumerate().collect();
    let per_cell: Vec<Result<Vec<TrialOut>>> = cells
        .par_iter()
        .map(|&(cell_idx, w2)| {
            (0..sweep.samples)
                .into_par_iter()
                .map(|s| {
                    let t = (cell_idx * sweep.samples + s) as u64;
                    let f1 = generate(&SignalSpec {
                        seed: trial_seed(sweep.seed, 2 * t),
                        ..sweep.f1.clone()
                    })?;
                    let f2 = generate(&SignalSpec {
                        cycles: w2,
                        seed: trial_seed(sweep.seed, 2 * t + 1),
                        ..sweep.f2.clone()
                    })?;
                    let s1 = sma_smooth(&f1, sweep.sma_window)?;
                    let s2 = sma_smooth(&f2, sweep.sma_window)?;

                    let mut scores = Vec::with_capacity(sweep.dims.len());
                    let mut dets = Vec::with_capacity(sweep.dims.len() * sweep.taus.len());
                    for &m in &sweep.dims {
                        let config = PipelineConfig {
                            k: sweep.k,
                            sma_window: Some(sweep.sma_window),
                            mean_shift: sweep.mean_shift,
                            ..PipelineConfig::with_dimension(m)
                        };
                        scores.push(conditional_score(&f1, &f2, &config)?.score);
                        for &tau in &sweep.taus {
                            dets.push(
                                det_pipeline(&s1, &s2, m, tau, sweep.tol, sweep.min_dl, sweep.k)?
                                    .percent_det,
                            );
                        }
                    }
                    Ok(TrialOut { scores, dets })
                })
                .collect()
        })
        .collect();

    // aggregate measure-major for stable output
    let mut score_rows = Vec::new();
    let mut det_rows = Vec::new();
    for ((cell_idx, w2), trials) in cells.iter().zip(per_cell) {
        let trials = trials?;
        let _ = cell_idx;
        for (di, &m) in sweep.dims.iter().enumerate() {
            let xs: Vec<f64> = trials.iter().map(|t| t.scores[di]).collect();
            let (mean, lo, hi, sd) = mean_ci_t(&xs, 0.95);
            score_rows.push(CompareRow {
                measure: Measure::Score,
                m,
                tau: 0,
                w2: *w2,
                mean,
                ci_low: lo,
                ci_high: hi,
                stddev: sd,
                samples: xs.len(),
            });
            for (ti, &tau) in sweep.taus.iter().enumerate() {
                let xs: Vec<f64> = trials
                    .iter()
                    .map(|t| t.dets[di * sweep.taus.len() + ti])
                    .collect();
                let (mean, lo, hi, sd) = mean_ci_t(&xs, 0.95);
                det_rows.push(CompareRow {
                    measure: Measure::Det,
                    m,
                    tau,
                    w2: *w2,
                    mean,
                    ci_low: lo,
                    ci_high: hi,
                    stddev: sd,
                    samples: xs.len(),
                });
            }
        }
    }
    let sort_key = |r: &CompareRow| (r.m, r.tau, r.w2);
    score_rows.sort_by_key(sort_key);
    det_rows.sort_by_key(sort_key);
    score_rows.extend(det_rows);
    Ok(score_rows)
}

/// CSV for a one-coordinate sweep; `x_name` labels the swept column.
pub fn sweep_csv(x_name: &str, points: &[SweepPoint]) -> String {
    let mut out = format!("{x_name},mean,ci_low,ci_high,stddev,samples\n");
    for p in points {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            g12(p.x),
            g12(p.mean),
            g12(p.ci_low),
            g12(p.ci_high),
            g12(p.stddev),
            p.samples
        ));
    }
    out
}

/// JSON array mirror of [`sweep_csv`].
pub fn sweep_json(x_name: &str, points: &[SweepPoint]) -> String {
    let rows: Vec<String> = points
        .iter()
        .map(|p| {
            format!(
                "{{\"{x_name}\":{},\"mean\":{},\"ci_low\":{},\"ci_high\":{},\"stddev\":{},\"samples\":{}}}",
                g12(p.x),
                g12(p.mean),
                g12(p.ci_low),
                g12(p.ci_high),
                g12(p.stddev),
                p.samples
            )
        })
        .collect();
    format!("[{}]", rows.join(","))
}

/// CSV for a dimension sweep: marker comment lines, then `m,score` rows.
pub fn dimension_csv(result: &DimensionSweepResult) -> String {
    let mut out = String::new();
    for &(eps, m) in &result.markers {
        out.push_str(&format!("# min_dimension epsilon={} M={m}\n", g12(eps)));
    }
    out.push_str("m,score\n");
    for &(m, score) in &result.scores {
        out.push_str(&format!("{m},{}\n", g12(score)));
    }
    out
}

/// JSON mirror of [`dimension_csv`].
pub fn dimension_json(result: &DimensionSweepResult) -> String {
    let markers: Vec<String> = result
        .markers
        .iter()
        .map(|&(eps, m)| format!("{{\"epsilon\":{},\"m\":{m}}}", g12(eps)))
        .collect();
    let scores: Vec<String> = result
        .scores
        .iter()
        .map(|&(m, s)| format!("{{\"m\":{m},\"score\":{}}}", g12(s)))
        .collect();
    format!(
        "{{\"markers\":[{}],\"scores\":[{}]}}",
        markers.join(","),
        scores.join(",")
    )
}

/// CSV for the comparison rows; `tau` is 0 on score rows.
pub fn compare_csv(rows: &[CompareRow]) -> String {
    let mut out = String::from("measure,m,tau,w2,mean,ci_low,ci_high,stddev,samples\n");
    for r in rows {
        let measure = match r.measure {
            Measure::Score => "score",
            Measure::Det => "det",
        };
        out.push_str(&format!(
            "{measure},{},{},{},{},{},{},{},{}\n",
            r.m,
            r.tau,
            r.w2,
            g12(r.mean),
            g12(r.ci_low),
            g12(r.ci_high),
            g12(r.stddev),
            r.samples
        ));
    }
    out
}
