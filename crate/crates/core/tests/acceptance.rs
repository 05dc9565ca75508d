//! Acceptance suite. One test per criterion, named `criterion_NN_*`, so
//! the harness prints one pass/fail line per criterion. The heavyweight
//! sweep criteria (08, 09) take several minutes each on one core.

mod support;

use std::f64::consts::{PI, TAU};
use std::time::Instant;

use cperiod_core::embedding::{conditional_swe, min_embedding_dimension, EmbeddingConfig};
use cperiod_core::experiments::{
    run_compare_det, run_periodicity_sweep, spearman_rho, CompareDetSweep, Measure,
    PeriodicitySweep,
};
use cperiod_core::pca::{fit_pca, pca_score_bound, project};
use cperiod_core::pipeline::{
    conditional_score, noise_stability_bound, periodicity_score, stability_rhs_periodicity,
    trial_seed, PipelineConfig,
};
use cperiod_core::signals::{generate, parse_series_csv, sma_smooth, SignalFamily, SignalSpec};
use cperiod_core::spline::SplineSignal;
use cperiod_core::tda::{vr_persistence_h1, FILTRATION_CAP};
use cperiod_core::PointCloud;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::{circle_cloud, oracle::vr_h1_bruteforce, random_cloud};

/// Maximum persistence over √3 on a raw (unnormalized) cloud, as the
/// stability theorems state it.
fn raw_score(cloud: &PointCloud) -> f64 {
    vr_persistence_h1(cloud, FILTRATION_CAP)
        .unwrap()
        .max_persistence()
        / FILTRATION_CAP
}

#[test]
fn criterion_01_minimum_dimension_regression() {
    let start = Instant::now();
    assert_eq!(min_embedding_dimension(0.2, 2), 16);

    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..20 {
        let epsilon: f64 = rng.gen_range(0.01..5.0);
        let w2: u32 = rng.gen_range(1..=30);
        let direct = (TAU / (w2 as f64 * epsilon)).ceil().max(1.0) as usize;
        assert_eq!(
            min_embedding_dimension(epsilon, w2),
            direct,
            "eps={epsilon} w2={w2}"
        );
    }
    println!("criterion 01 done in {:.2?}", start.elapsed());
}

#[test]
fn criterion_02_persistence_matches_bruteforce_oracle() {
    let start = Instant::now();
    for trial in 0..200u64 {
        let n = 3 + (trial % 5) as usize; // 3..=7
        let d = 1 + (trial % 3) as usize; // 1..=3
        let cloud = random_cloud(n, d, trial_seed(202, trial));
        let cap = if trial % 2 == 0 { FILTRATION_CAP } else { 1.2 };
        let fast = vr_persistence_h1(&cloud, cap).unwrap();
        let slow = vr_h1_bruteforce(&cloud, cap);
        assert_eq!(
            fast.pairs(),
            slow.as_slice(),
            "trial {trial}: optimized and brute-force diagrams differ"
        );
    }
    println!("criterion 02 done in {:.2?}", start.elapsed());
}

#[test]
fn criterion_03_analytic_diagrams() {
    let start = Instant::now();
    let square = PointCloud::from_rows(&[
        vec![1.0, 0.0],
        vec![0.0, 1.0],
        vec![-1.0, 0.0],
        vec![0.0, -1.0],
    ])
    .unwrap();
    let d = vr_persistence_h1(&square, FILTRATION_CAP).unwrap();
    assert_eq!(d.pairs().len(), 1);
    let (birth, death) = d.pairs()[0];
    assert!((birth - 2f64.sqrt()).abs() < 1e-9, "square birth {birth}");
    assert!((death - 3f64.sqrt()).abs() < 1e-9, "square death {death}");

    let d24 = vr_persistence_h1(&circle_cloud(24), FILTRATION_CAP).unwrap();
    let (birth, death) = d24
        .pairs()
        .iter()
        .copied()
        .max_by(|a, b| (a.1 - a.0).partial_cmp(&(b.1 - b.0)).unwrap())
        .unwrap();
    assert!(
        (birth - 2.0 * (PI / 24.0).sin()).abs() < 1e-9,
        "24-gon birth {birth}"
    );
    assert!(
        (death - FILTRATION_CAP).abs() < 1e-9,
        "24-gon death {death}"
    );
    println!("criterion 03 done in {:.2?}", start.elapsed());
}

#[test]
fn criterion_04_score_reduction_at_equal_periodicity() {
    let start = Instant::now();
    let f = generate(&SignalSpec::new(SignalFamily::Cosine, 3, 300)).unwrap();
    let config = PipelineConfig::with_epsilon(0.05);
    let conditional = conditional_score(&f, &f, &config).unwrap();
    let single = periodicity_score(&f, &config).unwrap();
    assert_eq!(conditional.w1, 3);
    assert_eq!(conditional.w2, 3);
    assert!(
        (conditional.score - single.score).abs() < 1e-12,
        "conditional {} vs self {}",
        conditional.score,
        single.score
    );
    assert!(conditional.score >= 0.9, "score {}", conditional.score);
    println!("criterion 04 done in {:.2?}", start.elapsed());
}

#[test]
fn criterion_05_periodicity_stability_inequality() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let mut held = 0;
    for _ in 0..100 {
        let w1: u32 = rng.gen_range(1..=4);
        let w21: u32 = w1 + rng.gen_range(0..=6);
        let w22 = w21 + 1;
        let amplitude = rng.gen_range(0.5..2.0);
        let m = rng.gen_range(6..=12usize);
        let n = rng.gen_range(40..=80usize);
        let spec = SignalSpec {
            amplitude,
            ..SignalSpec::new(SignalFamily::Cosine, w1, 300)
        };
        let f1 = SplineSignal::fit(&generate(&spec).unwrap()).unwrap();
        let x1 = conditional_swe(&f1, &EmbeddingConfig::new(m, n, w1, w21).unwrap()).unwrap();
        let x2 = conditional_swe(&f1, &EmbeddingConfig::new(m, n, w1, w22).unwrap()).unwrap();
        let lhs = (raw_score(&x1) - raw_score(&x2)).abs();
        let rhs = stability_rhs_periodicity(&f1, m, w21, w22);
        if lhs <= rhs {
            held += 1;
        } else {
            println!("violation: w1={w1} w21={w21} M={m} N={n} lhs={lhs} rhs={rhs}");
        }
    }
    assert_eq!(held, 100, "stability inequality must hold in 100/100 cases");
    println!("criterion 05 done in {:.2?}", start.elapsed());
}

#[test]
fn criterion_06_pca_score_bound_and_corollary() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut direct_held = 0;
    let mut corollary_held = 0;
    for i in 0..50u64 {
        let w1: u32 = rng.gen_range(1..=4);
        let w21: u32 = w1 + rng.gen_range(0..=5);
        let w22 = w21 + 1;
        let m = rng.gen_range(6..=12usize);
        let n = rng.gen_range(40..=80usize);
        // a third each: noiseless (exactly planar embeddings), light and
        // moderate noise (meaningful eigenvalue tails)
        let sigma = [0.0, 0.02, 0.05][(i % 3) as usize];
        let mut series = generate(&SignalSpec {
            noise_sigma: sigma,
            seed: trial_seed(606, i),
            ..SignalSpec::new(SignalFamily::Cosine, w1, 300)
        })
        .unwrap();
        if sigma > 0.0 {
            series = sma_smooth(&series, 11).unwrap();
        }
        let f1 = SplineSignal::fit(&series).unwrap();

        let x1 = conditional_swe(&f1, &EmbeddingConfig::new(m, n, w1, w21).unwrap()).unwrap();
        let x2 = conditional_swe(&f1, &EmbeddingConfig::new(m, n, w1, w22).unwrap()).unwrap();
        let model1 = fit_pca(&x1).unwrap();
        let model2 = fit_pca(&x2).unwrap();
        let phi1 = project(&model1, &x1, 2).unwrap();
        let phi2 = project(&model2, &x2, 2).unwrap();

        let s1 = raw_score(&x1);
        let s2 = raw_score(&x2);
        let s_phi1 = raw_score(&phi1);
        let s_phi2 = raw_score(&phi2);
        let bound1 = pca_score_bound(&model1, 2);
        let bound2 = pca_score_bound(&model2, 2);

        // |score - score_phi| <= sqrt(8/3) * (tail sum)^(1/4), float slack
        // only for the exactly-planar equality cases
        if (s1 - s_phi1).abs() <= bound1 + 1e-9 {
            direct_held += 1;
        }
        if (s_phi1 - s_phi2).abs() <= bound1 + bound2 + (s1 - s2).abs() + 1e-9 {
            corollary_held += 1;
        }
    }
    assert_eq!(direct_held, 50, "projection bound must hold in 50/50 cases");
    assert_eq!(
        corollary_held, 50,
        "combined two-projection bound must hold in 50/50 cases"
    );
    println!("criterion 06 done in {:.2?}", start.elapsed());
}

#[test]
fn criterion_07_noise_lemma_coverage() {
    let start = Instant::now();
    let (sigma, delta, m) = (0.05, 0.25, 16usize);
    let (w1, w2, n) = (3u32, 7u32, 78usize);
    let config = EmbeddingConfig::new(m, n, w1, w2).unwrap();

    let clean_spline =
        SplineSignal::fit(&generate(&SignalSpec::new(SignalFamily::Cosine, w1, 300)).unwrap())
            .unwrap();
    let score_clean = raw_score(&conditional_swe(&clean_spline, &config).unwrap());
    let bound = noise_stability_bound(sigma, delta, m);

    let mut within = 0usize;
    for t in 0..200u64 {
        let noisy = generate(&SignalSpec {
            noise_sigma: sigma,
            seed: trial_seed(707, t),
            ..SignalSpec::new(SignalFamily::Cosine, w1, 300)
        })
        .unwrap();
        let spline = SplineSignal::fit(&noisy).unwrap();
        let score_noisy = raw_score(&conditional_swe(&spline, &config).unwrap());
        if (score_clean - score_noisy).abs() <= bound {
            within += 1;
        }
    }
    let fraction = within as f64 / 200.0;
    assert!(
        fraction >= 1.0 - delta,
        "only {within}/200 trials within the noise bound {bound}"
    );
    println!(
        "criterion 07 done in {:.2?} (fraction {fraction})",
        start.elapsed()
    );
}

/// Shared regime for criteria 08/09: the comparative-stability experiment.
fn comparison_template() -> SignalSpec {
    SignalSpec {
        noise_sigma: 0.05,
        ..SignalSpec::new(SignalFamily::Cosine, 2, 300)
    }
}

#[test]
fn criterion_08_score_declines_monotonically_in_w2() {
    let start = Instant::now();
    let template = comparison_template();
    let sweep = PeriodicitySweep {
        f1: template.clone(),
        f2: template,
        w2_values: (2..=20).collect(),
        config: PipelineConfig {
            sma_window: Some(11),
            ..PipelineConfig::with_dimension(16)
        },
        samples: 100,
        seed: 808,
    };
    let points = run_periodicity_sweep(&sweep).unwrap();
    let xs: Vec<f64> = points.iter().map(|p| p.x).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.mean).collect();
    let rho = spearman_rho(&xs, &ys);
    assert!(rho <= -0.9, "Spearman rho {rho} not <= -0.9; means {ys:?}");
    println!(
        "criterion 08 done in {:.2?} (rho {rho:.4})",
        start.elapsed()
    );
}

#[test]
fn criterion_09_score_more_stable_than_det() {
    let start = Instant::now();
    let template = comparison_template();
    let sweep = CompareDetSweep {
        f1: template.clone(),
        f2: template,
        w2_values: (2..=20).collect(),
        dims: vec![16, 17, 18],
        taus: vec![2, 3, 4],
        tol: 0.9,
        min_dl: 15,
        k: 2,
        sma_window: 11,
        mean_shift: true,
        samples: 100,
        seed: 909,
    };
    let rows = run_compare_det(&sweep).unwrap();

    // largest change in mean score across M, and in mean %DET across tau,
    // anywhere on the grid
    let mut score_change = 0.0f64;
    let mut det_change = 0.0f64;
    for w2 in 2..=20u32 {
        let scores: Vec<f64> = rows
            .iter()
            .filter(|r| r.measure == Measure::Score && r.w2 == w2)
            .map(|r| r.mean)
            .collect();
        let hi = scores.iter().cloned().fold(f64::MIN, f64::max);
        let lo = scores.iter().cloned().fold(f64::MAX, f64::min);
        score_change = score_change.max(hi - lo);
        for m in [16usize, 17, 18] {
            let dets: Vec<f64> = rows
                .iter()
                .filter(|r| r.measure == Measure::Det && r.w2 == w2 && r.m == m)
                .map(|r| r.mean)
                .collect();
            let hi = dets.iter().cloned().fold(f64::MIN, f64::max);
            let lo = dets.iter().cloned().fold(f64::MAX, f64::min);
            det_change = det_change.max(hi - lo);
        }
    }
    assert!(
        det_change >= 2.0 * score_change,
        "det change {det_change} not >= 2x score change {score_change}"
    );
    println!(
        "criterion 09 done in {:.2?} (score change {score_change:.4}, det change {det_change:.4})",
        start.elapsed()
    );
}

/// The external-data shape check: a 72-point monthly-style series must run
/// end to end from CSV. (The reference dataset itself is not bundled.)
#[test]
fn smoke_72_point_csv_series() {
    let spec = SignalSpec {
        noise_sigma: 0.08,
        seed: 42,
        ..SignalSpec::new(SignalFamily::Cosine, 5, 72)
    };
    let series = generate(&spec).unwrap();
    let csv: String = series.values().iter().map(|v| format!("{v}\n")).collect();
    let parsed = parse_series_csv(&csv).unwrap();
    assert_eq!(parsed.len(), 72);

    let config = PipelineConfig {
        sma_window: Some(5),
        ..PipelineConfig::with_dimension(12)
    };
    let report = periodicity_score(&parsed, &config).unwrap();
    assert_eq!(report.w1, 5);
    assert!((0.0..=1.0).contains(&report.score));
    assert!(report.n >= 4);
}
