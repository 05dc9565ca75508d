//! Discrete time series, synthetic signal families, and SMA denoising.
//!
//! A [`TimeSeries`] is a univariate signal sampled at strictly increasing
//! times in `[0, 2π]`. The generators produce the four benchmark families
//! (cosine, damped cosine, square, triangle) on a uniform grid, with an
//! optional linear damping envelope and seeded Gaussian noise. CSV ingestion
//! accepts either `t,value` rows or a single `value` column on an implied
//! uniform grid.

use std::f64::consts::TAU;
use std::path::Path;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};

/// A discrete univariate time series on `[0, 2π]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    times: Vec<f64>,
    values: Vec<f64>,
}

impl TimeSeries {
    /// Builds a series, validating the type invariants: equal lengths,
    /// at least two samples, strictly increasing times inside `[0, 2π]`,
    /// finite values.
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::validation(
                "times",
                format!("{} times vs {} values", times.len(), values.len()),
            ));
        }
        if times.len() < 2 {
            return Err(Error::validation("times", "need at least two samples"));
        }
        if !times.iter().all(|t| t.is_finite()) {
            return Err(Error::validation("times", "non-finite time point"));
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(Error::validation("values", "non-finite value"));
        }
        if times[0] < 0.0 || *times.last().unwrap() > TAU {
            return Err(Error::validation(
                "times",
                "time points must lie in [0, 2π]",
            ));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::validation(
                "times",
                "time points must be strictly increasing",
            ));
        }
        Ok(TimeSeries { times, values })
    }

    /// Builds a series from values on the uniform grid `t_p = 2πp/P`.
    pub fn uniform(values: Vec<f64>) -> Result<Self> {
        let p = values.len();
        let times = (0..p).map(|i| TAU * i as f64 / p as f64).collect();
        TimeSeries::new(times, values)
    }

    /// Sample times.
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// Sample values.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of samples P.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false: the constructor requires P >= 2.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// The four synthetic waveform families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignalFamily {
    /// `cos(w t)`.
    Cosine,
    /// Cosine with the damping envelope applied; identical to `Cosine`
    /// when `damping` is zero.
    DampedCosine,
    /// Alternating `±amplitude`, `w` cycles on `[0, 2π]`.
    Square,
    /// Piecewise-linear wave peaking at cycle starts, `w` cycles.
    Triangle,
}

impl FromStr for SignalFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cos" | "cosine" => Ok(SignalFamily::Cosine),
            "damped_cosine" | "damped-cosine" | "dcos" => Ok(SignalFamily::DampedCosine),
            "square" => Ok(SignalFamily::Square),
            "triangle" | "tri" => Ok(SignalFamily::Triangle),
            other => Err(Error::validation(
                "family",
                format!("unknown signal family `{other}` (expected cosine, damped_cosine, square, or triangle)"),
            )),
        }
    }
}

/// Parameters for [`generate`].
#[derive(Debug, Clone, PartialEq)]
pub struct SignalSpec {
    /// Waveform family.
    pub family: SignalFamily,
    /// Number of cycles w on `[0, 2π]`.
    pub cycles: u32,
    /// Peak amplitude (default 1).
    pub amplitude: f64,
    /// Fraction of amplitude lost linearly over `[0, 2π]`; 0 for undamped.
    pub damping: f64,
    /// Std. dev. of additive Gaussian noise as a fraction of amplitude.
    pub noise_sigma: f64,
    /// Number of uniform samples P.
    pub points: usize,
    /// RNG seed for the noise draws.
    pub seed: u64,
}

impl SignalSpec {
    /// A noiseless, undamped, unit-amplitude spec.
    pub fn new(family: SignalFamily, cycles: u32, points: usize) -> Self {
        SignalSpec {
            family,
            cycles,
            amplitude: 1.0,
            damping: 0.0,
            noise_sigma: 0.0,
            points,
            seed: 0,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.cycles < 1 {
            return Err(Error::validation("cycles", "must be at least 1"));
        }
        if self.points < 2 {
            return Err(Error::validation("points", "must be at least 2"));
        }
        if !(self.amplitude.is_finite() && self.amplitude > 0.0) {
            return Err(Error::validation(
                "amplitude",
                "must be positive and finite",
            ));
        }
        if !(self.damping.is_finite() && (0.0..1.0).contains(&self.damping)) {
            return Err(Error::validation("damping", "must lie in [0, 1)"));
        }
        if !(self.noise_sigma.is_finite() && self.noise_sigma >= 0.0) {
            return Err(Error::validation(
                "noise_sigma",
                "must be nonnegative and finite",
            ));
        }
        Ok(())
    }
}

/// Generates `spec.points` uniform samples `t_p = 2πp/P` of the requested
/// waveform. Damping multiplies the amplitude by a linear envelope from 1
/// at `t = 0` down to `1 - damping` at `t = 2π`; noise adds independent
/// `N(0, (noise_sigma · amplitude)²)` draws, reproducible from `spec.seed`.
pub fn generate(spec: &SignalSpec) -> Result<TimeSeries> {
    spec.validate()?;
    let p = spec.points;
    let mut values = Vec::with_capacity(p);
    for i in 0..p {
        let envelope = 1.0 - spec.damping * (i as f64 / p as f64);
        values.push(spec.amplitude * envelope * base_waveform(spec.family, spec.cycles, i, p));
    }
    if spec.noise_sigma > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let normal =
            Normal::new(0.0, spec.noise_sigma * spec.amplitude).expect("validated std dev");
        for v in &mut values {
            *v += normal.sample(&mut rng);
        }
    }
    TimeSeries::uniform(values)
}

/// Unit-amplitude waveform at grid index `i` of `p`. Square-wave jump
/// abscissae take the left value; the phase is carried in exact integer
/// arithmetic so jump detection is not at the mercy of rounding.
fn base_waveform(family: SignalFamily, cycles: u32, i: usize, p: usize) -> f64 {
    match family {
        SignalFamily::Cosine | SignalFamily::DampedCosine => {
            let t = TAU * i as f64 / p as f64;
            (cycles as f64 * t).cos()
        }
        SignalFamily::Square => {
            // phase fraction u = (w·i mod P)/P
            let r = (cycles as u64 * i as u64) % p as u64;
            if r == 0 {
                // cycle start: a jump from -1 for every sample but the first
                if i == 0 {
                    1.0
                } else {
                    -1.0
                }
            } else if 2 * r <= p as u64 {
                // left value +1 at the half-cycle jump (2r == p)
                1.0
            } else {
                -1.0
            }
        }
        SignalFamily::Triangle => {
            let r = (cycles as u64 * i as u64) % p as u64;
            let u = r as f64 / p as f64;
            if u <= 0.5 {
                1.0 - 4.0 * u
            } else {
                4.0 * u - 3.0
            }
        }
    }
}

/// Simple moving average with a symmetric window, truncated at the
/// boundaries. The window must be odd and no longer than the series.
pub fn sma_smooth(series: &TimeSeries, window: usize) -> Result<TimeSeries> {
    let p = series.len();
    if window < 1 || window > p {
        return Err(Error::validation(
            "window",
            format!("window {window} must lie in [1, {p}]"),
        ));
    }
    if window.is_multiple_of(2) {
        return Err(Error::validation(
            "window",
            format!("window {window} must be odd so the average stays centered"),
        ));
    }
    let half = window / 2;
    let values = series.values();
    let smoothed = (0..p)
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half).min(p - 1);
            let span = &values[lo..=hi];
            span.iter().sum::<f64>() / span.len() as f64
        })
        .collect();
    TimeSeries::new(series.times().to_vec(), smoothed)
}

/// Largest admissible SMA window: the biggest odd integer no larger than
/// one third of the points in one cycle of the less periodic series,
/// `⌊P/(3·w1)⌋`, and at least 1.
///
/// ```
/// use cperiod_core::signals::max_sma_window;
/// assert_eq!(max_sma_window(300, 3), 33);
/// assert_eq!(max_sma_window(300, 2), 49);
/// ```
pub fn max_sma_window(points: usize, w1: u32) -> usize {
    assert!(w1 >= 1, "w1 must be positive");
    assert!(points >= w1 as usize, "need at least w1 points");
    let cap = points / (3 * w1 as usize);
    if cap <= 1 {
        1
    } else if cap.is_multiple_of(2) {
        cap - 1
    } else {
        cap
    }
}

/// Parses CSV text into a series.
///
/// Accepts `t,value` rows (header optional) or a single `value` column,
/// the latter implying the uniform grid `t_p = 2πp/P`. Two-column times
/// that do not already lie inside `[0, 2π]` are rescaled affinely onto it;
/// downstream spline fitting rescales the domain anyway, so only the
/// relative spacing matters.
pub fn parse_series_csv(text: &str) -> Result<TimeSeries> {
    let mut rows: Vec<(usize, Vec<f64>)> = Vec::new();
    let mut width: Option<usize> = None;
    let mut header_allowed = true;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed: std::result::Result<Vec<f64>, _> =
            fields.iter().map(|f| f.parse::<f64>()).collect();
        match parsed {
            Ok(nums) => {
                match width {
                    None => {
                        if !(nums.len() == 1 || nums.len() == 2) {
                            return Err(Error::CsvParse {
                                line: line_no,
                                reason: format!("expected 1 or 2 columns, found {}", nums.len()),
                            });
                        }
                        width = Some(nums.len());
                    }
                    Some(w) if nums.len() != w => {
                        return Err(Error::CsvParse {
                            line: line_no,
                            reason: format!("expected {w} columns, found {}", nums.len()),
                        });
                    }
                    _ => {}
                }
                header_allowed = false;
                rows.push((line_no, nums));
            }
            Err(_) => {
                if header_allowed {
                    // one non-numeric leading row is treated as a header
                    header_allowed = false;
                    continue;
                }
                return Err(Error::CsvParse {
                    line: line_no,
                    reason: format!("non-numeric field in `{line}`"),
                });
            }
        }
    }
    if rows.len() < 2 {
        return Err(Error::CsvParse {
            line: rows.first().map_or(1, |r| r.0),
            reason: "need at least two data rows".to_string(),
        });
    }
    match width.unwrap() {
        1 => TimeSeries::uniform(rows.into_iter().map(|(_, r)| r[0]).collect()),
        _ => {
            let mut times: Vec<f64> = rows.iter().map(|(_, r)| r[0]).collect();
            let values: Vec<f64> = rows.iter().map(|(_, r)| r[1]).collect();
            let first = times[0];
            let last = *times.last().unwrap();
            if !(first >= 0.0 && last <= TAU) {
                if last <= first {
                    return Err(Error::CsvParse {
                        line: rows.last().unwrap().0,
                        reason: "time column must be strictly increasing".to_string(),
                    });
                }
                let span = last - first;
                for t in &mut times {
                    *t = (*t - first) / span * TAU;
                }
            }
            TimeSeries::new(times, values)
        }
    }
}

/// Reads a series from a CSV file (see [`parse_series_csv`]).
pub fn read_series_csv(path: &Path) -> Result<TimeSeries> {
    let text = std::fs::read_to_string(path)?;
    parse_series_csv(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(family: SignalFamily, cycles: u32, points: usize) -> SignalSpec {
        SignalSpec::new(family, cycles, points)
    }

    #[test]
    fn cosine_hits_exact_peaks() {
        let s = generate(&spec(SignalFamily::Cosine, 3, 300)).unwrap();
        assert_eq!(s.values()[0], 1.0);
        // t = 2π/3 is grid point 100
        assert!((s.times()[100] - TAU / 3.0).abs() < 1e-12);
        assert!((s.values()[100] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn cosine_matches_closed_form_everywhere() {
        let s = generate(&spec(SignalFamily::Cosine, 5, 257)).unwrap();
        for (t, v) in s.times().iter().zip(s.values()) {
            assert!((v - (5.0 * t).cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn generation_is_deterministic_under_seed() {
        let mut sp = spec(SignalFamily::Cosine, 3, 300);
        sp.noise_sigma = 0.05;
        sp.seed = 9001;
        let a = generate(&sp).unwrap();
        let b = generate(&sp).unwrap();
        assert_eq!(a, b);
        sp.seed = 9002;
        let c = generate(&sp).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn square_wave_is_balanced() {
        let s = generate(&spec(SignalFamily::Square, 7, 300)).unwrap();
        let mean = s.values().iter().sum::<f64>() / s.len() as f64;
        assert!(mean.abs() < 0.05, "square mean {mean}");
        assert!(s.values().iter().all(|v| *v == 1.0 || *v == -1.0));
    }

    #[test]
    fn triangle_wave_peaks_and_is_continuous() {
        let s = generate(&spec(SignalFamily::Triangle, 4, 400)).unwrap();
        assert_eq!(s.values()[0], 1.0);
        // quarter cycle: 400/(4*4) = 25 samples in, value crosses 0
        assert!(s.values()[25].abs() < 1e-12);
        let max_step = s
            .values()
            .windows(2)
            .map(|w| (w[1] - w[0]).abs())
            .fold(0.0f64, f64::max);
        assert!(max_step < 4.0 * 4.0 / 400.0 * 1.01 + 1e-12);
    }

    #[test]
    fn damping_applies_linear_envelope() {
        let mut sp = spec(SignalFamily::DampedCosine, 2, 200);
        sp.damping = 0.4;
        let s = generate(&sp).unwrap();
        // at grid index i the envelope is 1 - 0.4 i/200
        assert_eq!(s.values()[0], 1.0);
        let i = 100; // cos(2 t) = 1 there (t = π)
        assert!((s.values()[i] - (1.0 - 0.4 * 0.5)).abs() < 1e-12);
    }

    #[test]
    fn damped_cosine_with_zero_damping_equals_cosine() {
        let a = generate(&spec(SignalFamily::Cosine, 3, 120)).unwrap();
        let b = generate(&spec(SignalFamily::DampedCosine, 3, 120)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn generate_rejects_bad_fields() {
        let mut sp = spec(SignalFamily::Cosine, 0, 300);
        let err = generate(&sp).unwrap_err().to_string();
        assert!(err.contains("cycles"), "{err}");
        sp.cycles = 3;
        sp.points = 1;
        assert!(generate(&sp).unwrap_err().to_string().contains("points"));
        sp.points = 300;
        sp.damping = 1.0;
        assert!(generate(&sp).unwrap_err().to_string().contains("damping"));
        sp.damping = 0.0;
        sp.noise_sigma = -0.1;
        assert!(generate(&sp)
            .unwrap_err()
            .to_string()
            .contains("noise_sigma"));
    }

    #[test]
    fn sma_window_one_is_identity() {
        let s = generate(&spec(SignalFamily::Triangle, 3, 90)).unwrap();
        assert_eq!(sma_smooth(&s, 1).unwrap(), s);
    }

    #[test]
    fn sma_truncates_at_boundaries() {
        let s = TimeSeries::uniform(vec![0.0, 3.0, 0.0, 3.0, 0.0]).unwrap();
        let out = sma_smooth(&s, 3).unwrap();
        assert_eq!(out.values(), &[1.5, 1.0, 2.0, 1.0, 1.5]);
        assert_eq!(out.times(), s.times());
    }

    #[test]
    fn sma_rejects_even_or_oversized_windows() {
        let s = TimeSeries::uniform(vec![1.0; 8]).unwrap();
        assert!(sma_smooth(&s, 2).is_err());
        assert!(sma_smooth(&s, 9).is_err());
        assert!(sma_smooth(&s, 7).is_ok());
    }

    #[test]
    fn max_sma_window_examples() {
        assert_eq!(max_sma_window(300, 3), 33);
        assert_eq!(max_sma_window(300, 2), 49);
        assert_eq!(max_sma_window(3, 3), 1);
        assert_eq!(max_sma_window(10, 1), 3);
    }

    #[test]
    fn csv_two_column_with_header() {
        let text = "t,value\n0.0,1.0\n1.0,2.0\n2.0,3.0\n";
        let s = parse_series_csv(text).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.values(), &[1.0, 2.0, 3.0]);
        assert_eq!(s.times(), &[0.0, 1.0, 2.0]);
    }

    #[test]
    fn csv_single_column_uses_uniform_grid() {
        let text = "value\n1\n2\n3\n4\n";
        let s = parse_series_csv(text).unwrap();
        assert_eq!(s.len(), 4);
        assert!((s.times()[1] - TAU / 4.0).abs() < 1e-15);
    }

    #[test]
    fn csv_out_of_range_times_are_rescaled() {
        // month-numbered rows land outside [0, 2π] and get rescaled onto it
        let text: String = (1..=12).map(|m| format!("{m},{}\n", m * 10)).collect();
        let s = parse_series_csv(&text).unwrap();
        assert_eq!(s.times()[0], 0.0);
        assert!((s.times()[11] - TAU).abs() < 1e-15);
        // in-range times are kept verbatim
        let t2 = "1.0,5\n2.0,6\n3.0,7\n";
        assert_eq!(parse_series_csv(t2).unwrap().times(), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn csv_rejects_garbage() {
        assert!(parse_series_csv("").is_err());
        assert!(parse_series_csv("a,b\nc,d\n").is_err());
        assert!(parse_series_csv("1,2\n3\n").is_err());
        assert!(parse_series_csv("1,2,3\n4,5,6\n").is_err());
        let err = parse_series_csv("1,2\nx,4\n").unwrap_err();
        assert!(matches!(err, Error::CsvParse { line: 2, .. }));
    }
}
