//! FFT-based cycle-count estimation.
//!
//! The series is spline-fitted and resampled uniformly so that an integer
//! cycle count on `[0, 2π]` lands exactly on an FFT bin, then the dominant
//! non-DC periodogram peak up to the Nyquist index is taken as w.

use std::f64::consts::TAU;

use rustfft::{num_complex::Complex, FftPlanner};

use crate::error::{Error, Result};
use crate::signals::TimeSeries;
use crate::spline::SplineSignal;

/// Fraction of total spectral energy the peak must reach; anything below is
/// reported as having no dominant frequency.
const PEAK_ENERGY_FLOOR: f64 = 1e-12;

/// Result of a period estimation.
#[derive(Debug, Clone)]
pub struct PeriodEstimate {
    /// Estimated cycle count on `[0, 2π]`.
    pub w: u32,
    /// Periodogram power at the winning index.
    pub peak_power: f64,
    /// `(frequency index, power)` for indices `1..=⌊R/2⌋`.
    pub spectrum: Vec<(usize, f64)>,
}

/// Estimates the integer cycle count of `series` from the periodogram of
/// its spline fit resampled to `resample` uniform points. The DC bin is
/// excluded and ties go to the smaller index.
pub fn estimate_period(series: &TimeSeries, resample: usize) -> Result<PeriodEstimate> {
    if resample < 8 {
        return Err(Error::validation(
            "resample",
            format!("need at least 8 resample points, got {resample}"),
        ));
    }
    let spline = SplineSignal::fit(series)?;
    let mut buf: Vec<Complex<f64>> = (0..resample)
        .map(|j| {
            let t = TAU * j as f64 / resample as f64;
            // resample grid stays inside the fitted domain
            Complex::new(spline.eval(t).expect("in-domain resample"), 0.0)
        })
        .collect();

    let fft = FftPlanner::new().plan_fft_forward(resample);
    fft.process(&mut buf);

    let total_energy: f64 = buf.iter().map(|c| c.norm_sqr()).sum();
    let nyquist = resample / 2;
    let spectrum: Vec<(usize, f64)> = (1..=nyquist).map(|k| (k, buf[k].norm_sqr())).collect();

    let (mut best_k, mut best_power) = (0usize, f64::NEG_INFINITY);
    for &(k, power) in &spectrum {
        if power > best_power {
            best_k = k;
            best_power = power;
        }
    }

    if best_power <= PEAK_ENERGY_FLOOR * total_energy {
        return Err(Error::NoDominantFrequency(
            "spectrum has no power outside the DC bin".to_string(),
        ));
    }

    Ok(PeriodEstimate {
        w: best_k as u32,
        peak_power: best_power,
        spectrum,
    })
}
