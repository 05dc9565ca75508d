//! Natural cubic spline interpolation on `[0, 2π]`.
//!
//! Fitting rescales the sample times so the first knot sits at 0 and the
//! last at 2π, then solves the standard tridiagonal system for the second
//! derivatives with natural boundary conditions (zero curvature at both
//! ends). Evaluation never extrapolates.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::signals::TimeSeries;

/// Slack allowed on domain checks to absorb accumulated rounding in window
/// arithmetic; evaluation clamps back into the domain within this band.
const DOMAIN_SLACK: f64 = 1e-9;

/// A fitted piecewise-cubic interpolant with `C²` continuity.
#[derive(Debug, Clone)]
pub struct SplineSignal {
    /// Knot positions after rescaling; strictly increasing, first is 0,
    /// last is 2π.
    knots: Vec<f64>,
    /// Per-interval coefficients `[a, b, c, d]` of
    /// `a + b·dx + c·dx² + d·dx³` with `dx = t - knots[i]`.
    coeffs: Vec<[f64; 4]>,
}

impl SplineSignal {
    /// Fits a natural cubic spline through all samples of `series`.
    /// Needs at least four points.
    pub fn fit(series: &TimeSeries) -> Result<Self> {
        let n = series.len();
        if n < 4 {
            return Err(Error::Unsupported(format!(
                "cubic spline fit needs at least 4 points, got {n}"
            )));
        }
        let t0 = series.times()[0];
        let t_last = *series.times().last().unwrap();
        if t_last <= t0 {
            return Err(Error::validation(
                "times",
                "duplicate or decreasing time points",
            ));
        }
        let span = t_last - t0;
        let knots: Vec<f64> = series
            .times()
            .iter()
            .map(|t| (t - t0) / span * TAU)
            .collect();
        if knots.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::validation(
                "times",
                "duplicate time points after rescaling",
            ));
        }
        let y = series.values();

        // Second derivatives m[i]; natural boundaries pin m[0] = m[n-1] = 0.
        let h: Vec<f64> = knots.windows(2).map(|w| w[1] - w[0]).collect();
        let mut m = vec![0.0; n];
        if n > 2 {
            // Thomas elimination on the (n-2)-unknown interior system.
            let dim = n - 2;
            let mut diag = vec![0.0; dim];
            let mut rhs = vec![0.0; dim];
            let mut upper = vec![0.0; dim];
            for i in 0..dim {
                let k = i + 1; // knot index
                diag[i] = 2.0 * (h[k - 1] + h[k]);
                upper[i] = h[k];
                rhs[i] = 6.0 * ((y[k + 1] - y[k]) / h[k] - (y[k] - y[k - 1]) / h[k - 1]);
            }
            for i in 1..dim {
                let lower = h[i]; // sub-diagonal entry of row i is h[i]
                let factor = lower / diag[i - 1];
                diag[i] -= factor * upper[i - 1];
                rhs[i] -= factor * rhs[i - 1];
            }
            m[dim] = rhs[dim - 1] / diag[dim - 1];
            for i in (0..dim - 1).rev() {
                m[i + 1] = (rhs[i] - upper[i] * m[i + 2]) / diag[i];
            }
        }

        let coeffs = (0..n - 1)
            .map(|i| {
                let hi = h[i];
                let a = y[i];
                let b = (y[i + 1] - y[i]) / hi - hi * (2.0 * m[i] + m[i + 1]) / 6.0;
                let c = m[i] / 2.0;
                let d = (m[i + 1] - m[i]) / (6.0 * hi);
                [a, b, c, d]
            })
            .collect();

        Ok(SplineSignal { knots, coeffs })
    }

    /// Domain of the fitted signal; always `(0, 2π)` up to rounding.
    pub fn domain(&self) -> (f64, f64) {
        (self.knots[0], *self.knots.last().unwrap())
    }

    /// Knot positions (the rescaled input times).
    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    /// Per-interval cubic coefficients `[a, b, c, d]`.
    pub fn coefficients(&self) -> &[[f64; 4]] {
        &self.coeffs
    }

    /// Interval index and local offset for `t`, or a domain error.
    fn locate(&self, t: f64) -> Result<(usize, f64)> {
        let (lo, hi) = self.domain();
        if t < lo - DOMAIN_SLACK || t > hi + DOMAIN_SLACK {
            return Err(Error::OutOfDomain { value: t, lo, hi });
        }
        let t = t.clamp(lo, hi);
        // last knot belongs to the final interval
        let idx = match self.knots.binary_search_by(|k| k.partial_cmp(&t).unwrap()) {
            Ok(i) => i.min(self.coeffs.len() - 1),
            Err(i) => i.saturating_sub(1).min(self.coeffs.len() - 1),
        };
        Ok((idx, t - self.knots[idx]))
    }

    /// Evaluates the spline at `t ∈ [0, 2π]`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        let (i, dx) = self.locate(t)?;
        let [a, b, c, d] = self.coeffs[i];
        Ok(a + dx * (b + dx * (c + dx * d)))
    }

    /// Evaluates the exact derivative of the fitted piecewise cubic.
    pub fn eval_derivative(&self, t: f64) -> Result<f64> {
        let (i, dx) = self.locate(t)?;
        let [_, b, c, d] = self.coeffs[i];
        Ok(b + dx * (2.0 * c + dx * 3.0 * d))
    }

    /// Upper bound on `|f′|` over the domain: the maximum of the derivative
    /// magnitude over a 10-point grid per interval plus each interval's
    /// interior critical point of the quadratic derivative.
    pub fn sup_derivative(&self) -> f64 {
        let mut sup = 0.0f64;
        for (i, [_, b, c, d]) in self.coeffs.iter().enumerate() {
            let h = self.knots[i + 1] - self.knots[i];
            let deriv = |dx: f64| (b + dx * (2.0 * c + dx * 3.0 * d)).abs();
            for j in 0..=10 {
                sup = sup.max(deriv(h * j as f64 / 10.0));
            }
            // derivative b + 2c·dx + 3d·dx² has its extremum at dx = -c/(3d)
            if *d != 0.0 {
                let vertex = -c / (3.0 * d);
                if (0.0..=h).contains(&vertex) {
                    sup = sup.max(deriv(vertex));
                }
            }
        }
        sup
    }
}
