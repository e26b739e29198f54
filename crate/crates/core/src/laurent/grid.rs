use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::series::LaurentSeries;
use crate::error::{Error, Result};

pub const DEFAULT_GRID_POINTS: usize = 512;

/// Equally spaced sample points `z_k = exp(2 pi i k / n)` on the unit circle.
///
/// Sampling a finitely supported series is exact (coefficients are wrapped
/// modulo `n` before the inverse DFT). Recovering coefficients from samples
/// aliases unless the grid has more than `2 * max|power|` points.
#[derive(Clone)]
pub struct CircleGrid {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for CircleGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CircleGrid").field("n", &self.n).finish()
    }
}

impl Default for CircleGrid {
    fn default() -> Self {
        Self::new(DEFAULT_GRID_POINTS).expect("default grid is valid")
    }
}

impl CircleGrid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!(
                "grid needs at least 2 points, got {n}"
            )));
        }
        let mut planner = FftPlanner::new();
        Ok(Self {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        })
    }

    /// Smallest power-of-two grid with at least `min_points` points that can
    /// resolve powers up to `max_power` without aliasing.
    pub fn resolving(max_power: i64, min_points: usize) -> Self {
        let need = (2 * max_power.max(0) as usize + 1).max(min_points).max(2);
        Self::new(need.next_power_of_two()).expect("size >= 2")
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn point(&self, k: usize) -> Complex64 {
        Complex64::from_polar(1.0, 2.0 * PI * k as f64 / self.n as f64)
    }

    pub fn points(&self) -> Vec<Complex64> {
        (0..self.n).map(|k| self.point(k)).collect()
    }

    /// Values of `f` at every grid point.
    pub fn sample(&self, f: &LaurentSeries) -> Vec<Complex64> {
        let n = self.n as i64;
        let mut buf = vec![Complex64::new(0.0, 0.0); self.n];
        for (p, c) in f.terms() {
            buf[p.rem_euclid(n) as usize] += c;
        }
        self.inverse.process(&mut buf);
        buf
    }

    /// Coefficients of the trigonometric interpolant of `samples`, assigned to
    /// the powers `lo..=hi` (which must span at most `len()` powers).
    pub fn coefficients(&self, samples: &[Complex64], lo: i64, hi: i64) -> Result<LaurentSeries> {
        if samples.len() != self.n {
            return Err(Error::InvalidArgument(format!(
                "expected {} samples, got {}",
                self.n,
                samples.len()
            )));
        }
        if hi - lo + 1 > self.n as i64 {
            return Err(Error::InvalidArgument(format!(
                "power window {lo}..={hi} is wider than the grid ({} points)",
                self.n
            )));
        }
        let mut buf = samples.to_vec();
        self.forward.process(&mut buf);
        let scale = 1.0 / self.n as f64;
        let n = self.n as i64;
        let coeffs = (lo..=hi)
            .map(|p| buf[p.rem_euclid(n) as usize] * scale)
            .collect();
        Ok(LaurentSeries::new(lo, coeffs))
    }

    /// Coefficients in the symmetric window `-(n-1)/2 ..= n/2`.
    pub fn coefficients_centered(&self, samples: &[Complex64]) -> Result<LaurentSeries> {
        let n = self.n as i64;
        self.coefficients(samples, -(n - 1) / 2, n / 2)
    }

    /// Applies `op` pointwise on the grid and returns the centered interpolant.
    pub fn map(&self, f: &LaurentSeries, op: impl Fn(Complex64) -> Complex64) -> LaurentSeries {
        let vals: Vec<_> = self.sample(f).into_iter().map(op).collect();
        self.coefficients_centered(&vals).expect("sample count matches grid")
    }
}
