//! Frequency and shift grids of a wavelet map.

use crate::error::{EngineError, EngineResult};
use crate::quadrature;
use crate::signal::SampleGrid;

/// Relative tolerance on the constant ratio of a log-spaced grid.
pub const LOG_SPACING_TOLERANCE: f64 = 1e-10;

/// Ascending, log-spaced angular frequencies (rad/s).
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid {
    values: Vec<f64>,
    log_step: f64,
}

impl FrequencyGrid {
    pub fn log_spaced(min: f64, max: f64, count: usize) -> EngineResult<Self> {
        if !(min.is_finite() && max.is_finite() && min > 0.0 && max > min) {
            return Err(EngineError::Domain(format!(
                "frequency band must satisfy 0 < min < max, got [{min}, {max}]"
            )));
        }
        if count < 2 {
            return Err(EngineError::Domain(format!(
                "frequency grid needs at least 2 points, got {count}"
            )));
        }
        let log_step = (max / min).ln() / (count - 1) as f64;
        let values = (0..count)
            .map(|k| min * (k as f64 * log_step).exp())
            .collect();
        Ok(Self { values, log_step })
    }

    /// Rebuilds a grid from explicit values, checking the log spacing.
    pub fn from_values(values: Vec<f64>) -> EngineResult<Self> {
        if values.len() < 2 {
            return Err(EngineError::Domain(format!(
                "frequency grid needs at least 2 points, got {}",
                values.len()
            )));
        }
        if values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(EngineError::Domain("frequencies must be finite and positive".into()));
        }
        if values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(EngineError::Domain("frequencies must be strictly ascending".into()));
        }
        let n = values.len();
        let ratio = (values[n - 1] / values[0]).powf(1.0 / (n - 1) as f64);
        for (k, w) in values.windows(2).enumerate() {
            let r = w[1] / w[0];
            if ((r - ratio) / ratio).abs() > LOG_SPACING_TOLERANCE {
                return Err(EngineError::Domain(format!(
                    "frequencies are not log-spaced: ratio {r} at index {k}, expected {ratio}"
                )));
            }
        }
        let log_step = (values[n - 1] / values[0]).ln() / (n - 1) as f64;
        Ok(Self { values, log_step })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn count(&self) -> usize {
        self.values.len()
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn ratio(&self) -> f64 {
        self.log_step.exp()
    }

    pub fn log_step(&self) -> f64 {
        self.log_step
    }

    /// Trapezoid weights `Δω` for integrating over ω on this grid.
    pub fn weights(&self) -> Vec<f64> {
        quadrature::log_weights(&self.values, self.log_step)
    }

    /// Index of the grid value closest to `omega` in log distance.
    pub fn nearest(&self, omega: f64) -> usize {
        let target = omega.ln();
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (k, v) in self.values.iter().enumerate() {
            let d = (v.ln() - target).abs();
            if d < best_d {
                best = k;
                best_d = d;
            }
        }
        best
    }
}

/// Uniform grid of shift times `T_j = t0 + j * dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftGrid {
    t0: f64,
    dt: f64,
    len: usize,
}

impl ShiftGrid {
    pub fn new(t0: f64, dt: f64, len: usize) -> EngineResult<Self> {
        if len == 0 {
            return Err(EngineError::Domain("shift grid is empty".into()));
        }
        if !(t0.is_finite() && dt.is_finite() && dt > 0.0) {
            return Err(EngineError::Domain(format!(
                "shift grid needs finite origin and positive spacing, got t0={t0}, dt={dt}"
            )));
        }
        Ok(Self { t0, dt, len })
    }

    /// Every `stride`-th sample time of `signal`, extended by one step past
    /// the last sample when needed so the grid spans the whole signal.
    pub fn covering(signal: SampleGrid, stride: usize) -> EngineResult<Self> {
        if stride == 0 {
            return Err(EngineError::Domain("shift stride must be at least 1".into()));
        }
        let steps = (signal.n - 1).div_ceil(stride);
        Self::new(signal.t0, signal.dt * stride as f64, steps + 1)
    }

    /// Rebuilds a grid from explicit values, checking uniform spacing.
    pub fn from_values(values: &[f64]) -> EngineResult<Self> {
        match values {
            [] => Err(EngineError::Domain("shift grid is empty".into())),
            [t] => Self::new(*t, 1.0, 1),
            _ => {
                let n = values.len();
                let dt = (values[n - 1] - values[0]) / (n - 1) as f64;
                for (j, v) in values.iter().enumerate() {
                    let expected = values[0] + j as f64 * dt;
                    if (v - expected).abs() > 1e-9 * dt.abs().max(f64::MIN_POSITIVE) {
                        return Err(EngineError::Domain(format!(
                            "shift times are not uniform at index {j}: {v} vs {expected}"
                        )));
                    }
                }
                Self::new(values[0], dt, n)
            }
        }
    }

    #[inline]
    pub fn time(&self, j: usize) -> f64 {
        self.t0 + j as f64 * self.dt
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn t_end(&self) -> f64 {
        self.time(self.len - 1)
    }

    #[inline]
    pub fn weight(&self, j: usize) -> f64 {
        if self.len == 1 {
            self.dt
        } else {
            quadrature::uniform_weight(j, self.len, self.dt)
        }
    }

    /// Index range of shifts within `[lo, hi]`.
    pub fn index_range(&self, lo: f64, hi: f64) -> std::ops::Range<usize> {
        let start = ((lo - self.t0) / self.dt).ceil().max(0.0);
        let end = ((hi - self.t0) / self.dt).floor() + 1.0;
        let start = (start as usize).min(self.len);
        let end = if end <= 0.0 {
            0
        } else {
            (end as usize).min(self.len)
        };
        start..end.max(start)
    }

    /// Index of the shift closest to `t`, clamped to the grid.
    pub fn nearest(&self, t: f64) -> usize {
        let j = ((t - self.t0) / self.dt).round();
        (j.max(0.0) as usize).min(self.len - 1)
    }
}
