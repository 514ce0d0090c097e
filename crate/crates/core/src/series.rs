use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Default sampling interval for buoy records: 1.28 Hz.
pub const BUOY_DT: f64 = 1.0 / 1.28;

/// A uniformly sampled, finite, real-valued record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    samples: Vec<f64>,
    dt: f64,
}

impl TimeSeries {
    pub fn new(samples: Vec<f64>, dt: f64) -> Result<Self> {
        if samples.len() < 2 {
            return Err(invalid(format!(
                "a time series needs at least 2 samples, got {}",
                samples.len()
            )));
        }
        if !(dt.is_finite() && dt > 0.0) {
            return Err(invalid(format!("sampling interval must be positive, got {dt}")));
        }
        if let Some(i) = samples.iter().position(|x| !x.is_finite()) {
            return Err(invalid(format!("sample {i} is not finite")));
        }
        Ok(Self { samples, dt })
    }

    /// Unit sampling interval, as used for the statistical (ARMA) experiments.
    pub fn unit(samples: Vec<f64>) -> Result<Self> {
        Self::new(samples, 1.0)
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Record length in seconds (`len * dt`).
    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 * self.dt
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.len() as f64
    }

    /// Variance with divisor `len`.
    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.samples.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / self.len() as f64
    }

    pub fn std_dev(&self) -> f64 {
        self.variance().sqrt()
    }

    pub fn is_constant(&self) -> bool {
        let first = self.samples[0];
        self.samples.iter().all(|&x| x == first)
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            samples: self.samples.iter().map(|x| c * x).collect(),
            dt: self.dt,
        }
    }

    pub fn reversed(&self) -> Self {
        let mut samples = self.samples.clone();
        samples.reverse();
        Self { samples, dt: self.dt }
    }

    /// Sub-record `[start, start + len)`.
    pub fn slice(&self, start: usize, len: usize) -> Result<Self> {
        if start + len > self.len() {
            return Err(invalid(format!(
                "slice [{start}, {}) exceeds series length {}",
                start + len,
                self.len()
            )));
        }
        Self::new(self.samples[start..start + len].to_vec(), self.dt)
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }
}
