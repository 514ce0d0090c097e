use serde::{Deserialize, Serialize};

use crate::error::{degenerate, invalid, Result};
use crate::series::TimeSeries;

/// Sample autocorrelations at lags `0..=max_lag`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcfEstimate {
    rho: Vec<f64>,
}

impl AcfEstimate {
    #[cfg(test)]
    pub(crate) fn from_rho(rho: Vec<f64>) -> Self {
        Self { rho }
    }

    /// `rho[0] == 1`.
    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    pub fn max_lag(&self) -> usize {
        self.rho.len() - 1
    }

    pub fn at(&self, lag: usize) -> f64 {
        self.rho[lag]
    }
}

/// Biased (divide-by-`T`) sample autocovariances at lags `0..=max_lag`.
pub fn autocovariance(ts: &TimeSeries, max_lag: usize) -> Result<Vec<f64>> {
    let n = ts.len();
    if max_lag >= n {
        return Err(invalid(format!(
            "max lag {max_lag} must be smaller than the series length {n}"
        )));
    }
    let m = ts.mean();
    let centered: Vec<f64> = ts.samples().iter().map(|x| x - m).collect();
    let denom = n as f64;
    Ok((0..=max_lag)
        .map(|k| {
            centered[..n - k]
                .iter()
                .zip(&centered[k..])
                .map(|(a, b)| a * b)
                .sum::<f64>()
                / denom
        })
        .collect())
}

pub fn acf(ts: &TimeSeries, max_lag: usize) -> Result<AcfEstimate> {
    if ts.is_constant() {
        return Err(degenerate("autocorrelation of a constant series"));
    }
    let gamma = autocovariance(ts, max_lag)?;
    let g0 = gamma[0];
    let rho = gamma.iter().map(|g| g / g0).collect();
    Ok(AcfEstimate { rho })
}
