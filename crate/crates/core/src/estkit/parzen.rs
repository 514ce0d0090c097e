use std::f64::consts::PI;

use super::acf::autocovariance;
use super::spectrum::{unit_grid, FreqUnit, SpectralDensity, DEFAULT_GRID_POINTS};
use crate::error::{degenerate, invalid, Result};
use crate::series::TimeSeries;

/// Default lag-truncation point.
pub const DEFAULT_BANDWIDTH: usize = 100;

/// Parzen lag window on `[-1, 1]`.
pub fn parzen_weight(u: f64) -> f64 {
    let a = u.abs();
    if a <= 0.5 {
        1.0 - 6.0 * a * a + 6.0 * a * a * a
    } else if a <= 1.0 {
        2.0 * (1.0 - a).powi(3)
    } else {
        0.0
    }
}

/// Lag-window estimate with the Parzen kernel truncated at `bandwidth` lags,
/// on the shared 513-point grid over `[0, pi]` (rad/sample). Not normalized.
pub fn parzen_spectrum(ts: &TimeSeries, bandwidth: usize) -> Result<SpectralDensity> {
    parzen_spectrum_on(ts, bandwidth, &unit_grid(DEFAULT_GRID_POINTS))
}

pub fn parzen_spectrum_on(ts: &TimeSeries, bandwidth: usize, grid: &[f64]) -> Result<SpectralDensity> {
    if bandwidth == 0 || bandwidth >= ts.len() {
        return Err(invalid(format!(
            "bandwidth {bandwidth} must be in 1..{} for a series of length {}",
            ts.len(),
            ts.len()
        )));
    }
    if ts.is_constant() {
        return Err(degenerate("spectrum of a constant series"));
    }
    let gamma = autocovariance(ts, bandwidth)?;
    let m = bandwidth as f64;
    let weighted: Vec<f64> = gamma
        .iter()
        .enumerate()
        .map(|(k, g)| parzen_weight(k as f64 / m) * g)
        .collect();
    let values = grid
        .iter()
        .map(|&lambda| {
            let tail: f64 = weighted[1..]
                .iter()
                .enumerate()
                .map(|(k, wg)| wg * ((k + 1) as f64 * lambda).cos())
                .sum();
            ((weighted[0] + 2.0 * tail) / (2.0 * PI)).max(0.0)
        })
        .collect();
    SpectralDensity::new(grid.to_vec(), values, FreqUnit::RadPerSample)
}

/// Parzen estimate with the bandwidth capped at `len - 1`, for short series.
pub fn parzen_spectrum_capped(ts: &TimeSeries, bandwidth: usize) -> Result<SpectralDensity> {
    parzen_spectrum(ts, bandwidth.min(ts.len() - 1))
}
