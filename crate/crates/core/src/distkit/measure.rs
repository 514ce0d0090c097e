use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::divergence::{l1_log_distance, tv_distance};
use super::smoother::{isd_smoothed, smooth, w_disparity_smoothed, SmoothedPeriodogram};
use crate::error::{invalid, Result};
use crate::estkit::{
    acf, cepstral_coeffs, floor_relative, parzen_spectrum_capped, periodogram, AcfEstimate,
    CepstralCoeffs, Periodogram, SpectralDensity, DEFAULT_BANDWIDTH, DEFAULT_CEPSTRAL_COUNT,
};
use crate::series::TimeSeries;

/// Every series dissimilarity the crate implements, in report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Measure {
    #[serde(rename = "ACFU")]
    Acfu,
    #[serde(rename = "ACFG")]
    Acfg,
    #[serde(rename = "P")]
    P,
    #[serde(rename = "NP")]
    Np,
    #[serde(rename = "LP")]
    Lp,
    #[serde(rename = "LNP")]
    Lnp,
    #[serde(rename = "CEP")]
    Cep,
    #[serde(rename = "TV")]
    Tv,
    #[serde(rename = "L1")]
    L1,
    #[serde(rename = "W(DLS)")]
    WDls,
    #[serde(rename = "ISD")]
    Isd,
}

impl Measure {
    pub const ALL: [Measure; 11] = [
        Measure::Acfu,
        Measure::Acfg,
        Measure::P,
        Measure::Np,
        Measure::Lp,
        Measure::Lnp,
        Measure::Cep,
        Measure::Tv,
        Measure::L1,
        Measure::WDls,
        Measure::Isd,
    ];

    /// The nine measures compared in the ARMA experiments.
    pub const BASIC: [Measure; 9] = [
        Measure::Acfu,
        Measure::Acfg,
        Measure::P,
        Measure::Np,
        Measure::Lp,
        Measure::Lnp,
        Measure::Cep,
        Measure::Tv,
        Measure::L1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Acfu => "ACFU",
            Measure::Acfg => "ACFG",
            Measure::P => "P",
            Measure::Np => "NP",
            Measure::Lp => "LP",
            Measure::Lnp => "LNP",
            Measure::Cep => "CEP",
            Measure::Tv => "TV",
            Measure::L1 => "L1",
            Measure::WDls => "W(DLS)",
            Measure::Isd => "ISD",
        }
    }

    /// Whether the measure satisfies the triangle inequality.
    pub fn is_metric(self) -> bool {
        !matches!(self, Measure::Cep | Measure::WDls)
    }

    /// Whether `d(x, c y) = d(x, y)` for every `c > 0`.
    pub fn is_scale_invariant(self) -> bool {
        matches!(
            self,
            Measure::Acfu | Measure::Acfg | Measure::Np | Measure::Lnp | Measure::Tv | Measure::L1
        )
    }

    /// Whether the measure needs equal-length series.
    pub fn needs_equal_length(self) -> bool {
        !matches!(self, Measure::Acfu | Measure::Acfg | Measure::Tv | Measure::L1 | Measure::Cep)
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_uppercase();
        let m = match key.as_str() {
            "ACFU" => Measure::Acfu,
            "ACFG" => Measure::Acfg,
            "P" => Measure::P,
            "NP" => Measure::Np,
            "LP" => Measure::Lp,
            "LNP" => Measure::Lnp,
            "CEP" => Measure::Cep,
            "TV" => Measure::Tv,
            "L1" | "L¹" => Measure::L1,
            "W(DLS)" | "WDLS" | "W" => Measure::WDls,
            "ISD" => Measure::Isd,
            _ => return Err(invalid(format!("unknown measure {s:?}"))),
        };
        Ok(m)
    }
}

/// Tuning parameters shared by all measures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureConfig {
    pub acf_max_lag: usize,
    pub acf_geo_p: f64,
    pub cep_p: usize,
    pub w_alpha: f64,
    /// Epanechnikov half-width for the local-linear smoothers, rad/sample.
    pub smoother_bandwidth: f64,
    /// Parzen truncation lag; capped at `len - 1` for short series.
    pub parzen_bandwidth: usize,
}

impl Default for MeasureConfig {
    fn default() -> Self {
        Self {
            acf_max_lag: 25,
            acf_geo_p: 0.05,
            cep_p: DEFAULT_CEPSTRAL_COUNT,
            w_alpha: 0.5,
            smoother_bandwidth: 0.1 * std::f64::consts::PI,
            parzen_bandwidth: DEFAULT_BANDWIDTH,
        }
    }
}

impl MeasureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.acf_geo_p > 0.0 && self.acf_geo_p < 1.0) {
            return Err(invalid(format!("acf_geo_p must be in (0, 1), got {}", self.acf_geo_p)));
        }
        if !(self.w_alpha > 0.0 && self.w_alpha < 1.0) {
            return Err(invalid(format!("w_alpha must be in (0, 1), got {}", self.w_alpha)));
        }
        if !(self.smoother_bandwidth > 0.0) {
            return Err(invalid("smoother bandwidth must be positive"));
        }
        if self.acf_max_lag == 0 || self.parzen_bandwidth == 0 {
            return Err(invalid("lags must be positive"));
        }
        Ok(())
    }
}

/// ACF weighting scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AcfWeighting {
    Uniform,
    Geometric(f64),
}

/// Periodogram-based variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeriodogramVariant {
    Raw,
    Normalized,
    Log,
    LogNormalized,
}

/// Per-series summary that a measure compares.
#[derive(Debug, Clone)]
pub enum Features {
    Acf(AcfEstimate),
    Ordinates(Vec<f64>),
    Cepstrum(CepstralCoeffs),
    Spectrum(SpectralDensity),
    Smoothed(SmoothedPeriodogram),
}

fn variant_ordinates(p: &Periodogram, variant: PeriodogramVariant) -> Vec<f64> {
    match variant {
        PeriodogramVariant::Raw => p.values().to_vec(),
        PeriodogramVariant::Normalized => p.normalized_values(),
        PeriodogramVariant::Log => floor_relative(p.values()).iter().map(|v| v.ln()).collect(),
        PeriodogramVariant::LogNormalized => floor_relative(&p.normalized_values())
            .iter()
            .map(|v| v.ln())
            .collect(),
    }
}

/// Normalized Parzen spectrum on the shared grid.
pub fn normalized_parzen(ts: &TimeSeries, cfg: &MeasureConfig) -> Result<SpectralDensity> {
    parzen_spectrum_capped(ts, cfg.parzen_bandwidth)?.normalize()
}

impl Measure {
    pub fn features(self, ts: &TimeSeries, cfg: &MeasureConfig) -> Result<Features> {
        Ok(match self {
            Measure::Acfu | Measure::Acfg => Features::Acf(acf(ts, cfg.acf_max_lag)?),
            Measure::P => Features::Ordinates(variant_ordinates(&periodogram(ts)?, PeriodogramVariant::Raw)),
            Measure::Np => Features::Ordinates(variant_ordinates(&periodogram(ts)?, PeriodogramVariant::Normalized)),
            Measure::Lp => Features::Ordinates(variant_ordinates(&periodogram(ts)?, PeriodogramVariant::Log)),
            Measure::Lnp => Features::Ordinates(variant_ordinates(&periodogram(ts)?, PeriodogramVariant::LogNormalized)),
            Measure::Cep => Features::Cepstrum(cepstral_coeffs(
                &parzen_spectrum_capped(ts, cfg.parzen_bandwidth)?,
                cfg.cep_p,
            )?),
            Measure::Tv | Measure::L1 => Features::Spectrum(normalized_parzen(ts, cfg)?),
            Measure::WDls => Features::Smoothed(smooth(&periodogram(ts)?, cfg.smoother_bandwidth, false)),
            Measure::Isd => Features::Smoothed(smooth(&periodogram(ts)?, cfg.smoother_bandwidth, true)),
        })
    }

    pub fn compare(self, a: &Features, b: &Features, cfg: &MeasureConfig) -> Result<f64> {
        match (self, a, b) {
            (Measure::Acfu, Features::Acf(x), Features::Acf(y)) => {
                Ok(acf_vector_distance(x, y, AcfWeighting::Uniform, cfg.acf_max_lag))
            }
            (Measure::Acfg, Features::Acf(x), Features::Acf(y)) => Ok(acf_vector_distance(
                x,
                y,
                AcfWeighting::Geometric(cfg.acf_geo_p),
                cfg.acf_max_lag,
            )),
            (
                Measure::P | Measure::Np | Measure::Lp | Measure::Lnp,
                Features::Ordinates(x),
                Features::Ordinates(y),
            ) => ordinate_distance(x, y),
            (Measure::Cep, Features::Cepstrum(x), Features::Cepstrum(y)) => {
                Ok(x.theta().iter().zip(y.theta()).map(|(a, b)| (a - b) * (a - b)).sum())
            }
            (Measure::Tv, Features::Spectrum(x), Features::Spectrum(y)) => tv_distance(x, y),
            (Measure::L1, Features::Spectrum(x), Features::Spectrum(y)) => l1_log_distance(x, y),
            (Measure::WDls, Features::Smoothed(x), Features::Smoothed(y)) => {
                check_same_freqs(x, y)?;
                w_disparity_smoothed(x, y, cfg.w_alpha)
            }
            (Measure::Isd, Features::Smoothed(x), Features::Smoothed(y)) => {
                check_same_freqs(x, y)?;
                Ok(isd_smoothed(x, y))
            }
            _ => Err(invalid(format!("features do not match measure {self}"))),
        }
    }

    /// `d(x, y)` computed from scratch.
    pub fn distance(self, x: &TimeSeries, y: &TimeSeries, cfg: &MeasureConfig) -> Result<f64> {
        if self.needs_equal_length() && x.len() != y.len() {
            return Err(invalid(format!(
                "{self} needs equal-length series, got {} and {}",
                x.len(),
                y.len()
            )));
        }
        self.compare(&self.features(x, cfg)?, &self.features(y, cfg)?, cfg)
    }
}

fn check_same_freqs(x: &SmoothedPeriodogram, y: &SmoothedPeriodogram) -> Result<()> {
    if x.freqs != y.freqs {
        return Err(invalid("series lengths differ, so the Fourier grids do not match"));
    }
    Ok(())
}

fn acf_vector_distance(x: &AcfEstimate, y: &AcfEstimate, weighting: AcfWeighting, lags: usize) -> f64 {
    (1..=lags)
        .map(|i| {
            let w = match weighting {
                AcfWeighting::Uniform => 1.0,
                AcfWeighting::Geometric(p) => p * (1.0 - p).powi(i as i32),
            };
            let d = x.at(i) - y.at(i);
            w * d * d
        })
        .sum::<f64>()
        .sqrt()
}

fn ordinate_distance(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(invalid("periodograms have different lengths"));
    }
    let ss: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok(ss.sqrt() / x.len() as f64)
}

/// `sqrt(sum w_i (rho_x(i) - rho_y(i))^2)` over lags `1..=max_lag`.
pub fn acf_distance(x: &TimeSeries, y: &TimeSeries, weighting: AcfWeighting, max_lag: usize) -> Result<f64> {
    if let AcfWeighting::Geometric(p) = weighting {
        if !(p > 0.0 && p < 1.0) {
            return Err(invalid(format!("geometric weight p must be in (0, 1), got {p}")));
        }
    }
    Ok(acf_vector_distance(&acf(x, max_lag)?, &acf(y, max_lag)?, weighting, max_lag))
}

/// `(1 / n) sqrt(sum (a_k - b_k)^2)` over periodogram-derived ordinates.
pub fn periodogram_distance(x: &TimeSeries, y: &TimeSeries, variant: PeriodogramVariant) -> Result<f64> {
    if x.len() != y.len() {
        return Err(invalid(format!(
            "periodogram distance needs equal lengths, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    ordinate_distance(
        &variant_ordinates(&periodogram(x)?, variant),
        &variant_ordinates(&periodogram(y)?, variant),
    )
}

/// Squared Euclidean distance between cepstral coefficients `theta_0..=theta_p`
/// of the Parzen spectra.
pub fn cepstral_distance(x: &TimeSeries, y: &TimeSeries, p: usize) -> Result<f64> {
    let cfg = MeasureConfig { cep_p: p, ..MeasureConfig::default() };
    Measure::Cep.distance(x, y, &cfg)
}

/// W-disparity between local-linear least-squares smoothed periodograms.
pub fn w_disparity(x: &TimeSeries, y: &TimeSeries, alpha: f64, bandwidth: f64) -> Result<f64> {
    let cfg = MeasureConfig { w_alpha: alpha, smoother_bandwidth: bandwidth, ..MeasureConfig::default() };
    cfg.validate()?;
    Measure::WDls.distance(x, y, &cfg)
}

/// Integrated squared difference of local-linear smoothed log-periodograms.
pub fn isd_distance(x: &TimeSeries, y: &TimeSeries, bandwidth: f64) -> Result<f64> {
    let cfg = MeasureConfig { smoother_bandwidth: bandwidth, ..MeasureConfig::default() };
    cfg.validate()?;
    Measure::Isd.distance(x, y, &cfg)
}
