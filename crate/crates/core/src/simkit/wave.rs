//! Parametric ocean-wave spectra (one-sided, rad/s).
//!
//! The peak frequency follows [`PeakConvention`]: `omega_p = pi / tp` by default,
//! or the usual `omega_p = 2 pi / tp`. Both families are rescaled on the
//! evaluation grid so that `4 * sqrt(integral S) = hs`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::estkit::{FreqUnit, SpectralDensity};
use crate::quad::{linspace, trapezoid};

pub const GRAVITY: f64 = 9.81;

/// How the peak period `tp` maps to the peak angular frequency.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PeakConvention {
    /// `omega_p = pi / tp`.
    #[default]
    PiOverTp,
    /// `omega_p = 2 pi / tp`, so that `tp` is the period of the spectral peak.
    TwoPiOverTp,
}

impl PeakConvention {
    pub fn omega(self, tp: f64) -> f64 {
        match self {
            PeakConvention::PiOverTp => PI / tp,
            PeakConvention::TwoPiOverTp => 2.0 * PI / tp,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JonswapParams {
    pub hs: f64,
    pub tp: f64,
    #[serde(default = "default_g")]
    pub g: f64,
    #[serde(default)]
    pub convention: PeakConvention,
}

fn default_g() -> f64 {
    GRAVITY
}

impl JonswapParams {
    pub fn new(hs: f64, tp: f64) -> Result<Self> {
        Self::with_gravity(hs, tp, GRAVITY)
    }

    pub fn with_gravity(hs: f64, tp: f64, g: f64) -> Result<Self> {
        check_positive("hs", hs)?;
        check_positive("tp", tp)?;
        check_positive("g", g)?;
        Ok(Self { hs, tp, g, convention: PeakConvention::default() })
    }

    pub fn with_convention(mut self, convention: PeakConvention) -> Self {
        self.convention = convention;
        self
    }

    /// `3.6 sqrt(hs) <= tp <= 5 sqrt(hs)`: the range where the family models wind seas.
    pub fn is_wind_sea_range(&self) -> bool {
        let r = self.hs.sqrt();
        (3.6 * r..=5.0 * r).contains(&self.tp)
    }

    pub fn peak_frequency(&self) -> f64 {
        self.convention.omega(self.tp)
    }

    /// Peak enhancement factor.
    pub fn gamma(&self) -> f64 {
        let ratio = self.tp / self.hs.sqrt();
        (3.484 * (1.0 - 0.1975 * (0.036 - 0.0056 * ratio) * self.tp.powi(4) / (self.hs * self.hs)))
            .exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TorsethaugenParams {
    pub hs: f64,
    pub tp: f64,
    #[serde(default)]
    pub convention: PeakConvention,
}

impl TorsethaugenParams {
    pub fn new(hs: f64, tp: f64) -> Result<Self> {
        check_positive("hs", hs)?;
        check_positive("tp", tp)?;
        Ok(Self { hs, tp, convention: PeakConvention::default() })
    }

    pub fn with_convention(mut self, convention: PeakConvention) -> Self {
        self.convention = convention;
        self
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("{name} must be positive, got {v}")))
    }
}

/// Unscaled JONSWAP shape: `g^2 w^-5 exp(-5 wp^4 / 4 w^4) gamma^exp(-(w - wp)^2 / 2 wp^2 s^2)`.
fn jonswap_shape(omega: f64, wp: f64, gamma: f64, g: f64) -> f64 {
    if omega <= 0.0 {
        return 0.0;
    }
    let s = if omega <= wp { 0.07 } else { 0.09 };
    let r = wp / omega;
    let pm = g * g / omega.powi(5) * (-1.25 * r.powi(4)).exp();
    let peak = (-(omega - wp).powi(2) / (2.0 * wp * wp * s * s)).exp();
    pm * gamma.powf(peak)
}

fn rescale_to_hs(grid: &[f64], mut values: Vec<f64>, hs: f64) -> Result<SpectralDensity> {
    let area = trapezoid(grid, &values);
    if !(area > 0.0) {
        return Err(invalid("wave spectrum grid misses the spectral peak entirely"));
    }
    let c = (hs / 4.0).powi(2) / area;
    values.iter_mut().for_each(|v| *v *= c);
    SpectralDensity::new(grid.to_vec(), values, FreqUnit::RadPerSecond)
}

fn check_wave_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < 2 || grid[0] < 0.0 {
        return Err(invalid("wave spectrum grid must have >= 2 nonnegative frequencies"));
    }
    Ok(())
}

pub fn jonswap_spectrum(params: &JonswapParams, grid: &[f64]) -> Result<SpectralDensity> {
    check_wave_grid(grid)?;
    let (wp, gamma) = (params.peak_frequency(), params.gamma());
    let values = grid
        .iter()
        .map(|&w| jonswap_shape(w, wp, gamma, params.g))
        .collect();
    rescale_to_hs(grid, values, params.hs)
}

/// One peak of a two-peak spectrum: JONSWAP shape carrying variance `(h / 4)^2`.
struct Peak {
    h: f64,
    wp: f64,
    gamma: f64,
}

impl Peak {
    fn density(&self, omega: f64, scale: f64) -> f64 {
        scale * jonswap_shape(omega, self.wp, self.gamma, GRAVITY)
    }

    /// Constant that gives the shape unit area, from a fine reference quadrature.
    fn unit_scale(&self) -> f64 {
        let wp = self.wp;
        let x = linspace(0.0, 40.0 * wp, 40_001);
        let y: Vec<f64> = x.iter().map(|&w| jonswap_shape(w, wp, self.gamma, GRAVITY)).collect();
        (self.h / 4.0).powi(2) / trapezoid(&x, &y)
    }
}

/// Swell and wind-sea peaks following the Torsethaugen parameterization.
fn torsethaugen_peaks(p: &TorsethaugenParams) -> [Peak; 2] {
    const AF: f64 = 6.6;
    const AL: f64 = 2.0;
    const AU: f64 = 25.0;
    const KG: f64 = 35.0;
    const KG0: f64 = 3.5;
    const KG1: f64 = 1.0;
    const R: f64 = 0.857;
    const K0: f64 = 0.5;
    const K00: f64 = 3.2;
    const B1: f64 = 2.0;
    const S0: f64 = 0.08;
    const S1: f64 = 3.0;

    let hm0 = p.hs;
    let tpf = AF * hm0.cbrt();
    let tl = AL * hm0.sqrt();
    let gamma_base = KG * (1.0 + KG0 * (-hm0 / KG1).exp());
    let w = |tp: f64| p.convention.omega(tp);

    if p.tp <= tpf {
        // wind-dominated: primary wind sea at tp, secondary swell
        let el = ((tpf - p.tp) / (tpf - tl)).max(0.0);
        let rpw = ((1.0 - R) * (-(el / 0.3).powi(2)).exp() + R).min(1.0);
        let gamma_w =
            (gamma_base * (2.0 * PI / GRAVITY * rpw * hm0 / (p.tp * p.tp)).powf(R)).max(1.0);
        let rps = (1.0 - rpw * rpw).max(0.0).sqrt();
        [
            Peak { h: rpw * hm0, wp: w(p.tp), gamma: gamma_w },
            Peak { h: rps * hm0, wp: w(tpf + B1), gamma: 1.0 },
        ]
    } else {
        // swell-dominated: primary swell at tp, secondary wind sea
        let eu = ((p.tp - tpf) / (AU - tpf)).clamp(0.0, 1.0);
        let rps = ((1.0 - R) * (-(eu / 0.3).powi(2)).exp() + R).min(1.0);
        let gamma_s = (gamma_base * (2.0 * PI / GRAVITY * hm0 / (tpf * tpf)).powf(R)
            * (1.0 + 6.0 * eu))
            .max(1.0);
        let rpw = (1.0 - rps * rps).max(0.0).sqrt();
        let hpw = (rpw * hm0).max(1e-6 * hm0);
        let nw = K0 * hm0.sqrt() + K00;
        let tpw = (16.0 * S0 * (1.0 - (-hm0 / S1).exp()) * 0.4f64.powf(nw)
            / (GRAVITY * hpw * hpw))
            .powf(-1.0 / (nw - 1.0));
        [
            Peak { h: rps * hm0, wp: w(p.tp), gamma: gamma_s },
            Peak { h: hpw, wp: w(tpw.min(tpf)), gamma: 1.0 },
        ]
    }
}

pub fn torsethaugen_spectrum(params: &TorsethaugenParams, grid: &[f64]) -> Result<SpectralDensity> {
    check_wave_grid(grid)?;
    let peaks = torsethaugen_peaks(params);
    let scales: Vec<f64> = peaks.iter().map(Peak::unit_scale).collect();
    let values = grid
        .iter()
        .map(|&w| peaks.iter().zip(&scales).map(|(p, &c)| p.density(w, c)).sum())
        .collect();
    rescale_to_hs(grid, values, params.hs)
}
