use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::periodogram::Periodogram;
use super::spectrum::{floor_relative, SpectralDensity};
use crate::error::{degenerate, Result};
use crate::quad::trapezoid;

pub const DEFAULT_CEPSTRAL_COUNT: usize = 128;

/// Cosine coefficients `theta_0..=theta_p` of a log spectrum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CepstralCoeffs {
    theta: Vec<f64>,
}

impl CepstralCoeffs {
    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    /// Number of coefficients after `theta_0`.
    pub fn order(&self) -> usize {
        self.theta.len() - 1
    }
}

/// Coefficients of `log f` on the spectrum's own grid, mapped affinely onto `[0, 1]`.
pub fn cepstral_coeffs(spec: &SpectralDensity, p: usize) -> Result<CepstralCoeffs> {
    coeffs_from_samples(spec.grid(), spec.values(), p)
}

pub fn cepstral_coeffs_from_periodogram(pgram: &Periodogram, p: usize) -> Result<CepstralCoeffs> {
    coeffs_from_samples(pgram.freqs(), pgram.values(), p)
}

fn coeffs_from_samples(grid: &[f64], values: &[f64], p: usize) -> Result<CepstralCoeffs> {
    let floored = floor_relative(values);
    if floored.iter().any(|v| !(*v > 0.0)) {
        return Err(degenerate("log spectrum of an identically zero spectrum"));
    }
    let logs: Vec<f64> = floored.iter().map(|v| v.ln()).collect();
    let (lo, hi) = (grid[0], grid[grid.len() - 1]);
    let u: Vec<f64> = grid.iter().map(|w| (w - lo) / (hi - lo)).collect();
    let mut integrand = vec![0.0; u.len()];
    let theta = (0..=p)
        .map(|k| {
            let omega = 2.0 * PI * k as f64;
            for ((slot, &x), &l) in integrand.iter_mut().zip(&u).zip(&logs) {
                *slot = l * (omega * x).cos();
            }
            trapezoid(&u, &integrand)
        })
        .collect();
    Ok(CepstralCoeffs { theta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estkit::spectrum::{unit_grid, FreqUnit};

    #[test]
    fn constant_log_spectrum() {
        let g = unit_grid(513);
        let s = SpectralDensity::new(g, vec![2.5_f64.exp(); 513], FreqUnit::RadPerSample).unwrap();
        let c = cepstral_coeffs(&s, 128).unwrap();
        assert_eq!(c.order(), 128);
        assert!((c.theta()[0] - 2.5).abs() < 1e-6);
        for t in &c.theta()[1..] {
            assert!(t.abs() < 1e-6);
        }
    }

    #[test]
    fn single_cosine_log_spectrum() {
        let g = unit_grid(513);
        let v: Vec<f64> = g.iter().map(|w| (2.0 * PI * w / PI).cos().exp()).collect();
        let s = SpectralDensity::new(g, v, FreqUnit::RadPerSample).unwrap();
        let c = cepstral_coeffs(&s, 4).unwrap();
        assert!((c.theta()[1] - 0.5).abs() < 1e-6);
        assert!(c.theta()[2].abs() < 1e-6);
        assert!(c.theta()[0].abs() < 1e-6);
    }

    #[test]
    fn zero_spectrum_is_degenerate() {
        let s = SpectralDensity::new(unit_grid(9), vec![0.0; 9], FreqUnit::RadPerSample).unwrap();
        assert!(cepstral_coeffs(&s, 3).is_err());
    }
}
