//! Spectral estimation: autocorrelations, periodograms, Parzen lag-window
//! spectra, cepstral coefficients, and the [`SpectralDensity`] container.

mod acf;
mod cepstrum;
mod parzen;
mod periodogram;
mod spectrum;

pub use acf::{acf, autocovariance, AcfEstimate};
pub use cepstrum::{
    cepstral_coeffs, cepstral_coeffs_from_periodogram, CepstralCoeffs, DEFAULT_CEPSTRAL_COUNT,
};
pub use parzen::{
    parzen_spectrum, parzen_spectrum_capped, parzen_spectrum_on, parzen_weight, DEFAULT_BANDWIDTH,
};
pub use periodogram::{periodogram, Periodogram};
pub use spectrum::{physical_grid, unit_grid, FreqUnit, SpectralDensity, DEFAULT_GRID_POINTS};

pub(crate) use spectrum::floor_relative;

/// Normalize a spectrum to unit trapezoid integral.
pub fn normalize(spec: &SpectralDensity) -> crate::Result<SpectralDensity> {
    spec.normalize()
}

/// Linear-interpolation regridding; see [`SpectralDensity::regrid`].
pub fn regrid(spec: &SpectralDensity, grid: &[f64]) -> crate::Result<SpectralDensity> {
    spec.regrid(grid)
}
