//! Dissimilarity measures between series and spectra, and matrix assembly.
//!
//! TV, L1-log, the ACF distances and the periodogram distances are metrics.
//! The cepstral distance is the *squared* Euclidean distance and the
//! W-disparity is a quasi-distance; neither satisfies the triangle inequality.

mod divergence;
mod matrix;
mod measure;
mod smoother;

pub use divergence::{half_l1_distance, kl_divergence, l1_log_distance, tv_distance};
pub use matrix::{
    build_matrix, build_matrix_from_fn, build_spectral_matrix, DissimilarityMatrix,
    SpectralMeasure,
};
pub use measure::{
    acf_distance, cepstral_distance, isd_distance, normalized_parzen, periodogram_distance,
    w_disparity, AcfWeighting, Features, Measure, MeasureConfig, PeriodogramVariant,
};
pub use smoother::{local_linear, smooth_periodogram, w_function, w_tilde, SmoothedPeriodogram};
