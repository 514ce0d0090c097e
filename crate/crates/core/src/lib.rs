//! Clustering time series by the total-variation distance between their
//! normalized spectral densities, with tools for segmenting wave records
//! into stationary sea states.
//!
//! The crate is split into:
//! - [`simkit`]: ARIMA, JONSWAP/Torsethaugen and transition-record simulation;
//! - [`estkit`]: ACF, periodogram, Parzen lag-window spectra, cepstra;
//! - [`distkit`]: dissimilarity measures and matrices;
//! - [`clusterkit`]: hierarchical clustering and validity indices;
//! - [`benchkit`]: Monte-Carlo comparison experiments;
//! - [`segmenter`]: the windowed segmentation pipeline.

pub mod benchkit;
pub mod clusterkit;
pub mod distkit;
mod error;
pub mod estkit;
pub mod quad;
pub mod segmenter;
pub mod seed;
mod series;
pub mod simkit;

pub use error::{Error, Result};
pub use series::{TimeSeries, BUOY_DT};
