//! Synthetic inputs: ARIMA realizations, Gaussian series with prescribed wave
//! spectra, and multi-phase records with slow transitions.

mod arima;
mod synth;
mod transition;
mod wave;

pub use arima::{arma_spectrum, simulate_arima, ArimaModel};
pub use synth::simulate_from_spectrum;
pub use transition::{
    save_series_csv, simulate_transition_record, write_series_csv, Phase, SpectrumSpec,
    TransitionMode, TransitionRecord, TransitionScenario, WindowLabel,
};
pub use wave::{
    jonswap_spectrum, torsethaugen_spectrum, JonswapParams, PeakConvention, TorsethaugenParams,
    GRAVITY,
};
