//! Monte-Carlo comparisons of the dissimilarity measures and the transition
//! study, with tabular output.

mod experiment;
mod models;
mod table;

pub use experiment::{
    run_experiment, run_experiment1, run_experiment2, run_experiment3, run_transition,
    ExperimentId, ExperimentSpec, MAX_FAILURE_RATE,
};
pub use models::{experiment1_models, experiment2_models, experiment3_spectra};
pub use table::{emit_table, CountTable, ResultTable, ScoreRow, TableFormat};
