//! Experiment orchestration: metrics, restoration setups, hyperparameter
//! sweeps and the CSV / JSON report formats.

mod metrics;
pub mod report;
mod setup;
mod sweep;

pub use metrics::{extract_profiles, iterations_to_within, mae, restore_image, Profiles};
pub use setup::{RestorationSetup, SetupParams};
pub use sweep::{
    run_sweep, CellKey, CellResult, ExperimentMetadata, ExperimentResult, SweepGrid,
};
