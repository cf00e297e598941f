//! Monte Carlo experiment driver: for each measurement fraction, draw S
//! sensing matrices and T signals per matrix, run the configured algorithms
//! and aggregate.

mod config;
mod results;
mod sweep;
mod trial;

pub use config::{parse_entries, parse_entry, ExperimentConfig};
pub use results::{build_identifier, manifest_path, manifest_text, SweepCell, SweepResult, CSV_HEADER};
pub use sweep::{run_sweep, run_sweep_with_progress, AlphaAggregate, Progress, Sweep};
pub use trial::run_trial;
