//! Seeded experiments: configuration, execution, logs and summaries.

mod config;
mod log;
mod run;
mod seed;
mod summary;

pub use config::{ExperimentConfig, Learner, RunManifest};
pub use log::{format_g9, write_csv, write_log, CSV_HEADER};
pub use run::{run_experiment, Execution, Experiment, LearnerState, ReplicationRun, StepRecord};
pub use seed::seed_stream;
pub use summary::{running_mean, terminal_mean, Metric};
