//! Cross-validation engine, report aggregation, statistics and the
//! size-sweep, noise and synthetic studies.

mod cv;
mod report;
mod stats;
mod studies;

pub use cv::{load_datasets, network_config_for, run_cv, run_path, size_sweep, CellResult};
pub use report::{aggregate, error_ratios, sweep_curve, CurvePoint, ReportRow, COMPOSITE};
pub use stats::{correlation_matrix, error_rate, mean_sd, sign_counts, sign_test, CorrelationMatrix};
pub use studies::{noise_seed, noise_study, synthetic_study, NoiseRow, SyntheticOptions, SyntheticRow, NOISE_METHODS};

pub(crate) use report::aggregate_runs;
