//! Experiment runner: builds objectives and optimizers from an
//! [`ExperimentSpec`], runs every cell, and writes CSV traces, summaries and
//! geometry reports.

pub mod grids;
mod rows;
mod runner;
mod spec;
mod summary;

pub use grids::verify_geometry;
pub use rows::{
    read_csv, write_csv, CsvSink, GeometryRow, SummaryRow, TraceRow, GEOMETRY_COLUMNS, SUMMARY_COLUMNS,
    TRACE_COLUMNS,
};
pub use runner::{
    gap_equivalent_target, run_experiment, run_single, standard_diameter, standard_start, summary_path,
    ExperimentReport, RunRequest,
};
pub use spec::{Algorithm, ExperimentName, ExperimentSpec};
pub use summary::{lower_median, lower_quantile, summarize_rows, summarize_traces};

/// Seed from `GLD_SEED`, or `fallback` when it is unset or unparsable.
pub fn default_seed(fallback: u64) -> u64 {
    std::env::var("GLD_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(fallback)
}

/// Dimension grid used when an experiment does not name one.
pub const DEFAULT_DIMS: [usize; 4] = [10, 20, 50, 100];
