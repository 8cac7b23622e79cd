//! Run configuration, command drivers, and the CSV/JSON run-directory format.

mod commands;
mod config;
mod output;

pub use commands::{run, RunOutcome, BACKEND, MEASUREMENT_TOLERANCE};
pub use config::{
    parse_config, Command, ConfigError, MeasurementBase, MeasurementSettings, RunConfig, DEFAULT_ETA,
    DEFAULT_OPERATORS, DEFAULT_OUTPUT_DIR,
};
pub use output::{
    complex_json, csv_text, entropy_row, fmt_f64, fmt_opt_f64, parse_records_csv, record_row, records_csv,
    spectra_file_name, spectra_json, with_files, write_records, RunDir, ENTROPY_COLUMNS, GBZ_COLUMNS, RECORD_COLUMNS,
    SCHEMA_VERSION, SWEEP_COLUMNS,
};

/// Process exit code for a rejected configuration or command line.
pub const EXIT_VALIDATION: i32 = 2;
/// Process exit code for a failed computation or unwritable output.
pub const EXIT_COMPUTATION: i32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("computation failed: {0}")]
    Computation(String),
    #[error(transparent)]
    Experiment(#[from] siec_experiments::ExperimentError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Usage(_) => EXIT_VALIDATION,
            _ => EXIT_COMPUTATION,
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Parse(e.to_string())
    }
}
