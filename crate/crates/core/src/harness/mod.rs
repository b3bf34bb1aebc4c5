//! Benchmark and verification harness: workload generation, the
//! three-phase timing protocol, allocation metering, CSV output and
//! differential verification.

mod experiment;
mod meter;
mod registry;
mod report;
mod verify;
mod workload;

use std::path::PathBuf;

use thiserror::Error;

use crate::api::{ConfigError, Width};

pub use experiment::{average, reference_checksums, run_experiment, ExperimentResult, Measurement, RunCheck};
pub use meter::{available as meter_available, current_bytes, CountingAllocator, MeterScope};
pub use registry::{standard_specs, StructureKind, StructureSpec};
pub use report::{read_csv, write_csv, write_csv_file, COLUMNS};
pub use verify::{
    apply, first_divergence, minimize, random_ops, random_ops_within, verify, verify_within, Answer, Divergence, Op,
};
pub use workload::{generate, Workload, WorkloadSpec, INSERT_STREAM, QUERY_STREAM};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("unknown structure {0:?}")]
    UnknownStructure(String),
    #[error("{structure} does not support {width}-bit keys")]
    Unsupported { structure: &'static str, width: Width },
    #[error("bad parameter {0}")]
    Param(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("bad workload: {0}")]
    Workload(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Csv { path: PathBuf, source: csv::Error },
}
