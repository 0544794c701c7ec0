//! Configuration, file formats, synthetic experiments, validation on
//! held-out tests and report emission around the core pipeline.

mod config;
mod diagnostics;
mod params_io;
mod record_io;
mod reports;
mod study;
mod synthetic;
mod validation;

pub use config::{DiagnoseConfig, HardeningChoice, ExperimentsConfig, ModelSpec, Paths, RunConfig, SyntheticConfig, TestSpec};
pub use diagnostics::{
    diagnose, Criterion, CriterionEntry, DiagnosticThresholds, DiagnosticsReport, ModelSummary, Verdict,
    DIAGNOSTICS_SCHEMA,
};
pub use params_io::{read_params, write_params, ParameterFile};
pub use record_io::{read_record, read_record_csv, sidecar_path, write_record, RecordSidecar};
pub use reports::{
    emit_reports, read_cloud_csv, read_correlation_csv, write_cloud_csv, write_correlation_csv, write_fit_csv, CloudSummary,
    FitReport, ModelStudy,
};
pub use study::{analyze_cloud, calibrate, calibration_problem, load_tests, run_study, Calibration, Study};
pub use synthetic::{generate_synthetic_experiment, generate_synthetic_experiments, SyntheticNoise};
pub use validation::{run_validation, ValidationResult};

use std::path::PathBuf;

use thiserror::Error;

use crate::constitutive::ConstitutiveError;
use crate::identify::IdentifyError;
use crate::sensitivity::SensitivityError;
use crate::simulator::SimulationError;

#[derive(Debug, Error)]
pub enum WorkbenchError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
    #[error(transparent)]
    Constitutive(#[from] ConstitutiveError),
    #[error(transparent)]
    Simulation(#[from] SimulationError),
    #[error(transparent)]
    Identify(#[from] IdentifyError),
    #[error(transparent)]
    Sensitivity(#[from] SensitivityError),
}

impl WorkbenchError {
    /// Whether the failure reports a rank-deficient Jacobian, the hard
    /// overparametrization signal.
    pub fn is_rank_deficient(&self) -> bool {
        matches!(
            self,
            WorkbenchError::Identify(IdentifyError::RankDeficient { .. })
                | WorkbenchError::Sensitivity(SensitivityError::RankDeficient { .. })
                | WorkbenchError::Sensitivity(SensitivityError::ZeroColumn(_))
                | WorkbenchError::Sensitivity(SensitivityError::Identify(IdentifyError::RankDeficient { .. }))
        )
    }

    /// Whether the failure comes from the inputs rather than from numerics.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            WorkbenchError::Config(_)
                | WorkbenchError::Io { .. }
                | WorkbenchError::Json { .. }
                | WorkbenchError::Csv { .. }
                | WorkbenchError::Format { .. }
        )
    }
}

pub(crate) fn io_err(path: &std::path::Path) -> impl FnOnce(std::io::Error) -> WorkbenchError + '_ {
    move |source| WorkbenchError::Io { path: path.to_path_buf(), source }
}

pub(crate) fn json_err(path: &std::path::Path) -> impl FnOnce(serde_json::Error) -> WorkbenchError + '_ {
    move |source| WorkbenchError::Json { path: path.to_path_buf(), source }
}

pub(crate) fn csv_err(path: &std::path::Path) -> impl FnOnce(csv::Error) -> WorkbenchError + '_ {
    move |source| WorkbenchError::Csv { path: path.to_path_buf(), source }
}

/// Reads and deserializes a JSON file.
pub fn read_json<T: serde::de::DeserializeOwned>(path: &std::path::Path) -> Result<T, WorkbenchError> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    serde_json::from_str(&text).map_err(json_err(path))
}

/// Writes `value` as pretty JSON with a trailing newline.
pub fn write_json<T: serde::Serialize>(path: &std::path::Path, value: &T) -> Result<(), WorkbenchError> {
    let mut text = serde_json::to_string_pretty(value).map_err(json_err(path))?;
    text.push('\n');
    std::fs::write(path, text).map_err(io_err(path))
}
