//! Experiment runner: configuration, scheduling, persistence and output
//! formats behind the `froglab` binary.

mod config;
mod format;
mod run;
mod show;
mod verify;

use std::path::{Path, PathBuf};

use thiserror::Error;

pub use config::{ExperimentConfig, FieldKind, Kind, PercParams, SimParams, Suite, VerifyParams};
pub use format::{csv_line, format_real};
pub use run::{run, RunSummary};
pub use show::show;
pub use verify::{exhaustive_path_weight, verify, SuiteReport, VerifyReport};

#[derive(Debug, Error)]
pub enum LabError {
    #[error("config error: {}", describe(*line, msg))]
    Config { line: usize, msg: String },
    #[error("computation failed: {0}")]
    Failed(String),
    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn describe(line: usize, msg: &str) -> String {
    if line == 0 {
        msg.to_string()
    } else {
        format!("line {line}: {msg}")
    }
}

impl LabError {
    pub fn config(line: usize, msg: impl Into<String>) -> Self {
        LabError::Config {
            line,
            msg: msg.into(),
        }
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        LabError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    /// Process exit status for this failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Config { .. } | LabError::Failed(_) => 2,
            LabError::Io { .. } => 4,
        }
    }
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig, LabError> {
    let text = std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
    ExperimentConfig::parse(&text)
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<(), LabError> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, contents).map_err(|e| LabError::io(&tmp, e))?;
    std::fs::rename(&tmp, path).map_err(|e| LabError::io(path, e))
}

pub(crate) fn unix_now() -> f64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0)
}
