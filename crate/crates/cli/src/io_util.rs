//! File handling and the exit-code error type.

use std::fs;
use std::path::Path;

use thiserror::Error;

use swaplab_core::embed::DistanceMatrix;
use swaplab_core::facility::InstanceFile;
use swaplab_core::reduce::ReductionArtifact;
use swaplab_core::satcore::SatInstance;
use swaplab_core::LocationInstance;

/// Errors carrying the process exit code: 1 verification failure, 2 usage
/// or parse problems, 3 guard exceeded.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    VerifyFailed(String),
    #[error("{0}")]
    Guard(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::VerifyFailed(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Guard(_) => 3,
        }
    }

    pub fn usage(err: impl std::fmt::Display) -> Self {
        CliError::Usage(err.to_string())
    }
}

/// Writes atomically: the content lands in a sibling temp file first and is
/// renamed over the target.
pub fn atomic_write(path: &str, content: &str) -> Result<(), CliError> {
    let target = Path::new(path);
    let mut tmp = target.as_os_str().to_owned();
    tmp.push(".tmp");
    fs::write(&tmp, content)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", tmp.to_string_lossy())))?;
    fs::rename(&tmp, target)
        .map_err(|e| CliError::Usage(format!("cannot rename into {path}: {e}")))?;
    Ok(())
}

pub fn read_file(path: &str) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {path}: {e}")))
}

/// Any input an instance-consuming command accepts.
pub enum LoadedInput {
    Sat(SatInstance),
    /// A facility instance, with the reduction artifact when the file
    /// carried one.
    Facility(Box<LocationInstance>, Option<Box<ReductionArtifact>>),
    Matrix(DistanceMatrix),
}

/// Loads an input file by extension: `.wsat2` as a SAT instance, `.json`
/// as an instance (with optional reduction block), `.csv` as a raw matrix.
pub fn load_input(path: &str) -> Result<LoadedInput, CliError> {
    let text = read_file(path)?;
    if path.ends_with(".wsat2") {
        return Ok(LoadedInput::Sat(
            SatInstance::parse_wsat2(&text).map_err(CliError::usage)?,
        ));
    }
    if path.ends_with(".csv") {
        return Ok(LoadedInput::Matrix(
            DistanceMatrix::parse_csv(&text).map_err(CliError::usage)?,
        ));
    }
    if path.ends_with(".json") {
        let file = InstanceFile::from_json(&text).map_err(CliError::usage)?;
        let instance = file.to_instance().map_err(CliError::usage)?;
        let artifact = if file.reduction.is_some() {
            Some(Box::new(
                ReductionArtifact::from_file(&file).map_err(CliError::usage)?,
            ))
        } else {
            None
        };
        return Ok(LoadedInput::Facility(Box::new(instance), artifact));
    }
    Err(CliError::Usage(format!(
        "unrecognized input extension for {path} (expected .wsat2, .json or .csv)"
    )))
}
