// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.


use geoprior::curvature::CurvatureError;
use geoprior::distortion::DistortionError;
use geoprior::generators::GeneratorError;
use geoprior::{GraphError, GrowthError, RegularizeError};
use thiserror::Error;

/// Failure of a subcommand, classified by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Invalid flags or parameter values; exit code 2.
    #[error("configuration error: {0}")]
    Config(String),
    /// Malformed graph or embedding input; exit code 3.
    #[error("input error: {0}")]
    Parse(String),
    /// The analysis itself failed; exit code 4.
    #[error("analysis error: {0}")]
    Analysis(String),
    /// Reading or writing a file failed; exit code 5.
    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Parse(_) => 3,
            CliError::Analysis(_) => 4,
            CliError::Io { .. } => 5,
        }
    }

    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::InvalidRadius(_) => CliError::Config(e.to_string()),
            _ => CliError::Parse(e.to_string()),
        }
    }
}

impl From<GrowthError> for CliError {
    fn from(e: GrowthError) -> Self {
        match e {
            GrowthError::RadiusTooSmall(_) | GrowthError::InvalidRadius(_) | GrowthError::InvalidTolerance(_) => {
                CliError::Config(e.to_string())
            }
            _ => CliError::Analysis(e.to_string()),
        }
    }
}

impl From<GeneratorError> for CliError {
    fn from(e: GeneratorError) -> Self {
        match e {
            GeneratorError::InvalidParameter(_) | GeneratorError::Parse { .. } | GeneratorError::NoTrials => {
                CliError::Config(e.to_string())
            }
            GeneratorError::Growth(g) => g.into(),
            other => CliError::Analysis(other.to_string()),
        }
    }
}

impl From<RegularizeError> for CliError {
    fn from(e: RegularizeError) -> Self {
        CliError::Analysis(e.to_string())
    }
}

impl From<CurvatureError> for CliError {
    fn from(e: CurvatureError) -> Self {
        CliError::Analysis(e.to_string())
    }
}

impl From<DistortionError> for CliError {
    fn from(e: DistortionError) -> Self {
        use DistortionError::*;
        match e {
            InvalidCurvature(_) => CliError::Config(e.to_string()),
            MissingNode(_) | Disconnected(..) | IsolatedNode(_) => CliError::Analysis(e.to_string()),
            _ => CliError::Parse(e.to_string()),
        }
    }
}
