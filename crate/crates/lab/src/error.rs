// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error at {field}: {message}")]
    Config { field: String, message: String },

    #[error("{0}")]
    Engine(wdi_core::Error),

    #[error("budget exceeded: {0}")]
    Budget(wdi_core::Error),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serialize(String),
}

impl CliError {
    /// 2 for configuration and validation problems, 3 for an exceeded
    /// enumeration budget, 4 when an engine property check fails.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::Engine(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Invariant(_) => 4,
            CliError::Io(_) | CliError::Serialize(_) => 1,
        }
    }
}

impl From<wdi_core::Error> for CliError {
    fn from(e: wdi_core::Error) -> Self {
        match e {
            wdi_core::Error::Budget { .. } => CliError::Budget(e),
            other => CliError::Engine(other),
        }
    }
}
