// SPDX-License-Identifier: Apache-2.0

//! Report envelopes and file output.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::{RunConfig, Subcommand};
use crate::error::CliError;

/// Name of the only field allowed to differ between identical runs.
pub const TIMESTAMP_FIELD: &str = "timestamp";

/// CSV header of the per-radius limsup table.
pub const CSV_COLUMNS: [&str; 5] = ["r", "shell_sum", "lambda_member", "min_content_ratio", "qi_ratio_max"];

#[derive(Debug, Serialize)]
pub struct Report<'a, T: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: Subcommand,
    /// The fully resolved configuration (defaults filled, overrides applied).
    pub config: &'a RunConfig,
    pub result: T,
    pub timestamp: String,
}

impl<'a, T: Serialize> Report<'a, T> {
    pub fn new(subcommand: Subcommand, config: &'a RunConfig, result: T) -> Self {
        Self {
            tool: "wdi",
            version: env!("CARGO_PKG_VERSION"),
            subcommand,
            config,
            result,
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf, CliError> {
        fs::create_dir_all(dir)?;
        let path = dir.join(format!("{}.json", self.subcommand.name()));
        let mut text = serde_json::to_string_pretty(self).map_err(|e| CliError::Serialize(e.to_string()))?;
        text.push('\n');
        fs::write(&path, text)?;
        Ok(path)
    }
}

/// One row of the per-radius table; empty cells are written for missing
/// values.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub r: u64,
    pub shell_sum: f64,
    pub lambda_member: bool,
    pub min_content_ratio: Option<f64>,
    pub qi_ratio_max: Option<f64>,
}

fn cell(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn write_csv(path: &Path, rows: &[CsvRow]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| CliError::Serialize(e.to_string()))?;
    let err = |e: csv::Error| CliError::Serialize(e.to_string());
    w.write_record(CSV_COLUMNS).map_err(err)?;
    for row in rows {
        w.write_record([
            row.r.to_string(),
            row.shell_sum.to_string(),
            u8::from(row.lambda_member).to_string(),
            cell(row.min_content_ratio),
            cell(row.qi_ratio_max),
        ])
        .map_err(err)?;
    }
    w.flush()?;
    Ok(())
}

/// Parses a written report and drops the timestamp, for determinism checks.
pub fn strip_timestamp(text: &str) -> Result<serde_json::Value, serde_json::Error> {
    let mut v: serde_json::Value = serde_json::from_str(text)?;
    if let Some(obj) = v.as_object_mut() {
        obj.remove(TIMESTAMP_FIELD);
    }
    Ok(v)
}
