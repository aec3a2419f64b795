// SPDX-License-Identifier: Apache-2.0

//! Batch front end for `wdi-core`: JSON configuration, rayon-parallel
//! drivers, JSON/CSV reports and the `wdi` binary.
//!
//! Reports are deterministic: for a fixed configuration and seed, every
//! field except `timestamp` is byte-identical across runs and worker counts.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod drive;
pub mod error;
pub mod report;

pub use config::{Resolved, RunConfig, Subcommand};
pub use error::CliError;
