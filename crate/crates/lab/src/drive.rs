// SPDX-License-Identifier: Apache-2.0

//! Data-parallel versions of the heavier engine loops.
//!
//! Work is split over shells or over sample-index chunks; results are
//! collected in index order (or are exact integer counts), so the output does
//! not depend on the number of worker threads.

use rayon::prelude::*;
use wdi_core::limsup::{self, Construction, LambdaReport, LambdaShell, McEstimate};
use wdi_core::model::Criterion;
use wdi_core::series::{self, SeriesReport};
use wdi_core::{Error, Result};

/// Samples per Monte Carlo work item.
pub const MC_CHUNK: u64 = 1 << 14;

pub fn shell_sums(criterion: &Criterion, r_max: u64) -> Result<Vec<f64>> {
    (1..=r_max)
        .into_par_iter()
        .map(|r| series::shell_sum(criterion, r))
        .collect()
}

pub fn series_verdict(criterion: &Criterion, r_max: u64) -> Result<SeriesReport> {
    if r_max < series::MIN_R_MAX {
        return Err(Error::InvalidInput("series verdict needs r_max >= 256"));
    }
    series::report_from_shell_sums(&shell_sums(criterion, r_max)?)
}

pub fn mc_measure<F>(dim: usize, samples: u64, seed: u64, region: F) -> Result<McEstimate>
where
    F: Fn(&[f64]) -> bool + Sync,
{
    if samples < limsup::MIN_MC_SAMPLES {
        return Err(Error::InvalidInput("Monte Carlo needs at least 10^4 samples"));
    }
    let chunks = samples.div_ceil(MC_CHUNK);
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let lo = k * MC_CHUNK;
            let hi = (lo + MC_CHUNK).min(samples);
            limsup::mc_count(dim, lo..hi, seed, &region)
        })
        .sum();
    Ok(McEstimate::from_hits(hits, samples, seed))
}

pub fn lambda_shells(construction: &Construction, r_max: u64, a: f64) -> Result<Vec<LambdaShell>> {
    let phi = limsup::totients(r_max as usize);
    (1..=r_max)
        .into_par_iter()
        .map(|r| limsup::lambda_shell(construction, r, phi[r as usize], a))
        .collect()
}

pub fn lambda_selection(construction: &Construction, r_max: u64, a: f64) -> Result<LambdaReport> {
    let shells = lambda_shells(construction, r_max, a)?;
    LambdaReport::from_shells(shells, a, construction.criterion.n())
}
