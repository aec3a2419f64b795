// SPDX-License-Identifier: Apache-2.0

use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use super::sets::{column_hits, rprime_pair_exact};
use crate::model::IntegerVector;
use crate::{Error, Result};

pub const MIN_MC_SAMPLES: u64 = 10_000;

/// Hit-or-miss estimate of a Lebesgue measure in `[0,1]^dim`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct McEstimate {
    pub mean: f64,
    /// Sample standard deviation over `sqrt(samples)`.
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

impl McEstimate {
    pub fn from_hits(hits: u64, samples: u64, seed: u64) -> Self {
        let n = samples as f64;
        let p = hits as f64 / n;
        let var = if samples > 1 { p * (1.0 - p) * n / (n - 1.0) } else { 0.0 };
        Self {
            mean: p,
            stderr: libm::sqrt(var / n),
            samples,
            seed,
        }
    }
}

/// Point number `index` of the stream `seed`, written into `out`.
///
/// Every sample owns a fixed window of the ChaCha8 keystream, so any split
/// of the index range across workers reproduces the same points.
pub fn sample_point(seed: u64, index: u64, out: &mut [f64]) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_word_pos(u128::from(index) * 2 * out.len() as u128);
    for x in out.iter_mut() {
        *x = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
    }
}

/// Number of points with index in `range` satisfying `region`.
pub fn mc_count<F>(dim: usize, range: core::ops::Range<u64>, seed: u64, mut region: F) -> u64
where
    F: FnMut(&[f64]) -> bool,
{
    let mut x = vec![0.0; dim];
    let mut hits = 0;
    for i in range {
        sample_point(seed, i, &mut x);
        hits += u64::from(region(&x));
    }
    hits
}

pub fn mc_measure<F>(dim: usize, samples: u64, seed: u64, region: F) -> Result<McEstimate>
where
    F: FnMut(&[f64]) -> bool,
{
    if samples < MIN_MC_SAMPLES {
        return Err(Error::InvalidInput("Monte Carlo needs at least 10^4 samples"));
    }
    Ok(McEstimate::from_hits(mc_count(dim, 0..samples, seed, region), samples, seed))
}

/// Marginal and joint measures for one pair of `R'` sets.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct QiPair {
    pub u1: IntegerVector,
    pub u2: IntegerVector,
    pub marginal1: f64,
    pub marginal2: f64,
    pub joint: f64,
    /// `joint / (marginal1 marginal2)`.
    pub ratio: f64,
    pub exact: bool,
}

/// Estimates all three measures from one shared sample.
pub fn rprime_pair_mc(
    u1: &IntegerVector,
    d1: &[f64],
    u2: &IntegerVector,
    d2: &[f64],
    samples: u64,
    seed: u64,
) -> Result<(McEstimate, McEstimate, McEstimate)> {
    let m = u1.dim();
    let n = d1.len();
    if u2.dim() != m || d2.len() != n {
        return Err(Error::InvalidInput("R' pair shape mismatch"));
    }
    if d1.iter().chain(d2).any(|d| !(*d >= 0.0 && *d < 0.5)) {
        return Err(Error::InvalidInput("R' widths must lie in [0, 1/2)"));
    }
    if samples < MIN_MC_SAMPLES {
        return Err(Error::InvalidInput("Monte Carlo needs at least 10^4 samples"));
    }
    let mut x = vec![0.0; m * n];
    let (mut h1, mut h2, mut h12) = (0, 0, 0);
    for i in 0..samples {
        sample_point(seed, i, &mut x);
        let a = column_hits(&x, n, u1.entries(), d1);
        let b = column_hits(&x, n, u2.entries(), d2);
        h1 += u64::from(a);
        h2 += u64::from(b);
        h12 += u64::from(a && b);
    }
    Ok((
        McEstimate::from_hits(h1, samples, seed),
        McEstimate::from_hits(h2, samples, seed),
        McEstimate::from_hits(h12, samples, seed),
    ))
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct QiScan {
    pub pairs: Vec<QiPair>,
    /// Pairs with a zero marginal.
    pub skipped: usize,
    pub ratio_max: f64,
}

/// Quasi-independence ratios over the given `(u1, delta1, u2, delta2)`
/// pairs: exact interval arithmetic when `m = 1`, Monte Carlo otherwise.
pub fn quasi_independence_scan(
    pairs: &[(IntegerVector, Vec<f64>, IntegerVector, Vec<f64>)],
    samples: u64,
    seed: u64,
) -> Result<QiScan> {
    let mut out = Vec::new();
    let mut skipped = 0;
    for (u1, d1, u2, d2) in pairs {
        if u1 == u2 || *u1 == u2.neg() {
            return Err(Error::InvalidInput("quasi-independence pairs need u1 != +-u2"));
        }
        let exact = u1.dim() == 1;
        let (m1, m2, joint) = if exact {
            rprime_pair_exact(u1.entries()[0], d1, u2.entries()[0], d2)?
        } else {
            let (a, b, c) = rprime_pair_mc(u1, d1, u2, d2, samples, seed)?;
            (a.mean, b.mean, c.mean)
        };
        if m1 == 0.0 || m2 == 0.0 {
            skipped += 1;
            continue;
        }
        out.push(QiPair {
            u1: u1.clone(),
            u2: u2.clone(),
            marginal1: m1,
            marginal2: m2,
            joint,
            ratio: joint / (m1 * m2),
            exact,
        });
    }
    let ratio_max = out.iter().map(|p| p.ratio).fold(0.0, f64::max);
    Ok(QiScan {
        pairs: out,
        skipped,
        ratio_max,
    })
}
