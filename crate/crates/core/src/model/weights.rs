// SPDX-License-Identifier: Apache-2.0

use alloc::vec::Vec;

use crate::{Error, Result};

/// Tolerance on `sum(weights) == 1`.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

/// Which side of the affine form a weight vector lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Side {
    /// The `m` coordinates of `Aq + b`.
    Alpha,
    /// The `n` coordinates of `q`; kept non-increasing.
    Beta,
}

/// Positive weights summing to one.
///
/// Beta vectors must be sorted non-increasing: the cover counts and the
/// `k(u)` ladder both rely on `beta_1 >= ... >= beta_n`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct WeightVector {
    weights: Vec<f64>,
    side: Side,
}

impl WeightVector {
    pub fn new(weights: Vec<f64>, side: Side) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Weights("empty weight vector"));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::Weights("weights must be finite and strictly positive"));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::Weights("weights must sum to 1"));
        }
        if side == Side::Beta && weights.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::Weights("beta weights must be non-increasing"));
        }
        Ok(Self { weights, side })
    }

    pub fn alpha(weights: Vec<f64>) -> Result<Self> {
        Self::new(weights, Side::Alpha)
    }

    pub fn beta(weights: Vec<f64>) -> Result<Self> {
        Self::new(weights, Side::Beta)
    }

    /// Equal weights `1/len`.
    pub fn uniform(len: usize, side: Side) -> Result<Self> {
        if len == 0 {
            return Err(Error::Weights("empty weight vector"));
        }
        Self::new(alloc::vec![1.0 / len as f64; len], side)
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }

    /// Sup norm; for a sorted beta vector this is `beta_1`.
    pub fn sup(&self) -> f64 {
        self.weights.iter().copied().fold(0.0, f64::max)
    }
}

impl core::ops::Index<usize> for WeightVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.weights[i]
    }
}
