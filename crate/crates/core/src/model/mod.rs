// SPDX-License-Identifier: Apache-2.0

//! Weights, approximating functions, dimension functions and integer shells.

mod approx;
mod dimension;
mod lattice;
mod weights;

pub use approx::{ApproxFunction, PsiFamily, LAMBDA_MARGIN};
pub use dimension::{DimFamily, DimensionFunction};
pub use lattice::{shell_count, sup_norm, AbsPatterns, IntegerVector, Shell};
pub use weights::{Side, WeightVector, WEIGHT_SUM_TOL};

use crate::num::{self, ln};
use crate::{Error, Result};

/// The dual time `t(u) = inf { t : |u_i| < psi(t)^(-alpha_i) for all i }`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DualTime {
    pub t: f64,
    /// `t(u)` fell below the domain floor and was replaced by `t0`.
    pub clamped: bool,
    /// 0-based index `k` maximizing `|u_k|^(1/alpha_k)`.
    pub dominant: usize,
}

/// `t(u) = psi^-1(|u_k|^(-1/alpha_k))` with `k` maximizing
/// `|u_k|^(1/alpha_k)` (ties go to the smallest index).
///
/// Only absolute values of `u` matter, so `t(u) = t(-u)`.
pub fn dual_time(psi: &ApproxFunction, alpha: &WeightVector, u: &[i64]) -> Result<DualTime> {
    if u.len() != alpha.len() {
        return Err(Error::InvalidInput("u and alpha differ in length"));
    }
    let mut best: Option<(usize, f64)> = None;
    for (i, &x) in u.iter().enumerate() {
        if x == 0 {
            continue;
        }
        let score = ln(x.unsigned_abs() as f64) / alpha[i];
        if best.is_none_or(|(_, s)| score > s) {
            best = Some((i, score));
        }
    }
    let (k, _) = best.ok_or(Error::InvalidInput("t(u) needs a nonzero u"))?;
    let magnitude = num::pow(u[k].unsigned_abs() as f64, 1.0 / alpha[k]);
    Ok(match psi.inverse_of_reciprocal(magnitude)? {
        Some(t) => DualTime {
            t,
            clamped: false,
            dominant: k,
        },
        None => DualTime {
            t: psi.floor(),
            clamped: true,
            dominant: k,
        },
    })
}

/// Everything the zero-full criterion consumes: `psi`, the weights, the
/// dimension function, and the derived bracket index `a` and decay rate
/// `lambda`.
///
/// Construction checks the hypotheses of the criterion: `n >= 2`, `f ≺ mn`,
/// `(mn - a) ⪯ f ⪯ (mn - a + 1)` for some `1 <= a <= n - 1`, and
/// `psi(t)/psi(2t) >= lambda > 1`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Criterion {
    pub psi: ApproxFunction,
    pub alpha: WeightVector,
    pub beta: WeightVector,
    pub f: DimensionFunction,
    bracket: u32,
    lambda: f64,
}

impl Criterion {
    pub fn new(
        psi: ApproxFunction,
        alpha: WeightVector,
        beta: WeightVector,
        f: DimensionFunction,
    ) -> Result<Self> {
        if alpha.side() != Side::Alpha || beta.side() != Side::Beta {
            return Err(Error::Weights("alpha/beta passed on the wrong side"));
        }
        let bracket = f.bracket(alpha.len() as u32, beta.len() as u32)?;
        let lambda = psi.lambda_decay()?;
        Ok(Self {
            psi,
            alpha,
            beta,
            f,
            bracket,
            lambda,
        })
    }

    pub fn m(&self) -> usize {
        self.alpha.len()
    }

    pub fn n(&self) -> usize {
        self.beta.len()
    }

    /// The `a` with `(mn - a) ⪯ f ⪯ (mn - a + 1)`.
    pub fn bracket(&self) -> u32 {
        self.bracket
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn dual_time(&self, u: &[i64]) -> Result<DualTime> {
        dual_time(&self.psi, &self.alpha, u)
    }
}
