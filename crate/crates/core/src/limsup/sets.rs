// SPDX-License-Identifier: Apache-2.0

use alloc::vec::Vec;

use crate::model::{IntegerVector, Shell};
use crate::num::gcd_all;
use crate::transference::{dot_dist, epsilon_b};
use crate::{Error, Result};

/// `|x.u - v| < bound`: membership in the neighbourhood of the hyperplane
/// `x.u = v` with the unnormalized width.
pub fn delta_membership(x: &[f64], u: &[i64], v: i64, bound: f64) -> bool {
    let dot: f64 = x.iter().zip(u).map(|(a, &b)| a * b as f64).sum();
    libm::fabs(dot - v as f64) < bound
}

fn check_deltas(deltas: &[f64]) -> Result<()> {
    if deltas.iter().any(|d| !(*d >= 0.0 && *d < 0.5)) {
        return Err(Error::InvalidInput("R' widths must lie in [0, 1/2)"));
    }
    Ok(())
}

/// Is `A` (row-major, `m x n`) in `R'(u, delta)`? Only the two integers
/// nearest to each `A_{*,j}.u` can qualify since `delta_j < 1/2`.
pub fn rprime_membership(a: &[f64], n: usize, u: &[i64], deltas: &[f64]) -> Result<bool> {
    check_deltas(deltas)?;
    if deltas.len() != n || a.len() != u.len() * n {
        return Err(Error::InvalidInput("R' shape mismatch"));
    }
    Ok(column_hits(a, n, u, deltas))
}

pub(crate) fn column_hits(a: &[f64], n: usize, u: &[i64], deltas: &[f64]) -> bool {
    let g = gcd_all(u.iter().copied());
    (0..n).all(|j| {
        let dot: f64 = u.iter().enumerate().map(|(i, &ui)| a[i * n + j] * ui as f64).sum();
        let lo = libm::floor(dot);
        [lo, lo + 1.0].iter().any(|&v| {
            libm::fabs(dot - v) < deltas[j] && crate::num::gcd(g, libm::fabs(v) as u64) == 1
        })
    })
}

/// Antipodally reduced good part of the shell `|u| = r`: vectors with
/// `||u.b|| > eps(b)` whose first nonzero entry is positive.
pub fn gamma_set(m: usize, r: u64, b: &[f64]) -> Result<Vec<IntegerVector>> {
    let eps = epsilon_b(b)?;
    Ok(Shell::new(m, r)
        .filter(|u| u.is_positive_representative() && dot_dist(u.entries(), b) > eps)
        .collect())
}

/// Finite union of disjoint open intervals, kept sorted.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IntervalUnion {
    parts: Vec<(f64, f64)>,
}

impl IntervalUnion {
    /// Merges overlapping pieces; empty pieces are dropped.
    pub fn new(mut parts: Vec<(f64, f64)>) -> Self {
        parts.retain(|(a, b)| a < b);
        parts.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(parts.len());
        for (a, b) in parts {
            match merged.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        Self { parts: merged }
    }

    pub fn parts(&self) -> &[(f64, f64)] {
        &self.parts
    }

    pub fn measure(&self) -> f64 {
        self.parts.iter().map(|(a, b)| b - a).sum()
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < self.parts.len() && j < other.parts.len() {
            let (a0, a1) = self.parts[i];
            let (b0, b1) = other.parts[j];
            let lo = a0.max(b0);
            let hi = a1.min(b1);
            if lo < hi {
                out.push((lo, hi));
            }
            if a1 < b1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self { parts: out }
    }
}

/// For `m = 1`: `{x in [0,1] : |x u - v| < delta, gcd(u, v) = 1 for some v}`.
pub fn rprime_column_union(u: i64, delta: f64) -> Result<IntervalUnion> {
    check_deltas(&[delta])?;
    if u == 0 {
        return Err(Error::InvalidInput("u must be nonzero"));
    }
    let q = u.unsigned_abs();
    let qf = q as f64;
    let parts = (0..=q)
        .filter(|&v| crate::num::gcd(q, v) == 1)
        .map(|v| (((v as f64 - delta) / qf).max(0.0), ((v as f64 + delta) / qf).min(1.0)))
        .collect();
    Ok(IntervalUnion::new(parts))
}

/// Exact Lebesgue measure of `R'(u, delta)` for `m = 1` (columns are
/// independent, so it is a product of interval-union lengths).
pub fn rprime_measure_exact(u: i64, deltas: &[f64]) -> Result<f64> {
    deltas
        .iter()
        .map(|&d| rprime_column_union(u, d).map(|c| c.measure()))
        .product()
}

/// Exact `(|R'(u1)|, |R'(u2)|, |R'(u1) cap R'(u2)|)` for `m = 1`.
pub fn rprime_pair_exact(u1: i64, d1: &[f64], u2: i64, d2: &[f64]) -> Result<(f64, f64, f64)> {
    if d1.len() != d2.len() {
        return Err(Error::InvalidInput("R' width vectors differ in length"));
    }
    let (mut m1, mut m2, mut joint) = (1.0, 1.0, 1.0);
    for (&a, &b) in d1.iter().zip(d2) {
        let c1 = rprime_column_union(u1, a)?;
        let c2 = rprime_column_union(u2, b)?;
        m1 *= c1.measure();
        m2 *= c2.measure();
        joint *= c1.intersect(&c2).measure();
    }
    Ok((m1, m2, joint))
}
