// SPDX-License-Identifier: Apache-2.0

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// A nonzero integer vector `u` in `Z^m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct IntegerVector(Vec<i64>);

impl IntegerVector {
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        if entries.is_empty() || entries.iter().all(|&x| x == 0) {
            return Err(Error::InvalidInput("integer vector must be nonzero"));
        }
        Ok(Self(entries))
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `|u| = max |u_i|`.
    pub fn sup_norm(&self) -> u64 {
        sup_norm(&self.0)
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|x| -x).collect())
    }

    /// Whether the first nonzero entry is positive, i.e. `u > -u`
    /// lexicographically.
    pub fn is_positive_representative(&self) -> bool {
        self.0.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0)
    }

    pub fn into_inner(self) -> Vec<i64> {
        self.0
    }
}

pub fn sup_norm(entries: &[i64]) -> u64 {
    entries.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0)
}

/// `(2r + 1)^m - (2r - 1)^m`, the number of points with sup norm exactly `r`.
pub fn shell_count(m: u32, r: u64) -> u64 {
    if r == 0 {
        return 1;
    }
    (2 * r + 1).pow(m) - (2 * r - 1).pow(m)
}

/// Lexicographic enumeration of `{x in [lo, r]^m : max |x_i| = r}`.
///
/// With `lo = -r` this is the sup-norm shell; with `lo = 0` it is the set of
/// absolute-value patterns on the shell.
#[derive(Debug, Clone)]
struct BoxBoundary {
    cur: Vec<i64>,
    lo: i64,
    r: i64,
    done: bool,
}

impl BoxBoundary {
    fn new(m: usize, lo: i64, r: i64) -> Self {
        let mut it = Self {
            cur: vec![lo; m],
            lo,
            r,
            done: m == 0 || r < 1,
        };
        if !it.done {
            it.fix_last();
        }
        it
    }

    fn on_boundary(&self, x: i64) -> bool {
        x.abs() == self.r
    }

    fn prefix_on_boundary(&self) -> bool {
        let m = self.cur.len();
        self.cur[..m - 1].iter().any(|&x| self.on_boundary(x))
    }

    /// Move the last coordinate to its first admissible value (given that it
    /// currently holds `lo`).
    fn fix_last(&mut self) {
        let m = self.cur.len();
        if !self.prefix_on_boundary() && !self.on_boundary(self.cur[m - 1]) {
            self.cur[m - 1] = self.r;
        }
    }

    fn advance(&mut self) {
        let m = self.cur.len();
        let last = m - 1;
        let x = self.cur[last];
        if x < self.r {
            self.cur[last] = if self.prefix_on_boundary() { x + 1 } else { self.r };
            return;
        }
        for pos in (0..last).rev() {
            if self.cur[pos] < self.r {
                self.cur[pos] += 1;
                for v in &mut self.cur[pos + 1..] {
                    *v = self.lo;
                }
                self.fix_last();
                return;
            }
        }
        self.done = true;
    }
}

impl Iterator for BoxBoundary {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        if self.done {
            return None;
        }
        let out = self.cur.clone();
        self.advance();
        Some(out)
    }
}

/// Every `u` in `Z^m` with `|u| = r`, each exactly once, in lexicographic
/// order.
#[derive(Debug, Clone)]
pub struct Shell(BoxBoundary);

impl Shell {
    pub fn new(m: usize, r: u64) -> Self {
        Self(BoxBoundary::new(m, -(r as i64), r as i64))
    }
}

impl Iterator for Shell {
    type Item = IntegerVector;

    fn next(&mut self) -> Option<IntegerVector> {
        self.0.next().map(IntegerVector)
    }
}

/// Non-negative patterns `(|u_1|, ..., |u_m|)` on the shell `|u| = r`, each
/// paired with the number `2^(#nonzero)` of shell vectors sharing it.
#[derive(Debug, Clone)]
pub struct AbsPatterns(BoxBoundary);

impl AbsPatterns {
    pub fn new(m: usize, r: u64) -> Self {
        Self(BoxBoundary::new(m, 0, r as i64))
    }
}

impl Iterator for AbsPatterns {
    type Item = (Vec<i64>, u64);

    fn next(&mut self) -> Option<(Vec<i64>, u64)> {
        self.0.next().map(|p| {
            let nonzero = p.iter().filter(|&&x| x != 0).count() as u32;
            (p, 1u64 << nonzero)
        })
    }
}
