// SPDX-License-Identifier: Apache-2.0

//! The per-vector weight `gamma_u(beta, f)`, shell and dyadic partial sums of
//! `sum_u gamma_u |u|^n`, a tail-exponent verdict, and the classical
//! Khintchine–Groshev and Jarník partial sums.
//!
//! Summation order is fixed (shells ascending, patterns lexicographic within a
//! shell) so totals are reproducible bit for bit.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::model::{sup_norm, AbsPatterns, ApproxFunction, Criterion, DimensionFunction, IntegerVector, Shell};
use crate::num::{self, ln};
use crate::{Error, Result};

/// Half-width of the undetermined band around the critical exponent `-1`.
pub const VERDICT_MARGIN: f64 = 0.1;
/// Smallest `r_max` accepted by [`series_verdict`].
pub const MIN_R_MAX: u64 = 256;
/// Complete dyadic blocks needed before a fit is attempted.
pub const MIN_DYADIC_BLOCKS: usize = 4;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct GammaTerm {
    pub u: IntegerVector,
    pub t_u: f64,
    /// `t(u)` was clamped to the domain floor of `psi`.
    pub clamped: bool,
    pub gamma: f64,
    /// 1-based minimizing branch, smallest on ties.
    pub argmin_j: usize,
    /// `gamma_u > prod_j t(u)^-beta_j / |u|`.
    pub lower_bound_holds: bool,
}

struct Gamma {
    t: f64,
    clamped: bool,
    gamma: f64,
    argmin_j: usize,
    lower_bound_holds: bool,
}

fn gamma_of(criterion: &Criterion, u: &[i64]) -> Result<Gamma> {
    let dual = criterion.dual_time(u)?;
    let t = dual.t;
    let norm = sup_norm(u) as f64;
    let beta = criterion.beta.as_slice();
    let m = criterion.m() as f64;
    let n = beta.len();
    let mut best = f64::INFINITY;
    let mut arg = 1;
    let mut product = 1.0;
    for j in 0..n {
        let rho = num::pow(t, -beta[j]) / norm;
        product *= rho;
        let skew: f64 = beta[j..].iter().map(|b| beta[j] - b).sum();
        let branch = criterion.f.eval(rho) * num::pow(rho, (1.0 - m) * n as f64) * num::pow(t, skew);
        if branch < best {
            best = branch;
            arg = j + 1;
        }
    }
    Ok(Gamma {
        t,
        clamped: dual.clamped,
        gamma: best,
        argmin_j: arg,
        lower_bound_holds: best > product,
    })
}

/// `gamma_u(beta, f) = min_j f(rho_j) rho_j^((1-m)n) prod_{l>=j} t(u)^(beta_j - beta_l)`
/// with `rho_j = t(u)^-beta_j / |u|`.
pub fn gamma_u(criterion: &Criterion, u: &IntegerVector) -> Result<GammaTerm> {
    let g = gamma_of(criterion, u.entries())?;
    Ok(GammaTerm {
        u: u.clone(),
        t_u: g.t,
        clamped: g.clamped,
        gamma: g.gamma,
        argmin_j: g.argmin_j,
        lower_bound_holds: g.lower_bound_holds,
    })
}

/// `sum_{|u| = r} gamma_u r^n`, evaluated once per absolute-value pattern.
pub fn shell_sum(criterion: &Criterion, r: u64) -> Result<f64> {
    let mut acc = 0.0;
    for (pattern, mult) in AbsPatterns::new(criterion.m(), r) {
        acc += mult as f64 * gamma_of(criterion, &pattern)?.gamma;
    }
    Ok(acc * num::pow(r as f64, criterion.n() as f64))
}

/// Same as [`shell_sum`] but visits every shell vector in lexicographic order.
pub fn shell_sum_enumerated(criterion: &Criterion, r: u64) -> Result<f64> {
    let mut acc = 0.0;
    for u in Shell::new(criterion.m(), r) {
        acc += gamma_of(criterion, u.entries())?.gamma;
    }
    Ok(acc * num::pow(r as f64, criterion.n() as f64))
}

/// Sum of `gamma_u` (without the `r^n` factor) over a shell, split into the
/// part with `||u.b|| > eps` and the whole shell.
pub fn shell_gamma_split<F>(criterion: &Criterion, r: u64, mut good: F) -> Result<(f64, f64)>
where
    F: FnMut(&[i64]) -> bool,
{
    let (mut good_sum, mut all) = (0.0, 0.0);
    for u in Shell::new(criterion.m(), r) {
        let g = gamma_of(criterion, u.entries())?.gamma;
        all += g;
        if good(u.entries()) {
            good_sum += g;
        }
    }
    Ok((good_sum, all))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Verdict {
    Converges,
    Diverges,
    Undetermined,
}

impl Verdict {
    /// Classify a fitted tail exponent `p` of `shell_sum(r) ~ r^p`.
    pub fn from_exponent(p: f64) -> Self {
        if p < -1.0 - VERDICT_MARGIN {
            Verdict::Converges
        } else if p > -1.0 + VERDICT_MARGIN {
            Verdict::Diverges
        } else {
            Verdict::Undetermined
        }
    }
}

/// Partial sums of `sum_u gamma_u |u|^n` with a heuristic verdict from the
/// fitted log-log slope of the shell sums. A finite sum cannot decide
/// convergence; the verdict only reports which side of `-1 ± 0.1` the
/// fitted exponent lands on.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SeriesReport {
    pub shell_sums: BTreeMap<u64, f64>,
    /// Block `l` covers `2^l <= r < 2^(l+1)`.
    pub dyadic_sums: BTreeMap<u32, f64>,
    pub partial_total: f64,
    pub tail_exponent_fit: f64,
    pub verdict: Verdict,
}

/// Number of complete dyadic blocks `[2^l, 2^(l+1))` inside `1..=r_max`.
pub fn complete_blocks(r_max: u64) -> usize {
    (0..64).take_while(|&l| (1u64 << (l + 1)) - 1 <= r_max).count()
}

/// Assemble a [`SeriesReport`] from precomputed shell sums (`sums[r - 1]`).
pub fn report_from_shell_sums(sums: &[f64]) -> Result<SeriesReport> {
    let r_max = sums.len() as u64;
    if r_max < MIN_R_MAX {
        return Err(Error::InvalidInput("series verdict needs r_max >= 256"));
    }
    let blocks = complete_blocks(r_max);
    if blocks < MIN_DYADIC_BLOCKS {
        return Err(Error::InsufficientData { blocks });
    }
    let mut shell_sums = BTreeMap::new();
    let mut dyadic_sums = BTreeMap::new();
    let mut total = 0.0;
    for (i, &s) in sums.iter().enumerate() {
        let r = i as u64 + 1;
        shell_sums.insert(r, s);
        *dyadic_sums.entry(63 - r.leading_zeros()).or_insert(0.0) += s;
        total += s;
    }
    // Fit over the top two complete blocks.
    let top = blocks as u32 - 1;
    let lo = 1u64 << (top - 1);
    let hi = (1u64 << (top + 1)) - 1;
    let (xs, ys): (Vec<f64>, Vec<f64>) = (lo..=hi)
        .map(|r| (ln(r as f64), ln(sums[(r - 1) as usize])))
        .unzip();
    let slope = num::ols_slope(&xs, &ys);
    Ok(SeriesReport {
        shell_sums,
        dyadic_sums,
        partial_total: total,
        tail_exponent_fit: slope,
        verdict: Verdict::from_exponent(slope),
    })
}

pub fn shell_sums(criterion: &Criterion, r_max: u64) -> Result<Vec<f64>> {
    (1..=r_max).map(|r| shell_sum(criterion, r)).collect()
}

pub fn series_verdict(criterion: &Criterion, r_max: u64) -> Result<SeriesReport> {
    if r_max < MIN_R_MAX {
        return Err(Error::InvalidInput("series verdict needs r_max >= 256"));
    }
    report_from_shell_sums(&shell_sums(criterion, r_max)?)
}

/// For each complete dyadic block, `max / min` of the shell sums inside it.
pub fn dyadic_spread(sums: &[f64]) -> Vec<(u32, f64)> {
    let blocks = complete_blocks(sums.len() as u64);
    (0..blocks as u32)
        .map(|l| {
            let block = &sums[(1usize << l) - 1..(1usize << (l + 1)) - 1];
            let max = block.iter().copied().fold(f64::MIN, f64::max);
            let min = block.iter().copied().fold(f64::MAX, f64::min);
            (l, max / min)
        })
        .collect()
}

/// First `r` from which `gamma_u > prod_j t(u)^-beta_j / |u|` holds on every
/// shell up to `r_max`; `None` if it fails on the last shell.
pub fn lower_bound_onset(criterion: &Criterion, r_max: u64) -> Result<Option<u64>> {
    let mut onset = None;
    for r in 1..=r_max {
        let mut all = true;
        for (p, _) in AbsPatterns::new(criterion.m(), r) {
            if !gamma_of(criterion, &p)?.lower_bound_holds {
                all = false;
                break;
            }
        }
        onset = match (all, onset) {
            (true, None) => Some(r),
            (true, o) => o,
            (false, _) => None,
        };
    }
    Ok(onset)
}

/// `sum_{q=1}^Q q^(n-1) psi(q)^m`, over the `q` where the `psi` formula is
/// defined (every `q >= 1` for the power family, `q >= 2` with a log factor).
pub fn khintchine_groshev_partial(psi: &ApproxFunction, m: u32, n: u32, q_max: u64) -> f64 {
    (1..=q_max)
        .filter(|&q| psi.formula_defined_at(q as f64))
        .map(|q| {
            let q = q as f64;
            num::pow(q, f64::from(n) - 1.0) * num::pow(psi.formula(q), f64::from(m))
        })
        .sum()
}

/// `sum_{q=1}^Q f(psi(q)/q) (psi(q)/q)^(m(1-n)) q^(m+n-1)`, requiring
/// `m(n-1) ≺ f ⪯ mn`.
pub fn jarnik_partial(
    psi: &ApproxFunction,
    f: &DimensionFunction,
    m: u32,
    n: u32,
    q_max: u64,
) -> Result<f64> {
    f.check_jarnik(m, n)?;
    let (mf, nf) = (f64::from(m), f64::from(n));
    Ok((1..=q_max)
        .filter(|&q| psi.formula_defined_at(q as f64))
        .map(|q| {
            let q = q as f64;
            let x = psi.formula(q) / q;
            f.eval(x) * num::pow(x, mf * (1.0 - nf)) * num::pow(q, mf + nf - 1.0)
        })
        .sum())
}
