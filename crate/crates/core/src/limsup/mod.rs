// SPDX-License-Identifier: Apache-2.0

//! The divergence-side construction: the profile `Phi(u)`, the sets
//! `R'(u, delta)`, the shell subsets `Gamma(r)` and the radius set `Lambda`,
//! totient densities, Monte Carlo measures and the inner-rectangle content.

mod mc;
mod sets;
mod sieve;

pub use mc::{
    mc_count, mc_measure, quasi_independence_scan, rprime_pair_mc, sample_point, McEstimate, QiPair, QiScan,
    MIN_MC_SAMPLES,
};
pub use sets::{
    delta_membership, gamma_set, rprime_column_union, rprime_measure_exact, rprime_membership,
    rprime_pair_exact, IntervalUnion,
};
pub use sieve::{
    lambda_selection, lambda_shell, totient_density, totients, LambdaReport, LambdaShell, LAMBDA_SHARE,
    MIN_TOTIENT_DENSITY,
};

use alloc::vec;
use alloc::vec::Vec;

use crate::content::Hyperrectangle;
use crate::model::{Criterion, IntegerVector};
use crate::num::{self, ln};
use crate::series::gamma_u;
use crate::transference::{dot_dist, TransferConstants};
use crate::{Error, Result};

/// Relative slack used when re-checking the profile identities.
pub const PROFILE_TOL: f64 = 1e-9;

/// A criterion together with the shift `b` and the derived constants.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Construction {
    pub criterion: Criterion,
    pub b: Vec<f64>,
    pub constants: TransferConstants,
}

impl Construction {
    pub fn new(criterion: Criterion, b: Vec<f64>) -> Result<Self> {
        let constants = TransferConstants::new(&b, criterion.lambda(), &criterion.alpha, &criterion.beta)?;
        Ok(Self {
            criterion,
            b,
            constants,
        })
    }

    pub fn is_good(&self, u: &[i64]) -> bool {
        dot_dist(u, &self.b) > self.constants.eps_b
    }

    /// `c~ t(u)^-beta_j / |u|` for every `j`.
    fn ladder(&self, u: &IntegerVector) -> Result<(f64, Vec<f64>)> {
        let t = self.criterion.dual_time(u.entries())?.t;
        let norm = u.sup_norm() as f64;
        let c = self.constants.c_tilde;
        let rungs = self
            .criterion
            .beta
            .as_slice()
            .iter()
            .map(|&b| c * num::pow(t, -b) / norm)
            .collect();
        Ok((t, rungs))
    }
}

/// `L(k) = rung_k^k prod_{j>k} rung_j` in log form; non-decreasing in `k`.
fn log_level(log_rungs: &[f64], k: usize) -> f64 {
    k as f64 * log_rungs[k - 1] + log_rungs[k..].iter().sum::<f64>()
}

fn k_from_rungs(gamma: f64, rungs: &[f64], norm: u64) -> Result<usize> {
    let log_rungs: Vec<f64> = rungs.iter().map(|&r| ln(r)).collect();
    let lg = ln(gamma);
    if log_level(&log_rungs, 1) > lg {
        return Err(Error::NoValidK { norm });
    }
    let n = rungs.len();
    let mut k = 1;
    while k < n && log_level(&log_rungs, k + 1) <= lg {
        k += 1;
    }
    Ok(k)
}

/// The unique `k` with `L(k) <= gamma_u < L(k + 1)` (right test dropped at
/// `k = n`), where `L(k) = (c~ t^-beta_k/|u|)^k prod_{j>k} c~ t^-beta_j/|u|`.
pub fn k_of_u(construction: &Construction, u: &IntegerVector) -> Result<usize> {
    let gamma = gamma_u(&construction.criterion, u)?.gamma;
    let (_, rungs) = construction.ladder(u)?;
    k_from_rungs(gamma, &rungs, u.sup_norm())
}

/// `varpi_u = (gamma_u prod_{j>k} |u| / (c~ t^-beta_j))^(1/k)`.
pub fn varpi_u(construction: &Construction, u: &IntegerVector) -> Result<f64> {
    Ok(phi_parts(construction, u)?.varpi)
}

struct Parts {
    t: f64,
    gamma: f64,
    k: usize,
    varpi: f64,
    rungs: Vec<f64>,
}

fn phi_parts(construction: &Construction, u: &IntegerVector) -> Result<Parts> {
    let gamma = gamma_u(&construction.criterion, u)?.gamma;
    let (t, rungs) = construction.ladder(u)?;
    let k = k_from_rungs(gamma, &rungs, u.sup_norm())?;
    let tail: f64 = rungs[k..].iter().map(|&r| ln(r)).sum();
    let varpi = num::exp((ln(gamma) - tail) / k as f64);
    Ok(Parts {
        t,
        gamma,
        k,
        varpi,
        rungs,
    })
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PhiProfile {
    pub u: IntegerVector,
    pub t_u: f64,
    pub gamma: f64,
    /// 1-based; meaningless when inactive.
    pub k: usize,
    pub varpi: f64,
    pub phi: Vec<f64>,
    /// `||u.b|| > eps(b)`.
    pub active: bool,
}

/// `Phi(u)`: zero when `||u.b|| <= eps(b)`, otherwise
/// `phi_j = |u| varpi_u` for `j <= k` and `c~ t(u)^-beta_j` for `j > k`.
pub fn phi_profile(construction: &Construction, u: &IntegerVector) -> Result<PhiProfile> {
    let n = construction.criterion.n();
    if !construction.is_good(u.entries()) {
        let t_u = construction.criterion.dual_time(u.entries())?.t;
        let gamma = gamma_u(&construction.criterion, u)?.gamma;
        return Ok(PhiProfile {
            u: u.clone(),
            t_u,
            gamma,
            k: 0,
            varpi: 0.0,
            phi: vec![0.0; n],
            active: false,
        });
    }
    let p = phi_parts(construction, u)?;
    let norm = u.sup_norm() as f64;
    let phi = (0..n)
        .map(|j| if j < p.k { norm * p.varpi } else { norm * p.rungs[j] })
        .collect();
    Ok(PhiProfile {
        u: u.clone(),
        t_u: p.t,
        gamma: p.gamma,
        k: p.k,
        varpi: p.varpi,
        phi,
        active: true,
    })
}

/// Which profile identity failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ProfileViolation {
    Sandwich,
    Chain,
    Product,
    InactiveNonzero,
}

/// Re-derives the sandwich `rung_k <= varpi < rung_{k+1}`, the chain
/// `phi_1 = .. = phi_k < phi_{k+1} <= .. <= phi_n` and the product
/// `prod phi_j = gamma_u |u|^n`, each to relative slack [`PROFILE_TOL`].
pub fn check_profile(construction: &Construction, profile: &PhiProfile) -> Result<Option<ProfileViolation>> {
    if !profile.active {
        return Ok(if profile.phi.iter().all(|&p| p == 0.0) {
            None
        } else {
            Some(ProfileViolation::InactiveNonzero)
        });
    }
    let (_, rungs) = construction.ladder(&profile.u)?;
    let (k, w, phi) = (profile.k, profile.varpi, &profile.phi);
    let lo = rungs[k - 1];
    if w < lo * (1.0 - PROFILE_TOL) || (k < rungs.len() && w >= rungs[k] * (1.0 + PROFILE_TOL)) {
        return Ok(Some(ProfileViolation::Sandwich));
    }
    let head = phi[0];
    let chain_ok = phi[..k].iter().all(|&p| p == head)
        && (k == phi.len() || head < phi[k] * (1.0 + PROFILE_TOL))
        && phi[k..].windows(2).all(|x| x[0] <= x[1] * (1.0 + PROFILE_TOL));
    if !chain_ok {
        return Ok(Some(ProfileViolation::Chain));
    }
    let norm = profile.u.sup_norm() as f64;
    let log_ratio: f64 =
        phi.iter().map(|&p| ln(p)).sum::<f64>() - ln(profile.gamma) - phi.len() as f64 * ln(norm);
    if libm::fabs(libm::expm1(log_ratio)) > PROFILE_TOL {
        return Ok(Some(ProfileViolation::Product));
    }
    Ok(None)
}

/// Sides of the rectangle inside `prod_j Delta(R_{u,v_j}, phi_j/|u|)`:
/// for each `j <= k` one side `c~ t^-beta_j / |u|` followed by `m - 1` copies
/// of `varpi_u`, then `m (n - k)` more copies of `varpi_u`. Needs an active
/// profile.
pub fn inner_rectangle(construction: &Construction, profile: &PhiProfile) -> Result<Hyperrectangle> {
    if !profile.active {
        return Err(Error::InvalidInput("inner rectangle needs an active profile"));
    }
    let (_, rungs) = construction.ladder(&profile.u)?;
    let m = construction.criterion.m();
    let n = construction.criterion.n();
    let mut sides = Vec::with_capacity(m * n);
    for rung in rungs.iter().take(profile.k) {
        sides.push(*rung);
        sides.extend(core::iter::repeat_n(profile.varpi, m - 1));
    }
    sides.extend(core::iter::repeat_n(profile.varpi, m * (n - profile.k)));
    Hyperrectangle::new(sides)
}

/// `H^f_inf(R) / varpi_u^(mn)` with the closed-form content, computed in
/// log space.
pub fn inner_content_ratio(construction: &Construction, profile: &PhiProfile) -> Result<f64> {
    let rect = inner_rectangle(construction, profile)?;
    let content = crate::content::rect_content_closed(&construction.criterion.f, &rect)?.value;
    let d = rect.dim() as f64;
    Ok(num::exp(ln(content) - d * ln(profile.varpi)))
}
