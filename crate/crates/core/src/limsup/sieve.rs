// SPDX-License-Identifier: Apache-2.0

use alloc::vec;
use alloc::vec::Vec;

use super::{phi_profile, Construction};
use crate::model::Shell;
use crate::series::shell_gamma_split;
use crate::{Error, Result};

/// Share of a shell's `gamma` mass that its good part must carry for the
/// radius to enter `Lambda`.
pub const LAMBDA_SHARE: f64 = 0.25;
/// Required density of `{r : phi(r)/r >= 1/a}` over `1..=r_max`.
pub const MIN_TOTIENT_DENSITY: f64 = 0.5;

/// Euler's totient for `0..=n` by a linear sieve (`phi(0)` is stored as 0).
pub fn totients(n: usize) -> Vec<u64> {
    let mut phi = vec![0u64; n + 1];
    let mut primes: Vec<usize> = Vec::new();
    if n >= 1 {
        phi[1] = 1;
    }
    for i in 2..=n {
        if phi[i] == 0 {
            phi[i] = (i - 1) as u64;
            primes.push(i);
        }
        for &p in &primes {
            let ip = i * p;
            if ip > n {
                break;
            }
            if i % p == 0 {
                phi[ip] = phi[i] * p as u64;
                break;
            }
            phi[ip] = phi[i] * (p as u64 - 1);
        }
    }
    phi
}

fn totient_ok(phi: u64, r: u64, a: f64) -> bool {
    a * phi as f64 >= r as f64
}

/// Fraction of `1 <= u <= n` with `phi(u)/u >= 1/a`.
pub fn totient_density(a: f64, n: usize) -> Result<f64> {
    if !(a > 0.0) || n == 0 {
        return Err(Error::InvalidInput("totient density needs a > 0 and n >= 1"));
    }
    let phi = totients(n);
    let hits = (1..=n).filter(|&u| totient_ok(phi[u], u as u64, a)).count();
    Ok(hits as f64 / n as f64)
}

/// Per-radius data behind the `Lambda` selection.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct LambdaShell {
    pub r: u64,
    pub totient_ok: bool,
    /// `sum gamma_u` over `|u| = r, ||u.b|| > eps(b)`.
    pub good_gamma: f64,
    /// `sum gamma_u` over the whole shell.
    pub all_gamma: f64,
    pub gamma_set_size: usize,
    /// `sum_{u in Gamma(r)} prod_j phi_j(u)`.
    pub phi_mass: f64,
    /// Members of `Gamma(r)` without a valid `k`.
    pub skipped: usize,
    pub member: bool,
}

/// One radius of the selection. `phi_r` is Euler's totient of `r`.
pub fn lambda_shell(construction: &Construction, r: u64, phi_r: u64, a: f64) -> Result<LambdaShell> {
    let m = construction.criterion.m();
    let (good_gamma, all_gamma) = shell_gamma_split(&construction.criterion, r, |u| construction.is_good(u))?;
    let (mut phi_mass, mut size, mut skipped) = (0.0, 0, 0);
    for u in Shell::new(m, r).filter(|u| u.is_positive_representative() && construction.is_good(u.entries())) {
        size += 1;
        match phi_profile(construction, &u) {
            Ok(p) => phi_mass += p.phi.iter().product::<f64>(),
            Err(Error::NoValidK { .. }) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    let totient_ok = totient_ok(phi_r, r, a);
    Ok(LambdaShell {
        r,
        totient_ok,
        good_gamma,
        all_gamma,
        gamma_set_size: size,
        phi_mass,
        skipped,
        member: totient_ok && good_gamma >= LAMBDA_SHARE * all_gamma && good_gamma > 0.0,
    })
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct LambdaReport {
    pub r_max: u64,
    pub totient_threshold: f64,
    pub totient_density: f64,
    pub members: Vec<u64>,
    pub density: f64,
    /// `sum_{r in Lambda} sum_{u in Gamma(r)} prod phi_j` over
    /// `sum_{r <= r_max} sum_{|u|=r} gamma_u r^n`.
    pub mass_ratio: f64,
    pub lambda_mass: f64,
    pub full_mass: f64,
    pub skipped: usize,
    pub shells: Vec<LambdaShell>,
}

impl LambdaReport {
    /// Assembles the report from shells `1..=r_max` in order.
    pub fn from_shells(shells: Vec<LambdaShell>, a: f64, n: usize) -> Result<Self> {
        let r_max = shells.len() as u64;
        let ok = shells.iter().filter(|s| s.totient_ok).count();
        let totient_density = ok as f64 / r_max.max(1) as f64;
        if totient_density <= MIN_TOTIENT_DENSITY {
            return Err(Error::InvalidInput("totient threshold a leaves density <= 1/2"));
        }
        let members: Vec<u64> = shells.iter().filter(|s| s.member).map(|s| s.r).collect();
        if members.is_empty() {
            return Err(Error::EmptyLambda { r_max });
        }
        let lambda_mass: f64 = shells.iter().filter(|s| s.member).map(|s| s.phi_mass).sum();
        let full_mass: f64 = shells
            .iter()
            .map(|s| s.all_gamma * crate::num::pow(s.r as f64, n as f64))
            .sum();
        Ok(Self {
            r_max,
            totient_threshold: a,
            totient_density,
            density: members.len() as f64 / r_max as f64,
            members,
            mass_ratio: lambda_mass / full_mass,
            lambda_mass,
            full_mass,
            skipped: shells.iter().map(|s| s.skipped).sum(),
            shells,
        })
    }

    /// `#(Lambda cap [2^l, 2^(l+1))) / 2^l` for every complete block.
    pub fn block_densities(&self) -> Vec<(u32, f64)> {
        let mut out = Vec::new();
        let mut l = 0;
        while (2u64 << l) - 1 <= self.r_max {
            let lo = 1u64 << l;
            let hi = lo << 1;
            let count = self.members.iter().filter(|&&r| r >= lo && r < hi).count();
            out.push((l, count as f64 / lo as f64));
            l += 1;
        }
        out
    }
}

/// `Lambda` over `1..=r_max` with totient threshold `a`.
pub fn lambda_selection(construction: &Construction, r_max: u64, a: f64) -> Result<LambdaReport> {
    let phi = totients(r_max as usize);
    let shells = (1..=r_max)
        .map(|r| lambda_shell(construction, r, phi[r as usize], a))
        .collect::<Result<Vec<_>>>()?;
    LambdaReport::from_shells(shells, a, construction.criterion.n())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ApproxFunction, Criterion, DimensionFunction, WeightVector};

    fn naive_phi(n: u64) -> u64 {
        (1..=n).filter(|&k| crate::num::gcd(n, k) == 1).count() as u64
    }

    #[test]
    fn sieve_matches_gcd_count() {
        let phi = totients(500);
        for n in 1..=500u64 {
            assert_eq!(phi[n as usize], naive_phi(n), "n={n}");
        }
    }

    #[test]
    fn density_examples() {
        let d1 = totient_density(1.0, 1000).unwrap();
        assert_eq!(d1, 1.0 / 1000.0);
        let d2 = totient_density(2.0, 100_000).unwrap();
        assert!(d2 > 0.0 && d2 < 1.0);
        let d3 = totient_density(3.0, 100_000).unwrap();
        assert!(d3 >= d2);
    }

    #[test]
    fn selection_on_a_divergent_instance() {
        let c = Criterion::new(
            ApproxFunction::power(1.0, 0.5).unwrap(),
            WeightVector::alpha(vec![1.0]).unwrap(),
            WeightVector::beta(vec![0.5, 0.5]).unwrap(),
            DimensionFunction::power(1.2).unwrap(),
        )
        .unwrap();
        let con = Construction::new(c, vec![0.3]).unwrap();
        let rep = lambda_selection(&con, 512, 4.0).unwrap();
        assert!(rep.density > 0.3);
        assert!(rep.mass_ratio > 0.0);
    }
}
