// SPDX-License-Identifier: Apache-2.0

//! One function per subcommand. Each returns a serializable result; any
//! failed engine property is turned into [`CliError::Invariant`] after the
//! report has been written.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use wdi_core::content::{self, ContentEstimate, Hyperrectangle};
use wdi_core::limsup::{
    self, check_profile, inner_content_ratio, phi_profile, Construction, LambdaReport, McEstimate, PhiProfile,
    ProfileViolation, QiScan,
};
use wdi_core::model::{IntegerVector, Shell};
use wdi_core::num;
use wdi_core::series::{self, SeriesReport};
use wdi_core::transference::{
    self, backward_consistency, forward_inequality, is_dirichlet_at_t_with_budget, AffineSystem, BackwardOutcome,
    DirichletTest, TransferConstants,
};
use wdi_core::Error;

use crate::config::{Resolved, Subcommand};
use crate::drive;
use crate::error::CliError;
use crate::report::{write_csv, CsvRow, Report};

/// Paths written by one run.
#[derive(Debug, Clone)]
pub struct Outputs {
    pub json: PathBuf,
    pub csv: Option<PathBuf>,
}

pub fn run(resolved: &Resolved, out: &Path) -> Result<Outputs, CliError> {
    match resolved.sub {
        Subcommand::Verdict => emit(resolved, out, verdict(resolved)?),
        Subcommand::Content => emit(resolved, out, content(resolved)?),
        Subcommand::Transfer => {
            let result = transfer(resolved)?;
            let violations = result.forward.violations;
            let outputs = emit(resolved, out, result)?;
            if violations > 0 {
                return Err(CliError::Invariant(format!(
                    "forward transference inequality failed {violations} times"
                )));
            }
            Ok(outputs)
        }
        Subcommand::Limsup => {
            let (result, rows) = limsup(resolved)?;
            let bad = result.profiles.violations.len();
            let mut outputs = emit(resolved, out, result)?;
            let csv = out.join("limsup.csv");
            write_csv(&csv, &rows)?;
            outputs.csv = Some(csv);
            if bad > 0 {
                return Err(CliError::Invariant(format!("{bad} profile identities failed")));
            }
            Ok(outputs)
        }
        Subcommand::Baseline => emit(resolved, out, baseline(resolved)?),
    }
}

fn emit<T: Serialize>(resolved: &Resolved, out: &Path, result: T) -> Result<Outputs, CliError> {
    let json = Report::new(resolved.sub, &resolved.config, result).write(out)?;
    Ok(Outputs { json, csv: None })
}

#[derive(Debug, Serialize)]
pub struct VerdictResult {
    pub bracket: u32,
    pub lambda: f64,
    pub report: SeriesReport,
    /// `max / min` of the shell sums per complete dyadic block.
    pub dyadic_spread: Vec<(u32, f64)>,
    /// First radius from which every shell satisfies the lower bound on
    /// `gamma_u`.
    pub lower_bound_onset: Option<u64>,
}

pub fn verdict(resolved: &Resolved) -> Result<VerdictResult, CliError> {
    let criterion = resolved.criterion.as_ref().expect("validated");
    let r_max = resolved.config.r_max;
    let sums = drive::shell_sums(criterion, r_max)?;
    let report = series::report_from_shell_sums(&sums)?;
    Ok(VerdictResult {
        bracket: criterion.bracket(),
        lambda: criterion.lambda(),
        dyadic_spread: series::dyadic_spread(&sums),
        lower_bound_onset: series::lower_bound_onset(criterion, r_max)?,
        report,
    })
}

#[derive(Debug, Serialize)]
pub struct ContentResult {
    pub rectangle: Hyperrectangle,
    pub bracket: u32,
    pub closed_form: ContentEstimate,
    pub oracle: Option<ContentEstimate>,
    /// `oracle / closed_form`.
    pub oracle_ratio: Option<f64>,
}

pub fn content(resolved: &Resolved) -> Result<ContentResult, CliError> {
    let rect = resolved.rectangle.clone().expect("validated");
    let steps = resolved.config.content.as_ref().expect("validated").steps_per_octave;
    let f = &resolved.f;
    let closed = content::rect_content_closed(f, &rect)?;
    let oracle = if rect.dim() <= content::ORACLE_MAX_DIM {
        Some(content::rect_content_oracle(f, &rect, &content::diameter_grid(&rect, steps))?)
    } else {
        None
    };
    Ok(ContentResult {
        bracket: f.content_bracket(rect.dim() as u32)?,
        oracle_ratio: oracle.map(|o| o.value / closed.value),
        closed_form: closed,
        oracle,
        rectangle: rect,
    })
}

#[derive(Debug, Serialize)]
pub struct ForwardSummary {
    /// `(t, u)` pairs checked against a found witness.
    pub checked: u64,
    pub violations: u64,
    /// Smallest `rhs - lhs` seen.
    pub min_gap: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct DualSummary {
    /// `c` in `||A_{*,j}.u|| < c (t_scale t(u))^-beta_j`.
    pub c: f64,
    pub t_scale: f64,
    pub checked: u64,
    pub satisfied: u64,
    pub first_vectors: Vec<Vec<i64>>,
}

#[derive(Debug, Serialize)]
pub struct TransferResult {
    pub constants: Option<TransferConstants>,
    pub constants_error: Option<String>,
    pub dirichlet: Vec<DirichletTest>,
    pub forward: ForwardSummary,
    pub backward: Vec<(f64, BackwardOutcome)>,
    pub dual: DualSummary,
}

fn dual_vectors(m: usize, u_range: u64) -> Vec<IntegerVector> {
    (1..=u_range).flat_map(|r| Shell::new(m, r)).collect()
}

pub fn transfer(resolved: &Resolved) -> Result<TransferResult, CliError> {
    let sys: &AffineSystem = resolved.system.as_ref().expect("validated");
    let psi = resolved.psi.as_ref().expect("validated");
    let spec = resolved.config.transfer.as_ref().expect("validated");
    let (m, n) = (sys.m(), sys.n());
    let lambda = psi.lambda_decay()?;
    let (constants, constants_error) =
        match TransferConstants::new(sys.b(), lambda, sys.alpha(), sys.beta()) {
            Ok(c) => (Some(c), None),
            Err(e) => (None, Some(e.to_string())),
        };
    let vectors = dual_vectors(m, spec.u_range);

    let mut dirichlet = Vec::new();
    let mut forward = ForwardSummary {
        checked: 0,
        violations: 0,
        min_gap: None,
    };
    for &t in &spec.t {
        let test = is_dirichlet_at_t_with_budget(sys, psi, t, spec.budget)?;
        if let Some(q) = &test.witness {
            let c = sys.weighted_residual(q);
            for u in &vectors {
                let ineq = forward_inequality(sys, c, t, u.entries());
                forward.checked += 1;
                forward.violations += u64::from(!ineq.holds);
                let gap = ineq.rhs - ineq.lhs;
                forward.min_gap = Some(forward.min_gap.map_or(gap, |g: f64| g.min(gap)));
            }
        }
        dirichlet.push(test);
    }

    let backward = spec
        .t
        .iter()
        .map(|&t| backward_consistency(sys, spec.c, t, spec.u_range, spec.budget).map(|o| (t, o)))
        .collect::<Result<Vec<_>, Error>>()?;

    let c = num::factorial((m + n) as u32).powi(2);
    let t_scale = match &constants {
        Some(k) => (-f64::from(k.tau_const)).exp2(),
        None => 1.0,
    };
    let mut dual = DualSummary {
        c,
        t_scale,
        checked: 0,
        satisfied: 0,
        first_vectors: Vec::new(),
    };
    for u in &vectors {
        dual.checked += 1;
        if transference::dual_condition(sys, psi, u, c, t_scale)? {
            dual.satisfied += 1;
            if dual.first_vectors.len() < 32 {
                dual.first_vectors.push(u.entries().to_vec());
            }
        }
    }
    Ok(TransferResult {
        constants,
        constants_error,
        dirichlet,
        forward,
        backward,
        dual,
    })
}

#[derive(Debug, Serialize)]
pub struct ProfileSummary {
    pub scanned: u64,
    pub active: u64,
    /// Good vectors for which no `k` exists (finitely many).
    pub no_valid_k: u64,
    pub violations: Vec<(Vec<i64>, ProfileViolation)>,
    /// Minimum over active profiles of `H^f_inf(R) / varpi^(mn)`.
    pub min_content_ratio: Option<f64>,
    pub min_content_ratio_at: Option<Vec<i64>>,
}

#[derive(Debug, Serialize)]
pub struct McSample {
    pub profile: PhiProfile,
    pub estimate: McEstimate,
    /// Interval-union value, available when `m = 1`.
    pub exact: Option<f64>,
    /// `(phi(|u|)/|u|)^n prod phi_j`.
    pub sandwich_lower: f64,
    /// `2^n prod phi_j`.
    pub sandwich_upper: f64,
}

#[derive(Debug, Serialize)]
pub struct LimsupResult {
    pub construction: Construction,
    pub lambda: Option<LambdaSummary>,
    pub lambda_error: Option<String>,
    pub profiles: ProfileSummary,
    /// Active profiles with some `phi_j >= 1/2`, left out of the Monte Carlo
    /// and quasi-independence samples.
    pub wide_profiles: u64,
    pub monte_carlo: Vec<McSample>,
    pub quasi_independence: QiScan,
}

#[derive(Debug, Serialize)]
pub struct LambdaSummary {
    pub totient_threshold: f64,
    pub totient_density: f64,
    pub members: Vec<u64>,
    pub density: f64,
    pub block_densities: Vec<(u32, f64)>,
    pub mass_ratio: f64,
    pub lambda_mass: f64,
    pub full_mass: f64,
    pub skipped: usize,
}

impl From<&LambdaReport> for LambdaSummary {
    fn from(r: &LambdaReport) -> Self {
        Self {
            totient_threshold: r.totient_threshold,
            totient_density: r.totient_density,
            members: r.members.clone(),
            density: r.density,
            block_densities: r.block_densities(),
            mass_ratio: r.mass_ratio,
            lambda_mass: r.lambda_mass,
            full_mass: r.full_mass,
            skipped: r.skipped,
        }
    }
}

struct ShellScan {
    profiles: Vec<PhiProfile>,
    no_valid_k: u64,
    scanned: u64,
    violations: Vec<(Vec<i64>, ProfileViolation)>,
    min_ratio: Option<(f64, Vec<i64>)>,
}

fn scan_shell(con: &Construction, r: u64) -> Result<ShellScan, Error> {
    let mut scan = ShellScan {
        profiles: Vec::new(),
        no_valid_k: 0,
        scanned: 0,
        violations: Vec::new(),
        min_ratio: None,
    };
    let m = con.criterion.m();
    for u in limsup::gamma_set(m, r, &con.b)? {
        scan.scanned += 1;
        let p = match phi_profile(con, &u) {
            Ok(p) => p,
            Err(Error::NoValidK { .. }) => {
                scan.no_valid_k += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        if let Some(v) = check_profile(con, &p)? {
            scan.violations.push((u.entries().to_vec(), v));
        }
        let ratio = inner_content_ratio(con, &p)?;
        if scan.min_ratio.as_ref().is_none_or(|(x, _)| ratio < *x) {
            scan.min_ratio = Some((ratio, u.entries().to_vec()));
        }
        scan.profiles.push(p);
    }
    Ok(scan)
}

pub fn limsup(resolved: &Resolved) -> Result<(LimsupResult, Vec<CsvRow>), CliError> {
    let con = resolved.construction.as_ref().expect("validated");
    let cfg = &resolved.config;
    let spec = &cfg.limsup;
    let (m, n) = (con.criterion.m(), con.criterion.n());

    let shells = drive::lambda_shells(con, cfg.r_max, spec.totient_threshold)?;
    let (lambda, lambda_error) = match LambdaReport::from_shells(shells.clone(), spec.totient_threshold, n) {
        Ok(rep) => (Some(LambdaSummary::from(&rep)), None),
        Err(e) => (None, Some(e.to_string())),
    };

    let scans = (1..=cfg.r_max)
        .into_par_iter()
        .map(|r| scan_shell(con, r))
        .collect::<Result<Vec<_>, Error>>()?;

    let mut profiles = ProfileSummary {
        scanned: 0,
        active: 0,
        no_valid_k: 0,
        violations: Vec::new(),
        min_content_ratio: None,
        min_content_ratio_at: None,
    };
    for s in &scans {
        profiles.scanned += s.scanned;
        profiles.active += s.profiles.len() as u64;
        profiles.no_valid_k += s.no_valid_k;
        profiles.violations.extend(s.violations.iter().cloned());
        if let Some((x, u)) = &s.min_ratio {
            if profiles.min_content_ratio.is_none_or(|y| *x < y) {
                profiles.min_content_ratio = Some(*x);
                profiles.min_content_ratio_at = Some(u.clone());
            }
        }
    }

    let phi = limsup::totients(cfg.r_max as usize);
    let mut monte_carlo = Vec::new();
    let narrow = |p: &&PhiProfile| p.phi.iter().all(|&w| w < 0.5);
    for p in scans.iter().flat_map(|s| &s.profiles).filter(narrow).take(spec.mc_vectors) {
        let u = p.u.entries().to_vec();
        let widths = p.phi.clone();
        let estimate = drive::mc_measure(m * n, cfg.samples, cfg.seed, |x| {
            limsup::rprime_membership(x, n, &u, &widths).unwrap_or(false)
        })?;
        let exact = if m == 1 {
            Some(limsup::rprime_measure_exact(u[0], &widths)?)
        } else {
            None
        };
        let norm = p.u.sup_norm();
        let prod: f64 = widths.iter().product();
        monte_carlo.push(McSample {
            profile: p.clone(),
            estimate,
            exact,
            sandwich_lower: (phi[norm as usize] as f64 / norm as f64).powi(n as i32) * prod,
            sandwich_upper: 2f64.powi(n as i32) * prod,
        });
    }

    let qi_top = spec.qi_r_max.min(cfg.r_max);
    let first = |r: u64| scans[(r - 1) as usize].profiles.iter().find(narrow);
    let mut pairs = Vec::new();
    let mut pair_r = Vec::new();
    for r in 2..=qi_top {
        let Some(p1) = first(r) else { continue };
        for d in 1..=spec.qi_pairs_per_r.min(r - 1) {
            if let Some(p2) = first(r - d) {
                pairs.push((p1.u.clone(), p1.phi.clone(), p2.u.clone(), p2.phi.clone()));
                pair_r.push(r);
            }
        }
    }
    let qi = limsup::quasi_independence_scan(&pairs, cfg.samples, cfg.seed)?;

    let rows = (1..=cfg.r_max)
        .map(|r| {
            let s = &shells[(r - 1) as usize];
            let qi_ratio_max = qi
                .pairs
                .iter()
                .filter(|p| p.u1.sup_norm() == r)
                .map(|p| p.ratio)
                .reduce(f64::max);
            CsvRow {
                r,
                shell_sum: s.all_gamma * (r as f64).powi(n as i32),
                lambda_member: s.member,
                min_content_ratio: scans[(r - 1) as usize].min_ratio.as_ref().map(|(x, _)| *x),
                qi_ratio_max,
            }
        })
        .collect();

    Ok((
        LimsupResult {
            construction: con.clone(),
            lambda,
            lambda_error,
            wide_profiles: scans
                .iter()
                .flat_map(|s| &s.profiles)
                .filter(|p| !narrow(p))
                .count() as u64,
            profiles,
            monte_carlo,
            quasi_independence: qi,
        },
        rows,
    ))
}

#[derive(Debug, Serialize)]
pub struct BaselineResult {
    /// `(Q, sum_{q<=Q} q^(n-1) psi(q)^m)`.
    pub khintchine_groshev: Vec<(u64, f64)>,
    /// `(Q, sum_{q<=Q} f(psi(q)/q) (psi(q)/q)^(m(1-n)) q^(m+n-1))`.
    pub jarnik: Option<Vec<(u64, f64)>>,
    pub jarnik_error: Option<String>,
}

fn checkpoints(q_max: u64) -> Vec<u64> {
    let mut qs: Vec<u64> = std::iter::successors(Some(10u64), |q| q.checked_mul(10))
        .take_while(|&q| q < q_max)
        .collect();
    qs.push(q_max);
    qs
}

pub fn baseline(resolved: &Resolved) -> Result<BaselineResult, CliError> {
    let psi = resolved.psi.as_ref().expect("validated");
    let cfg = &resolved.config;
    let (m, n) = (cfg.m as u32, cfg.n as u32);
    let qs = checkpoints(cfg.baseline.q_max);
    let khintchine_groshev = qs
        .iter()
        .map(|&q| (q, series::khintchine_groshev_partial(psi, m, n, q)))
        .collect();
    let (jarnik, jarnik_error) = match qs
        .iter()
        .map(|&q| series::jarnik_partial(psi, &resolved.f, m, n, q).map(|s| (q, s)))
        .collect::<Result<Vec<_>, Error>>()
    {
        Ok(v) => (Some(v), None),
        Err(e) => (None, Some(e.to_string())),
    };
    Ok(BaselineResult {
        khintchine_groshev,
        jarnik,
        jarnik_error,
    })
}
