// SPDX-License-Identifier: Apache-2.0

//! Transference between the inhomogeneous system `||Aq + b||` and the dual
//! quantities `||A_{*,j} . u||`, `||u . b||`.
//!
//! Nothing here decides membership in the non-improvable set (that needs all
//! sufficiently large `t`); the functions evaluate the finite-`t` inequalities
//! and search lattice boxes for witnesses.

use alloc::vec;
use alloc::vec::Vec;

use crate::model::{dual_time, ApproxFunction, IntegerVector, Shell, WeightVector};
use crate::num::{self, ln, nearest_int_dist};
use crate::{Error, Result};

/// Default cap on lattice points visited by one witness search.
pub const ENUMERATION_BUDGET: u64 = 10_000_000;

/// Absolute slack when comparing the two sides of the forward transference
/// inequality (both sides carry O(1e-15) rounding).
pub const FORWARD_SLACK: f64 = 1e-12;

/// `A` in `M_{m,n}` together with the shift `b` and both weight vectors.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct AffineSystem {
    rows: Vec<Vec<f64>>,
    b: Vec<f64>,
    alpha: WeightVector,
    beta: WeightVector,
}

impl AffineSystem {
    /// `rows` is `A` row by row (`m` rows of length `n`), entries in `[0, 1]`.
    pub fn new(rows: Vec<Vec<f64>>, b: Vec<f64>, alpha: WeightVector, beta: WeightVector) -> Result<Self> {
        let (m, n) = (alpha.len(), beta.len());
        if rows.len() != m || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("matrix shape does not match the weight vectors"));
        }
        if b.len() != m {
            return Err(Error::InvalidInput("b must have length m"));
        }
        if rows.iter().flatten().any(|a| !(0.0..=1.0).contains(a)) {
            return Err(Error::InvalidInput("matrix entries must lie in [0, 1]"));
        }
        if b.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("b must be finite"));
        }
        Ok(Self { rows, b, alpha, beta })
    }

    pub fn m(&self) -> usize {
        self.alpha.len()
    }

    pub fn n(&self) -> usize {
        self.beta.len()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn alpha(&self) -> &WeightVector {
        &self.alpha
    }

    pub fn beta(&self) -> &WeightVector {
        &self.beta
    }

    /// `A_{*,j} . u`, with `j` 0-based.
    pub fn column_dot(&self, j: usize, u: &[i64]) -> f64 {
        self.rows.iter().zip(u).map(|(row, &ui)| row[j] * ui as f64).sum()
    }

    /// `(Aq + b)_i`.
    pub fn image(&self, q: &[i64]) -> Vec<f64> {
        self.rows
            .iter()
            .zip(&self.b)
            .map(|(row, bi)| row.iter().zip(q).map(|(a, &qj)| a * qj as f64).sum::<f64>() + bi)
            .collect()
    }

    /// `||Aq + b||_{Z,alpha} = max_i ||(Aq+b)_i||^(1/alpha_i)`.
    pub fn weighted_residual(&self, q: &[i64]) -> f64 {
        self.image(q)
            .iter()
            .enumerate()
            .map(|(i, x)| num::pow(nearest_int_dist(*x), 1.0 / self.alpha[i]))
            .fold(0.0, f64::max)
    }
}

/// `||u . b||_Z`.
pub fn dot_dist(u: &[i64], b: &[f64]) -> f64 {
    nearest_int_dist(u.iter().zip(b).map(|(&x, y)| x as f64 * y).sum())
}

/// Index `i` attaining `eps(b) = ||b_i|| / 4` (first on ties).
pub fn epsilon_index(b: &[f64]) -> Result<usize> {
    b.iter()
        .enumerate()
        .map(|(i, &x)| (i, nearest_int_dist(x)))
        .filter(|&(_, d)| d > 0.0)
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .map(|(i, _)| i)
        .ok_or(Error::IntegralShift)
}

/// `eps(b) = min_{i : ||b_i|| > 0} ||b_i|| / 4`.
pub fn epsilon_b(b: &[f64]) -> Result<f64> {
    Ok(nearest_int_dist(b[epsilon_index(b)?]) / 4.0)
}

/// Smallest integer `tau` with `lambda^(-tau alpha_i) < dist / (m + n)` for
/// every `i`.
pub fn tau_for_distance(dist: f64, lambda: f64, alpha: &WeightVector, n: usize) -> Result<u32> {
    if !(dist > 0.0) {
        return Err(Error::ZeroDistance);
    }
    if !(lambda > 1.0) {
        return Err(Error::LambdaDecay { lambda });
    }
    let bound = dist / (alpha.len() + n) as f64;
    let ok = |tau: i64| {
        alpha
            .as_slice()
            .iter()
            .all(|&a| num::pow(lambda, -(tau as f64) * a) < bound)
    };
    let need = -ln(bound) / ln(lambda);
    let guess = alpha
        .as_slice()
        .iter()
        .map(|&a| libm::floor(need / a) as i64 + 1)
        .max()
        .unwrap_or(1);
    let mut tau = guess.max(1);
    while tau > 1 && ok(tau - 1) {
        tau -= 1;
    }
    while !ok(tau) {
        tau += 1;
    }
    Ok(tau as u32)
}

/// `tau(b, u)`; requires `||u . b|| > 0`.
pub fn tau_b_u(b: &[f64], u: &[i64], lambda: f64, alpha: &WeightVector, n: usize) -> Result<u32> {
    tau_for_distance(dot_dist(u, b), lambda, alpha, n)
}

/// Smallest integer `tau` with `lambda^(tau alpha_i) >= ((m+n)!)^2` for every
/// `i`. The comparison is done in log space with a relative slack of 1e-12
/// so that exact boundary cases resolve as equalities.
pub fn tau_const(lambda: f64, alpha: &WeightVector, n: usize) -> Result<u32> {
    if !(lambda > 1.0) {
        return Err(Error::LambdaDecay { lambda });
    }
    let target = 2.0 * ln(num::factorial((alpha.len() + n) as u32));
    let ok = |tau: u32| {
        alpha
            .as_slice()
            .iter()
            .all(|&a| f64::from(tau) * a * ln(lambda) >= target * (1.0 - 1e-12))
    };
    let mut tau = 1;
    while !ok(tau) {
        tau += 1;
    }
    Ok(tau)
}

/// Constants of the divergence construction for a fixed `b` and `psi`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct TransferConstants {
    pub eps_b: f64,
    /// `tau` at distance exactly `eps(b)`; bounds `tau(b, u)` whenever
    /// `||u . b|| > eps(b)`.
    pub c_b: u32,
    pub tau_const: u32,
    /// `eps(b) 2^(-c_b |beta|) / (m + n)` with `|beta| = beta_1`.
    pub c_tilde: f64,
}

impl TransferConstants {
    pub fn new(b: &[f64], lambda: f64, alpha: &WeightVector, beta: &WeightVector) -> Result<Self> {
        if b.len() != alpha.len() {
            return Err(Error::InvalidInput("b must have length m"));
        }
        let n = beta.len();
        let eps_b = epsilon_b(b)?;
        let c_b = tau_for_distance(eps_b, lambda, alpha, n)?;
        let tau_const = tau_const(lambda, alpha, n)?;
        let c_tilde = eps_b * libm::exp2(-f64::from(c_b) * beta.sup()) / (alpha.len() + n) as f64;
        Ok(Self {
            eps_b,
            c_b,
            tau_const,
            c_tilde,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Inequality {
    Strict,
    NonStrict,
}

impl Inequality {
    fn holds(self, lhs: f64, rhs: f64) -> bool {
        match self {
            Inequality::Strict => lhs < rhs,
            Inequality::NonStrict => lhs <= rhs,
        }
    }
}

/// What a witness `q` must satisfy:
/// `||(Aq+b)_i|| (approx) target^alpha_i` and `|q_j| (height) t^beta_j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessQuery {
    pub t: f64,
    pub target: f64,
    pub approx: Inequality,
    pub height: Inequality,
    pub allow_zero: bool,
    pub budget: u64,
}

/// Witness order on one coordinate: `0, 1, -1, 2, -2, ...`.
fn coordinate_sequence(bound: i64) -> Vec<i64> {
    let mut v = vec![0];
    for k in 1..=bound {
        v.push(k);
        v.push(-k);
    }
    v
}

/// First `q` (lexicographic in the coordinate order `0, 1, -1, 2, -2, ...`)
/// satisfying the query, or `None`.
pub fn find_witness(sys: &AffineSystem, query: &WitnessQuery) -> Result<Option<Vec<i64>>> {
    let beta = sys.beta();
    let bounds: Vec<i64> = (0..sys.n())
        .map(|j| {
            let h = num::pow(query.t, beta[j]);
            match query.height {
                Inequality::NonStrict => libm::floor(h) as i64,
                Inequality::Strict => libm::ceil(h) as i64 - 1,
            }
            .max(0)
        })
        .collect();
    let needed: f64 = bounds.iter().map(|&b| (2 * b + 1) as f64).product();
    if needed > query.budget as f64 {
        return Err(Error::Budget {
            needed,
            cap: query.budget,
        });
    }
    let targets: Vec<f64> = sys
        .alpha()
        .as_slice()
        .iter()
        .map(|&a| num::pow(query.target, a))
        .collect();
    let seqs: Vec<Vec<i64>> = bounds.iter().map(|&b| coordinate_sequence(b)).collect();
    let mut idx = vec![0usize; sys.n()];
    loop {
        let q: Vec<i64> = idx.iter().zip(&seqs).map(|(&k, s)| s[k]).collect();
        if query.allow_zero || q.iter().any(|&x| x != 0) {
            let image = sys.image(&q);
            if image
                .iter()
                .zip(&targets)
                .all(|(x, &bound)| query.approx.holds(nearest_int_dist(*x), bound))
            {
                return Ok(Some(q));
            }
        }
        // Odometer, last coordinate fastest.
        let mut pos = sys.n();
        loop {
            if pos == 0 {
                return Ok(None);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < seqs[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Result of one Dirichlet test at a fixed time `t`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DirichletTest {
    pub t: f64,
    pub solvable: bool,
    pub witness: Option<Vec<i64>>,
}

/// Does some `q != 0` with `|q_j| < t^beta_j` satisfy
/// `||(Aq+b)_i|| < psi(t)^alpha_i` for all `i`?
pub fn is_dirichlet_at_t(sys: &AffineSystem, psi: &ApproxFunction, t: f64) -> Result<DirichletTest> {
    is_dirichlet_at_t_with_budget(sys, psi, t, ENUMERATION_BUDGET)
}

pub fn is_dirichlet_at_t_with_budget(
    sys: &AffineSystem,
    psi: &ApproxFunction,
    t: f64,
    budget: u64,
) -> Result<DirichletTest> {
    let query = WitnessQuery {
        t,
        target: psi.eval(t)?,
        approx: Inequality::Strict,
        height: Inequality::Strict,
        allow_zero: false,
        budget,
    };
    let witness = find_witness(sys, &query)?;
    Ok(DirichletTest {
        t,
        solvable: witness.is_some(),
        witness,
    })
}

/// `||A_{*,j} . u|| < c (t_scale t(u))^-beta_j` for every `j`.
pub fn dual_condition(
    sys: &AffineSystem,
    psi: &ApproxFunction,
    u: &IntegerVector,
    c: f64,
    t_scale: f64,
) -> Result<bool> {
    let t = dual_time(psi, sys.alpha(), u.entries())?.t * t_scale;
    Ok((0..sys.n()).all(|j| nearest_int_dist(sys.column_dot(j, u.entries())) < c * num::pow(t, -sys.beta()[j])))
}

/// Both sides of `||u.b|| <= K max{ max_j t^beta_j ||A_{*,j}.u||, max_i c^alpha_i |u_i| }`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct TransferInequality {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

fn dual_max(sys: &AffineSystem, c: f64, t: f64, u: &[i64]) -> f64 {
    let cols = (0..sys.n())
        .map(|j| num::pow(t, sys.beta()[j]) * nearest_int_dist(sys.column_dot(j, u)))
        .fold(0.0, f64::max);
    let rows = u
        .iter()
        .enumerate()
        .map(|(i, &x)| num::pow(c, sys.alpha()[i]) * x.unsigned_abs() as f64)
        .fold(0.0, f64::max);
    cols.max(rows)
}

/// The forward inequality with `K = m + n`; holds whenever some `q` has
/// `||Aq+b||_{Z,alpha} <= c` and `|q|_beta <= t`.
pub fn forward_inequality(sys: &AffineSystem, c: f64, t: f64, u: &[i64]) -> TransferInequality {
    let lhs = dot_dist(u, sys.b());
    let rhs = (sys.m() + sys.n()) as f64 * dual_max(sys, c, t, u);
    TransferInequality {
        lhs,
        rhs,
        holds: lhs <= rhs + FORWARD_SLACK,
    }
}

/// `2^(m+n-1) ((m+n)!)^-2`.
pub fn backward_constant(m: usize, n: usize) -> f64 {
    let k = (m + n) as u32;
    libm::exp2(f64::from(k - 1)) / (num::factorial(k) * num::factorial(k))
}

/// The backward hypothesis at one `u`, `K = 2^(m+n-1) ((m+n)!)^-2`.
pub fn backward_inequality(sys: &AffineSystem, c: f64, t: f64, u: &[i64]) -> TransferInequality {
    let lhs = dot_dist(u, sys.b());
    let rhs = backward_constant(sys.m(), sys.n()) * dual_max(sys, c, t, u);
    TransferInequality {
        lhs,
        rhs,
        holds: lhs <= rhs,
    }
}

/// Range-limited check of the backward hypothesis over `1 <= |u| <= u_range`.
/// It can refute the hypothesis but never confirm it.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct BackwardScan {
    pub u_range: u64,
    pub hypothesis_holds_on_range: bool,
    pub counterexample: Option<Vec<i64>>,
}

pub fn cassels_backward_scan(sys: &AffineSystem, c: f64, t: f64, u_range: u64) -> BackwardScan {
    for r in 1..=u_range {
        for u in Shell::new(sys.m(), r) {
            if !backward_inequality(sys, c, t, u.entries()).holds {
                return BackwardScan {
                    u_range,
                    hypothesis_holds_on_range: false,
                    counterexample: Some(u.into_inner()),
                };
            }
        }
    }
    BackwardScan {
        u_range,
        hypothesis_holds_on_range: true,
        counterexample: None,
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(tag = "outcome", rename_all = "snake_case"))]
pub enum BackwardOutcome {
    /// Some `u` in range violates the hypothesis.
    HypothesisRefuted { u: Vec<i64> },
    /// A `q` with `||Aq+b||_{Z,alpha} <= c`, `|q|_beta <= t` exists.
    ConclusionHolds { q: Vec<i64> },
    /// The hypothesis held on the scanned range yet no `q` exists: the range
    /// was too small to see the refuting `u`. Not a contradiction.
    RangeArtifact,
}

pub fn backward_consistency(
    sys: &AffineSystem,
    c: f64,
    t: f64,
    u_range: u64,
    budget: u64,
) -> Result<BackwardOutcome> {
    let scan = cassels_backward_scan(sys, c, t, u_range);
    if let Some(u) = scan.counterexample {
        return Ok(BackwardOutcome::HypothesisRefuted { u });
    }
    let query = WitnessQuery {
        t,
        target: c,
        approx: Inequality::NonStrict,
        height: Inequality::NonStrict,
        allow_zero: true,
        budget,
    };
    Ok(match find_witness(sys, &query)? {
        Some(q) => BackwardOutcome::ConclusionHolds { q },
        None => BackwardOutcome::RangeArtifact,
    })
}

/// A nearby `q` with `||q.b|| > eps(b)`: `u` itself when it already
/// qualifies, otherwise `u + e_i` with `i` the index attaining `eps(b)`.
pub fn good_neighbor(u: &IntegerVector, b: &[f64]) -> Result<IntegerVector> {
    let eps = epsilon_b(b)?;
    if dot_dist(u.entries(), b) > eps {
        return Ok(u.clone());
    }
    let i = epsilon_index(b)?;
    let mut q = u.entries().to_vec();
    q[i] += 1;
    IntegerVector::new(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Side;
    use approx::assert_relative_eq;

    fn one_by_one(a: f64, b: f64) -> AffineSystem {
        AffineSystem::new(
            vec![vec![a]],
            vec![b],
            WeightVector::alpha(vec![1.0]).unwrap(),
            WeightVector::beta(vec![1.0]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn epsilon_examples() {
        assert_relative_eq!(epsilon_b(&[0.3, 0.5]).unwrap(), 0.075, max_relative = 1e-15);
        assert_relative_eq!(epsilon_b(&[2.0, 0.5]).unwrap(), 0.125);
        assert_eq!(epsilon_b(&[1.0, 2.0]), Err(Error::IntegralShift));
        assert_relative_eq!(epsilon_b(&[1.3]).unwrap(), epsilon_b(&[0.3]).unwrap(), max_relative = 1e-14);
    }

    #[test]
    fn tau_examples() {
        let half = WeightVector::uniform(2, Side::Alpha).unwrap();
        assert_eq!(tau_for_distance(0.3, 2.0, &half, 1).unwrap(), 7);
        assert_eq!(tau_for_distance(0.0, 2.0, &half, 1), Err(Error::ZeroDistance));
        assert_eq!(tau_const(2.0, &half, 1).unwrap(), 11);
        assert_eq!(tau_const(36.0, &half, 1).unwrap(), 2);
        assert_eq!(tau_const(1e9, &half, 1).unwrap(), 1);
        let third = WeightVector::uniform(3, Side::Alpha).unwrap();
        assert_eq!(tau_const(576.0, &third, 1).unwrap(), 3);
    }

    #[test]
    fn tau_is_at_least_one() {
        let one = WeightVector::alpha(vec![1.0]).unwrap();
        assert!(tau_for_distance(0.5, 1e12, &one, 1).unwrap() >= 1);
    }

    #[test]
    fn constants() {
        let alpha = WeightVector::alpha(vec![1.0]).unwrap();
        let beta = WeightVector::beta(vec![0.5, 0.5]).unwrap();
        let c = TransferConstants::new(&[0.3], 2.0, &alpha, &beta).unwrap();
        assert_relative_eq!(c.eps_b, 0.075, max_relative = 1e-15);
        assert_eq!(c.c_b, tau_for_distance(0.075, 2.0, &alpha, 2).unwrap());
        assert_relative_eq!(
            c.c_tilde,
            0.075 * 2f64.powf(-f64::from(c.c_b) * 0.5) / 3.0,
            max_relative = 1e-14
        );
    }

    #[test]
    fn dirichlet_strictness() {
        let psi = ApproxFunction::power(1.0, 1.0).unwrap();
        let yes = is_dirichlet_at_t(&one_by_one(0.4, 0.0), &psi, 2.0).unwrap();
        assert!(yes.solvable);
        assert_eq!(yes.witness, Some(vec![1]));
        let no = is_dirichlet_at_t(&one_by_one(0.5, 0.0), &psi, 2.0).unwrap();
        assert!(!no.solvable);
    }

    #[test]
    fn budget_is_explicit() {
        let psi = ApproxFunction::power(1.0, 1.0).unwrap();
        let r = is_dirichlet_at_t_with_budget(&one_by_one(0.3, 0.1), &psi, 1e6, 1000);
        assert!(matches!(r, Err(Error::Budget { .. })));
    }

    #[test]
    fn dual_condition_with_integral_products() {
        let psi = ApproxFunction::power(1.0, 1.0).unwrap();
        let sys = one_by_one(0.25, 0.3);
        let u = IntegerVector::new(vec![8]).unwrap();
        assert!(dual_condition(&sys, &psi, &u, 1e-9, 1.0).unwrap());
        let irr = one_by_one(core::f64::consts::FRAC_1_SQRT_2, 0.3);
        assert!(!dual_condition(&irr, &psi, &u, 1e-12, 1.0).unwrap());
    }

    #[test]
    fn backward_scan_integral_shift() {
        let sys = one_by_one(0.3, 2.0);
        let scan = cassels_backward_scan(&sys, 0.1, 10.0, 30);
        assert!(scan.hypothesis_holds_on_range);
        let sys = one_by_one(0.0, 0.5);
        let scan = cassels_backward_scan(&sys, 0.01, 10.0, 5);
        assert_eq!(scan.counterexample, Some(vec![-1]));
        assert!(matches!(
            backward_consistency(&sys, 0.01, 10.0, 5, ENUMERATION_BUDGET).unwrap(),
            BackwardOutcome::HypothesisRefuted { .. }
        ));
    }

    #[test]
    fn neighbor_moves_off_bad_vectors() {
        let b = [0.3, 0.5];
        let u = IntegerVector::new(vec![10, 0]).unwrap();
        // 10 * 0.3 = 3 is integral, so u is bad; shift the first coordinate.
        let q = good_neighbor(&u, &b).unwrap();
        assert_eq!(q.entries(), &[11, 0]);
        assert!(dot_dist(q.entries(), &b) > epsilon_b(&b).unwrap());
    }
}
