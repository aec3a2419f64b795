// SPDX-License-Identifier: Apache-2.0

//! Hausdorff f-content of hyperrectangles and covers of products of
//! hyperplane neighbourhoods.
//!
//! [`rect_content_closed`] evaluates the comparable closed form
//! `min_i f(a_i) * prod_{j<i} a_j / a_i`; [`rect_content_oracle`] exhibits
//! explicit ball covers and is therefore a true upper bound for the content.
//! Diameters are used throughout, matching the `sum f(|B_i|)` definition.

use alloc::vec::Vec;

use crate::model::{Criterion, DimensionFunction, IntegerVector};
use crate::num;
use crate::{Error, Result};

/// Largest dimension the cover oracle accepts.
pub const ORACLE_MAX_DIM: usize = 3;

/// Axis-parallel box with side lengths sorted non-increasing.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Hyperrectangle {
    sides: Vec<f64>,
}

impl Hyperrectangle {
    /// Sorts the sides; every side must be finite and positive.
    pub fn new(mut sides: Vec<f64>) -> Result<Self> {
        if sides.is_empty() {
            return Err(Error::InvalidInput("hyperrectangle needs at least one side"));
        }
        if sides.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
            return Err(Error::InvalidInput("hyperrectangle sides must be positive"));
        }
        sides.sort_by(|a, b| b.total_cmp(a));
        Ok(Self { sides })
    }

    pub fn dim(&self) -> usize {
        self.sides.len()
    }

    pub fn sides(&self) -> &[f64] {
        &self.sides
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.sides.iter().map(|a| a * c).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ContentMethod {
    ClosedForm,
    CoverOracle,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ContentEstimate {
    pub value: f64,
    /// 1-based. For the closed form, the minimizing `i`; for the oracle, the
    /// number of sides that had to be subdivided by the winning cover
    /// (clamped to `[1, d]`).
    pub argmin_index: usize,
    pub method: ContentMethod,
}

/// `min_{1<=i<=d} f(a_i) prod_{j<i} (a_j / a_i)`, smallest `i` on ties.
///
/// Requires `k ⪯ f ⪯ k + 1` for some `0 <= k <= d - 1`.
pub fn rect_content_closed(f: &DimensionFunction, rect: &Hyperrectangle) -> Result<ContentEstimate> {
    f.content_bracket(rect.dim() as u32)?;
    let a = rect.sides();
    let mut best = f64::INFINITY;
    let mut arg = 1;
    for (i, &ai) in a.iter().enumerate() {
        let stretch: f64 = a[..i].iter().map(|aj| aj / ai).product();
        let v = f.eval(ai) * stretch;
        if v < best {
            best = v;
            arg = i + 1;
        }
    }
    Ok(ContentEstimate {
        value: best,
        argmin_index: arg,
        method: ContentMethod::ClosedForm,
    })
}

/// Best single-diameter grid cover over `diameters`.
///
/// A ball of diameter `r` contains a cube of side `r / sqrt(d)`, so tiling
/// the box with such cubes needs `prod_i ceil(a_i sqrt(d) / r)` balls. Each
/// candidate is a genuine cover, hence the minimum upper-bounds the content.
pub fn rect_content_oracle(
    f: &DimensionFunction,
    rect: &Hyperrectangle,
    diameters: &[f64],
) -> Result<ContentEstimate> {
    let d = rect.dim();
    if d > ORACLE_MAX_DIM {
        return Err(Error::InvalidInput("cover oracle supports d <= 3"));
    }
    f.content_bracket(d as u32)?;
    let root_d = libm::sqrt(d as f64);
    let mut best: Option<(f64, f64)> = None;
    for &r in diameters.iter().filter(|r| r.is_finite() && **r > 0.0) {
        let cube = r / root_d;
        let count: f64 = rect
            .sides()
            .iter()
            .map(|a| libm::ceil(a / cube).max(1.0))
            .product();
        let v = f.eval(r) * count;
        if best.is_none_or(|(bv, _)| v < bv) {
            best = Some((v, r));
        }
    }
    let (value, r) = best.ok_or(Error::EmptyGrid)?;
    let cube = r / root_d;
    let subdivided = rect.sides().iter().filter(|&&a| a > cube).count();
    Ok(ContentEstimate {
        value,
        argmin_index: subdivided.clamp(1, d),
        method: ContentMethod::CoverOracle,
    })
}

/// Geometric diameter grid from `a_d` up to `sqrt(d) a_1` with
/// `steps_per_octave` points per doubling, plus the anchors `sqrt(d) a_i`.
pub fn diameter_grid(rect: &Hyperrectangle, steps_per_octave: u32) -> Vec<f64> {
    let root_d = libm::sqrt(rect.dim() as f64);
    let lo = *rect.sides().last().unwrap_or(&1.0);
    let hi = rect.sides()[0] * root_d;
    let ratio = libm::exp2(1.0 / f64::from(steps_per_octave.max(1)));
    let mut grid = Vec::new();
    let mut r = lo;
    while r < hi {
        grid.push(r);
        r *= ratio;
    }
    grid.push(hi);
    grid.extend(rect.sides().iter().map(|a| a * root_d));
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

/// Number of balls of radius `rho_j = t(u)^-beta_j / |u|` needed in the
/// `ell`-th factor of `prod_l Delta(R_{u,v_l}, c t(u)^-beta_l / |u|)`:
/// `rho_j^(1-m)` if `ell < j`, otherwise `rho_ell * rho_j^-m`.
///
/// `j` and `ell` are 1-based.
pub fn neighborhood_cover_count(
    j: usize,
    ell: usize,
    u: &IntegerVector,
    criterion: &Criterion,
) -> Result<f64> {
    let n = criterion.n();
    for index in [j, ell] {
        if index == 0 || index > n {
            return Err(Error::IndexOutOfRange { index, len: n });
        }
    }
    let t = criterion.dual_time(u.entries())?.t;
    let norm = u.sup_norm() as f64;
    let m = criterion.m() as f64;
    let radius = |idx: usize| num::pow(t, -criterion.beta[idx - 1]) / norm;
    Ok(if ell < j {
        num::pow(radius(j), 1.0 - m)
    } else {
        radius(ell) * num::pow(radius(j), -m)
    })
}

/// `min_j f(rho_j) prod_ell neighborhood_cover_count(j, ell)`, the f-cost of
/// covering one product of hyperplane neighbourhoods.
///
/// Algebraically identical to [`crate::series::gamma_u`]; kept as a separate
/// code path so the two can check each other.
pub fn gamma_via_cover(criterion: &Criterion, u: &IntegerVector) -> Result<f64> {
    let n = criterion.n();
    let t = criterion.dual_time(u.entries())?.t;
    let norm = u.sup_norm() as f64;
    let mut best = f64::INFINITY;
    for j in 1..=n {
        let rho = num::pow(t, -criterion.beta[j - 1]) / norm;
        let mut cost = criterion.f.eval(rho);
        for ell in 1..=n {
            cost *= neighborhood_cover_count(j, ell, u, criterion)?;
        }
        best = best.min(cost);
    }
    Ok(best)
}
