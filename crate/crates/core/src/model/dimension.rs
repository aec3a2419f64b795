// SPDX-License-Identifier: Apache-2.0

use crate::num::{self, ln};
use crate::{BracketFailure, Error, Result};

/// Largest admissible `ln(1/r_c)`; beyond it the cutoff underflows.
const MAX_LOG_CUTOFF: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum DimFamily {
    Power,
    PowerLog,
}

/// Dimension function `f(r) = r^s (ln 1/r)^tau` near zero.
///
/// The power-log branch only makes sense for small `r`, so `f` is taken to be
/// the power-log formula on `(0, r_c]` and `f(r_c) (r/r_c)^s` beyond it, with
/// `f(0) = 0`. The cutoff `r_c = exp(-L_c)` uses
/// `L_c = max(1, |tau| / delta_s)` where `delta_s` is the distance from `s` to
/// the nearest other integer. With that choice every comparison `f ⪯ k` and
/// `k ⪯ f` holds on all of `(0, inf)` exactly when it holds near zero, which
/// is what [`precedes`](Self::precedes) and [`follows`](Self::follows) decide.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DimensionFunction {
    family: DimFamily,
    exponent: f64,
    log_exponent: f64,
    log_cutoff: f64,
}

impl DimensionFunction {
    pub fn power(exponent: f64) -> Result<Self> {
        Self::new(DimFamily::Power, exponent, 0.0)
    }

    pub fn power_log(exponent: f64, log_exponent: f64) -> Result<Self> {
        Self::new(DimFamily::PowerLog, exponent, log_exponent)
    }

    pub fn new(family: DimFamily, exponent: f64, log_exponent: f64) -> Result<Self> {
        if !(exponent.is_finite() && exponent > 0.0) {
            return Err(Error::InvalidInput("dimension exponent must be positive"));
        }
        if !log_exponent.is_finite() {
            return Err(Error::InvalidInput("dimension log exponent must be finite"));
        }
        if family == DimFamily::Power && log_exponent != 0.0 {
            return Err(Error::InvalidInput("power family has no log exponent"));
        }
        let frac = exponent - libm::floor(exponent);
        let gap = if frac == 0.0 { 1.0 } else { frac.min(1.0 - frac) };
        let log_cutoff = (log_exponent.abs() / gap).max(1.0);
        if log_cutoff > MAX_LOG_CUTOFF {
            return Err(Error::InvalidInput(
                "log exponent too large for an exponent this close to an integer",
            ));
        }
        Ok(Self {
            family,
            exponent,
            log_exponent,
            log_cutoff,
        })
    }

    pub fn family(&self) -> DimFamily {
        self.family
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn log_exponent(&self) -> f64 {
        self.log_exponent
    }

    /// `r_c`, where the power-log branch hands over to a pure power.
    pub fn cutoff(&self) -> f64 {
        num::exp(-self.log_cutoff)
    }

    pub fn eval(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        let s = self.exponent;
        if self.log_exponent == 0.0 {
            return num::pow(r, s);
        }
        let rc = self.cutoff();
        if r <= rc {
            num::pow(r, s) * num::pow(ln(1.0 / r), self.log_exponent)
        } else {
            num::pow(rc, s) * num::pow(self.log_cutoff, self.log_exponent) * num::pow(r / rc, s)
        }
    }

    /// `f ⪯ k`: `f(r) / r^k` is non-increasing.
    pub fn precedes(&self, k: f64) -> bool {
        self.exponent < k || (self.exponent == k && self.log_exponent >= 0.0)
    }

    /// `k ⪯ f`: `f(r) / r^k` is non-decreasing.
    pub fn follows(&self, k: f64) -> bool {
        self.exponent > k || (self.exponent == k && self.log_exponent <= 0.0)
    }

    /// `f ≺ k`: `f ⪯ k` and `f(r) / r^k -> inf` as `r -> 0`.
    pub fn strictly_precedes(&self, k: f64) -> bool {
        self.exponent < k || (self.exponent == k && self.log_exponent > 0.0)
    }

    /// `k ≺ f`: `k ⪯ f` and `f(r) / r^k -> 0` as `r -> 0`.
    pub fn strictly_follows(&self, k: f64) -> bool {
        self.exponent > k || (self.exponent == k && self.log_exponent < 0.0)
    }

    fn bracket_error(&self, failure: BracketFailure, ambient: u32) -> Error {
        Error::Bracket {
            failure,
            exponent: self.exponent,
            ambient,
        }
    }

    /// The `a` in `[1, n - 1]` with `(mn - a) ⪯ f ⪯ (mn - a + 1)`, also
    /// requiring `f ≺ mn`. Ties (integral `s`) resolve to the smallest `a`.
    pub fn bracket(&self, m: u32, n: u32) -> Result<u32> {
        let mn = m * n;
        if n < 2 {
            return Err(self.bracket_error(BracketFailure::NoAdmissibleIndex, mn));
        }
        if !self.strictly_precedes(f64::from(mn)) {
            return Err(self.bracket_error(BracketFailure::NotStrictlyBelowAmbient, mn));
        }
        for a in 1..n {
            let low = f64::from(mn - a);
            if self.follows(low) && self.precedes(low + 1.0) {
                return Ok(a);
            }
        }
        let lowest = f64::from(mn - (n - 1));
        let failure = if self.follows(lowest) {
            BracketFailure::UpperComparisonFails
        } else {
            BracketFailure::LowerComparisonFails
        };
        Err(self.bracket_error(failure, mn))
    }

    /// The `k` in `[0, d - 1]` with `k ⪯ f ⪯ k + 1` (smallest on ties).
    pub fn content_bracket(&self, d: u32) -> Result<u32> {
        (0..d)
            .find(|&k| self.follows(f64::from(k)) && self.precedes(f64::from(k + 1)))
            .ok_or_else(|| self.bracket_error(BracketFailure::NoContentBracket, d))
    }

    /// `m(n - 1) ≺ f ⪯ mn`.
    pub fn check_jarnik(&self, m: u32, n: u32) -> Result<()> {
        let mn = m * n;
        if !self.strictly_follows(f64::from(m * (n - 1))) {
            return Err(self.bracket_error(BracketFailure::JarnikLower, mn));
        }
        if !self.precedes(f64::from(mn)) {
            return Err(self.bracket_error(BracketFailure::JarnikUpper, mn));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brackets_of_power_functions() {
        assert_eq!(DimensionFunction::power(1.5).unwrap().bracket(1, 2).unwrap(), 1);
        assert_eq!(DimensionFunction::power(4.2).unwrap().bracket(2, 3).unwrap(), 2);
        let err = DimensionFunction::power(2.0).unwrap().bracket(1, 2).unwrap_err();
        assert!(matches!(
            err,
            Error::Bracket {
                failure: BracketFailure::NotStrictlyBelowAmbient,
                ..
            }
        ));
    }

    #[test]
    fn bracket_failures_name_the_inequality() {
        let low = DimensionFunction::power(3.5).unwrap();
        assert!(matches!(
            low.bracket(2, 3),
            Err(Error::Bracket {
                failure: BracketFailure::LowerComparisonFails,
                ..
            })
        ));
        assert!(matches!(
            DimensionFunction::power(0.5).unwrap().bracket(1, 1),
            Err(Error::Bracket {
                failure: BracketFailure::NoAdmissibleIndex,
                ..
            })
        ));
    }

    #[test]
    fn integral_exponent_with_log_factor() {
        // r^2 (ln 1/r) is ≺ 2, so it fits below mn = 2.
        let f = DimensionFunction::power_log(2.0, 1.0).unwrap();
        assert!(f.strictly_precedes(2.0));
        assert_eq!(f.bracket(1, 2).unwrap(), 1);
        // r^2 / ln(1/r) is not ⪯ 2.
        let g = DimensionFunction::power_log(2.0, -1.0).unwrap();
        assert!(!g.precedes(2.0));
    }

    #[test]
    fn ratio_monotonicity_matches_the_relations() {
        // Grid check of f(r)/r^k for a handful of power-log functions.
        for &(s, tau) in &[(1.3, 2.0), (1.3, -2.0), (2.5, 0.7), (0.4, 1.5), (3.0, 1.0)] {
            let f = DimensionFunction::power_log(s, tau).unwrap();
            for k in 0..5 {
                let kf = f64::from(k);
                let ratios: alloc::vec::Vec<f64> = (1..400)
                    .map(|i| {
                        let r = libm::exp(-30.0 + 0.09 * f64::from(i));
                        f.eval(r) / libm::pow(r, kf)
                    })
                    .collect();
                let non_inc = ratios.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12));
                let non_dec = ratios.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-12));
                if f.precedes(kf) {
                    assert!(non_inc, "s={s} tau={tau} k={k}");
                }
                if f.follows(kf) {
                    assert!(non_dec, "s={s} tau={tau} k={k}");
                }
            }
        }
    }

    #[test]
    fn eval_is_continuous_at_cutoff_and_monotone() {
        let f = DimensionFunction::power_log(1.3, 2.0).unwrap();
        let rc = f.cutoff();
        let below = f.eval(rc * (1.0 - 1e-12));
        let above = f.eval(rc * (1.0 + 1e-12));
        assert!((below - above).abs() <= 1e-9 * above);
        assert_eq!(f.eval(0.0), 0.0);
        let mut prev = 0.0;
        for i in 1..500 {
            let v = f.eval(f64::from(i) * 0.01);
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn content_and_jarnik_brackets() {
        let f = DimensionFunction::power(1.5).unwrap();
        assert_eq!(f.content_bracket(2).unwrap(), 1);
        assert_eq!(DimensionFunction::power(2.0).unwrap().content_bracket(2).unwrap(), 1);
        assert!(DimensionFunction::power(2.5).unwrap().content_bracket(2).is_err());
        assert!(DimensionFunction::power(0.5).unwrap().check_jarnik(1, 1).is_ok());
        assert!(DimensionFunction::power(0.5).unwrap().check_jarnik(1, 2).is_err());
    }
}
