// SPDX-License-Identifier: Apache-2.0

use crate::num::{self, ln};
use crate::{Error, Result};

/// Smallest admissible `lambda - 1` for a decay certificate.
pub const LAMBDA_MARGIN: f64 = 1e-9;

const DEFAULT_FLOOR: f64 = 2.0;
const BISECTION_STEPS: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum PsiFamily {
    /// `c * t^-sigma`
    Power,
    /// `c * t^-sigma * (ln t)^-rho`
    PowerLog,
}

/// Decreasing approximating function
/// `psi(t) = c * t^-sigma * (ln t)^-rho` on `[t0, inf)`.
///
/// Logarithms are natural. The default floor is `t0 = 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ApproxFunction {
    family: PsiFamily,
    coefficient: f64,
    exponent: f64,
    log_exponent: f64,
    floor: f64,
}

impl ApproxFunction {
    pub fn power(coefficient: f64, exponent: f64) -> Result<Self> {
        Self::new(PsiFamily::Power, coefficient, exponent, 0.0, DEFAULT_FLOOR)
    }

    pub fn power_log(coefficient: f64, exponent: f64, log_exponent: f64) -> Result<Self> {
        Self::new(
            PsiFamily::PowerLog,
            coefficient,
            exponent,
            log_exponent,
            DEFAULT_FLOOR,
        )
    }

    pub fn new(
        family: PsiFamily,
        coefficient: f64,
        exponent: f64,
        log_exponent: f64,
        floor: f64,
    ) -> Result<Self> {
        if !(coefficient.is_finite() && coefficient > 0.0) {
            return Err(Error::InvalidInput("psi coefficient must be positive"));
        }
        if !(exponent.is_finite() && exponent >= 0.0) {
            return Err(Error::InvalidInput("psi exponent must be non-negative"));
        }
        if !(log_exponent.is_finite() && log_exponent >= 0.0) {
            return Err(Error::InvalidInput("psi log exponent must be non-negative"));
        }
        if !(floor.is_finite() && floor >= 2.0) {
            return Err(Error::InvalidInput("psi domain floor must be >= 2"));
        }
        match family {
            PsiFamily::Power if log_exponent != 0.0 => {
                return Err(Error::InvalidInput("power family has no log exponent"))
            }
            PsiFamily::Power if exponent == 0.0 => {
                return Err(Error::InvalidInput("power family needs a positive exponent"))
            }
            PsiFamily::PowerLog if exponent == 0.0 && log_exponent == 0.0 => {
                return Err(Error::InvalidInput("psi must decay to zero"))
            }
            _ => {}
        }
        Ok(Self {
            family,
            coefficient,
            exponent,
            log_exponent,
            floor,
        })
    }

    pub fn with_floor(self, floor: f64) -> Result<Self> {
        Self::new(
            self.family,
            self.coefficient,
            self.exponent,
            self.log_exponent,
            floor,
        )
    }

    pub fn family(&self) -> PsiFamily {
        self.family
    }

    pub fn coefficient(&self) -> f64 {
        self.coefficient
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn log_exponent(&self) -> f64 {
        self.log_exponent
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }

    /// `psi(t)` for `t >= t0`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(t >= self.floor) || !t.is_finite() {
            return Err(Error::Domain {
                what: "psi argument below domain floor",
                value: t,
            });
        }
        Ok(self.formula(t))
    }

    /// The parametric formula without the floor check. Finite and positive
    /// for `t > 0` (power family) or `t > 1` (power-log family).
    pub fn formula(&self, t: f64) -> f64 {
        let base = self.coefficient * num::pow(t, -self.exponent);
        if self.log_exponent == 0.0 {
            base
        } else {
            base * num::pow(ln(t), -self.log_exponent)
        }
    }

    /// Whether [`formula`](Self::formula) is finite and positive at `t`.
    pub fn formula_defined_at(&self, t: f64) -> bool {
        if self.log_exponent == 0.0 {
            t > 0.0
        } else {
            t > 1.0
        }
    }

    /// `psi(t0)`, the largest value in the range.
    pub fn max_value(&self) -> f64 {
        self.formula(self.floor)
    }

    /// `ln psi(e^x)`, strictly decreasing in `x` on `x > 0`.
    fn ln_at_log(&self, x: f64) -> f64 {
        let mut v = ln(self.coefficient) - self.exponent * x;
        if self.log_exponent != 0.0 {
            v -= self.log_exponent * ln(x);
        }
        v
    }

    /// The `t >= t0` with `psi(t) = y`, for `0 < y <= psi(t0)`.
    ///
    /// Closed form on the power family, bisection in `ln t` otherwise.
    pub fn inverse(&self, y: f64) -> Result<f64> {
        if !(y > 0.0 && y <= self.max_value()) {
            return Err(Error::Domain {
                what: "psi inverse outside (0, psi(t0)]",
                value: y,
            });
        }
        match self.family {
            PsiFamily::Power => Ok(num::pow(self.coefficient / y, 1.0 / self.exponent).max(self.floor)),
            PsiFamily::PowerLog => self.solve_ln(ln(y)),
        }
    }

    /// The `t >= t0` with `psi(t) = 1 / magnitude`, taking the magnitude
    /// directly so that e.g. `|u|^(1/alpha)` is never inverted twice.
    /// Returns `None` when `1 / magnitude > psi(t0)`.
    pub fn inverse_of_reciprocal(&self, magnitude: f64) -> Result<Option<f64>> {
        if !(magnitude > 0.0 && magnitude.is_finite()) {
            return Err(Error::Domain {
                what: "reciprocal target must be positive",
                value: magnitude,
            });
        }
        if 1.0 / magnitude > self.max_value() {
            return Ok(None);
        }
        let t = match self.family {
            PsiFamily::Power => {
                num::pow(self.coefficient * magnitude, 1.0 / self.exponent).max(self.floor)
            }
            PsiFamily::PowerLog => self.solve_ln(-ln(magnitude))?,
        };
        Ok(Some(t))
    }

    /// Solve `ln psi(t) = target` for `t >= t0` by bisection on `x = ln t`.
    fn solve_ln(&self, target: f64) -> Result<f64> {
        let mut lo = ln(self.floor);
        if self.ln_at_log(lo) <= target {
            return Ok(self.floor);
        }
        let mut hi = 2.0 * lo;
        while self.ln_at_log(hi) > target {
            hi *= 2.0;
            if hi > 700.0 {
                return Err(Error::Domain {
                    what: "psi inverse overflows f64",
                    value: num::exp(target),
                });
            }
        }
        for _ in 0..BISECTION_STEPS {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.ln_at_log(mid) > target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        // Pick the endpoint whose value is closer to the target.
        let x = if (self.ln_at_log(lo) - target).abs() <= (self.ln_at_log(hi) - target).abs() {
            lo
        } else {
            hi
        };
        Ok(num::exp(x))
    }

    /// Certified `lambda = inf_{t >= t0} psi(t) / psi(2t)`.
    ///
    /// `psi(t)/psi(2t) = 2^sigma * (ln 2t / ln t)^rho` decreases to `2^sigma`,
    /// so the infimum is `2^sigma` on both families.
    pub fn lambda_decay(&self) -> Result<f64> {
        let lambda = libm::exp2(self.exponent);
        if lambda <= 1.0 + LAMBDA_MARGIN {
            return Err(Error::LambdaDecay { lambda });
        }
        Ok(lambda)
    }
}
