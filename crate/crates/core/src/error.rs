// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

/// Which comparability relation failed when bracketing a dimension function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum BracketFailure {
    /// `n = 1` leaves no admissible `a` in `[1, n - 1]`.
    NoAdmissibleIndex,
    /// `f ≺ mn` fails: `f(r) / r^mn` has a finite limit at 0.
    NotStrictlyBelowAmbient,
    /// `f ⪯ (mn - a + 1)` fails for every admissible `a` (f grows too slowly
    /// at the low end of the bracket range).
    UpperComparisonFails,
    /// `(mn - a) ⪯ f` fails for every admissible `a`.
    LowerComparisonFails,
    /// No `k` in `[0, d - 1]` with `k ⪯ f ⪯ k + 1`.
    NoContentBracket,
    /// `m(n - 1) ≺ f` fails (Jarník range).
    JarnikLower,
    /// `f ⪯ mn` fails (Jarník range).
    JarnikUpper,
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum Error {
    #[error("{what}: value {value} outside the admissible domain")]
    Domain { what: &'static str, value: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(&'static str),

    #[error("weight vector invalid: {0}")]
    Weights(&'static str),

    #[error("dimension function bracket failed: {failure:?} (exponent {exponent}, ambient {ambient})")]
    Bracket {
        failure: BracketFailure,
        exponent: f64,
        ambient: u32,
    },

    #[error("lambda-decay certification failed: inf psi(t)/psi(2t) = {lambda} is not > 1")]
    LambdaDecay { lambda: f64 },

    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("shift vector b is integral; the homogeneous case is out of scope")]
    IntegralShift,

    #[error("||u.b|| is zero; tau(b, u) is undefined")]
    ZeroDistance,

    #[error("enumeration budget exceeded: {needed} lattice points, cap {cap}")]
    Budget { needed: f64, cap: u64 },

    #[error("radius grid is empty")]
    EmptyGrid,

    #[error("no k satisfies the ladder bracket at |u| = {norm}: gamma_u below the product lower bound")]
    NoValidK { norm: u64 },

    #[error("insufficient data: {blocks} complete dyadic blocks, need at least 4")]
    InsufficientData { blocks: usize },

    #[error("Lambda selection is empty up to r_max = {r_max}")]
    EmptyLambda { r_max: u64 },
}
