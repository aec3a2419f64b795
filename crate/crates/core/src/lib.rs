// SPDX-License-Identifier: Apache-2.0

//! Computational toolkit for the Hausdorff-measure criterion of weighted
//! inhomogeneous Dirichlet non-improvable affine forms.
//!
//! The crate is `no_std` with `alloc`. Everything here is a pure function of
//! its inputs; parallel drivers, file formats and the command line live in the
//! `wdi-lab` companion crate.
//!
//! Module map:
//!
//! - [`model`]: weight vectors, approximating functions `psi`, dimension
//!   functions `f`, integer vectors and sup-norm shells, the dual time `t(u)`.
//! - [`content`]: Hausdorff f-content of hyperrectangles (closed form and a
//!   brute-force cover oracle) and the hyperplane-neighbourhood cover counts.
//! - [`series`]: the per-vector weight `gamma_u`, shell and dyadic sums, the
//!   series verdict and the classical Khintchine–Groshev / Jarník baselines.
//! - [`transference`]: nearest-integer distances, the constants `eps(b)`,
//!   `tau(b, u)`, `c_b`, `c~`, lattice-enumeration Dirichlet tests and the
//!   transference inequalities as checks.
//! - [`limsup`]: the `Phi` profile construction, `R'` sets, `Gamma(r)` and
//!   `Lambda` selection, totient densities, Monte Carlo measure estimates and
//!   the inner-rectangle content bound.
#![no_std]
#![forbid(unsafe_code)]
// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod content;
mod error;
pub mod limsup;
pub mod model;
pub mod num;
pub mod series;
pub mod transference;

pub use error::{BracketFailure, Error, Result};
