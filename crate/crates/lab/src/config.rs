// SPDX-License-Identifier: Apache-2.0

//! The JSON run configuration and its validation into engine objects.

use std::path::Path;

use serde::{Deserialize, Serialize};
use wdi_core::limsup::Construction;
use wdi_core::model::{ApproxFunction, Criterion, DimFamily, DimensionFunction, PsiFamily, Side, WeightVector};
use wdi_core::transference::AffineSystem;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Subcommand {
    Verdict,
    Content,
    Transfer,
    Limsup,
    Baseline,
}

impl Subcommand {
    pub fn name(self) -> &'static str {
        match self {
            Subcommand::Verdict => "verdict",
            Subcommand::Content => "content",
            Subcommand::Transfer => "transfer",
            Subcommand::Limsup => "limsup",
            Subcommand::Baseline => "baseline",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PsiSpec {
    pub family: PsiFamily,
    #[serde(default = "one")]
    pub c: f64,
    pub sigma: f64,
    #[serde(default)]
    pub rho: f64,
    #[serde(default = "two")]
    pub floor: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FSpec {
    pub family: DimFamily,
    pub s: f64,
    #[serde(default)]
    pub tau: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContentSpec {
    pub sides: Vec<f64>,
    #[serde(default = "default_steps")]
    pub steps_per_octave: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransferSpec {
    /// `A` row by row.
    pub matrix: Vec<Vec<f64>>,
    /// Times at which the Dirichlet test is run.
    pub t: Vec<f64>,
    /// Target `c` for the backward check.
    pub c: f64,
    #[serde(default = "default_u_range")]
    pub u_range: u64,
    #[serde(default = "default_budget")]
    pub budget: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimsupSpec {
    #[serde(default = "default_totient")]
    pub totient_threshold: f64,
    #[serde(default = "default_qi_r_max")]
    pub qi_r_max: u64,
    #[serde(default = "default_qi_pairs")]
    pub qi_pairs_per_r: u64,
    #[serde(default = "default_mc_vectors")]
    pub mc_vectors: usize,
}

impl Default for LimsupSpec {
    fn default() -> Self {
        Self {
            totient_threshold: default_totient(),
            qi_r_max: default_qi_r_max(),
            qi_pairs_per_r: default_qi_pairs(),
            mc_vectors: default_mc_vectors(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaselineSpec {
    #[serde(default = "default_q_max")]
    pub q_max: u64,
}

impl Default for BaselineSpec {
    fn default() -> Self {
        Self { q_max: default_q_max() }
    }
}

/// One run. Optional weight vectors default to uniform weights; everything
/// else falls back to the documented defaults, and the filled-in document is
/// what reports embed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subcommand: Option<Subcommand>,
    pub m: usize,
    pub n: usize,
    #[serde(default)]
    pub alpha: Option<Vec<f64>>,
    #[serde(default)]
    pub beta: Option<Vec<f64>>,
    #[serde(default)]
    pub psi: Option<PsiSpec>,
    pub f: FSpec,
    #[serde(default)]
    pub b: Option<Vec<f64>>,
    #[serde(default = "default_r_max")]
    pub r_max: u64,
    #[serde(default = "default_samples")]
    pub samples: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub content: Option<ContentSpec>,
    #[serde(default)]
    pub transfer: Option<TransferSpec>,
    #[serde(default)]
    pub limsup: LimsupSpec,
    #[serde(default)]
    pub baseline: BaselineSpec,
}

fn one() -> f64 {
    1.0
}
fn two() -> f64 {
    2.0
}
fn default_steps() -> u32 {
    16
}
fn default_u_range() -> u64 {
    10
}
fn default_budget() -> u64 {
    wdi_core::transference::ENUMERATION_BUDGET
}
fn default_totient() -> f64 {
    4.0
}
fn default_qi_r_max() -> u64 {
    128
}
fn default_qi_pairs() -> u64 {
    2
}
fn default_mc_vectors() -> usize {
    4
}
fn default_q_max() -> u64 {
    1000
}
fn default_r_max() -> u64 {
    512
}
fn default_samples() -> u64 {
    100_000
}

fn bad(field: &str, message: impl Into<String>) -> CliError {
    CliError::Config {
        field: field.to_owned(),
        message: message.into(),
    }
}

fn engine(field: &str) -> impl Fn(wdi_core::Error) -> CliError + '_ {
    move |e| bad(field, e.to_string())
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config {
            field: format!("line {} column {}", e.line(), e.column()),
            message: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| bad("--config", format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Fills defaults, applies overrides and checks everything the chosen
    /// subcommand needs before any computation starts.
    pub fn resolve(mut self, sub: Subcommand, seed: Option<u64>) -> Result<Resolved, CliError> {
        if let Some(tag) = self.subcommand {
            if tag != sub {
                return Err(bad(
                    "subcommand",
                    format!("config is tagged `{}` but `{}` was requested", tag.name(), sub.name()),
                ));
            }
        }
        self.subcommand = Some(sub);
        if let Some(s) = seed {
            self.seed = s;
        }
        if self.m == 0 {
            return Err(bad("m", "m must be at least 1"));
        }
        if self.n == 0 {
            return Err(bad("n", "n must be at least 1"));
        }
        let alpha = self.alpha.get_or_insert_with(|| vec![1.0 / self.m as f64; self.m]).clone();
        let beta = self.beta.get_or_insert_with(|| vec![1.0 / self.n as f64; self.n]).clone();
        if alpha.len() != self.m {
            return Err(bad("alpha", format!("expected {} weights, got {}", self.m, alpha.len())));
        }
        if beta.len() != self.n {
            return Err(bad("beta", format!("expected {} weights, got {}", self.n, beta.len())));
        }
        let alpha = WeightVector::new(alpha, Side::Alpha).map_err(engine("alpha"))?;
        let beta = WeightVector::new(beta, Side::Beta).map_err(engine("beta"))?;
        let f = DimensionFunction::new(self.f.family, self.f.s, self.f.tau).map_err(engine("f"))?;
        let psi = match &self.psi {
            Some(p) => Some(
                ApproxFunction::new(p.family, p.c, p.sigma, p.rho, p.floor).map_err(engine("psi"))?,
            ),
            None => None,
        };
        if let Some(b) = &self.b {
            if b.len() != self.m {
                return Err(bad("b", format!("expected {} entries, got {}", self.m, b.len())));
            }
        }
        let needs_psi = !matches!(sub, Subcommand::Content);
        if needs_psi && psi.is_none() {
            return Err(bad("psi", format!("required by `{}`", sub.name())));
        }
        let mut criterion = None;
        if matches!(sub, Subcommand::Verdict | Subcommand::Limsup) {
            if self.n < 2 {
                return Err(bad(
                    "n",
                    "n must be >= 2: the bracket index a must satisfy 1 <= a <= n - 1, which is empty for n = 1",
                ));
            }
            let c = Criterion::new(psi.expect("checked"), alpha.clone(), beta.clone(), f)
                .map_err(engine("f"))?;
            criterion = Some(c);
        }
        let mut construction = None;
        if sub == Subcommand::Limsup {
            let b = self.b.clone().ok_or_else(|| bad("b", "required by `limsup`"))?;
            let c = Construction::new(criterion.clone().expect("built above"), b).map_err(engine("b"))?;
            if !(self.limsup.totient_threshold > 0.0) {
                return Err(bad("limsup.totient_threshold", "must be positive"));
            }
            if self.samples < wdi_core::limsup::MIN_MC_SAMPLES {
                return Err(bad("samples", "Monte Carlo needs at least 10000 samples"));
            }
            construction = Some(c);
        }
        if sub == Subcommand::Verdict && self.r_max < wdi_core::series::MIN_R_MAX {
            return Err(bad("r_max", "the series verdict needs r_max >= 256"));
        }
        let mut system = None;
        if sub == Subcommand::Transfer {
            let spec = self.transfer.as_ref().ok_or_else(|| bad("transfer", "required by `transfer`"))?;
            let b = self.b.clone().unwrap_or_else(|| vec![0.0; self.m]);
            let sys =
                AffineSystem::new(spec.matrix.clone(), b, alpha.clone(), beta.clone()).map_err(engine("transfer.matrix"))?;
            let floor = psi.as_ref().expect("checked").floor();
            if let Some(t) = spec.t.iter().find(|&&t| !(t >= floor)) {
                return Err(bad("transfer.t", format!("time {t} lies below the domain floor {floor}")));
            }
            if !(spec.c > 0.0) {
                return Err(bad("transfer.c", "must be positive"));
            }
            system = Some(sys);
        }
        let mut rectangle = None;
        if sub == Subcommand::Content {
            let spec = self.content.as_ref().ok_or_else(|| bad("content", "required by `content`"))?;
            let rect =
                wdi_core::content::Hyperrectangle::new(spec.sides.clone()).map_err(engine("content.sides"))?;
            f.content_bracket(rect.dim() as u32).map_err(engine("f"))?;
            rectangle = Some(rect);
        }
        if sub == Subcommand::Baseline && self.baseline.q_max == 0 {
            return Err(bad("baseline.q_max", "must be at least 1"));
        }
        Ok(Resolved {
            sub,
            alpha,
            beta,
            f,
            psi,
            criterion,
            construction,
            system,
            rectangle,
            config: self,
        })
    }
}

/// A validated configuration with the engine objects built from it.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub sub: Subcommand,
    pub alpha: WeightVector,
    pub beta: WeightVector,
    pub f: DimensionFunction,
    pub psi: Option<ApproxFunction>,
    pub criterion: Option<Criterion>,
    pub construction: Option<Construction>,
    pub system: Option<AffineSystem>,
    pub rectangle: Option<wdi_core::content::Hyperrectangle>,
    pub config: RunConfig,
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"{"m":1,"n":2,"beta":[0.5,0.5],
        "psi":{"family":"power","sigma":0.5},
        "f":{"family":"power","s":1.8},"b":[0.3]}"#;

    #[test]
    fn defaults_are_filled() {
        let r = RunConfig::from_json(BASE).unwrap().resolve(Subcommand::Verdict, Some(9)).unwrap();
        assert_eq!(r.config.alpha, Some(vec![1.0]));
        assert_eq!(r.config.seed, 9);
        assert_eq!(r.config.r_max, 512);
        assert_eq!(r.criterion.unwrap().bracket(), 1);
    }

    #[test]
    fn n_one_is_rejected_with_bracket_message() {
        let text = BASE.replace(r#""n":2,"beta":[0.5,0.5]"#, r#""n":1"#);
        let err = RunConfig::from_json(&text).unwrap().resolve(Subcommand::Verdict, None).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("bracket"));
    }

    #[test]
    fn unknown_fields_report_position() {
        let err = RunConfig::from_json(r#"{"m":1,"n":2,"f":{"family":"power","s":1.5},"bogus":1}"#).unwrap_err();
        assert!(err.to_string().contains("line 1"));
    }

    #[test]
    fn tag_mismatch() {
        let text = BASE.replacen('{', r#"{"subcommand":"content","#, 1);
        let err = RunConfig::from_json(&text).unwrap().resolve(Subcommand::Verdict, None).unwrap_err();
        assert!(err.to_string().contains("subcommand"));
    }
}
