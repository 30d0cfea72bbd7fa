//! JSON DGP spec files.
//!
//! ```json
//! {
//!   "first": {"c": 0.0, "degree": 1, "scale": 1.0},
//!   "layers": [{"sigma": 1.0, "degree": 2}, {"sigma": 1.0, "degree": 2}],
//!   "exponent_policy": "multiplicative"
//! }
//! ```
//!
//! `scale` defaults to 1 and `exponent_policy` to `"multiplicative"`;
//! unknown fields are rejected.

use std::path::Path;

use dgplab_core::dgp::{DgpSpec, ExponentPolicy, FirstLayerKernel, LayerKernel};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed spec: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid spec: {0}")]
    Invalid(#[from] dgplab_core::Error),
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FirstLayerDto {
    pub c: f64,
    pub degree: u32,
    #[serde(default = "one")]
    pub scale: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayerDto {
    pub sigma: f64,
    pub degree: u32,
}

#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicyDto {
    #[default]
    Multiplicative,
    PaperAdditive,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDto {
    pub first: FirstLayerDto,
    pub layers: Vec<LayerDto>,
    #[serde(default)]
    pub exponent_policy: PolicyDto,
}

impl SpecDto {
    pub fn to_spec(&self) -> Result<DgpSpec, SpecError> {
        let first = FirstLayerKernel::new(self.first.c, self.first.degree, self.first.scale)?;
        let layers = self.layers.iter().map(|l| LayerKernel::new(l.sigma, l.degree)).collect::<Result<Vec<_>, _>>()?;
        let policy = match self.exponent_policy {
            PolicyDto::Multiplicative => ExponentPolicy::Multiplicative,
            PolicyDto::PaperAdditive => ExponentPolicy::PaperAdditive,
        };
        Ok(DgpSpec::new(first, layers, policy)?)
    }

    pub fn from_spec(spec: &DgpSpec) -> Self {
        let f = spec.first();
        SpecDto {
            first: FirstLayerDto { c: f.c(), degree: f.degree(), scale: f.scale() },
            layers: spec.layers().iter().map(|l| LayerDto { sigma: l.sigma(), degree: l.degree() }).collect(),
            exponent_policy: match spec.policy() {
                ExponentPolicy::Multiplicative => PolicyDto::Multiplicative,
                ExponentPolicy::PaperAdditive => PolicyDto::PaperAdditive,
            },
        }
    }
}

pub fn parse_spec(text: &str) -> Result<DgpSpec, SpecError> {
    serde_json::from_str::<SpecDto>(text)?.to_spec()
}

pub fn load_spec(path: &Path) -> Result<DgpSpec, SpecError> {
    let text =
        std::fs::read_to_string(path).map_err(|source| SpecError::Io { path: path.display().to_string(), source })?;
    parse_spec(&text)
}

pub fn spec_to_json(spec: &DgpSpec) -> String {
    serde_json::to_string_pretty(&SpecDto::from_spec(spec)).expect("spec serializes")
}
