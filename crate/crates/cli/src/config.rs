use std::path::Path;

use monocycle::pipeline::ParameterLedger;
use monocycle::rational::parse;
use monocycle::{Colour, Rational};
use serde::{Deserialize, Serialize};

use crate::{config_err, CliError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteKind {
    TwoMatching,
    Robmat,
    BMatching,
    Posa,
    Egp,
    Sample,
    ExactLength,
    DegreeLb,
    ComponentLb,
    Pipeline,
}

/// Rationals written as `"1/1200"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub nu: String,
    pub mu: String,
    pub d: String,
    pub eps: String,
}

pub fn rational(s: &str) -> Result<Rational, CliError> {
    parse(s).ok_or_else(|| CliError::Config(format!("not a rational: {s:?}")))
}

impl Params {
    pub fn values(&self) -> Result<[Rational; 4], CliError> {
        Ok([
            rational(&self.nu)?,
            rational(&self.mu)?,
            rational(&self.d)?,
            rational(&self.eps)?,
        ])
    }

    pub fn ledger(&self, r: Colour, n: usize, override_n_floor: bool) -> Result<ParameterLedger, CliError> {
        let [nu, mu, d, eps] = self.values()?;
        ParameterLedger::new(nu, mu, d, eps, r, n, override_n_floor).map_err(config_err)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        serde_json::from_str(&std::fs::read_to_string(path)?).map_err(config_err)
    }
}

/// A suite and its parameter grid. Empty lists fall back to the suite's
/// defaults, except `seeds`: no seeds means no rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub suite: SuiteKind,
    #[serde(default)]
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub n: Vec<usize>,
    #[serde(default)]
    pub r: Vec<Colour>,
    #[serde(default)]
    pub k: Vec<usize>,
    #[serde(default)]
    pub length: Vec<usize>,
    /// Instances per grid point and seed.
    #[serde(default)]
    pub instances: Option<usize>,
    #[serde(default)]
    pub density: Option<f64>,
    #[serde(default)]
    pub params: Option<Params>,
    /// Residual clusters per side in the pipeline suite.
    #[serde(default)]
    pub per_side: Option<usize>,
    #[serde(default)]
    pub override_n_floor: bool,
}

impl ExperimentConfig {
    pub fn new(suite: SuiteKind, seeds: Vec<u64>) -> Self {
        Self {
            suite,
            seeds,
            n: Vec::new(),
            r: Vec::new(),
            k: Vec::new(),
            length: Vec::new(),
            instances: None,
            density: None,
            params: None,
            per_side: None,
            override_n_floor: false,
        }
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let cfg: Self = serde_json::from_str(&std::fs::read_to_string(path)?).map_err(config_err)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if let Some(d) = self.density {
            if !(d > 0.0 && d <= 1.0) {
                return Err(CliError::Config(format!("density {d} outside (0, 1]")));
            }
        }
        if let Some(p) = &self.params {
            p.values()?;
        }
        if self.suite == SuiteKind::Pipeline {
            let p = self.params.clone().unwrap_or_else(pipeline_params);
            for &n in &self.n_or(&[2000]) {
                for &r in &self.r_or(&[2]) {
                    p.ledger(r, n, self.override_n_floor)?;
                }
            }
        }
        Ok(())
    }

    pub fn n_or(&self, default: &[usize]) -> Vec<usize> {
        if self.n.is_empty() {
            default.to_vec()
        } else {
            self.n.clone()
        }
    }

    pub fn r_or(&self, default: &[Colour]) -> Vec<Colour> {
        if self.r.is_empty() {
            default.to_vec()
        } else {
            self.r.clone()
        }
    }

    pub fn k_or(&self, default: &[usize]) -> Vec<usize> {
        if self.k.is_empty() {
            default.to_vec()
        } else {
            self.k.clone()
        }
    }

    pub fn length_or(&self, default: &[usize]) -> Vec<usize> {
        if self.length.is_empty() {
            default.to_vec()
        } else {
            self.length.clone()
        }
    }
}

/// Desk-scale parameters of the end-to-end runs.
pub fn pipeline_params() -> Params {
    Params {
        nu: "1/1200".into(),
        mu: "1/25000".into(),
        d: "1/50000".into(),
        eps: "1/100000".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_fields_and_suites_are_rejected() {
        assert!(serde_json::from_str::<ExperimentConfig>(r#"{"suite": "posa", "seed": [1]}"#).is_err());
        assert!(serde_json::from_str::<ExperimentConfig>(r#"{"suite": "nothing"}"#).is_err());
        let ok: ExperimentConfig = serde_json::from_str(r#"{"suite": "b-matching", "seeds": [1, 2]}"#).unwrap();
        assert_eq!(ok.suite, SuiteKind::BMatching);
    }

    #[test]
    fn pipeline_grid_needs_the_override_below_the_floor() {
        let mut cfg = ExperimentConfig::new(SuiteKind::Pipeline, vec![0]);
        assert!(matches!(cfg.validate(), Err(CliError::Config(_))));
        cfg.override_n_floor = true;
        cfg.validate().unwrap();
    }
}
