//! JSON experiment configuration.
//!
//! ```json
//! {
//!   "dataset": { "kind": "synthetic", "n": 200, "d": 100 },
//!   "method": "gd",
//!   "step_size": "large",
//!   "horizon": 500,
//!   "seed": 0
//! }
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DatasetSpec {
    /// libsvm or CSV file with the breast-cancer data.
    BreastCancerFile {
        path: PathBuf,
        #[serde(default)]
        standardize: bool,
    },
    BodyfatFile {
        path: PathBuf,
        #[serde(default)]
        standardize: bool,
    },
    Synthetic { n: usize, d: usize },
    /// `f(x, θ) = ½θx² + x`.
    ScalarToy,
}

impl DatasetSpec {
    pub fn name(&self) -> &'static str {
        match self {
            DatasetSpec::BreastCancerFile { .. } => "breast_cancer_file",
            DatasetSpec::BodyfatFile { .. } => "bodyfat_file",
            DatasetSpec::Synthetic { .. } => "synthetic",
            DatasetSpec::ScalarToy => "scalar_toy",
        }
    }

    /// Parse the `--dataset` flag: `scalar_toy`, `synthetic`,
    /// `synthetic:NxD`, `breast_cancer:PATH` or `bodyfat:PATH`.
    pub fn parse_flag(s: &str) -> Result<Self> {
        let (kind, arg) = match s.split_once(':') {
            Some((k, a)) => (k, Some(a)),
            None => (s, None),
        };
        let bad = || Error::Config(format!("dataset: cannot parse {s:?}"));
        match (kind, arg) {
            ("scalar_toy", None) => Ok(DatasetSpec::ScalarToy),
            ("synthetic", None) => Ok(DatasetSpec::Synthetic { n: 200, d: 100 }),
            ("synthetic", Some(dims)) => {
                let (n, d) = dims.split_once('x').ok_or_else(bad)?;
                Ok(DatasetSpec::Synthetic {
                    n: n.parse().map_err(|_| bad())?,
                    d: d.parse().map_err(|_| bad())?,
                })
            }
            ("breast_cancer" | "breast_cancer_file", Some(p)) => Ok(DatasetSpec::BreastCancerFile {
                path: p.into(),
                standardize: false,
            }),
            ("bodyfat" | "bodyfat_file", Some(p)) => Ok(DatasetSpec::BodyfatFile {
                path: p.into(),
                standardize: false,
            }),
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ThetaSpec {
    Scalar(f64),
    Vector(Vec<f64>),
}

impl ThetaSpec {
    pub fn values(&self) -> Vec<f64> {
        match self {
            ThetaSpec::Scalar(v) => vec![*v],
            ThetaSpec::Vector(v) => v.clone(),
        }
    }

    /// Comma-separated list, a single value gives a scalar.
    pub fn parse_flag(s: &str) -> Result<Self> {
        let vals = s
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::Config(format!("theta: cannot parse {s:?}")))?;
        Ok(match vals.as_slice() {
            [v] => ThetaSpec::Scalar(*v),
            _ => ThetaSpec::Vector(vals),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum MethodName {
    Gd,
    Chebyshev,
    HeavyBall,
    Sobolev,
    SobolevAsymptotic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepRule {
    /// `2/(L + ℓ)`
    Large,
    /// `1/L`
    Small,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StepSize {
    Rule(StepRule),
    Value(f64),
}

impl Default for StepSize {
    fn default() -> Self {
        StepSize::Rule(StepRule::Large)
    }
}

impl StepSize {
    pub fn resolve(&self, ell: f64, big_l: f64) -> f64 {
        match self {
            StepSize::Rule(StepRule::Large) => 2.0 / (big_l + ell),
            StepSize::Rule(StepRule::Small) => 1.0 / big_l,
            StepSize::Value(h) => *h,
        }
    }

    pub fn parse_flag(s: &str) -> Result<Self> {
        match s {
            "large" => Ok(StepSize::Rule(StepRule::Large)),
            "small" => Ok(StepSize::Rule(StepRule::Small)),
            _ => s
                .parse()
                .map(StepSize::Value)
                .map_err(|_| Error::Config(format!("step_size: expected large, small or a number, got {s:?}"))),
        }
    }
}

fn default_alpha() -> f64 {
    1.0
}

fn default_eta() -> f64 {
    1.0
}

fn default_horizon() -> usize {
    100
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub dataset: DatasetSpec,
    /// Defaults to `1e-3·‖A‖₂` for ridge datasets and 1 for the scalar toy.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<ThetaSpec>,
    pub method: MethodName,
    #[serde(default)]
    pub step_size: StepSize,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_eta")]
    pub eta: f64,
    #[serde(default = "default_horizon")]
    pub horizon: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            dataset: DatasetSpec::Synthetic { n: 200, d: 100 },
            theta: None,
            method: MethodName::Gd,
            step_size: StepSize::default(),
            alpha: default_alpha(),
            eta: default_eta(),
            horizon: default_horizon(),
            seed: 0,
            out: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    /// Domain checks that do not need the data. Errors name the field.
    pub fn validate(&self) -> Result<()> {
        if self.horizon < 1 {
            return Err(Error::Config("horizon: must be at least 1".into()));
        }
        if !(self.alpha > -0.5) || !self.alpha.is_finite() {
            return Err(Error::Config(format!("alpha: must be finite and > -1/2, got {}", self.alpha)));
        }
        if !(self.eta >= 0.0) || !self.eta.is_finite() {
            return Err(Error::Config(format!("eta: must be finite and >= 0, got {}", self.eta)));
        }
        if let StepSize::Value(h) = self.step_size {
            if !(h > 0.0) || !h.is_finite() {
                return Err(Error::Config(format!("step_size: must be positive, got {h}")));
            }
        }
        if let Some(theta) = &self.theta {
            let v = theta.values();
            if v.len() != 1 {
                return Err(Error::Config(format!(
                    "theta: {} takes a scalar parameter, got {} values",
                    self.dataset.name(),
                    v.len()
                )));
            }
            if !(v[0] > 0.0) || !v[0].is_finite() {
                return Err(Error::Config(format!("theta: must be positive, got {}", v[0])));
            }
        }
        if let DatasetSpec::Synthetic { n, d } = self.dataset {
            if n == 0 || d == 0 {
                return Err(Error::Config("dataset: synthetic n and d must be positive".into()));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let cfg = ExperimentConfig {
            dataset: DatasetSpec::BreastCancerFile {
                path: "data/breast-cancer.libsvm".into(),
                standardize: true,
            },
            theta: Some(ThetaSpec::Scalar(0.5)),
            method: MethodName::Sobolev,
            step_size: StepSize::Value(0.1),
            alpha: 2.0,
            eta: 20.0,
            horizon: 40,
            seed: 9,
            out: Some("x.csv".into()),
        };
        assert_eq!(ExperimentConfig::from_json(&cfg.to_json()).unwrap(), cfg);
    }

    #[test]
    fn defaults_and_names() {
        let cfg = ExperimentConfig::from_json(r#"{"dataset": {"kind": "scalar_toy"}, "method": "heavy_ball"}"#).unwrap();
        assert_eq!(cfg.step_size, StepSize::Rule(StepRule::Large));
        assert_eq!(cfg.horizon, 100);
        let cfg = ExperimentConfig::from_json(r#"{"dataset": {"kind": "synthetic", "n": 5, "d": 2}, "method": "gd", "step_size": "small"}"#).unwrap();
        assert_eq!(cfg.step_size.resolve(1.0, 4.0), 0.25);
    }

    #[test]
    fn errors_name_the_field() {
        let e = ExperimentConfig::from_json(r#"{"dataset": {"kind": "scalar_toy"}, "method": "gd", "horizon": 0}"#)
            .unwrap_err()
            .to_string();
        assert!(e.contains("horizon"), "{e}");
        let e = ExperimentConfig::from_json(r#"{"dataset": {"kind": "scalar_toy"}, "method": "newton"}"#)
            .unwrap_err()
            .to_string();
        assert!(e.contains("method") || e.contains("newton"), "{e}");
        let e = ExperimentConfig::from_json(r#"{"dataset": {"kind": "scalar_toy"}, "method": "gd", "alpha": -1}"#)
            .unwrap_err()
            .to_string();
        assert!(e.contains("alpha"), "{e}");
    }

    #[test]
    fn flag_parsers() {
        assert_eq!(DatasetSpec::parse_flag("synthetic:20x5").unwrap(), DatasetSpec::Synthetic { n: 20, d: 5 });
        assert_eq!(DatasetSpec::parse_flag("scalar_toy").unwrap(), DatasetSpec::ScalarToy);
        assert!(DatasetSpec::parse_flag("mnist").is_err());
        assert_eq!(ThetaSpec::parse_flag("0.5").unwrap(), ThetaSpec::Scalar(0.5));
        assert_eq!(ThetaSpec::parse_flag("1,2").unwrap(), ThetaSpec::Vector(vec![1.0, 2.0]));
        assert_eq!(StepSize::parse_flag("0.25").unwrap(), StepSize::Value(0.25));
        assert!(StepSize::parse_flag("huge").is_err());
    }
}
