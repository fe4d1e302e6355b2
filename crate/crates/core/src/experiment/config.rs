use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::querygame::StrategyKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    BibfsScaling,
    WalksSuccess,
    LowerBound,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::BibfsScaling => "bibfs-scaling",
            ExperimentKind::WalksSuccess => "walks-success",
            ExperimentKind::LowerBound => "lower-bound",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [ExperimentKind::BibfsScaling, ExperimentKind::WalksSuccess, ExperimentKind::LowerBound]
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown experiment {s:?}"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Regular,
    Margulis,
    Er,
    Matching,
}

/// Where the `lambda` fed to walk parameters comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LambdaSource {
    /// Power iteration; an unconverged run contributes its best estimate.
    Power,
    Exact,
    /// `2 sqrt(d - 1)`.
    Ramanujan,
}

/// One experiment, read from a flat TOML file whose keys double as CLI flags.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default = "defaults::model")]
    pub model: ModelKind,
    #[serde(default = "defaults::degree")]
    pub d: usize,
    /// Edge probability for `er`; defaults to `2 ln n / n` per grid point.
    #[serde(default)]
    pub p: Option<f64>,
    pub n_grid: Vec<usize>,
    #[serde(default = "defaults::pairs")]
    pub pairs: usize,
    #[serde(default = "defaults::trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default = "defaults::deltas")]
    pub deltas: Vec<f64>,
    #[serde(default = "defaults::lambda_source")]
    pub lambda_source: LambdaSource,
    /// Fixed `lambda`, overriding `lambda_source`.
    #[serde(default)]
    pub lambda: Option<f64>,
    /// Run walks even when `lambda / d > 1/2`.
    #[serde(default)]
    pub allow_weak_expansion: bool,
    /// Also estimate `lambda` for each scaling row (power iteration).
    #[serde(default)]
    pub estimate_lambda: bool,
    #[serde(default = "defaults::strategies")]
    pub strategies: Vec<StrategyKind>,
    #[serde(default = "defaults::budget_factors")]
    pub budget_factors: Vec<f64>,
    /// Record wall-clock time; when off, `wall_time` is 0 and output is
    /// byte-for-byte reproducible.
    #[serde(default = "defaults::timing")]
    pub timing: bool,
}

mod defaults {
    use super::*;

    pub fn model() -> ModelKind {
        ModelKind::Regular
    }
    pub fn degree() -> usize {
        3
    }
    pub fn pairs() -> usize {
        100
    }
    pub fn trials() -> usize {
        200
    }
    pub fn deltas() -> Vec<f64> {
        vec![0.1]
    }
    pub fn lambda_source() -> LambdaSource {
        LambdaSource::Power
    }
    pub fn strategies() -> Vec<StrategyKind> {
        StrategyKind::EXPLORING.to_vec()
    }
    pub fn budget_factors() -> Vec<f64> {
        vec![0.25, 0.5, 1.0, 2.0, 4.0]
    }
    pub fn timing() -> bool {
        true
    }
}

impl ExperimentConfig {
    /// Parses a config file body and checks it.
    pub fn from_toml_str(text: &str) -> Result<ExperimentConfig, ExperimentError> {
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| ExperimentError::Config(e.to_string()))?;
        ExperimentConfig::from_table(table)
    }

    /// Builds from a key-value table (file contents with flag overrides
    /// already merged in) and checks it.
    pub fn from_table(table: toml::Table) -> Result<ExperimentConfig, ExperimentError> {
        let cfg: ExperimentConfig =
            toml::Value::Table(table).try_into().map_err(|e: toml::de::Error| ExperimentError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let fail = |msg: String| Err(ExperimentError::Config(msg));
        if self.n_grid.is_empty() {
            return fail("n_grid is empty".into());
        }
        if self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return fail(format!("n_grid must be strictly increasing, got {:?}", self.n_grid));
        }
        if self.trials == 0 || self.pairs == 0 {
            return fail("trials and pairs must be at least 1".into());
        }
        if self.n_grid[0] < 2 {
            return fail("every n must be at least 2".into());
        }
        if let Some(p) = self.p {
            if !(p > 0.0 && p < 1.0) {
                return fail(format!("p = {p} is not in (0, 1)"));
            }
        }
        if self.deltas.iter().any(|&d| !(d > 0.0 && d < 1.0)) {
            return fail(format!("deltas must lie in (0, 1), got {:?}", self.deltas));
        }
        if self.budget_factors.iter().any(|&c| !(c >= 0.0 && c.is_finite())) {
            return fail("budget_factors must be finite and non-negative".into());
        }
        let model_ok = match self.experiment {
            ExperimentKind::BibfsScaling => matches!(self.model, ModelKind::Regular | ModelKind::Margulis),
            ExperimentKind::WalksSuccess => self.model == ModelKind::Regular,
            ExperimentKind::LowerBound => matches!(self.model, ModelKind::Regular | ModelKind::Er | ModelKind::Matching),
        };
        if !model_ok {
            return fail(format!("model {:?} is not supported by {}", self.model, self.experiment));
        }
        if self.model == ModelKind::Margulis {
            if let Some(&n) = self.n_grid.iter().find(|&&n| isqrt(n) * isqrt(n) != n) {
                return fail(format!("margulis needs square n, got {n}"));
            }
        }
        Ok(())
    }

    /// `key = value` lines recording every setting.
    pub fn provenance(&self) -> Vec<String> {
        let value = toml::Value::try_from(self).expect("config serializes");
        let table = value.as_table().expect("config is a table");
        table.iter().map(|(k, v)| format!("{k} = {v}")).collect()
    }
}

pub(crate) fn isqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}
