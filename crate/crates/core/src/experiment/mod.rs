//! Desk-scale experiment runner: scaling of bidirectional BFS, success of
//! BFS + walks, and success-vs-budget tables for the query game.
//!
//! Every run is a pure function of its [`ExperimentConfig`]. Rows come out
//! ordered by grid point, then by the inner loop of the experiment, so the
//! CSV bytes depend only on the config (with `timing = false`).

mod config;
mod plots;
mod runs;

use std::io::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use config::{ExperimentConfig, ExperimentKind, LambdaSource, ModelKind};
pub use plots::{emit_plots, CsvSchema, PlotScript};
pub use runs::{exp_bibfs_scaling, exp_lower_bound, exp_walks_success, run_experiment};

/// Version string written into every CSV header.
pub const VERSION: &str = match option_env!("XPAND_GIT_DESCRIBE") {
    Some(v) => v,
    None => concat!("v", env!("CARGO_PKG_VERSION")),
};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("config error: {0}")]
    Config(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("{0}")]
    Run(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl ExperimentError {
    pub(crate) fn run(e: impl std::fmt::Display) -> ExperimentError {
        ExperimentError::Run(e.to_string())
    }
}

/// One grid point of the bidirectional BFS scaling experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub n: usize,
    /// `None` for non-regular graphs.
    pub d: Option<usize>,
    pub lambda_est: Option<f64>,
    pub median_visited: f64,
    pub p90_visited: f64,
    pub median_queries: f64,
    pub success_rate: f64,
    /// Seconds; 0 when timing is off.
    pub wall_time: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub rows: Vec<ScalingRow>,
    /// Least-squares slope of `ln median_visited` against `ln n`; `None`
    /// with fewer than two grid points.
    pub slope: Option<f64>,
}

/// One `(n, delta)` point of the BFS + walks experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalksRow {
    pub n: usize,
    pub d: usize,
    pub delta: f64,
    pub lambda_est: f64,
    pub k: usize,
    pub walk_len: usize,
    pub num_walks: usize,
    pub trials: usize,
    pub success_rate: f64,
    pub median_visited: f64,
    pub p90_visited: f64,
    pub median_queries: f64,
    /// Over found paths; 0 when none were found.
    pub median_path_len: f64,
    pub max_path_len: usize,
    /// `diameter_bound + walk_len + 1`.
    pub path_len_bound: usize,
    pub path_len_violations: usize,
    pub wall_time: f64,
}

/// One `(n, strategy, c)` point of the lower-bound experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundRow {
    pub model: String,
    pub n: usize,
    pub d: Option<usize>,
    pub p: Option<f64>,
    pub strategy: String,
    pub c: f64,
    /// `floor(c sqrt(n))`.
    pub budget: usize,
    pub budget_over_sqrt_n: f64,
    pub trials: usize,
    pub success_rate: f64,
    pub connected_rate: f64,
    pub mean_edges_discovered: f64,
    pub mean_queries: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "experiment", rename_all = "kebab-case")]
pub enum ExperimentOutput {
    BibfsScaling(ScalingReport),
    WalksSuccess { rows: Vec<WalksRow> },
    LowerBound { rows: Vec<LowerBoundRow> },
}

impl ExperimentOutput {
    pub fn row_count(&self) -> usize {
        match self {
            ExperimentOutput::BibfsScaling(r) => r.rows.len(),
            ExperimentOutput::WalksSuccess { rows } => rows.len(),
            ExperimentOutput::LowerBound { rows } => rows.len(),
        }
    }

    /// Writes the `#` provenance header followed by the CSV table.
    pub fn write_csv<W: Write>(&self, config: &ExperimentConfig, mut out: W) -> Result<(), ExperimentError> {
        writeln!(out, "# xpand {VERSION}")?;
        for line in config.provenance() {
            writeln!(out, "# {line}")?;
        }
        let mut w = csv::Writer::from_writer(out);
        match self {
            ExperimentOutput::BibfsScaling(r) => r.rows.iter().try_for_each(|row| w.serialize(row))?,
            ExperimentOutput::WalksSuccess { rows } => rows.iter().try_for_each(|row| w.serialize(row))?,
            ExperimentOutput::LowerBound { rows } => rows.iter().try_for_each(|row| w.serialize(row))?,
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self, config: &ExperimentConfig) -> Result<String, ExperimentError> {
        let mut buf = Vec::new();
        self.write_csv(config, &mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }
}

/// Median, averaging the two middle values for even counts; `NaN` on empty input.
pub fn median(values: &[f64]) -> f64 {
    let v = sorted(values);
    match v.len() {
        0 => f64::NAN,
        len if len % 2 == 1 => v[len / 2],
        len => (v[len / 2 - 1] + v[len / 2]) / 2.0,
    }
}

/// Nearest-rank 90th percentile; `NaN` on empty input.
pub fn p90(values: &[f64]) -> f64 {
    let v = sorted(values);
    if v.is_empty() {
        return f64::NAN;
    }
    let rank = (0.9 * v.len() as f64).ceil() as usize;
    v[rank.clamp(1, v.len()) - 1]
}

fn sorted(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Least-squares slope of `ln y` on `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> =
        points.iter().filter(|(x, y)| *x > 0.0 && *y > 0.0).map(|(x, y)| (x.ln(), y.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let m = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / m, pts.iter().map(|p| p.1).sum::<f64>() / m);
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}
