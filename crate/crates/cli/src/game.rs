use std::io;

use clap::{Args, ValueEnum};
use serde::Serialize;
use xpand_core::querygame::{success_vs_budget, GameModel, StrategyKind};
use xpand_core::Seed;

use crate::config_error;

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Model {
    Er,
    Regular,
    Matching,
}

#[derive(Args)]
pub struct GameArgs {
    #[arg(long, value_enum)]
    model: Model,
    /// Nodes (er, regular) or groups (matching).
    #[arg(long)]
    n: usize,
    /// Edge probability for er; defaults to 2 ln n / n.
    #[arg(long)]
    p: Option<f64>,
    /// Degree (regular) or group size (matching).
    #[arg(long, default_value_t = 3)]
    d: usize,
    /// bibfs, random-probe, degree-greedy or guess-direct.
    #[arg(long, default_value_t = StrategyKind::Bibfs)]
    strategy: StrategyKind,
    /// Comma-separated query budgets.
    #[arg(long, value_delimiter = ',', required = true)]
    budgets: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Source unit; defaults to 0.
    #[arg(long)]
    s: Option<usize>,
    /// Target unit; defaults to n - 1.
    #[arg(long)]
    t: Option<usize>,
}

#[derive(Serialize)]
struct Row {
    budget: usize,
    success_rate: f64,
    connected_rate: f64,
    mean_edges_discovered: f64,
    mean_queries: f64,
}

pub fn run(a: GameArgs) -> anyhow::Result<()> {
    if a.trials == 0 {
        return Err(config_error("--trials must be at least 1"));
    }
    let model = match a.model {
        Model::Er => GameModel::Er { n: a.n, p: a.p.unwrap_or(2.0 * (a.n as f64).ln() / a.n as f64) },
        Model::Regular => GameModel::Regular { n: a.n, d: a.d },
        Model::Matching => GameModel::Matching { n: a.n, d: a.d },
    };
    let endpoints = match (a.s, a.t) {
        (None, None) => None,
        (s, t) => Some((s.unwrap_or(0), t.unwrap_or(a.n.saturating_sub(1)))),
    };
    let rows = success_vs_budget(a.strategy, model, &a.budgets, a.trials, Seed(a.seed), endpoints)?;
    let mut out = csv::Writer::from_writer(io::stdout().lock());
    for r in rows {
        out.serialize(Row {
            budget: r.budget,
            success_rate: r.success_rate,
            connected_rate: r.connected_rate,
            mean_edges_discovered: r.mean_edges_discovered,
            mean_queries: r.mean_queries,
        })?;
    }
    out.flush()?;
    Ok(())
}
