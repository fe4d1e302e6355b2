use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{path_is_valid, run_meta_game, run_traced, GameError, StrategyKind};
use crate::generators::{gen_matching_model, gen_random_regular, LazyErdosRenyi};
use crate::graph::{NodeId, QueryOracle};
use crate::rng::Seed;

/// Distribution of hidden instances for [`success_vs_budget`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum GameModel {
    /// `G(n, p)`, node-incidence queries; sampled lazily.
    Er { n: usize, p: f64 },
    /// Random simple `d`-regular graph, node-incidence queries.
    Regular { n: usize, d: usize },
    /// Matching model on `n` groups of `d`, group-incidence queries.
    Matching { n: usize, d: usize },
}

impl GameModel {
    pub fn units(&self) -> usize {
        match *self {
            GameModel::Er { n, .. } | GameModel::Regular { n, .. } | GameModel::Matching { n, .. } => n,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GameModel::Er { .. } => "er",
            GameModel::Regular { .. } => "regular",
            GameModel::Matching { .. } => "matching",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BudgetRow {
    pub budget: usize,
    pub trials: usize,
    /// Fraction of trials whose output was a valid path (meta-path).
    pub success_rate: f64,
    /// Fraction of trials whose final trace was connected.
    pub connected_rate: f64,
    pub mean_edges_discovered: f64,
    pub mean_queries: f64,
}

#[derive(Clone, Copy, Default)]
struct Outcome {
    valid: bool,
    connected: bool,
    edges: usize,
    queries: usize,
}

/// Plays `trials` independent games per budget. Trial `i` uses instance
/// seed `seed.derive(i).derive(0)` and strategy seed
/// `seed.derive(i).derive(1)`, shared by all budgets. Endpoints default to
/// `(0, n - 1)`.
pub fn success_vs_budget(
    strategy: StrategyKind,
    model: GameModel,
    budgets: &[usize],
    trials: usize,
    seed: Seed,
    endpoints: Option<(usize, usize)>,
) -> Result<Vec<BudgetRow>, GameError> {
    if trials == 0 {
        return Err(GameError::InvalidParameter("trials must be at least 1".into()));
    }
    let n = model.units();
    let (s, t) = endpoints.unwrap_or((0, n.saturating_sub(1)));
    let per_trial: Vec<Vec<Outcome>> = (0..trials as u64)
        .into_par_iter()
        .map(|i| play_trial(strategy, model, budgets, s, t, seed.derive(i)))
        .collect::<Result<_, _>>()?;
    Ok(budgets
        .iter()
        .enumerate()
        .map(|(j, &budget)| {
            let outs = per_trial.iter().map(|row| row[j]);
            let mean = |f: &dyn Fn(&Outcome) -> f64| outs.clone().map(|o| f(&o)).sum::<f64>() / trials as f64;
            BudgetRow {
                budget,
                trials,
                success_rate: mean(&|o| o.valid as u8 as f64),
                connected_rate: mean(&|o| o.connected as u8 as f64),
                mean_edges_discovered: mean(&|o| o.edges as f64),
                mean_queries: mean(&|o| o.queries as f64),
            }
        })
        .collect())
}

fn play_trial(
    strategy: StrategyKind,
    model: GameModel,
    budgets: &[usize],
    s: usize,
    t: usize,
    trial: Seed,
) -> Result<Vec<Outcome>, GameError> {
    let (instance, strat_seed) = (trial.derive(0), trial.derive(1));
    let (sn, tn) = (NodeId::new(s), NodeId::new(t));
    match model {
        GameModel::Er { n, p } => budgets
            .iter()
            .map(|&b| {
                // Same instance seed and same query prefix give the same
                // realized edges for every budget.
                let mut g = LazyErdosRenyi::new(n, p, instance).map_err(gen_err)?;
                let run = run_traced(strategy.build().as_mut(), &mut g, sn, tn, b, strat_seed)?;
                Ok(Outcome {
                    valid: path_is_valid(&mut g, &run.output, sn, tn),
                    connected: run.connected,
                    edges: run.edges_discovered,
                    queries: run.trace.len(),
                })
            })
            .collect(),
        GameModel::Regular { n, d } => {
            let g = gen_random_regular(n, d, instance).map_err(gen_err)?;
            budgets
                .iter()
                .map(|&b| {
                    let run = run_traced(strategy.build().as_mut(), &mut QueryOracle::new(&g), sn, tn, b, strat_seed)?;
                    Ok(Outcome {
                        valid: path_is_valid(&mut &g, &run.output, sn, tn),
                        connected: run.connected,
                        edges: run.edges_discovered,
                        queries: run.trace.len(),
                    })
                })
                .collect()
        }
        GameModel::Matching { n, d } => {
            let mg = gen_matching_model(n, d, instance).map_err(gen_err)?;
            budgets
                .iter()
                .map(|&b| {
                    let run = run_meta_game(strategy.build().as_mut(), &mg, s, t, b, strat_seed)?;
                    Ok(Outcome {
                        valid: run.valid,
                        connected: run.connected,
                        edges: run.edges_discovered,
                        queries: run.trace.len(),
                    })
                })
                .collect()
        }
    }
}

fn gen_err(e: crate::generators::GenError) -> GameError {
    GameError::InvalidParameter(e.to_string())
}
