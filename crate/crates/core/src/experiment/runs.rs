use std::time::Instant;

use rand::Rng as _;
use rayon::prelude::*;

use super::config::isqrt;
use super::*;
use crate::bounds::{diameter_bound, ExpanderParams};
use crate::generators::{gen_margulis_expander, gen_random_regular, margulis_multigraph};
use crate::graph::{Adjacency, Graph, NodeId, QueryOracle};
use crate::pathfind::{bfs_plus_walks, bidirectional_bfs, WalkParams};
use crate::querygame::{success_vs_budget, GameModel};
use crate::rng::Seed;
use crate::spectral::{default_max_iter, lambda_exact, lambda_power, ramanujan_threshold, DEFAULT_TOL};

/// Dispatches on `config.experiment`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutput, ExperimentError> {
    config.validate()?;
    Ok(match config.experiment {
        ExperimentKind::BibfsScaling => ExperimentOutput::BibfsScaling(exp_bibfs_scaling(config)?),
        ExperimentKind::WalksSuccess => ExperimentOutput::WalksSuccess { rows: exp_walks_success(config)? },
        ExperimentKind::LowerBound => ExperimentOutput::LowerBound { rows: exp_lower_bound(config)? },
    })
}

/// Seed of grid point `n`; its stream 0 builds the graph.
fn grid_seed(config: &ExperimentConfig, n: usize) -> Seed {
    Seed(config.seed).derive(n as u64)
}

fn elapsed(config: &ExperimentConfig, start: Instant) -> f64 {
    if config.timing {
        start.elapsed().as_secs_f64()
    } else {
        0.0
    }
}

fn distinct_pair(n: usize, seed: Seed) -> (NodeId, NodeId) {
    let mut rng = seed.rng();
    let s = rng.gen_range(0..n);
    let t = (s + rng.gen_range(1..n)) % n;
    (NodeId::new(s), NodeId::new(t))
}

/// Power-iteration `lambda`; an unconverged run yields its best estimate.
fn power_estimate<G: Adjacency + Sync + ?Sized>(g: &G) -> Result<f64, ExperimentError> {
    match lambda_power(g, DEFAULT_TOL, default_max_iter(g.node_count())) {
        Ok(r) => Ok(r.lambda_est),
        Err(e) => e.best_estimate().map(|r| r.lambda_est).ok_or_else(|| ExperimentError::run(e)),
    }
}

fn lambda_for(config: &ExperimentConfig, g: &Graph, d: usize) -> Result<f64, ExperimentError> {
    if let Some(l) = config.lambda {
        return Ok(l);
    }
    match config.lambda_source {
        LambdaSource::Power => power_estimate(g),
        LambdaSource::Exact => lambda_exact(g).map(|r| r.lambda_est).map_err(ExperimentError::run),
        LambdaSource::Ramanujan => Ok(ramanujan_threshold(d)),
    }
}

/// Bidirectional BFS between `pairs` uniform distinct pairs per grid point.
/// Pair `i` at grid point `n` comes from `grid_seed(n).derive(1).derive(i)`.
pub fn exp_bibfs_scaling(config: &ExperimentConfig) -> Result<ScalingReport, ExperimentError> {
    let mut rows = Vec::with_capacity(config.n_grid.len());
    for &n in &config.n_grid {
        let start = Instant::now();
        let seed = grid_seed(config, n);
        let (graph, lambda_est) = match config.model {
            ModelKind::Margulis => {
                let m = isqrt(n);
                let lambda = if config.estimate_lambda { Some(power_estimate(&margulis_multigraph(m))?) } else { None };
                (gen_margulis_expander(m), lambda)
            }
            _ => {
                let g = gen_random_regular(n, config.d, seed.derive(0)).map_err(ExperimentError::run)?;
                let lambda = if config.estimate_lambda { Some(power_estimate(&g)?) } else { None };
                (g, lambda)
            }
        };
        let results = (0..config.pairs as u64)
            .into_par_iter()
            .map(|i| {
                let (s, t) = distinct_pair(n, seed.derive(1).derive(i));
                bidirectional_bfs(&mut QueryOracle::new(&graph), s, t)
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(ExperimentError::run)?;
        let visited: Vec<f64> = results.iter().map(|r| r.visited_count as f64).collect();
        let queries: Vec<f64> = results.iter().map(|r| r.query_count as f64).collect();
        rows.push(ScalingRow {
            n,
            d: graph.regular_degree(),
            lambda_est,
            median_visited: median(&visited),
            p90_visited: p90(&visited),
            median_queries: median(&queries),
            success_rate: results.iter().filter(|r| r.is_found()).count() as f64 / results.len() as f64,
            wall_time: elapsed(config, start),
        });
    }
    let slope = loglog_slope(&rows.iter().map(|r| (r.n as f64, r.median_visited)).collect::<Vec<_>>());
    Ok(ScalingReport { rows, slope })
}

/// BFS + walks with parameters derived from `lambda` for each `(n, delta)`.
/// Trial `i` for the `j`-th delta draws its pair from
/// `grid_seed(n).derive(1 + j).derive(i).derive(0)` and its walks from
/// `.derive(1)` of the same trial seed.
pub fn exp_walks_success(config: &ExperimentConfig) -> Result<Vec<WalksRow>, ExperimentError> {
    let d = config.d;
    let mut rows = Vec::new();
    for &n in &config.n_grid {
        let seed = grid_seed(config, n);
        let graph = gen_random_regular(n, d, seed.derive(0)).map_err(ExperimentError::run)?;
        let lambda = lambda_for(config, &graph, d)?;
        let expander = ExpanderParams::new(n, d, lambda).map_err(ExperimentError::run)?;
        for (j, &delta) in config.deltas.iter().enumerate() {
            let start = Instant::now();
            let mut params = WalkParams::derive(n, lambda / d as f64, delta).map_err(ExperimentError::run)?;
            if config.allow_weak_expansion {
                params = params.allow_weak_expansion();
            }
            let path_len_bound = diameter_bound(&expander) + params.walk_len + 1;
            let results = (0..config.trials as u64)
                .into_par_iter()
                .map(|i| {
                    let trial = seed.derive(1 + j as u64).derive(i);
                    let (s, t) = distinct_pair(n, trial.derive(0));
                    bfs_plus_walks(&mut QueryOracle::new(&graph), s, t, &params, trial.derive(1))
                })
                .collect::<Result<Vec<_>, _>>()
                .map_err(ExperimentError::run)?;
            let lens: Vec<usize> = results.iter().filter_map(|r| r.length()).collect();
            let visited: Vec<f64> = results.iter().map(|r| r.visited_count as f64).collect();
            let queries: Vec<f64> = results.iter().map(|r| r.query_count as f64).collect();
            let len_f: Vec<f64> = lens.iter().map(|&l| l as f64).collect();
            rows.push(WalksRow {
                n,
                d,
                delta,
                lambda_est: lambda,
                k: params.k,
                walk_len: params.walk_len,
                num_walks: params.num_walks,
                trials: config.trials,
                success_rate: lens.len() as f64 / config.trials as f64,
                median_visited: median(&visited),
                p90_visited: p90(&visited),
                median_queries: median(&queries),
                median_path_len: if lens.is_empty() { 0.0 } else { median(&len_f) },
                max_path_len: lens.iter().copied().max().unwrap_or(0),
                path_len_bound,
                path_len_violations: lens.iter().filter(|&&l| l > path_len_bound).count(),
                wall_time: elapsed(config, start),
            });
        }
    }
    Ok(rows)
}

/// Success-vs-budget tables at budgets `floor(c sqrt(n))`, one block per
/// `(n, strategy)`. Every strategy at grid point `n` plays the same
/// instances, seeded by `grid_seed(n)`.
pub fn exp_lower_bound(config: &ExperimentConfig) -> Result<Vec<LowerBoundRow>, ExperimentError> {
    let mut rows = Vec::new();
    for &n in &config.n_grid {
        let (model, d, p) = match config.model {
            ModelKind::Er => {
                let p = config.p.unwrap_or(2.0 * (n as f64).ln() / n as f64).min(1.0);
                (GameModel::Er { n, p }, None, Some(p))
            }
            ModelKind::Matching => (GameModel::Matching { n, d: config.d }, Some(config.d), None),
            _ => (GameModel::Regular { n, d: config.d }, Some(config.d), None),
        };
        let sqrt_n = (n as f64).sqrt();
        let budgets: Vec<usize> = config.budget_factors.iter().map(|&c| (c * sqrt_n).floor() as usize).collect();
        for &strategy in &config.strategies {
            let table = success_vs_budget(strategy, model, &budgets, config.trials, grid_seed(config, n), None)
                .map_err(ExperimentError::run)?;
            for (&c, r) in config.budget_factors.iter().zip(table) {
                rows.push(LowerBoundRow {
                    model: model.name().to_string(),
                    n,
                    d,
                    p,
                    strategy: strategy.name().to_string(),
                    c,
                    budget: r.budget,
                    budget_over_sqrt_n: r.budget as f64 / sqrt_n,
                    trials: r.trials,
                    success_rate: r.success_rate,
                    connected_rate: r.connected_rate,
                    mean_edges_discovered: r.mean_edges_discovered,
                    mean_queries: r.mean_queries,
                });
            }
        }
    }
    Ok(rows)
}
