use std::path::PathBuf;

use clap::{Args, ValueEnum};
use xpand_core::pathfind::{bfs_path, bfs_plus_walks, bidirectional_bfs};
use xpand_core::{NodeId, QueryOracle, Seed, WalkParams};

use crate::{config_error, load_graph, power_lambda, print_json};

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Algo {
    Bibfs,
    Bfswalks,
    Bfs,
}

#[derive(Args)]
pub struct PathArgs {
    #[arg(long, value_enum, default_value_t = Algo::Bibfs)]
    algo: Algo,
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    s: usize,
    #[arg(long)]
    t: usize,
    /// Failure probability for bfswalks.
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    /// Spectral bound for bfswalks; estimated by power iteration if absent.
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Let bfswalks run when lambda/d exceeds 1/2.
    #[arg(long)]
    allow_weak_expansion: bool,
}

pub fn run(a: PathArgs) -> anyhow::Result<()> {
    let g = load_graph(&a.graph)?;
    let (s, t) = (NodeId::new(a.s), NodeId::new(a.t));
    let mut oracle = QueryOracle::new(&g);
    let result = match a.algo {
        Algo::Bibfs => bidirectional_bfs(&mut oracle, s, t)?,
        Algo::Bfs => bfs_path(&mut oracle, s, t)?,
        Algo::Bfswalks => {
            let d = g.regular_degree().ok_or_else(|| config_error("bfswalks needs a regular graph"))?;
            let lambda = match a.lambda {
                Some(l) => l,
                None => power_lambda(&g)?,
            };
            let mut params = WalkParams::derive(g.n(), lambda / d as f64, a.delta)?;
            if a.allow_weak_expansion {
                params = params.allow_weak_expansion();
            }
            bfs_plus_walks(&mut oracle, s, t, &params, Seed(a.seed))?
        }
    };
    print_json(&result)
}
