use std::io;
use std::path::PathBuf;

use clap::Args;
use rand::seq::index::sample;
use rand::Rng;
use serde::Serialize;
use xpand_core::bounds::{
    biguint_ln, confined_walk_bound_ln, count_confined_walks, count_far_nodes, exact_walk_distribution,
    far_node_bound, mixing_deviation_bound, ExpanderParams, DISTRIBUTION_MAX_NODES, WALK_COUNT_MAX_NODES,
};
use xpand_core::pathfind::full_bfs;
use xpand_core::spectral::{lambda_exact, EXACT_MAX_NODES};
use xpand_core::{NodeId, QueryOracle, Seed};

use crate::{config_error, load_graph, power_lambda};

#[derive(Args)]
pub struct BoundsArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Spectral bound; computed exactly (small graphs) or by power iteration if absent.
    #[arg(long)]
    lambda: Option<f64>,
    /// Sampled source nodes.
    #[arg(long, default_value_t = 8)]
    sources: usize,
    /// Largest walk length for the mixing rows.
    #[arg(long, default_value_t = 20)]
    mixing_steps: usize,
    /// Random node sets for the confined-walk rows.
    #[arg(long, default_value_t = 5)]
    sets: usize,
    /// Largest walk length for the confined-walk rows.
    #[arg(long, default_value_t = 8)]
    walk_steps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// One CSV row. `slack = bound_value - empirical`; the `confined_walks_ln`
/// rows compare natural logarithms.
#[derive(Serialize)]
struct Row {
    bound: &'static str,
    source: Option<usize>,
    k: usize,
    set_size: Option<usize>,
    bound_value: f64,
    empirical: f64,
    slack: f64,
}

impl Row {
    fn new(bound: &'static str, source: Option<usize>, k: usize, set_size: Option<usize>, b: f64, e: f64) -> Row {
        Row { bound, source, k, set_size, bound_value: b, empirical: e, slack: b - e }
    }
}

pub fn run(a: BoundsArgs) -> anyhow::Result<()> {
    let g = load_graph(&a.graph)?;
    let n = g.n();
    let d = g.regular_degree().ok_or_else(|| config_error("bounds need a regular graph"))?;
    let lambda = match a.lambda {
        Some(l) => l,
        None if n <= EXACT_MAX_NODES => lambda_exact(&g)?.lambda_est,
        None => power_lambda(&g)?,
    };
    let params = ExpanderParams::new(n, d, lambda)?;
    let mut rng = Seed(a.seed).rng();
    let sources: Vec<usize> = sample(&mut rng, n, a.sources.min(n)).into_vec();
    let mut out = csv::Writer::from_writer(io::stdout().lock());

    for &s in &sources {
        let src = NodeId::new(s);
        let ecc = full_bfs(&mut QueryOracle::new(&g), src)?.iter().map(|x| x.unwrap_or(u32::MAX)).max().unwrap_or(0);
        let k_max = if ecc == u32::MAX { params.log_base(n as f64).ceil() as usize + 1 } else { ecc as usize };
        for k in 0..=k_max {
            let far = count_far_nodes(&g, src, k)? as f64;
            out.serialize(Row::new("far_nodes", Some(s), k, None, far_node_bound(&params, k), far))?;
        }
        if n <= DISTRIBUTION_MAX_NODES {
            for k in 1..=a.mixing_steps {
                let dist = exact_walk_distribution(&g, src, k)?;
                let dev = dist.iter().map(|p| (p - 1.0 / n as f64).abs()).fold(0.0, f64::max);
                out.serialize(Row::new("mixing", Some(s), k, None, mixing_deviation_bound(&params, k), dev))?;
            }
        }
    }
    if n <= WALK_COUNT_MAX_NODES {
        for _ in 0..a.sets {
            let size = rng.gen_range(1..=n);
            let set: Vec<NodeId> = sample(&mut rng, n, size).into_iter().map(NodeId::new).collect();
            for k in 1..=a.walk_steps {
                let count = count_confined_walks(&g, &set, k)?;
                let bound = confined_walk_bound_ln(&params, size, k)?;
                let empirical = if count.bits() == 0 { f64::NEG_INFINITY } else { biguint_ln(&count) };
                out.serialize(Row::new("confined_walks_ln", None, k, Some(size), bound, empirical))?;
            }
        }
    }
    out.flush()?;
    Ok(())
}
