use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Serialize;
use xpand_core::generators::margulis_multigraph;
use xpand_core::spectral::{default_max_iter, lambda_exact, lambda_power, SpectralError, DEFAULT_TOL, EXACT_MAX_NODES};
use xpand_core::{Adjacency, SpectralReport};

use crate::{config_error, load_graph, print_json};

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Method {
    /// Exact up to the dense-solver limit, power iteration beyond.
    Auto,
    Exact,
    Power,
}

#[derive(Args)]
pub struct SpectralArgs {
    #[arg(long, conflicts_with = "margulis")]
    graph: Option<PathBuf>,
    /// Use the 8-regular Margulis multigraph on m^2 nodes instead of a file.
    #[arg(long, value_name = "M")]
    margulis: Option<usize>,
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    method: Method,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Per end of the spectrum; defaults to max(100, 10 sqrt(n) ln n).
    #[arg(long)]
    max_iter: Option<usize>,
}

#[derive(Serialize)]
struct Output {
    #[serde(flatten)]
    report: SpectralReport,
    converged: bool,
}

fn estimate<G: Adjacency + Sync>(g: &G, a: &SpectralArgs) -> anyhow::Result<Output> {
    let n = g.node_count();
    let exact = match a.method {
        Method::Auto => n <= EXACT_MAX_NODES,
        Method::Exact => true,
        Method::Power => false,
    };
    let result = if exact {
        lambda_exact(g)
    } else {
        lambda_power(g, a.tol, a.max_iter.unwrap_or_else(|| default_max_iter(n)))
    };
    match result {
        Ok(report) => Ok(Output { report, converged: true }),
        Err(SpectralError::NotConverged { best }) => {
            eprintln!("warning: power iteration did not converge; reporting the best estimate");
            Ok(Output { report: *best, converged: false })
        }
        Err(e) => Err(e.into()),
    }
}

pub fn run(a: SpectralArgs) -> anyhow::Result<()> {
    let out = match (&a.graph, a.margulis) {
        (Some(path), None) => estimate(&load_graph(path)?, &a)?,
        (None, Some(m)) => estimate(&margulis_multigraph(m), &a)?,
        _ => return Err(config_error("give exactly one of --graph or --margulis")),
    };
    print_json(&out)
}
