use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, ValueEnum};
use serde::Serialize;
use xpand_core::generators::{gen_erdos_renyi, gen_margulis_expander, gen_matching_model, gen_random_regular};
use xpand_core::graph::{write_graph, GraphFormat};
use xpand_core::Seed;

use crate::{config_error, print_json};

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum GenModel {
    Er,
    Regular,
    Matching,
    Margulis,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    EdgeList,
    Binary,
}

#[derive(Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    model: GenModel,
    /// Node count (er, regular) or group count (matching).
    #[arg(long)]
    n: Option<usize>,
    /// Edge probability (er).
    #[arg(long)]
    p: Option<f64>,
    /// Degree (regular) or group size (matching).
    #[arg(long)]
    d: Option<usize>,
    /// Side length; margulis has m^2 nodes.
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Defaults to binary for `.bin`/`.xpgr` files, edge list otherwise.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Serialize)]
struct Summary {
    path: PathBuf,
    n: usize,
    m: usize,
    regular_degree: Option<usize>,
}

fn need<T>(v: Option<T>, flag: &str, model: GenModel) -> anyhow::Result<T> {
    let name = model.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    v.ok_or_else(|| config_error(format!("--{flag} is required for --model {name}")))
}

pub fn run(a: GenArgs) -> anyhow::Result<()> {
    let seed = Seed(a.seed);
    let graph = match a.model {
        GenModel::Er => gen_erdos_renyi(need(a.n, "n", a.model)?, need(a.p, "p", a.model)?, seed)?,
        GenModel::Regular => gen_random_regular(need(a.n, "n", a.model)?, need(a.d, "d", a.model)?, seed)?,
        GenModel::Matching => {
            let mg = gen_matching_model(need(a.n, "n", a.model)?, need(a.d, "d", a.model)?, seed)?;
            mg.contract().map_err(|defects| {
                anyhow::anyhow!("contraction is not simple ({defects:?}); try another seed or --model regular")
            })?
        }
        GenModel::Margulis => gen_margulis_expander(need(a.m, "m", a.model)?),
    };
    let format = match a.format {
        Some(Format::EdgeList) => GraphFormat::EdgeList,
        Some(Format::Binary) => GraphFormat::Binary,
        None => GraphFormat::from_path(&a.out),
    };
    write_graph(&a.out, &graph, format).with_context(|| format!("writing {}", a.out.display()))?;
    print_json(&Summary { path: a.out, n: graph.n(), m: graph.edge_count(), regular_degree: graph.regular_degree() })
}
