use std::fs;
use std::io;
use std::path::PathBuf;

use anyhow::Context;
use clap::Args;
use serde::Serialize;
use toml::Value;
use xpand_core::experiment::{emit_plots, run_experiment, ExperimentConfig, ExperimentOutput, VERSION};

use crate::{config_error, print_json};

/// Every config key is also a flag; flags override the file.
#[derive(Args)]
pub struct ExpArgs {
    /// Flat `key = value` TOML file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// bibfs-scaling, walks-success or lower-bound.
    #[arg(long)]
    experiment: Option<String>,
    /// regular, margulis, er or matching.
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    n_grid: Option<Vec<usize>>,
    #[arg(long)]
    pairs: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// CSV destination; stdout if absent.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    deltas: Option<Vec<f64>>,
    /// power, exact or ramanujan.
    #[arg(long)]
    lambda_source: Option<String>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    allow_weak_expansion: Option<bool>,
    #[arg(long)]
    estimate_lambda: Option<bool>,
    #[arg(long, value_delimiter = ',')]
    strategies: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',')]
    budget_factors: Option<Vec<f64>>,
    #[arg(long)]
    timing: Option<bool>,
}

impl ExpArgs {
    /// File contents with flag values laid over them.
    fn merged_table(&self) -> anyhow::Result<toml::Table> {
        let mut table = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
                text.parse::<toml::Table>().map_err(|e| config_error(format!("{}: {e}", path.display())))?
            }
            None => toml::Table::new(),
        };
        let int = |v: u64| Value::Integer(v as i64);
        let list = |v: Vec<Value>| Value::Array(v);
        let mut set = |k: &str, v: Option<Value>| {
            if let Some(v) = v {
                table.insert(k.to_string(), v);
            }
        };
        set("experiment", self.experiment.clone().map(Value::String));
        set("model", self.model.clone().map(Value::String));
        set("d", self.d.map(|v| int(v as u64)));
        set("p", self.p.map(Value::Float));
        set("n_grid", self.n_grid.clone().map(|v| list(v.into_iter().map(|x| int(x as u64)).collect())));
        set("pairs", self.pairs.map(|v| int(v as u64)));
        set("trials", self.trials.map(|v| int(v as u64)));
        set("seed", self.seed.map(int));
        set("output", self.output.as_ref().map(|p| Value::String(p.display().to_string())));
        set("deltas", self.deltas.clone().map(|v| list(v.into_iter().map(Value::Float).collect())));
        set("lambda_source", self.lambda_source.clone().map(Value::String));
        set("lambda", self.lambda.map(Value::Float));
        set("allow_weak_expansion", self.allow_weak_expansion.map(Value::Boolean));
        set("estimate_lambda", self.estimate_lambda.map(Value::Boolean));
        set("strategies", self.strategies.clone().map(|v| list(v.into_iter().map(Value::String).collect())));
        set("budget_factors", self.budget_factors.clone().map(|v| list(v.into_iter().map(Value::Float).collect())));
        set("timing", self.timing.map(Value::Boolean));
        Ok(table)
    }
}

#[derive(Serialize)]
struct Summary<'a> {
    version: &'static str,
    config: &'a ExperimentConfig,
    row_count: usize,
    output: Option<&'a PathBuf>,
    #[serde(flatten)]
    result: &'a ExperimentOutput,
}

pub fn run(a: ExpArgs) -> anyhow::Result<()> {
    let config = ExperimentConfig::from_table(a.merged_table()?)?;
    let result = run_experiment(&config)?;
    let summary = Summary {
        version: VERSION,
        config: &config,
        row_count: result.row_count(),
        output: config.output.as_ref(),
        result: &result,
    };
    match &config.output {
        Some(path) => {
            let file = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
            result.write_csv(&config, io::BufWriter::new(file))?;
            print_json(&summary)
        }
        None => {
            result.write_csv(&config, io::stdout().lock())?;
            eprintln!("{}", serde_json::to_string_pretty(&summary)?);
            Ok(())
        }
    }
}

#[derive(Args)]
pub struct PlotArgs {
    /// CSV written by `xp exp`.
    #[arg(long)]
    csv: PathBuf,
    /// Script destination; defaults to the CSV path with a `.py` extension.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct PlotSummary {
    schema: xpand_core::experiment::CsvSchema,
    script: PathBuf,
}

pub fn plot(a: PlotArgs) -> anyhow::Result<()> {
    let script = emit_plots(&a.csv)?;
    let out = a.out.unwrap_or_else(|| a.csv.with_extension("py"));
    fs::write(&out, &script.source).with_context(|| format!("writing {}", out.display()))?;
    print_json(&PlotSummary { schema: script.schema, script: out })
}
