//! `xp`: generate graphs, estimate spectra, search paths, check bounds,
//! play the query game and run experiments.

mod bounds;
mod exp;
mod game;
mod gen;
mod path;
mod spectral;

use std::io::{self, Write};
use std::path::Path;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use xpand_core::experiment::ExperimentError;
use xpand_core::graph::read_graph;
use xpand_core::spectral::{default_max_iter, lambda_power, SpectralError, DEFAULT_TOL};
use xpand_core::Graph;

#[derive(Parser)]
#[command(name = "xp", version, about = "Path search on expander graphs under a metered query model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph and write it as an edge list or binary file.
    Gen(gen::GenArgs),
    /// Estimate the second-largest absolute adjacency eigenvalue.
    Spectral(spectral::SpectralArgs),
    /// Find an s-t path; prints the result as JSON.
    Path(path::PathArgs),
    /// Compare bound evaluators with exact counts; prints CSV.
    Bounds(bounds::BoundsArgs),
    /// Success rate against query budget in the query game; prints CSV.
    Game(game::GameArgs),
    /// Run an experiment from a config file and flags.
    Exp(exp::ExpArgs),
    /// Write a matplotlib script for an experiment CSV.
    Plot(exp::PlotArgs),
}

/// Bad configuration or input schema; exits with status 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

pub fn config_error(msg: impl Into<String>) -> anyhow::Error {
    ConfigError(msg.into()).into()
}

fn is_config_error(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.is::<ConfigError>()
            || matches!(c.downcast_ref::<ExperimentError>(), Some(ExperimentError::Config(_) | ExperimentError::Schema(_)))
    })
}

pub fn load_graph(path: &Path) -> anyhow::Result<Graph> {
    read_graph(path).with_context(|| format!("reading graph {}", path.display()))
}

/// Power-iteration `lambda`, falling back to the best estimate of an
/// unconverged run.
pub fn power_lambda(g: &Graph) -> anyhow::Result<f64> {
    match lambda_power(g, DEFAULT_TOL, default_max_iter(g.n())) {
        Ok(r) => Ok(r.lambda_est),
        Err(SpectralError::NotConverged { best }) => {
            eprintln!("warning: power iteration did not converge; using the best estimate");
            Ok(best.lambda_est)
        }
        Err(e) => Err(e.into()),
    }
}

pub fn print_json<T: serde::Serialize>(value: &T) -> anyhow::Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.downcast_ref::<io::Error>().is_some_and(|io| io.kind() == io::ErrorKind::BrokenPipe)
            || c.downcast_ref::<serde_json::Error>().and_then(|j| j.io_error_kind()) == Some(io::ErrorKind::BrokenPipe)
            || c.downcast_ref::<csv::Error>().is_some_and(|c| matches!(c.kind(), csv::ErrorKind::Io(io) if io.kind() == io::ErrorKind::BrokenPipe))
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => gen::run(a),
        Command::Spectral(a) => spectral::run(a),
        Command::Path(a) => path::run(a),
        Command::Bounds(a) => bounds::run(a),
        Command::Game(a) => game::run(a),
        Command::Exp(a) => exp::run(a),
        Command::Plot(a) => exp::plot(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if is_config_error(&e) { 2 } else { 1 })
        }
    }
}
