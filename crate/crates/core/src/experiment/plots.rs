use std::fs::File;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::ExperimentError;

/// The CSV layouts written by the experiment runner.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CsvSchema {
    Scaling,
    Walks,
    LowerBound,
}

impl CsvSchema {
    pub fn columns(self) -> &'static [&'static str] {
        match self {
            CsvSchema::Scaling => {
                &["n", "d", "lambda_est", "median_visited", "p90_visited", "median_queries", "success_rate", "wall_time"]
            }
            CsvSchema::Walks => &[
                "n",
                "d",
                "delta",
                "lambda_est",
                "k",
                "walk_len",
                "num_walks",
                "trials",
                "success_rate",
                "median_visited",
                "p90_visited",
                "median_queries",
                "median_path_len",
                "max_path_len",
                "path_len_bound",
                "path_len_violations",
                "wall_time",
            ],
            CsvSchema::LowerBound => &[
                "model",
                "n",
                "d",
                "p",
                "strategy",
                "c",
                "budget",
                "budget_over_sqrt_n",
                "trials",
                "success_rate",
                "connected_rate",
                "mean_edges_discovered",
                "mean_queries",
            ],
        }
    }

    /// Schema whose columns all appear in `header`. Extra columns are
    /// tolerated; the most specific match wins.
    pub fn detect(header: &[String]) -> Result<CsvSchema, ExperimentError> {
        let has = |c: &str| header.iter().any(|h| h == c);
        let candidates = [CsvSchema::Walks, CsvSchema::LowerBound, CsvSchema::Scaling];
        if let Some(s) = candidates.into_iter().find(|s| s.columns().iter().all(|c| has(c))) {
            return Ok(s);
        }
        let (best, missing) = candidates
            .into_iter()
            .map(|s| (s, s.columns().iter().filter(|c| !has(c)).copied().collect::<Vec<_>>()))
            .min_by_key(|(_, m)| m.len())
            .expect("candidates are non-empty");
        Err(ExperimentError::Schema(format!("closest schema {best:?} is missing columns {missing:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlotScript {
    pub schema: CsvSchema,
    /// Python source; needs only the standard library and matplotlib.
    pub source: String,
}

/// Checks the CSV at `csv_path` against the known schemas and returns a
/// matplotlib script that reads it and saves `<csv stem>.png` beside it.
pub fn emit_plots(csv_path: &Path) -> Result<PlotScript, ExperimentError> {
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(File::open(csv_path)?);
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if header.iter().all(|h| h.is_empty()) {
        return Err(ExperimentError::Schema(format!("{} has no header", csv_path.display())));
    }
    let schema = CsvSchema::detect(&header)?;
    let mut rows = 0usize;
    for record in reader.records() {
        let record = record?;
        for col in ["n", "success_rate"] {
            let i = header.iter().position(|h| h == col).expect("schema column present");
            record[i]
                .parse::<f64>()
                .map_err(|_| ExperimentError::Schema(format!("row {}: {col} = {:?} is not a number", rows + 1, &record[i])))?;
        }
        rows += 1;
    }
    if rows == 0 {
        return Err(ExperimentError::Schema(format!("{} has no data rows", csv_path.display())));
    }
    let csv_literal = format!("{:?}", csv_path.display().to_string());
    let body = match schema {
        CsvSchema::Scaling => SCALING_BODY,
        CsvSchema::Walks => WALKS_BODY,
        CsvSchema::LowerBound => LOWER_BOUND_BODY,
    };
    let source = format!("{PRELUDE}\nCSV_PATH = {csv_literal}\nrows = load(CSV_PATH)\n{body}\n{EPILOGUE}");
    Ok(PlotScript { schema, source })
}

const PRELUDE: &str = r##"#!/usr/bin/env python3
import csv
import math
import os
import sys
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def load(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(line for line in f if not line.startswith("#")))
"##;

const SCALING_BODY: &str = r#"
ns = [float(r["n"]) for r in rows]
med = [float(r["median_visited"]) for r in rows]
p90 = [float(r["p90_visited"]) for r in rows]
fig, ax = plt.subplots(figsize=(6, 4.5))
ax.loglog(ns, med, "o-", label="median visited")
ax.loglog(ns, p90, "s--", label="p90 visited")
ref = [med[0] * math.sqrt(n / ns[0]) for n in ns]
ax.loglog(ns, ref, ":", color="gray", label="sqrt(n) reference")
ax.set_xlabel("n")
ax.set_ylabel("visited nodes")
ax.set_title("bidirectional BFS")
ax.legend()
"#;

const WALKS_BODY: &str = r#"
by_delta = defaultdict(list)
for r in rows:
    by_delta[float(r["delta"])].append((float(r["n"]), float(r["success_rate"])))
fig, ax = plt.subplots(figsize=(6, 4.5))
for delta, pts in sorted(by_delta.items()):
    pts.sort()
    ax.semilogx([p[0] for p in pts], [p[1] for p in pts], "o-", label=f"delta={delta:g}")
    ax.axhline(1 - delta, ls=":", color="gray")
ax.set_xlabel("n")
ax.set_ylabel("success rate")
ax.set_ylim(0, 1.05)
ax.set_title("BFS + random walks")
ax.legend()
"#;

const LOWER_BOUND_BODY: &str = r#"
strategies = sorted({r["strategy"] for r in rows})
fig, axes = plt.subplots(1, len(strategies), figsize=(5 * len(strategies), 4.5), squeeze=False)
for ax, strategy in zip(axes[0], strategies):
    curves = defaultdict(list)
    for r in rows:
        if r["strategy"] == strategy:
            curves[int(r["n"])].append((float(r["budget_over_sqrt_n"]), float(r["success_rate"])))
    for n, pts in sorted(curves.items()):
        pts.sort()
        ax.plot([p[0] for p in pts], [p[1] for p in pts], "o-", label=f"n={n}")
    ax.set_xlabel("budget / sqrt(n)")
    ax.set_ylabel("success rate")
    ax.set_ylim(-0.02, 1.02)
    ax.set_title(strategy)
    ax.legend()
"#;

const EPILOGUE: &str = r#"fig.tight_layout()
out = sys.argv[1] if len(sys.argv) > 1 else os.path.splitext(CSV_PATH)[0] + ".png"
fig.savefig(out, dpi=120)
print(out)
"#;
