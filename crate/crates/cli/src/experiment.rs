//! The `experiment` subcommand: grid from a TOML file and/or flags.
//!
//! ```toml
//! trials = 200
//! master_seed = 1
//! variant = "wsat"        # wsat | dprime | mini
//! gate_multiplier = 1.0
//! fallback_oracle = false
//! timing = true
//! out = "threshold.csv"
//!
//! [grid]
//! n = [2000]
//! d = [2]
//! dprime = [1]
//! k = [2]
//! c = [0.5, 1.0, 1.5]
//! p = []
//! ```
//!
//! Flags override the matching file entries.

use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use serde::Deserialize;
use serde_json::json;
use wsat_core::harness::{emit_csv, run_experiment, ExperimentConfig, Grid, Variant};
use wsat_core::oracle::DEFAULT_BUDGET;
use wsat_core::SolverConfig;

use crate::commands::{params_json, print_resolved};
use crate::EXIT_SAT;

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum VariantArg {
    Wsat,
    Dprime,
    Mini,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Wsat => Variant::Wsat,
            VariantArg::Dprime => Variant::Dprime,
            VariantArg::Mini => Variant::Mini,
        }
    }
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// TOML experiment description.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<u32>>,
    #[arg(long, value_delimiter = ',')]
    pub d: Option<Vec<u32>>,
    #[arg(long, value_delimiter = ',')]
    pub dprime: Option<Vec<u32>>,
    #[arg(long, value_delimiter = ',')]
    pub k: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    pub c: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub p: Option<Vec<f64>>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub variant: Option<VariantArg>,
    #[arg(long)]
    pub gate_mult: Option<f64>,
    #[arg(long)]
    pub fallback_oracle: bool,
    #[arg(long)]
    pub budget: Option<u64>,
    /// Leave the timing columns empty so reruns give identical files.
    #[arg(long)]
    pub no_timing: bool,
    /// Solve trials one at a time.
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    #[serde(default)]
    grid: Option<Grid>,
    trials: Option<usize>,
    master_seed: Option<u64>,
    variant: Option<Variant>,
    gate_multiplier: Option<f64>,
    fallback_oracle: Option<bool>,
    oracle_budget: Option<u64>,
    timing: Option<bool>,
    parallel: Option<bool>,
    out: Option<PathBuf>,
}

pub fn run(args: &ExperimentArgs) -> Result<u8> {
    let file: FileConfig = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        None => FileConfig::default(),
    };

    let mut grid = file.grid.unwrap_or_else(|| Grid { dprime: vec![1], ..Grid::default() });
    if let Some(v) = &args.n {
        grid.n = v.clone();
    }
    if let Some(v) = &args.d {
        grid.d = v.clone();
    }
    if let Some(v) = &args.dprime {
        grid.dprime = v.clone();
    }
    if let Some(v) = &args.k {
        grid.k = v.clone();
    }
    if let Some(v) = &args.c {
        grid.c = v.clone();
    }
    if let Some(v) = &args.p {
        grid.p = v.clone();
    }
    let Some(out) = args.out.clone().or(file.out) else {
        bail!("no output path: pass --out or set `out` in the config file");
    };

    let config = ExperimentConfig {
        cells: grid.cells(),
        trials: args.trials.or(file.trials).unwrap_or(100),
        master_seed: args.seed.or(file.master_seed).unwrap_or(0),
        variant: args.variant.map(Variant::from).or(file.variant).unwrap_or(Variant::Wsat),
        solver: SolverConfig {
            gate_multiplier: args.gate_mult.or(file.gate_multiplier).unwrap_or(1.0),
            fallback_oracle: args.fallback_oracle || file.fallback_oracle.unwrap_or(false),
            oracle_budget: args.budget.or(file.oracle_budget).unwrap_or(DEFAULT_BUDGET),
        },
        timing: !args.no_timing && file.timing.unwrap_or(true),
        parallel: !args.sequential && file.parallel.unwrap_or(true),
    };

    let cells: Vec<_> = config.cells.iter().map(|cell| params_json(&cell.params(0))).collect();
    print_resolved(
        "experiment",
        json!({
            "out": out.display().to_string(),
            "trials": config.trials,
            "master_seed": config.master_seed,
            "variant": config.variant,
            "gate_multiplier": config.solver.gate_multiplier,
            "fallback_oracle": config.solver.fallback_oracle,
            "oracle_budget": config.solver.oracle_budget,
            "timing": config.timing,
            "parallel": config.parallel,
            "cells": cells,
        }),
    );

    let results = run_experiment(&config)?;
    emit_csv(&results, &out).with_context(|| format!("writing {}", out.display()))?;
    eprintln!("wrote {} rows to {}", results.len(), out.display());
    Ok(EXIT_SAT)
}
