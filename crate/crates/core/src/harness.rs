//! Experiment driver: solve many seeded random instances per parameter cell
//! and aggregate outcome counts, timings and structure statistics.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::oracle::{OracleError, OracleStatus, DEFAULT_BUDGET};
use crate::randgen::{derive_seed, generate, EdgeRate, ParamError, RandomModelParams};
use crate::solver::{mini_wsat_solve, wsat_solve, wsat_solve_dprime, SolveError, SolveOutcome, SolverConfig, Status};

pub const CSV_HEADER: &str = "n,d,dprime,k,c,p,trials,master_seed,n_sat,n_unsat,n_fail,n_fail_sat,n_fail_unsat,\
mean_ms,median_ms,mean_frozen_frac,mean_max_comp";

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("experiment grid is empty")]
    EmptyGrid,
    #[error("trials per cell must be at least 1")]
    NoTrials,
    #[error("cell {cell}: {source}")]
    Params { cell: usize, source: ParamError },
    #[error("cell {cell}, trial {trial}: {source}")]
    Solve { cell: usize, trial: usize, source: SolveError },
    #[error("cell {cell}, trial {trial}: fallback oracle refused: {source}")]
    Oracle { cell: usize, trial: usize, source: OracleError },
    #[error("no results to write")]
    NoResults,
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Wsat,
    Dprime,
    Mini,
}

impl Variant {
    fn solve(
        self,
        instance: &crate::cnf::Instance,
        dprime: u32,
        config: &SolverConfig,
    ) -> Result<SolveOutcome, SolveError> {
        match self {
            Variant::Wsat => wsat_solve(instance, config),
            Variant::Dprime => wsat_solve_dprime(instance, dprime as usize, config),
            Variant::Mini => mini_wsat_solve(instance, config),
        }
    }
}

/// One point of the parameter grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub n: u32,
    pub d: u32,
    pub dprime: u32,
    pub k: usize,
    pub rate: EdgeRate,
}

impl Cell {
    pub fn params(&self, seed: u64) -> RandomModelParams {
        RandomModelParams { n: self.n, d: self.d, dprime: self.dprime, k: self.k, rate: self.rate, seed }
    }
}

/// Axis values of a grid; cells are their cartesian product in the order
/// n, d, dprime, k, then rate (all `c` values before all `p` values).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub n: Vec<u32>,
    pub d: Vec<u32>,
    #[serde(default = "one")]
    pub dprime: Vec<u32>,
    pub k: Vec<usize>,
    #[serde(default)]
    pub c: Vec<f64>,
    #[serde(default)]
    pub p: Vec<f64>,
}

fn one() -> Vec<u32> {
    vec![1]
}

impl Grid {
    pub fn cells(&self) -> Vec<Cell> {
        let rates: Vec<EdgeRate> =
            self.c.iter().map(|&c| EdgeRate::C(c)).chain(self.p.iter().map(|&p| EdgeRate::P(p))).collect();
        let mut cells = Vec::new();
        for &n in &self.n {
            for &d in &self.d {
                for &dprime in &self.dprime {
                    for &k in &self.k {
                        for &rate in &rates {
                            cells.push(Cell { n, d, dprime, k, rate });
                        }
                    }
                }
            }
        }
        cells
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub cells: Vec<Cell>,
    pub trials: usize,
    pub master_seed: u64,
    pub variant: Variant,
    pub solver: SolverConfig,
    /// Record wall-clock times; off makes the CSV byte-reproducible.
    pub timing: bool,
    /// Solve the trials of a cell on the rayon pool.
    pub parallel: bool,
}

impl ExperimentConfig {
    pub fn new(cells: Vec<Cell>, trials: usize, master_seed: u64, variant: Variant) -> ExperimentConfig {
        ExperimentConfig {
            cells,
            trials,
            master_seed,
            variant,
            solver: SolverConfig { oracle_budget: DEFAULT_BUDGET, ..SolverConfig::default() },
            timing: true,
            parallel: true,
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.cells.is_empty() {
            return Err(HarnessError::EmptyGrid);
        }
        if self.trials == 0 {
            return Err(HarnessError::NoTrials);
        }
        for (i, cell) in self.cells.iter().enumerate() {
            cell.params(0).validate().map_err(|source| HarnessError::Params { cell: i, source })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellResult {
    pub cell: Cell,
    pub c: f64,
    pub p: f64,
    pub trials: usize,
    pub master_seed: u64,
    pub n_sat: usize,
    pub n_unsat: usize,
    pub n_fail: usize,
    /// Oracle verdicts on the failed trials, when the fallback was enabled.
    pub n_fail_sat: Option<usize>,
    pub n_fail_unsat: Option<usize>,
    pub mean_ms: Option<f64>,
    pub median_ms: Option<f64>,
    pub mean_frozen_frac: f64,
    pub mean_max_comp: f64,
}

impl CellResult {
    pub fn sat_fraction(&self) -> f64 {
        self.n_sat as f64 / self.trials as f64
    }

    pub fn fail_fraction(&self) -> f64 {
        self.n_fail as f64 / self.trials as f64
    }
}

struct Trial {
    status: Status,
    fallback: Option<OracleStatus>,
    millis: f64,
    frozen: usize,
    max_comp: usize,
}

fn run_trial(config: &ExperimentConfig, index: usize, cell: &Cell, trial: usize) -> Result<Trial, HarnessError> {
    let seed = derive_seed(config.master_seed, index as u64, trial as u64);
    let instance = generate(&cell.params(seed)).map_err(|source| HarnessError::Params { cell: index, source })?;
    let start = Instant::now();
    let outcome = config
        .variant
        .solve(&instance, cell.dprime, &config.solver)
        .map_err(|source| HarnessError::Solve { cell: index, trial, source })?;
    let millis = start.elapsed().as_secs_f64() * 1e3;
    let fallback = match outcome.fallback {
        Some(Ok(r)) => Some(r.status),
        Some(Err(source)) => return Err(HarnessError::Oracle { cell: index, trial, source }),
        None => None,
    };
    Ok(Trial {
        status: outcome.status,
        fallback,
        millis,
        frozen: outcome.diagnostics.frozen_count,
        max_comp: outcome.diagnostics.max_component_size,
    })
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        (values[mid - 1] + values[mid]) / 2.0
    }
}

fn aggregate(config: &ExperimentConfig, cell: &Cell, trials: &[Trial]) -> CellResult {
    let count = |s: Status| trials.iter().filter(|t| t.status == s).count();
    let fallback_count = |s: OracleStatus| {
        config.solver.fallback_oracle.then(|| trials.iter().filter(|t| t.fallback == Some(s)).count())
    };
    let total = trials.len() as f64;
    let mut times: Vec<f64> = trials.iter().map(|t| t.millis).collect();
    let params = cell.params(0);
    CellResult {
        cell: *cell,
        c: params.c(),
        p: params.p(),
        trials: trials.len(),
        master_seed: config.master_seed,
        n_sat: count(Status::Sat),
        n_unsat: count(Status::Unsat),
        n_fail: count(Status::Failure),
        n_fail_sat: fallback_count(OracleStatus::Sat),
        n_fail_unsat: fallback_count(OracleStatus::Unsat),
        mean_ms: config.timing.then(|| times.iter().sum::<f64>() / total),
        median_ms: config.timing.then(|| median(&mut times)),
        mean_frozen_frac: trials.iter().map(|t| t.frozen as f64 / f64::from(cell.n)).sum::<f64>() / total,
        mean_max_comp: trials.iter().map(|t| t.max_comp as f64).sum::<f64>() / total,
    }
}

/// Runs every cell of the grid. Results are in grid order and do not depend
/// on how trials were scheduled.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<CellResult>, HarnessError> {
    config.validate()?;
    let mut results = Vec::with_capacity(config.cells.len());
    for (index, cell) in config.cells.iter().enumerate() {
        let trials: Vec<Trial> = if config.parallel {
            (0..config.trials).into_par_iter().map(|t| run_trial(config, index, cell, t)).collect::<Result<_, _>>()?
        } else {
            (0..config.trials).map(|t| run_trial(config, index, cell, t)).collect::<Result<_, _>>()?
        };
        results.push(aggregate(config, cell, &trials));
    }
    Ok(results)
}

/// Formats `x` with six significant digits, without exponent notation.
pub fn format_sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() { "0".to_string() } else { x.to_string() };
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = 5 - magnitude;
    if decimals >= 0 {
        let s = format!("{:.*}", decimals as usize, x);
        // rounding can carry into a new digit, e.g. 9.999996 -> 10.00000
        let digits = s.chars().filter(char::is_ascii_digit).collect::<String>();
        if digits.trim_start_matches('0').len() > 6 && decimals > 0 {
            return format!("{:.*}", decimals as usize - 1, x);
        }
        s
    } else {
        let scale = 10f64.powi(-decimals);
        format!("{:.0}", (x / scale).round() * scale)
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

pub fn csv_row(r: &CellResult) -> String {
    let mut row = String::new();
    let _ = write!(
        row,
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        r.cell.n,
        r.cell.d,
        r.cell.dprime,
        r.cell.k,
        format_sig6(r.c),
        format_sig6(r.p),
        r.trials,
        r.master_seed,
        r.n_sat,
        r.n_unsat,
        r.n_fail,
        opt(r.n_fail_sat),
        opt(r.n_fail_unsat),
        opt(r.mean_ms.map(format_sig6)),
        opt(r.median_ms.map(format_sig6)),
        format_sig6(r.mean_frozen_frac),
        format_sig6(r.mean_max_comp),
    );
    row
}

pub fn write_csv<W: Write>(results: &[CellResult], mut out: W) -> Result<(), HarnessError> {
    if results.is_empty() {
        return Err(HarnessError::NoResults);
    }
    writeln!(out, "{CSV_HEADER}")?;
    for r in results {
        writeln!(out, "{}", csv_row(r))?;
    }
    out.flush()?;
    Ok(())
}

pub fn emit_csv(results: &[CellResult], path: &Path) -> Result<(), HarnessError> {
    if results.is_empty() {
        return Err(HarnessError::NoResults);
    }
    let file = std::fs::File::create(path)?;
    write_csv(results, io::BufWriter::new(file))
}
