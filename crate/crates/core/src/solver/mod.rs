//! The fixed-parameter weighted d-SAT solver.
//!
//! The base pipeline:
//!
//! 1. find the `k`-frozen variables and set them FALSE,
//! 2. propagate with [`reduce`](crate::reduce::reduce),
//! 3. split the residual formula into connected components; unassigned
//!    variables that no longer occur anywhere become singleton components,
//! 4. give up with [`Status::Failure`] if a component exceeds the size gate,
//! 5. brute-force each component's achievable weights,
//! 6. pick one weight per component summing to the target with a dynamic
//!    program, or report [`Status::Unsat`],
//! 7. glue the per-component witnesses together.
//!
//! [`wsat_solve_dprime`] wraps the pipeline in a loop over TRUE seed sets
//! for formulas whose clauses have at least `d'` negated literals, and
//! [`mini_wsat_solve`] runs it at target `round(k ln n)`.

mod frozen;
mod weights;

use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

pub use frozen::{find_frozen_on, find_k_frozen, frozen_on_witnesses, FrozenWitness};
pub use weights::{component_weight_sets, dp_combine, DpTable, WeightSet, WeightSetError, MAX_ENUMERABLE};

use crate::cnf::{verify_assignment, Assignment, Clause, Formula, Instance, Var};
use crate::graph::{connected_components, residual_graph};
use crate::oracle::{self, OracleError, OracleResult};
use crate::reduce::{condition, reduce, Conditioned, ReduceError};
use weights::{next_combination, weight_set_of};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("clause {clause} has {negated} negated literals, the solver needs at least {required}")]
    Precondition { clause: usize, negated: usize, required: usize },
    #[error("dprime must be at least 1, got {0}")]
    InvalidDprime(usize),
    #[error("gate multiplier must be positive and finite, got {0}")]
    InvalidGate(f64),
    #[error("internal invariant violated during propagation: {0}")]
    Reduce(#[from] ReduceError),
    #[error("internal invariant violated: assembled witness does not verify")]
    Witness,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Scales the `ceil(log2 n)` component size limit.
    pub gate_multiplier: f64,
    /// Run the exhaustive oracle when the pipeline fails.
    pub fallback_oracle: bool,
    pub oracle_budget: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { gate_multiplier: 1.0, fallback_oracle: false, oracle_budget: oracle::DEFAULT_BUDGET }
    }
}

/// Largest component size handled without reporting failure:
/// `ceil(multiplier * log2 n)`, at least 1, capped at [`MAX_ENUMERABLE`].
pub fn size_gate(n: u32, multiplier: f64) -> usize {
    if n < 2 {
        return 1;
    }
    let gate = (multiplier * f64::from(n).log2()).ceil();
    (gate.max(1.0) as usize).min(MAX_ENUMERABLE)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Sat,
    Unsat,
    Failure,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Diagnostics {
    pub frozen_count: usize,
    /// Variables left unassigned after propagation.
    pub residual_vars: usize,
    pub component_count: usize,
    pub isolated_count: usize,
    pub max_component_size: usize,
    /// Seed sets tried by the `d'` loop; 1 for the plain pipeline.
    pub branches: usize,
    pub freeze_ms: f64,
    pub reduce_ms: f64,
    pub decompose_ms: f64,
    pub weight_sets_ms: f64,
    pub combine_ms: f64,
}

impl Diagnostics {
    fn absorb(&mut self, other: &Diagnostics) {
        self.frozen_count = self.frozen_count.max(other.frozen_count);
        self.residual_vars = self.residual_vars.max(other.residual_vars);
        self.component_count = self.component_count.max(other.component_count);
        self.isolated_count = self.isolated_count.max(other.isolated_count);
        self.max_component_size = self.max_component_size.max(other.max_component_size);
        self.freeze_ms += other.freeze_ms;
        self.reduce_ms += other.reduce_ms;
        self.decompose_ms += other.decompose_ms;
        self.weight_sets_ms += other.weight_sets_ms;
        self.combine_ms += other.combine_ms;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOutcome {
    pub status: Status,
    /// Weight the pipeline searched for.
    pub target: usize,
    /// Total assignment, present iff `status == Sat`.
    pub witness: Option<Assignment>,
    pub diagnostics: Diagnostics,
    /// Oracle verdict on a failed run, when requested.
    pub fallback: Option<Result<OracleResult, OracleError>>,
}

impl SolveOutcome {
    fn new(status: Status, target: usize, witness: Option<Assignment>, diagnostics: Diagnostics) -> SolveOutcome {
        SolveOutcome { status, target, witness, diagnostics, fallback: None }
    }
}

fn ms_since(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn check_negated(formula: &Formula, required: usize) -> Result<(), SolveError> {
    match formula.clauses().iter().position(|c| c.negated_count() < required) {
        Some(clause) => {
            Err(SolveError::Precondition { clause, negated: formula.clauses()[clause].negated_count(), required })
        }
        None => Ok(()),
    }
}

enum Branch {
    Sat(Vec<Var>),
    Unsat,
    Failure,
}

/// Steps 3 to 6 on a residual formula. `assigned` marks the variables that
/// are already fixed; every other variable is free.
fn decompose_and_combine(
    residual: &Formula,
    assigned: &Assignment,
    target: usize,
    gate: usize,
    diag: &mut Diagnostics,
) -> Branch {
    let start = Instant::now();
    let graph = residual_graph(residual);
    let mut components = connected_components(&graph);
    diag.component_count = components.len();
    let isolated: Vec<Var> = residual.vars().filter(|&v| !assigned.is_assigned(v) && !graph.contains(v)).collect();
    diag.isolated_count = isolated.len();
    diag.residual_vars = graph.vertex_count() + isolated.len();
    components.extend(isolated.into_iter().map(|v| vec![v]));
    components.sort_unstable_by_key(|c| c[0]);
    diag.max_component_size = components.iter().map(Vec::len).max().unwrap_or(0);
    diag.decompose_ms = ms_since(start);
    if diag.max_component_size > gate {
        return Branch::Failure;
    }

    let start = Instant::now();
    let mut owner = vec![usize::MAX; residual.num_vars() as usize];
    for (i, comp) in components.iter().enumerate() {
        for v in comp {
            owner[v.offset()] = i;
        }
    }
    let mut buckets: Vec<Vec<&Clause>> = vec![Vec::new(); components.len()];
    for clause in residual.clauses() {
        if let Some(first) = clause.vars().next() {
            buckets[owner[first.offset()]].push(clause);
        }
    }
    let sets: Vec<WeightSet> = components
        .iter()
        .zip(&buckets)
        .map(|(comp, clauses)| weight_set_of(comp, clauses, target).expect("component within the size gate"))
        .collect();
    diag.weight_sets_ms = ms_since(start);

    let start = Instant::now();
    let lists: Vec<Vec<usize>> = sets.iter().map(WeightSet::achievable).collect();
    let picks = dp_combine(&lists, target);
    diag.combine_ms = ms_since(start);
    match picks {
        None => Branch::Unsat,
        Some(picks) => {
            let mut true_vars: Vec<Var> =
                sets.iter().zip(picks).flat_map(|(set, w)| set.witnesses[&w].iter().copied()).collect();
            true_vars.sort_unstable();
            Branch::Sat(true_vars)
        }
    }
}

/// Frozen detection, propagation and decomposition at `target`, freezing at
/// threshold `freeze_at`.
fn base_pipeline(formula: &Formula, target: usize, freeze_at: usize, gate: usize) -> Result<SolveOutcome, SolveError> {
    let mut diag = Diagnostics { branches: 1, ..Default::default() };

    let start = Instant::now();
    let (frozen, _) = find_k_frozen(formula, freeze_at);
    diag.frozen_count = frozen.len();
    diag.freeze_ms = ms_since(start);

    let start = Instant::now();
    let (residual, assigned) = reduce(formula, &frozen)?;
    diag.reduce_ms = ms_since(start);

    match decompose_and_combine(&residual, &assigned, target, gate, &mut diag) {
        Branch::Failure => Ok(SolveOutcome::new(Status::Failure, target, None, diag)),
        Branch::Unsat => Ok(SolveOutcome::new(Status::Unsat, target, None, diag)),
        Branch::Sat(true_vars) => {
            let witness = Assignment::from_true_set(formula.num_vars(), &true_vars);
            finish_sat(formula, witness, target, diag)
        }
    }
}

fn finish_sat(
    formula: &Formula,
    witness: Assignment,
    target: usize,
    diag: Diagnostics,
) -> Result<SolveOutcome, SolveError> {
    match verify_assignment(formula, &witness, target) {
        Ok(true) => Ok(SolveOutcome::new(Status::Sat, target, Some(witness), diag)),
        _ => Err(SolveError::Witness),
    }
}

fn trivial(formula: &Formula, target: usize) -> Option<Result<SolveOutcome, SolveError>> {
    if target > formula.num_vars() as usize {
        return Some(Ok(SolveOutcome::new(Status::Unsat, target, None, Diagnostics::default())));
    }
    if target == 0 {
        let witness = Assignment::all_false(formula.num_vars());
        return Some(finish_sat(formula, witness, 0, Diagnostics::default()));
    }
    None
}

fn with_fallback(formula: &Formula, outcome: SolveOutcome, config: &SolverConfig) -> SolveOutcome {
    if outcome.status != Status::Failure || !config.fallback_oracle {
        return outcome;
    }
    let fallback = oracle::oracle_solve(formula, outcome.target, config.oracle_budget);
    SolveOutcome { fallback: Some(fallback), ..outcome }
}

fn gate_for(formula: &Formula, config: &SolverConfig) -> Result<usize, SolveError> {
    if !(config.gate_multiplier.is_finite() && config.gate_multiplier > 0.0) {
        return Err(SolveError::InvalidGate(config.gate_multiplier));
    }
    Ok(size_gate(formula.num_vars(), config.gate_multiplier))
}

/// Weight-`k` search on a formula whose clauses each hold a negated literal.
pub fn wsat_solve(instance: &Instance, config: &SolverConfig) -> Result<SolveOutcome, SolveError> {
    let formula = &instance.formula;
    check_negated(formula, 1)?;
    let gate = gate_for(formula, config)?;
    let k = instance.weight_target;
    if let Some(done) = trivial(formula, k) {
        return done;
    }
    let outcome = base_pipeline(formula, k, k, gate)?;
    Ok(with_fallback(formula, outcome, config))
}

/// Weight-`k` search on a formula whose clauses each hold at least `dprime`
/// negated literals.
///
/// Every `(dprime - 1)`-set `S` is tried in lexicographic order: `S` is set
/// TRUE, variables frozen on `S` are set FALSE, and the base pipeline looks
/// for `k - (dprime - 1)` further TRUE variables. The first satisfying branch
/// wins. Without one, the answer is FAILURE if any branch hit the size gate
/// and UNSAT otherwise. Targets below `dprime - 1` are settled by direct
/// enumeration.
pub fn wsat_solve_dprime(
    instance: &Instance,
    dprime: usize,
    config: &SolverConfig,
) -> Result<SolveOutcome, SolveError> {
    match dprime {
        0 => return Err(SolveError::InvalidDprime(0)),
        1 => return wsat_solve(instance, config),
        _ => {}
    }
    let formula = &instance.formula;
    check_negated(formula, dprime)?;
    let gate = gate_for(formula, config)?;
    let k = instance.weight_target;
    if let Some(done) = trivial(formula, k) {
        return done;
    }
    let n = formula.num_vars() as usize;
    let seed_size = dprime - 1;

    if k < seed_size {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let true_vars: Vec<Var> = idx.iter().map(|&i| Var::from_index(i as u32 + 1)).collect();
            let candidate = Assignment::from_true_set(formula.num_vars(), &true_vars);
            if verify_assignment(formula, &candidate, k) == Ok(true) {
                return finish_sat(formula, candidate, k, Diagnostics::default());
            }
            if !next_combination(&mut idx, n) {
                return Ok(SolveOutcome::new(Status::Unsat, k, None, Diagnostics::default()));
            }
        }
    }

    let target = k - seed_size;
    let mut total = Diagnostics::default();
    let mut gated = false;
    let mut idx: Vec<usize> = (0..seed_size).collect();
    if seed_size <= n {
        loop {
            total.branches += 1;
            let seed: Vec<Var> = idx.iter().map(|&i| Var::from_index(i as u32 + 1)).collect();
            let mut diag = Diagnostics::default();
            let mut partial = Assignment::unassigned(formula.num_vars());
            for &v in &seed {
                partial.set(v, true);
            }
            if let Conditioned::Formula(conditioned) = condition(formula, &partial) {
                let start = Instant::now();
                let frozen: Vec<Var> = frozen_on_witnesses(formula, &seed, k).into_iter().map(|w| w.var).collect();
                diag.frozen_count = frozen.len();
                diag.freeze_ms = ms_since(start);

                let start = Instant::now();
                let (residual, reduced) = reduce(&conditioned, &frozen)?;
                diag.reduce_ms = ms_since(start);
                let mut assigned = reduced;
                for &v in &seed {
                    assigned.set(v, true);
                }

                let branch = decompose_and_combine(&residual, &assigned, target, gate, &mut diag);
                total.absorb(&diag);
                match branch {
                    Branch::Sat(mut true_vars) => {
                        true_vars.extend_from_slice(&seed);
                        let witness = Assignment::from_true_set(formula.num_vars(), &true_vars);
                        return finish_sat(formula, witness, k, total);
                    }
                    Branch::Failure => gated = true,
                    Branch::Unsat => {}
                }
            }
            if !next_combination(&mut idx, n) {
                break;
            }
        }
    }
    let status = if gated { Status::Failure } else { Status::Unsat };
    Ok(with_fallback(formula, SolveOutcome::new(status, k, None, total), config))
}

/// Effective target of the miniaturized problem: `round(k ln n)`.
pub fn mini_target(k: usize, n: u32) -> usize {
    (k as f64 * f64::from(n).ln()).round() as usize
}

/// Weight-`round(k ln n)` search on a base-model formula, freezing at that
/// same threshold.
pub fn mini_wsat_solve(instance: &Instance, config: &SolverConfig) -> Result<SolveOutcome, SolveError> {
    let formula = &instance.formula;
    check_negated(formula, 1)?;
    let gate = gate_for(formula, config)?;
    let target = mini_target(instance.weight_target, formula.num_vars());
    if let Some(done) = trivial(formula, target) {
        return done;
    }
    let outcome = base_pipeline(formula, target, target, gate)?;
    Ok(with_fallback(formula, outcome, config))
}
