//! Exhaustive reference solver for small instances.
//!
//! Nothing clever happens here on purpose: candidates are enumerated in a
//! fixed order and checked clause by clause. Work beyond the configured
//! budget is refused instead of attempted.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::cnf::{Assignment, Formula, Var};
use crate::randgen::binomial;

pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("enumeration needs {needed} candidates, over the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum OracleStatus {
    Sat,
    Unsat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub status: OracleStatus,
    pub witness: Option<Assignment>,
    /// Candidate TRUE-sets examined.
    pub enumerated: u64,
}

fn satisfies(formula: &Formula, values: &[bool]) -> bool {
    formula.clauses().iter().all(|c| c.lits().iter().any(|l| l.satisfied_by(values[l.var.offset()])))
}

/// First weight-`k` satisfying assignment, trying TRUE-sets of size `k` in
/// lexicographic order.
pub fn oracle_solve(formula: &Formula, k: usize, budget: u64) -> Result<OracleResult, OracleError> {
    let n = formula.num_vars() as usize;
    if k > n {
        return Ok(OracleResult { status: OracleStatus::Unsat, witness: None, enumerated: 0 });
    }
    let needed = binomial(n as u32, k as u32).unwrap_or(u128::MAX);
    if needed > u128::from(budget) {
        return Err(OracleError::BudgetExceeded { needed, budget });
    }

    let mut chosen: Vec<usize> = (0..k).collect();
    let mut values = vec![false; n];
    let mut enumerated = 0u64;
    loop {
        values.iter_mut().for_each(|v| *v = false);
        for &i in &chosen {
            values[i] = true;
        }
        enumerated += 1;
        if satisfies(formula, &values) {
            let true_vars: Vec<Var> = chosen.iter().map(|&i| Var::from_index(i as u32 + 1)).collect();
            return Ok(OracleResult {
                status: OracleStatus::Sat,
                witness: Some(Assignment::from_true_set(n as u32, &true_vars)),
                enumerated,
            });
        }
        // next k-combination of 0..n in lexicographic order
        let Some(i) = (0..k).rev().find(|&i| chosen[i] < n - k + i) else {
            break;
        };
        chosen[i] += 1;
        for j in i + 1..k {
            chosen[j] = chosen[j - 1] + 1;
        }
    }
    Ok(OracleResult { status: OracleStatus::Unsat, witness: None, enumerated })
}

/// All weights in `0..=kmax` reached by some satisfying assignment, found by
/// walking all `2^n` assignments.
pub fn oracle_weight_set(formula: &Formula, kmax: usize, budget: u64) -> Result<BTreeSet<usize>, OracleError> {
    let n = formula.num_vars();
    let needed = 1u128.checked_shl(n).unwrap_or(u128::MAX);
    if n >= 64 || needed > u128::from(budget) {
        return Err(OracleError::BudgetExceeded { needed, budget });
    }
    let mut values = vec![false; n as usize];
    let mut weights = BTreeSet::new();
    for mask in 0u64..1 << n {
        let weight = mask.count_ones() as usize;
        if weight > kmax || weights.contains(&weight) {
            continue;
        }
        for (i, v) in values.iter_mut().enumerate() {
            *v = mask >> i & 1 == 1;
        }
        if satisfies(formula, &values) {
            weights.insert(weight);
        }
    }
    Ok(weights)
}
