//! Independent reference implementations shared by the integration tests.
//! Everything here works on raw bitmasks and never calls the solver.

#![allow(dead_code)]

use std::collections::BTreeSet;

use wsat_core::{Clause, Formula, RandomModelParams, Var};

/// (positive mask, negated mask) per clause; bit i is variable i+1.
pub fn clause_masks(formula: &Formula) -> Vec<(u64, u64)> {
    assert!(formula.num_vars() <= 63);
    formula
        .clauses()
        .iter()
        .map(|c| {
            let mut pos = 0u64;
            let mut neg = 0u64;
            for l in c.lits() {
                let bit = 1u64 << (l.var.index() - 1);
                if l.negated {
                    neg |= bit;
                } else {
                    pos |= bit;
                }
            }
            (pos, neg)
        })
        .collect()
}

pub fn satisfies(masks: &[(u64, u64)], assign: u64) -> bool {
    masks.iter().all(|&(pos, neg)| assign & pos != 0 || !assign & neg != 0)
}

/// Every weight of a satisfying total assignment.
pub fn brute_weights(formula: &Formula) -> BTreeSet<usize> {
    let n = formula.num_vars();
    assert!(n <= 24, "brute force over 2^{n} is too slow");
    let masks = clause_masks(formula);
    (0u64..1 << n).filter(|&a| satisfies(&masks, a)).map(|a| a.count_ones() as usize).collect()
}

pub fn brute_sat(formula: &Formula, k: usize) -> bool {
    let n = formula.num_vars();
    let masks = clause_masks(formula);
    (0u64..1 << n).any(|a| a.count_ones() as usize == k && satisfies(&masks, a))
}

/// Satisfying assignments of weight `k` as bitmasks.
pub fn brute_solutions(formula: &Formula, k: usize) -> Vec<u64> {
    let n = formula.num_vars();
    let masks = clause_masks(formula);
    (0u64..1 << n).filter(|&a| a.count_ones() as usize == k && satisfies(&masks, a)).collect()
}

pub fn bit(v: Var) -> u64 {
    1 << (v.index() - 1)
}

pub fn clause(lits: &[i64]) -> Clause {
    Clause::from_dimacs(lits).unwrap()
}

pub fn formula(n: u32, clauses: &[&[i64]]) -> Formula {
    Formula::new(n, clauses.iter().map(|c| clause(c)).collect()).unwrap()
}

pub fn vars(indices: &[u32]) -> Vec<Var> {
    indices.iter().map(|&i| Var::new(i).unwrap()).collect()
}

pub fn params_c(n: u32, d: u32, dprime: u32, k: usize, c: f64, seed: u64) -> RandomModelParams {
    RandomModelParams::with_c(n, d, dprime, k, c, seed)
}

pub fn params_p(n: u32, d: u32, dprime: u32, k: usize, p: f64, seed: u64) -> RandomModelParams {
    RandomModelParams::with_p(n, d, dprime, k, p, seed)
}

/// C(n, r) in floating point, for expected values.
pub fn binom_f(n: u64, r: u64) -> f64 {
    (0..r).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}
