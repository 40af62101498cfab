//! Per-component achievable weights and the combining dynamic program.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::cnf::{Clause, Formula, Var};

/// Largest component we are willing to enumerate exhaustively.
pub const MAX_ENUMERABLE: usize = 40;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightSetError {
    #[error("component has {size} variables, above the limit of {limit}")]
    TooLarge { size: usize, limit: usize },
}

/// Advances `idx` to the next `idx.len()`-combination of `0..n` in
/// lexicographic order. Returns `false` once the last one has been passed.
pub(crate) fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
        return false;
    };
    idx[i] += 1;
    for j in i + 1..k {
        idx[j] = idx[j - 1] + 1;
    }
    true
}

/// Satisfiable weights of one component, each with a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSet {
    pub component: Vec<Var>,
    /// weight → lexicographically smallest satisfying TRUE-set of that weight
    pub witnesses: BTreeMap<usize, Vec<Var>>,
}

impl WeightSet {
    /// Achievable weights, ascending.
    pub fn achievable(&self) -> Vec<usize> {
        self.witnesses.keys().copied().collect()
    }

    pub fn contains(&self, weight: usize) -> bool {
        self.witnesses.contains_key(&weight)
    }
}

/// Enumerates assignments of `component` (sorted) against `clauses`, all of
/// whose variables must lie in the component.
pub(crate) fn weight_set_of(
    component: &[Var],
    clauses: &[&Clause],
    max_weight: usize,
) -> Result<WeightSet, WeightSetError> {
    let size = component.len();
    if size > MAX_ENUMERABLE {
        return Err(WeightSetError::TooLarge { size, limit: MAX_ENUMERABLE });
    }
    let bit = |v: Var| -> u64 {
        let i = component.binary_search(&v).expect("clause variable inside component");
        1 << i
    };
    let masks: Vec<(u64, u64)> = clauses
        .iter()
        .map(|c| {
            c.lits().iter().fold(
                (0, 0),
                |(pos, neg), l| {
                    if l.negated {
                        (pos, neg | bit(l.var))
                    } else {
                        (pos | bit(l.var), neg)
                    }
                },
            )
        })
        .collect();
    let satisfied = |assign: u64| masks.iter().all(|&(pos, neg)| assign & pos != 0 || !assign & neg != 0);

    let mut witnesses = BTreeMap::new();
    for weight in 0..=max_weight.min(size) {
        let mut idx: Vec<usize> = (0..weight).collect();
        loop {
            let assign = idx.iter().fold(0u64, |m, &i| m | 1 << i);
            if satisfied(assign) {
                witnesses.insert(weight, idx.iter().map(|&i| component[i]).collect());
                break;
            }
            if !next_combination(&mut idx, size) {
                break;
            }
        }
    }
    Ok(WeightSet { component: component.to_vec(), witnesses })
}

/// Brute-force weight set of `component` under the clauses of `formula` that
/// lie entirely inside it, capped at `max_weight`.
pub fn component_weight_sets(
    formula: &Formula,
    component: &[Var],
    max_weight: usize,
) -> Result<WeightSet, WeightSetError> {
    let mut component = component.to_vec();
    component.sort_unstable();
    component.dedup();
    let clauses: Vec<&Clause> =
        formula.clauses().iter().filter(|c| c.vars().all(|v| component.binary_search(&v).is_ok())).collect();
    weight_set_of(&component, &clauses, max_weight)
}

/// Stage-wise table of reachable sums.
///
/// `stages[t][a]` holds the weight picked from list `t` on the first path
/// found that reaches sum `a` after lists `0..=t`; every list contributes
/// exactly one value.
#[derive(Debug, Clone)]
pub struct DpTable {
    target: usize,
    stages: Vec<Vec<Option<usize>>>,
}

impl DpTable {
    pub fn build<L: AsRef<[usize]>>(lists: &[L], target: usize) -> DpTable {
        let mut reachable = vec![false; target + 1];
        reachable[0] = true;
        let mut stages = Vec::with_capacity(lists.len());
        for list in lists {
            let mut stage: Vec<Option<usize>> = vec![None; target + 1];
            for a in (0..=target).filter(|&a| reachable[a]) {
                for &b in list.as_ref() {
                    if a + b <= target && stage[a + b].is_none() {
                        stage[a + b] = Some(b);
                    }
                }
            }
            for (r, s) in reachable.iter_mut().zip(&stage) {
                *r = s.is_some();
            }
            stages.push(stage);
        }
        DpTable { target, stages }
    }

    pub fn is_achievable(&self, sum: usize) -> bool {
        match self.stages.last() {
            Some(last) => last.get(sum).is_some_and(Option::is_some),
            None => sum == 0,
        }
    }

    /// Per-list picks summing to `sum`, if reachable.
    pub fn selection(&self, sum: usize) -> Option<Vec<usize>> {
        if sum > self.target || !self.is_achievable(sum) {
            return None;
        }
        let mut picks = vec![0; self.stages.len()];
        let mut rest = sum;
        for (t, stage) in self.stages.iter().enumerate().rev() {
            let b = stage[rest].expect("back-pointer on a reachable sum");
            picks[t] = b;
            rest -= b;
        }
        debug_assert_eq!(rest, 0);
        Some(picks)
    }
}

/// One weight per list, summing to `target`, or `None` when unreachable.
pub fn dp_combine<L: AsRef<[usize]>>(lists: &[L], target: usize) -> Option<Vec<usize>> {
    DpTable::build(lists, target).selection(target)
}
