//! Detection of variables that cannot be TRUE in any weight-`k` solution.
//!
//! A variable `x` is frozen when the formula holds clauses
//! `¬x ∨ y_i1 ∨ … ∨ y_ij` for `k` pairwise-disjoint positive bodies `Y_i`:
//! setting `x` TRUE would force one TRUE inside every body, so at least
//! `k + 1` variables overall. The on-`S` variant asks for clauses whose
//! negated part is exactly `S ∪ {x}`; once `S` is TRUE, `x` TRUE again forces
//! `k` more TRUEs.
//!
//! Bodies are packed greedily in ascending lexicographic order. This is exact
//! when every body is a single variable (d = 2) and sound but possibly
//! incomplete otherwise.

use serde::Serialize;

use crate::cnf::{Formula, Var};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FrozenWitness {
    pub var: Var,
    /// Pairwise-disjoint positive parts of clauses whose negated part is
    /// exactly `S ∪ {var}`.
    pub bodies: Vec<Vec<Var>>,
}

/// Witnesses for every variable outside `on` that is `k`-frozen on `on`.
///
/// `on` must be sorted. With `on` empty this is plain `k`-frozen detection.
pub fn frozen_on_witnesses(formula: &Formula, on: &[Var], k: usize) -> Vec<FrozenWitness> {
    debug_assert!(on.windows(2).all(|w| w[0] < w[1]));
    if k == 0 {
        // No body is needed: any TRUE variable outside `on` already overshoots.
        return formula
            .vars()
            .filter(|v| on.binary_search(v).is_err())
            .map(|var| FrozenWitness { var, bodies: Vec::new() })
            .collect();
    }

    // (x, clause) pairs whose clause has negated part exactly `on ∪ {x}`
    let clauses = formula.clauses();
    let mut candidates: Vec<(Var, usize)> = Vec::new();
    for (ci, clause) in clauses.iter().enumerate() {
        if clause.negated_count() != on.len() + 1 || clause.negated_count() == clause.len() {
            continue;
        }
        let mut extra = None;
        let mut matched = 0;
        for v in clause.negated_vars() {
            if on.binary_search(&v).is_ok() {
                matched += 1;
            } else {
                extra = Some(v);
            }
        }
        if let (Some(x), true) = (extra, matched == on.len()) {
            candidates.push((x, ci));
        }
    }
    candidates.sort_unstable_by(|a, b| {
        a.0.cmp(&b.0).then_with(|| clauses[a.1].positive_vars().cmp(clauses[b.1].positive_vars()))
    });

    // used[v] == x marks v as taken by a body already chosen for x
    let mut used: Vec<Option<Var>> = vec![None; formula.num_vars() as usize];
    let mut witnesses = Vec::new();
    for group in candidates.chunk_by(|a, b| a.0 == b.0) {
        let var = group[0].0;
        if group.len() < k {
            continue;
        }
        let mut chosen: Vec<Vec<Var>> = Vec::with_capacity(k);
        for &(_, ci) in group {
            let body = &clauses[ci];
            if body.positive_vars().any(|v| used[v.offset()] == Some(var)) {
                continue;
            }
            for v in body.positive_vars() {
                used[v.offset()] = Some(var);
            }
            chosen.push(body.positive_vars().collect());
            if chosen.len() == k {
                break;
            }
        }
        if chosen.len() == k {
            witnesses.push(FrozenWitness { var, bodies: chosen });
        }
    }
    witnesses
}

/// Variables that are `k`-frozen, with a witness for each.
pub fn find_k_frozen(formula: &Formula, k: usize) -> (Vec<Var>, Vec<FrozenWitness>) {
    let witnesses = frozen_on_witnesses(formula, &[], k);
    (witnesses.iter().map(|w| w.var).collect(), witnesses)
}

/// Variables frozen on the `(d' - 1)`-set `on`.
pub fn find_frozen_on(formula: &Formula, on: &[Var], k: usize) -> Vec<Var> {
    let mut on = on.to_vec();
    on.sort_unstable();
    on.dedup();
    frozen_on_witnesses(formula, &on, k).into_iter().map(|w| w.var).collect()
}
