//! Simplifying a formula under a partial assignment.
//!
//! [`condition`] applies an arbitrary partial assignment without propagation.
//! [`reduce`] assigns a set of variables FALSE and then runs unit propagation
//! to a fixpoint. On formulas where every clause keeps a negated literal, the
//! only units that can appear are negated ones, so propagation only ever
//! assigns FALSE.

use thiserror::Error;

use crate::cnf::{Assignment, Clause, Formula, Lit, Var};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Conditioned {
    Formula(Formula),
    /// Some clause had all of its literals falsified.
    Conflict,
}

impl Conditioned {
    pub fn is_conflict(&self) -> bool {
        matches!(self, Conditioned::Conflict)
    }

    pub fn formula(self) -> Option<Formula> {
        match self {
            Conditioned::Formula(f) => Some(f),
            Conditioned::Conflict => None,
        }
    }
}

pub fn condition(formula: &Formula, partial: &Assignment) -> Conditioned {
    let mut clauses = Vec::with_capacity(formula.len());
    'clauses: for clause in formula.clauses() {
        let mut rest = Vec::with_capacity(clause.len());
        for &lit in clause.lits() {
            match partial.get(lit.var) {
                Some(value) if lit.satisfied_by(value) => continue 'clauses,
                Some(_) => {}
                None => rest.push(lit),
            }
        }
        if rest.is_empty() {
            return Conditioned::Conflict;
        }
        clauses.push(Clause::from_sorted(rest));
    }
    Conditioned::Formula(Formula::from_clauses_unchecked(formula.num_vars(), clauses))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReduceError {
    /// Propagation falsified a clause; cannot happen when every clause holds
    /// a negated literal.
    #[error("clause {clause} became empty during propagation")]
    EmptyClause { clause: usize },
    /// A clause reduced to a single positive literal.
    #[error("clause {clause} forces {var} to TRUE; every clause must contain a negated literal")]
    ForcedTrue { clause: usize, var: Var },
}

/// Assigns every variable in `falsified` to FALSE and propagates negated
/// unit clauses (including ones present in the input) to a fixpoint.
///
/// Returns the residual formula over the still-unassigned variables and the
/// partial assignment that was produced. The assignment never contains TRUE.
pub fn reduce(formula: &Formula, falsified: &[Var]) -> Result<(Formula, Assignment), ReduceError> {
    let n = formula.num_vars();
    let clauses = formula.clauses();
    let mut values: Vec<Option<bool>> = vec![None; n as usize];
    let mut satisfied = vec![false; clauses.len()];
    let mut open: Vec<usize> = clauses.iter().map(Clause::len).collect();

    let mut occurrences: Vec<Vec<(usize, bool)>> = vec![Vec::new(); n as usize];
    for (ci, clause) in clauses.iter().enumerate() {
        for lit in clause.lits() {
            occurrences[lit.var.offset()].push((ci, lit.negated));
        }
    }

    let mut queue: Vec<Var> = Vec::new();
    for &v in falsified {
        if values[v.offset()].is_none() {
            values[v.offset()] = Some(false);
            queue.push(v);
        }
    }
    for (ci, clause) in clauses.iter().enumerate() {
        match clause.lits() {
            [] => return Err(ReduceError::EmptyClause { clause: ci }),
            [lit] if values[lit.var.offset()].is_none() => {
                if !lit.negated {
                    return Err(ReduceError::ForcedTrue { clause: ci, var: lit.var });
                }
                values[lit.var.offset()] = Some(false);
                queue.push(lit.var);
            }
            _ => {}
        }
    }

    while let Some(var) = queue.pop() {
        for &(ci, negated) in &occurrences[var.offset()] {
            if satisfied[ci] {
                continue;
            }
            if negated {
                satisfied[ci] = true;
                continue;
            }
            open[ci] -= 1;
            match open[ci] {
                0 => return Err(ReduceError::EmptyClause { clause: ci }),
                1 => {
                    let lits = clauses[ci].lits();
                    let Some(unit) = lits.iter().find(|l| values[l.var.offset()].is_none()).copied() else {
                        // The last literal belongs to a variable still in the queue.
                        if lits.iter().any(|l| l.negated && values[l.var.offset()] == Some(false)) {
                            satisfied[ci] = true;
                        }
                        continue;
                    };
                    if !unit.negated {
                        return Err(ReduceError::ForcedTrue { clause: ci, var: unit.var });
                    }
                    values[unit.var.offset()] = Some(false);
                    queue.push(unit.var);
                }
                _ => {}
            }
        }
    }

    let residual = clauses
        .iter()
        .zip(&satisfied)
        .filter(|(_, &s)| !s)
        .map(|(c, _)| {
            let lits: Vec<Lit> = c.lits().iter().copied().filter(|l| values[l.var.offset()].is_none()).collect();
            Clause::from_sorted(lits)
        })
        .collect();
    Ok((Formula::from_clauses_unchecked(n, residual), Assignment::from_values(values)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::test_util::{formula, vars};

    fn v(i: u32) -> Var {
        Var::from_index(i)
    }

    #[test]
    fn condition_examples() {
        let f = formula(2, &[&[-1, 2]]);
        let mut a = Assignment::unassigned(2);
        a.set(v(1), true);
        assert_eq!(condition(&f, &a), Conditioned::Formula(formula(2, &[&[2]])));

        let mut a = Assignment::unassigned(2);
        a.set(v(1), false);
        assert_eq!(condition(&f, &a), Conditioned::Formula(formula(2, &[])));

        let f = formula(1, &[&[-1]]);
        let mut a = Assignment::unassigned(1);
        a.set(v(1), true);
        assert_eq!(condition(&f, &a), Conditioned::Conflict);
    }

    #[test]
    fn condition_does_not_propagate() {
        let f = formula(3, &[&[-1, 2], &[-2, 3]]);
        let mut a = Assignment::unassigned(3);
        a.set(v(3), false);
        assert_eq!(condition(&f, &a), Conditioned::Formula(formula(3, &[&[-1, 2], &[-2]])));
    }

    #[test]
    fn reduce_forced_chain() {
        let f = formula(2, &[&[-1, 2]]);
        let (residual, assignment) = reduce(&f, &vars(&[2])).unwrap();
        assert!(residual.is_empty());
        assert_eq!(assignment.get(v(1)), Some(false));
        assert_eq!(assignment.get(v(2)), Some(false));
    }

    #[test]
    fn reduce_noop() {
        let f = formula(2, &[&[-1, 2]]);
        let (residual, assignment) = reduce(&f, &[]).unwrap();
        assert_eq!(residual, f);
        assert_eq!(assignment.assigned_count(), 0);
    }

    #[test]
    fn reduce_long_chain() {
        // x4 false forces x3, then x2, then x1
        let f = formula(5, &[&[-1, 2], &[-2, 3], &[-3, 4], &[-5, 1, 2]]);
        let (residual, assignment) = reduce(&f, &vars(&[4])).unwrap();
        assert_eq!(assignment.true_vars(), vec![]);
        assert_eq!(assignment.assigned_count(), 5);
        assert!(residual.is_empty());
    }

    #[test]
    fn reduce_propagates_input_units() {
        let f = formula(3, &[&[-1], &[-2, 1], &[-3, 2, 1]]);
        let (residual, assignment) = reduce(&f, &[]).unwrap();
        assert!(residual.is_empty());
        assert_eq!(assignment.assigned_count(), 3);
    }

    #[test]
    fn reduce_reports_positive_units() {
        let f = formula(2, &[&[1, 2]]);
        assert_eq!(reduce(&f, &vars(&[1])), Err(ReduceError::ForcedTrue { clause: 0, var: v(2) }));
    }

    #[test]
    fn reduce_handles_pending_negated_literal() {
        let f = formula(3, &[&[-1, 2, 3]]);
        let (residual, assignment) = reduce(&f, &vars(&[1, 2, 3])).unwrap();
        assert!(residual.is_empty());
        assert_eq!(assignment.assigned_count(), 3);
        let (residual, _) = reduce(&f, &vars(&[3, 2, 1])).unwrap();
        assert!(residual.is_empty());
    }

    #[test]
    fn reduce_shortens_clauses() {
        let f = formula(4, &[&[-1, 2, 3], &[-4, 1]]);
        let (residual, assignment) = reduce(&f, &vars(&[3])).unwrap();
        assert_eq!(residual, formula(4, &[&[-1, 2], &[-4, 1]]));
        assert_eq!(assignment.assigned_count(), 1);
    }
}
