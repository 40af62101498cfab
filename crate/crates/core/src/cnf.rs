//! Variables, literals, clauses, formulas and (partial) assignments.
//!
//! Variables are 1-based as in DIMACS. Clauses are kept in canonical form,
//! sorted by variable index, so two clauses over the same literals compare
//! equal regardless of the order they were written in.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::randgen::RandomModelParams;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("variable index 0 is not a valid variable")]
    ZeroVariable,
    #[error("variable {var} exceeds the declared variable count {n}")]
    VariableOutOfRange { var: u32, n: u32 },
    #[error("variable {0} occurs more than once in a clause")]
    DuplicateVariable(u32),
    #[error("weight target {k} exceeds the variable count {n}")]
    WeightTargetOutOfRange { k: usize, n: u32 },
}

/// A Boolean variable, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Var(u32);

impl Var {
    pub fn new(index: u32) -> Result<Var, FormulaError> {
        if index == 0 {
            return Err(FormulaError::ZeroVariable);
        }
        Ok(Var(index))
    }

    /// # Panics
    ///
    /// If `index == 0`.
    pub fn from_index(index: u32) -> Var {
        assert!(index > 0, "variables are 1-based");
        Var(index)
    }

    pub fn index(self) -> u32 {
        self.0
    }

    /// Zero-based position, handy for indexing dense vectors.
    pub fn offset(self) -> usize {
        (self.0 - 1) as usize
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Lit {
    pub var: Var,
    pub negated: bool,
}

impl Lit {
    pub fn pos(var: Var) -> Lit {
        Lit { var, negated: false }
    }

    pub fn neg(var: Var) -> Lit {
        Lit { var, negated: true }
    }

    pub fn from_dimacs(value: i64) -> Result<Lit, FormulaError> {
        let index = u32::try_from(value.unsigned_abs())
            .map_err(|_| FormulaError::VariableOutOfRange { var: u32::MAX, n: u32::MAX })?;
        Ok(Lit { var: Var::new(index)?, negated: value < 0 })
    }

    pub fn to_dimacs(self) -> i64 {
        let v = i64::from(self.var.0);
        if self.negated {
            -v
        } else {
            v
        }
    }

    /// Whether this literal is true under the given value of its variable.
    pub fn satisfied_by(self, value: bool) -> bool {
        value != self.negated
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "¬{}", self.var)
        } else {
            write!(f, "{}", self.var)
        }
    }
}

/// A disjunction of literals over distinct variables, sorted by variable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Clause {
    lits: Vec<Lit>,
}

impl Clause {
    pub fn new(mut lits: Vec<Lit>) -> Result<Clause, FormulaError> {
        lits.sort_unstable_by_key(|l| l.var);
        if let Some(w) = lits.windows(2).find(|w| w[0].var == w[1].var) {
            return Err(FormulaError::DuplicateVariable(w[0].var.0));
        }
        Ok(Clause { lits })
    }

    pub fn from_dimacs(values: &[i64]) -> Result<Clause, FormulaError> {
        let lits = values.iter().map(|&v| Lit::from_dimacs(v)).collect::<Result<Vec<_>, _>>()?;
        Clause::new(lits)
    }

    /// Builds a clause from literals already known to be canonical.
    pub(crate) fn from_sorted(lits: Vec<Lit>) -> Clause {
        debug_assert!(lits.windows(2).all(|w| w[0].var < w[1].var));
        Clause { lits }
    }

    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.lits.iter().map(|l| l.var)
    }

    pub fn negated_count(&self) -> usize {
        self.lits.iter().filter(|l| l.negated).count()
    }

    pub fn negated_vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.lits.iter().filter(|l| l.negated).map(|l| l.var)
    }

    pub fn positive_vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.lits.iter().filter(|l| !l.negated).map(|l| l.var)
    }

    pub fn contains_var(&self, var: Var) -> bool {
        self.lits.binary_search_by_key(&var, |l| l.var).is_ok()
    }

    pub fn max_var(&self) -> Option<Var> {
        self.lits.last().map(|l| l.var)
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lits.is_empty() {
            return write!(f, "⊥");
        }
        for (i, lit) in self.lits.iter().enumerate() {
            if i > 0 {
                write!(f, " ∨ ")?;
            }
            write!(f, "{lit}")?;
        }
        Ok(())
    }
}

/// A conjunction of clauses over variables `1..=n`.
///
/// Structurally identical clauses are collapsed on construction; the first
/// occurrence keeps its position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Formula {
    n: u32,
    clauses: Vec<Clause>,
}

impl Formula {
    pub fn new(n: u32, clauses: Vec<Clause>) -> Result<Formula, FormulaError> {
        for clause in &clauses {
            if let Some(v) = clause.max_var() {
                if v.0 > n {
                    return Err(FormulaError::VariableOutOfRange { var: v.0, n });
                }
            }
        }
        Ok(Formula::from_clauses_unchecked(n, clauses))
    }

    pub fn empty(n: u32) -> Formula {
        Formula { n, clauses: Vec::new() }
    }

    pub(crate) fn from_clauses_unchecked(n: u32, clauses: Vec<Clause>) -> Formula {
        let keep: Vec<bool> = {
            let mut seen = HashSet::with_capacity(clauses.len());
            clauses.iter().map(|c| seen.insert(c)).collect()
        };
        if keep.iter().all(|&k| k) {
            return Formula { n, clauses };
        }
        let clauses = clauses.into_iter().zip(keep).filter(|(_, k)| *k).map(|(c, _)| c).collect();
        Formula { n, clauses }
    }

    /// For clause lists that are duplicate-free by construction.
    pub(crate) fn from_distinct_clauses(n: u32, clauses: Vec<Clause>) -> Formula {
        Formula { n, clauses }
    }

    pub fn num_vars(&self) -> u32 {
        self.n
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> {
        (1..=self.n).map(Var)
    }

    /// Whether every clause carries at least `min` negated literals.
    pub fn min_negated_at_least(&self, min: usize) -> bool {
        self.clauses.iter().all(|c| c.negated_count() >= min)
    }

    /// `true` for each variable that occurs in some clause, indexed by offset.
    pub fn occurrence_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.n as usize];
        for v in self.clauses.iter().flat_map(Clause::vars) {
            mask[v.offset()] = true;
        }
        mask
    }
}

/// A partial or total map from variables to truth values.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    values: Vec<Option<bool>>,
}

impl Assignment {
    /// The empty partial assignment over `n` variables.
    pub fn unassigned(n: u32) -> Assignment {
        Assignment { values: vec![None; n as usize] }
    }

    pub fn all_false(n: u32) -> Assignment {
        Assignment { values: vec![Some(false); n as usize] }
    }

    /// Total assignment with exactly `true_vars` set to TRUE.
    pub fn from_true_set(n: u32, true_vars: &[Var]) -> Assignment {
        let mut a = Assignment::all_false(n);
        for &v in true_vars {
            a.set(v, true);
        }
        a
    }

    pub fn num_vars(&self) -> u32 {
        self.values.len() as u32
    }

    pub fn get(&self, var: Var) -> Option<bool> {
        self.values.get(var.offset()).copied().flatten()
    }

    pub fn set(&mut self, var: Var, value: bool) {
        self.values[var.offset()] = Some(value);
    }

    pub fn is_assigned(&self, var: Var) -> bool {
        self.get(var).is_some()
    }

    pub fn is_total(&self) -> bool {
        self.values.iter().all(Option::is_some)
    }

    /// Number of variables set to TRUE.
    pub fn weight(&self) -> usize {
        self.values.iter().filter(|v| **v == Some(true)).count()
    }

    pub fn assigned_count(&self) -> usize {
        self.values.iter().filter(|v| v.is_some()).count()
    }

    pub fn true_vars(&self) -> Vec<Var> {
        self.iter().filter(|&(_, b)| b).map(|(v, _)| v).collect()
    }

    /// Assigned variables in ascending order with their values.
    pub fn iter(&self) -> impl Iterator<Item = (Var, bool)> + '_ {
        self.values.iter().enumerate().filter_map(|(i, v)| v.map(|b| (Var(i as u32 + 1), b)))
    }

    pub fn values(&self) -> &[Option<bool>] {
        &self.values
    }

    pub(crate) fn from_values(values: Vec<Option<bool>>) -> Assignment {
        Assignment { values }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("assignment leaves variable {0} unassigned")]
    Partial(Var),
    #[error("assignment covers {got} variables but the formula has {expected}")]
    SizeMismatch { expected: u32, got: u32 },
}

/// Checks that `assignment` satisfies every clause and has weight exactly `k`.
///
/// A partial assignment is an error, not a `false` answer.
pub fn verify_assignment(formula: &Formula, assignment: &Assignment, k: usize) -> Result<bool, VerifyError> {
    if assignment.num_vars() != formula.num_vars() {
        return Err(VerifyError::SizeMismatch { expected: formula.num_vars(), got: assignment.num_vars() });
    }
    if let Some(i) = assignment.values.iter().position(Option::is_none) {
        return Err(VerifyError::Partial(Var(i as u32 + 1)));
    }
    if assignment.weight() != k {
        return Ok(false);
    }
    let sat = formula
        .clauses
        .iter()
        .all(|c| c.lits().iter().any(|l| l.satisfied_by(assignment.values[l.var.offset()] == Some(true))));
    Ok(sat)
}

/// A formula together with the weight it is queried at.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub formula: Formula,
    pub weight_target: usize,
    pub params: Option<RandomModelParams>,
}

impl Instance {
    pub fn new(formula: Formula, weight_target: usize) -> Result<Instance, FormulaError> {
        if weight_target > formula.num_vars() as usize {
            return Err(FormulaError::WeightTargetOutOfRange { k: weight_target, n: formula.num_vars() });
        }
        Ok(Instance { formula, weight_target, params: None })
    }

    pub fn with_params(mut self, params: RandomModelParams) -> Instance {
        self.params = Some(params);
        self
    }
}
