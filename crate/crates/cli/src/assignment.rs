//! Reading claimed assignments.
//!
//! The file holds DIMACS-style literals separated by whitespace. Lines
//! starting with `c` or `s` are skipped, a leading `v` on a line is ignored
//! and `0` tokens are separators. A positive literal sets its variable TRUE,
//! a negative one FALSE. If the file has no negative literal it is read as a
//! TRUE-set and every other variable is FALSE; otherwise it must cover every
//! variable.

use anyhow::{bail, Context, Result};
use wsat_core::{Assignment, Lit};

pub fn parse_assignment(text: &str, n: u32) -> Result<Assignment> {
    let mut lits = Vec::new();
    for (number, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.starts_with('c') || line.starts_with('s') {
            continue;
        }
        let body = line.strip_prefix('v').unwrap_or(line);
        for token in body.split_whitespace() {
            let value: i64 = token.parse().with_context(|| format!("line {}: bad literal {token:?}", number + 1))?;
            if value == 0 {
                continue;
            }
            if value.unsigned_abs() > u64::from(n) {
                bail!("line {}: literal {value} outside 1..={n}", number + 1);
            }
            lits.push(Lit::from_dimacs(value)?);
        }
    }

    let explicit = lits.iter().any(|l| l.negated);
    let mut assignment = if explicit { Assignment::unassigned(n) } else { Assignment::all_false(n) };
    for lit in &lits {
        if explicit && assignment.get(lit.var).is_some_and(|v| v == lit.negated) {
            bail!("{} is given both polarities", lit.var);
        }
        assignment.set(lit.var, !lit.negated);
    }
    Ok(assignment)
}
