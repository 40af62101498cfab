//! DIMACS CNF reading and writing, with instance metadata in comments.
//!
//! Leading comment lines of the form `c key=value` carry the weight target
//! and, for generated instances, the model parameters:
//!
//! ```text
//! c model=wdsat-v1
//! c n=100
//! c d=2
//! c dprime=1
//! c k=3
//! c c=1
//! c p=0.04605170185988091
//! c seed=42
//! p cnf 100 221
//! -1 7 0
//! ...
//! ```
//!
//! Of `c` and `p`, whichever appears first is the authoritative rate and the
//! other is informational. Unknown keys and free-form comments are ignored.

use std::fmt::Write as _;

use thiserror::Error;

use crate::cnf::{Clause, Formula, FormulaError, Instance};
use crate::randgen::{EdgeRate, RandomModelParams, MODEL_TAG};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("line {line}: malformed header, expected `p cnf <n> <m>`")]
    Header { line: usize },
    #[error("missing `p cnf` header")]
    MissingHeader,
    #[error("line {line}: `{token}` is not an integer")]
    Token { line: usize, token: String },
    #[error("line {line}: literal {lit} is outside [-{n}, {n}]")]
    LiteralRange { line: usize, lit: i64, n: u32 },
    #[error("line {line}: variable {var} occurs twice in one clause")]
    DuplicateVariable { line: usize, var: u32 },
    #[error("last clause is not terminated by 0")]
    Unterminated,
    #[error("header declares {declared} clauses but {found} were read")]
    ClauseCount { declared: usize, found: usize },
    #[error("line {line}: bad value for `{key}`: {value}")]
    Comment { line: usize, key: String, value: String },
    #[error("clause {index} has arity {arity}, expected {d}")]
    Arity { index: usize, arity: usize, d: u32 },
    #[error("clause {index} has {negated} negated literals, fewer than {dprime}")]
    NegatedCount { index: usize, negated: usize, dprime: u32 },
    #[error("no weight target: pass one explicitly or add a `c k=` comment")]
    MissingWeightTarget,
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

#[derive(Debug, Clone, Default)]
pub struct ParseOptions {
    /// Takes precedence over a `c k=` comment.
    pub weight_target: Option<usize>,
    /// Check every clause against the declared `d` and `dprime`.
    pub strict: bool,
}

#[derive(Debug, Default)]
struct Metadata {
    model: Option<String>,
    k: Option<usize>,
    n: Option<u32>,
    d: Option<u32>,
    dprime: Option<u32>,
    p: Option<f64>,
    c: Option<f64>,
    rate: Option<EdgeRate>,
    seed: Option<u64>,
}

impl Metadata {
    fn record(&mut self, line: usize, key: &str, value: &str) -> Result<(), ParseError> {
        fn num<T: std::str::FromStr>(line: usize, key: &str, value: &str) -> Result<Option<T>, ParseError> {
            value.parse().map(Some).map_err(|_| ParseError::Comment {
                line,
                key: key.to_string(),
                value: value.to_string(),
            })
        }
        match key {
            "model" => self.model = Some(value.to_string()),
            "k" => self.k = num(line, key, value)?,
            "n" => self.n = num(line, key, value)?,
            "d" => self.d = num(line, key, value)?,
            "dprime" => self.dprime = num(line, key, value)?,
            "seed" => self.seed = num(line, key, value)?,
            "p" => {
                self.p = num(line, key, value)?;
                self.rate.get_or_insert(EdgeRate::P(self.p.unwrap()));
            }
            "c" => {
                self.c = num(line, key, value)?;
                self.rate.get_or_insert(EdgeRate::C(self.c.unwrap()));
            }
            _ => {}
        }
        Ok(())
    }

    fn params(&self, n: u32) -> Option<RandomModelParams> {
        if self.model.as_deref() != Some(MODEL_TAG) {
            return None;
        }
        Some(RandomModelParams {
            n: self.n.unwrap_or(n),
            d: self.d?,
            dprime: self.dprime?,
            k: self.k?,
            rate: self.rate?,
            seed: self.seed?,
        })
    }
}

pub fn parse_dimacs(text: &str, options: &ParseOptions) -> Result<Instance, ParseError> {
    let mut meta = Metadata::default();
    let mut header: Option<(u32, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<i64> = Vec::new();
    let mut current_line = 0;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('c') {
            if rest.is_empty() || rest.starts_with(char::is_whitespace) {
                if let Some((key, value)) = rest.trim().split_once('=') {
                    meta.record(line_no, key.trim(), value.trim())?;
                }
                continue;
            }
        }
        if line.starts_with('p') {
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parsed = match fields.as_slice() {
                ["p", "cnf", n, m] => n.parse().ok().zip(m.parse().ok()),
                _ => None,
            };
            if header.is_some() || parsed.is_none() {
                return Err(ParseError::Header { line: line_no });
            }
            header = parsed;
            continue;
        }
        let Some((n, _)) = header else {
            return Err(ParseError::MissingHeader);
        };
        for token in line.split_whitespace() {
            let lit: i64 = token.parse().map_err(|_| ParseError::Token { line: line_no, token: token.to_string() })?;
            if current.is_empty() {
                current_line = line_no;
            }
            if lit == 0 {
                let clause = Clause::from_dimacs(&current).map_err(|e| match e {
                    FormulaError::DuplicateVariable(var) => ParseError::DuplicateVariable { line: current_line, var },
                    other => other.into(),
                })?;
                clauses.push(clause);
                current.clear();
                continue;
            }
            if lit.unsigned_abs() > u64::from(n) {
                return Err(ParseError::LiteralRange { line: line_no, lit, n });
            }
            current.push(lit);
        }
    }

    let (n, m) = header.ok_or(ParseError::MissingHeader)?;
    if !current.is_empty() {
        return Err(ParseError::Unterminated);
    }
    if clauses.len() != m {
        return Err(ParseError::ClauseCount { declared: m, found: clauses.len() });
    }
    if options.strict {
        for (index, clause) in clauses.iter().enumerate() {
            if let Some(d) = meta.d {
                if clause.len() != d as usize {
                    return Err(ParseError::Arity { index, arity: clause.len(), d });
                }
            }
            if let Some(dprime) = meta.dprime {
                if clause.negated_count() < dprime as usize {
                    return Err(ParseError::NegatedCount { index, negated: clause.negated_count(), dprime });
                }
            }
        }
    }

    let k = options.weight_target.or(meta.k).ok_or(ParseError::MissingWeightTarget)?;
    let formula = Formula::new(n, clauses)?;
    let mut instance = Instance::new(formula, k)?;
    instance.params = meta.params(n);
    Ok(instance)
}

pub fn serialize_dimacs(instance: &Instance) -> String {
    let formula = &instance.formula;
    let mut out = String::new();
    match &instance.params {
        Some(params) => {
            let _ = writeln!(out, "c model={MODEL_TAG}");
            let _ = writeln!(out, "c n={}", params.n);
            let _ = writeln!(out, "c d={}", params.d);
            let _ = writeln!(out, "c dprime={}", params.dprime);
            let _ = writeln!(out, "c k={}", instance.weight_target);
            match params.rate {
                EdgeRate::C(c) => {
                    let _ = writeln!(out, "c c={c}");
                    let _ = writeln!(out, "c p={}", params.p());
                }
                EdgeRate::P(p) => {
                    let _ = writeln!(out, "c p={p}");
                    let _ = writeln!(out, "c c={}", params.c());
                }
            }
            let _ = writeln!(out, "c seed={}", params.seed);
        }
        None => {
            let _ = writeln!(out, "c k={}", instance.weight_target);
        }
    }
    let _ = writeln!(out, "p cnf {} {}", formula.num_vars(), formula.len());
    for clause in formula.clauses() {
        for lit in clause.lits() {
            let _ = write!(out, "{} ", lit.to_dimacs());
        }
        out.push_str("0\n");
    }
    out
}
