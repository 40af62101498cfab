//! Weighted d-CNF satisfiability on random instances.
//!
//! * [`cnf`], [`dimacs`], [`graph`], [`reduce`]: formulas, I/O, residual
//!   graphs and propagation.
//! * [`randgen`]: the seeded random instance model.
//! * [`solver`]: the fixed-parameter pipeline and its variants.
//! * [`oracle`]: exhaustive ground truth for small instances.
//! * [`harness`]: experiment grids and CSV output.

pub mod cnf;
pub mod dimacs;
pub mod graph;
pub mod harness;
pub mod oracle;
pub mod randgen;
pub mod reduce;
pub mod solver;

pub use cnf::{verify_assignment, Assignment, Clause, Formula, FormulaError, Instance, Lit, Var, VerifyError};
pub use dimacs::{parse_dimacs, serialize_dimacs, ParseError, ParseOptions};
pub use graph::{connected_components, induced_formula, residual_graph, ResidualGraph};
pub use oracle::{oracle_solve, oracle_weight_set, OracleError, OracleResult, OracleStatus};
pub use randgen::{generate, EdgeRate, ParamError, RandomModelParams};
pub use reduce::{condition, reduce, Conditioned, ReduceError};
pub use solver::{
    dp_combine, mini_wsat_solve, size_gate, wsat_solve, wsat_solve_dprime, Diagnostics, SolveError, SolveOutcome,
    SolverConfig, Status,
};
