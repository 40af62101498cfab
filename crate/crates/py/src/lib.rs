//! Python module `wsat`: formulas, instance files, the random model, the
//! solver variants and the exhaustive oracle.
//!
//! Variables cross the boundary as 1-based integers and clauses as lists of
//! DIMACS literals.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use wsat_core::harness::{run_experiment, write_csv, ExperimentConfig, Grid, Variant};
use wsat_core::oracle::DEFAULT_BUDGET;
use wsat_core::solver::find_k_frozen as core_find_k_frozen;
use wsat_core::{
    Assignment, Clause, Formula, Instance, ParseOptions, RandomModelParams, SolveOutcome, SolverConfig, Var,
};

fn value_error(err: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(err.to_string())
}

fn to_vars(n: u32, indices: &[u32]) -> PyResult<Vec<Var>> {
    indices
        .iter()
        .map(|&i| {
            if i == 0 || i > n {
                Err(PyValueError::new_err(format!("variable {i} outside 1..={n}")))
            } else {
                Ok(Var::from_index(i))
            }
        })
        .collect()
}

fn indices(vars: &[Var]) -> Vec<u32> {
    vars.iter().map(|v| v.index()).collect()
}

#[pyclass(name = "Formula", module = "wsat", frozen, skip_from_py_object)]
struct PyFormula {
    inner: Formula,
}

#[pymethods]
impl PyFormula {
    #[new]
    fn new(n: u32, clauses: Vec<Vec<i64>>) -> PyResult<Self> {
        let clauses =
            clauses.iter().map(|c| Clause::from_dimacs(c)).collect::<Result<Vec<_>, _>>().map_err(value_error)?;
        Ok(PyFormula { inner: Formula::new(n, clauses).map_err(value_error)? })
    }

    #[getter]
    fn num_vars(&self) -> u32 {
        self.inner.num_vars()
    }

    #[getter]
    fn clauses(&self) -> Vec<Vec<i64>> {
        self.inner.clauses().iter().map(|c| c.lits().iter().map(|l| l.to_dimacs()).collect()).collect()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __eq__(&self, other: PyRef<'_, PyFormula>) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Formula(n={}, clauses={})", self.inner.num_vars(), self.inner.len())
    }
}

#[pyclass(name = "Instance", module = "wsat", frozen, skip_from_py_object)]
struct PyInstance {
    inner: Instance,
}

#[pymethods]
impl PyInstance {
    #[new]
    fn new(formula: PyRef<'_, PyFormula>, k: usize) -> PyResult<Self> {
        Ok(PyInstance { inner: Instance::new(formula.inner.clone(), k).map_err(value_error)? })
    }

    /// Parses DIMACS text; `k` overrides the `c k=` comment.
    #[staticmethod]
    #[pyo3(signature = (text, k=None, strict=false))]
    fn parse(text: &str, k: Option<usize>, strict: bool) -> PyResult<Self> {
        let options = ParseOptions { weight_target: k, strict };
        Ok(PyInstance { inner: wsat_core::parse_dimacs(text, &options).map_err(value_error)? })
    }

    fn to_dimacs(&self) -> String {
        wsat_core::serialize_dimacs(&self.inner)
    }

    #[getter]
    fn formula(&self) -> PyFormula {
        PyFormula { inner: self.inner.formula.clone() }
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.weight_target
    }

    /// Generation parameters with both `p` and `c`, or None.
    #[getter]
    fn params<'py>(&self, py: Python<'py>) -> PyResult<Option<Bound<'py, PyDict>>> {
        let Some(params) = &self.inner.params else {
            return Ok(None);
        };
        let dict = PyDict::new(py);
        dict.set_item("n", params.n)?;
        dict.set_item("d", params.d)?;
        dict.set_item("dprime", params.dprime)?;
        dict.set_item("k", params.k)?;
        dict.set_item("p", params.p())?;
        dict.set_item("c", params.c())?;
        dict.set_item("seed", params.seed)?;
        Ok(Some(dict))
    }

    fn __eq__(&self, other: PyRef<'_, PyInstance>) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!(
            "Instance(n={}, clauses={}, k={})",
            self.inner.formula.num_vars(),
            self.inner.formula.len(),
            self.inner.weight_target
        )
    }
}

#[pyclass(name = "SolveOutcome", module = "wsat", frozen, skip_from_py_object)]
struct PySolveOutcome {
    #[pyo3(get)]
    status: String,
    #[pyo3(get)]
    target: usize,
    #[pyo3(get)]
    witness: Option<Vec<u32>>,
    diagnostics: wsat_core::Diagnostics,
    #[pyo3(get)]
    fallback_status: Option<String>,
}

#[pymethods]
impl PySolveOutcome {
    #[getter]
    fn diagnostics<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = &self.diagnostics;
        let dict = PyDict::new(py);
        dict.set_item("frozen_count", d.frozen_count)?;
        dict.set_item("residual_vars", d.residual_vars)?;
        dict.set_item("component_count", d.component_count)?;
        dict.set_item("isolated_count", d.isolated_count)?;
        dict.set_item("max_component_size", d.max_component_size)?;
        dict.set_item("branches", d.branches)?;
        dict.set_item("freeze_ms", d.freeze_ms)?;
        dict.set_item("reduce_ms", d.reduce_ms)?;
        dict.set_item("decompose_ms", d.decompose_ms)?;
        dict.set_item("weight_sets_ms", d.weight_sets_ms)?;
        dict.set_item("combine_ms", d.combine_ms)?;
        Ok(dict)
    }

    fn __repr__(&self) -> String {
        let witness = match &self.witness {
            Some(w) => format!("{w:?}"),
            None => "None".to_string(),
        };
        format!("SolveOutcome(status={}, target={}, witness={witness})", self.status, self.target)
    }
}

fn status_name(status: wsat_core::Status) -> String {
    match status {
        wsat_core::Status::Sat => "SAT",
        wsat_core::Status::Unsat => "UNSAT",
        wsat_core::Status::Failure => "FAILURE",
    }
    .to_string()
}

fn oracle_name(status: wsat_core::OracleStatus) -> String {
    match status {
        wsat_core::OracleStatus::Sat => "SAT",
        wsat_core::OracleStatus::Unsat => "UNSAT",
    }
    .to_string()
}

impl From<SolveOutcome> for PySolveOutcome {
    fn from(outcome: SolveOutcome) -> Self {
        PySolveOutcome {
            status: status_name(outcome.status),
            target: outcome.target,
            witness: outcome.witness.as_ref().map(|w| indices(&w.true_vars())),
            diagnostics: outcome.diagnostics,
            fallback_status: outcome.fallback.map(|f| match f {
                Ok(r) => oracle_name(r.status),
                Err(_) => "REFUSED".to_string(),
            }),
        }
    }
}

/// Samples an instance of the random model; exactly one of `p` and `c`.
#[pyfunction]
#[pyo3(signature = (n, d, k, *, dprime=1, p=None, c=None, seed=0))]
fn generate(n: u32, d: u32, k: usize, dprime: u32, p: Option<f64>, c: Option<f64>, seed: u64) -> PyResult<PyInstance> {
    let params = match (p, c) {
        (Some(p), None) => RandomModelParams::with_p(n, d, dprime, k, p, seed),
        (None, Some(c)) => RandomModelParams::with_c(n, d, dprime, k, c, seed),
        _ => return Err(PyValueError::new_err("pass exactly one of p and c")),
    };
    Ok(PyInstance { inner: wsat_core::generate(&params).map_err(value_error)? })
}

/// Runs the solver: the base pipeline, the seed-set loop when `dprime > 1`,
/// or the `round(k ln n)` variant when `mini` is set.
#[pyfunction]
#[pyo3(signature = (instance, *, dprime=1, mini=false, gate_mult=1.0, fallback_oracle=false, budget=DEFAULT_BUDGET))]
fn solve(
    py: Python<'_>,
    instance: PyRef<'_, PyInstance>,
    dprime: usize,
    mini: bool,
    gate_mult: f64,
    fallback_oracle: bool,
    budget: u64,
) -> PyResult<PySolveOutcome> {
    if mini && dprime != 1 {
        return Err(PyValueError::new_err("mini and dprime > 1 are exclusive"));
    }
    let config = SolverConfig { gate_multiplier: gate_mult, fallback_oracle, oracle_budget: budget };
    let inner = instance.inner.clone();
    let outcome = py.detach(move || {
        if mini {
            wsat_core::mini_wsat_solve(&inner, &config)
        } else {
            wsat_core::wsat_solve_dprime(&inner, dprime, &config)
        }
    });
    Ok(outcome.map_err(value_error)?.into())
}

/// Exhaustive search; returns `(status, witness, enumerated)`.
#[pyfunction]
#[pyo3(signature = (formula, k, budget=DEFAULT_BUDGET))]
fn oracle_solve(formula: PyRef<'_, PyFormula>, k: usize, budget: u64) -> PyResult<(String, Option<Vec<u32>>, u64)> {
    let r = wsat_core::oracle_solve(&formula.inner, k, budget).map_err(value_error)?;
    Ok((oracle_name(r.status), r.witness.map(|w| indices(&w.true_vars())), r.enumerated))
}

#[pyfunction]
#[pyo3(signature = (formula, kmax, budget=DEFAULT_BUDGET))]
fn oracle_weight_set(formula: PyRef<'_, PyFormula>, kmax: usize, budget: u64) -> PyResult<Vec<usize>> {
    let set = wsat_core::oracle_weight_set(&formula.inner, kmax, budget).map_err(value_error)?;
    Ok(set.into_iter().collect())
}

/// Whether setting exactly `true_vars` TRUE satisfies `formula` at weight `k`.
#[pyfunction]
fn verify(formula: PyRef<'_, PyFormula>, true_vars: Vec<u32>, k: usize) -> PyResult<bool> {
    let n = formula.inner.num_vars();
    let assignment = Assignment::from_true_set(n, &to_vars(n, &true_vars)?);
    wsat_core::verify_assignment(&formula.inner, &assignment, k).map_err(value_error)
}

/// One weight per list summing to `target`, or None.
#[pyfunction]
fn dp_combine(lists: Vec<Vec<usize>>, target: usize) -> Option<Vec<usize>> {
    wsat_core::dp_combine(&lists, target)
}

#[pyfunction]
fn find_k_frozen(formula: PyRef<'_, PyFormula>, k: usize) -> Vec<u32> {
    indices(&core_find_k_frozen(&formula.inner, k).0)
}

/// Sets `falsified` FALSE and propagates; returns the residual formula and
/// every variable that ended up FALSE.
#[pyfunction]
fn reduce(formula: PyRef<'_, PyFormula>, falsified: Vec<u32>) -> PyResult<(PyFormula, Vec<u32>)> {
    let vars = to_vars(formula.inner.num_vars(), &falsified)?;
    let (residual, partial) = wsat_core::reduce(&formula.inner, &vars).map_err(value_error)?;
    let assigned: Vec<u32> = partial.iter().map(|(v, _)| v.index()).collect();
    Ok((PyFormula { inner: residual }, assigned))
}

#[pyfunction]
fn connected_components(formula: PyRef<'_, PyFormula>) -> Vec<Vec<u32>> {
    let graph = wsat_core::residual_graph(&formula.inner);
    wsat_core::connected_components(&graph).iter().map(|c| indices(c)).collect()
}

#[pyfunction]
#[pyo3(signature = (n, multiplier=1.0))]
fn size_gate(n: u32, multiplier: f64) -> usize {
    wsat_core::size_gate(n, multiplier)
}

/// Runs an experiment grid and returns the CSV text.
#[pyfunction]
#[pyo3(signature = (n, d, k, *, dprime=vec![1], c=vec![], p=vec![], trials=100, seed=0, variant="wsat", timing=true))]
#[allow(clippy::too_many_arguments)]
fn experiment(
    py: Python<'_>,
    n: Vec<u32>,
    d: Vec<u32>,
    k: Vec<usize>,
    dprime: Vec<u32>,
    c: Vec<f64>,
    p: Vec<f64>,
    trials: usize,
    seed: u64,
    variant: &str,
    timing: bool,
) -> PyResult<String> {
    let variant = match variant {
        "wsat" => Variant::Wsat,
        "dprime" => Variant::Dprime,
        "mini" => Variant::Mini,
        other => return Err(PyValueError::new_err(format!("unknown variant {other:?}"))),
    };
    let grid = Grid { n, d, dprime, k, c, p };
    let mut config = ExperimentConfig::new(grid.cells(), trials, seed, variant);
    config.timing = timing;
    let results = py.detach(move || run_experiment(&config)).map_err(value_error)?;
    let mut out = Vec::new();
    write_csv(&results, &mut out).map_err(value_error)?;
    String::from_utf8(out).map_err(value_error)
}

#[pymodule]
fn wsat(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFormula>()?;
    m.add_class::<PyInstance>()?;
    m.add_class::<PySolveOutcome>()?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_solve, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_weight_set, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(dp_combine, m)?)?;
    m.add_function(wrap_pyfunction!(find_k_frozen, m)?)?;
    m.add_function(wrap_pyfunction!(reduce, m)?)?;
    m.add_function(wrap_pyfunction!(connected_components, m)?)?;
    m.add_function(wrap_pyfunction!(size_gate, m)?)?;
    m.add_function(wrap_pyfunction!(experiment, m)?)?;
    m.add("DEFAULT_BUDGET", DEFAULT_BUDGET)?;
    Ok(())
}
