//! Python bindings. The module is importable as `chaoprop`.

use chaoprop::cli::{self, plan};
use chaoprop::consistency::{self, Goal};
use chaoprop::csp::{self, Csp, LinearForm, LinearIneq, Scheme};
use chaoprop::engine::{self, Outcome, RunConfig, StrategyKind};
use chaoprop::layout::Layout;
use chaoprop::lattice::{Atom, GridInterval};
use chaoprop::reducers;
use num::BigRational;
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

create_exception!(chaoprop, ChaopropError, PyException);

fn py_err(e: chaoprop::error::Error) -> PyErr {
    ChaopropError::new_err(e.to_string())
}

fn atom_to_py(py: Python<'_>, a: &Atom) -> PyResult<Py<PyAny>> {
    Ok(match a {
        Atom::Int(i) => i.into_pyobject(py)?.into_any().unbind(),
        Atom::Real(x) => x.into_inner().into_pyobject(py)?.into_any().unbind(),
        Atom::Sym(s) => s.into_pyobject(py)?.into_any().unbind(),
    })
}

fn outcome_name(o: Outcome) -> String {
    match o {
        Outcome::Converged => "converged".into(),
        Outcome::StepLimitExceeded => "step-limit".into(),
        Outcome::EmptyComponent(i) => format!("empty-component:{}", i + 1),
    }
}

/// Result of a reduction: the reduced CSP, how the run ended and the number
/// of function applications.
#[pyclass(name = "Reduction", frozen)]
pub struct PyReduction {
    #[pyo3(get)]
    csp: Py<PyCsp>,
    #[pyo3(get)]
    outcome: String,
    #[pyo3(get)]
    applications: usize,
    #[pyo3(get)]
    trace: Vec<String>,
}

#[pyclass(name = "Csp", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyCsp {
    pub inner: Csp,
}

pub struct Schedule<'a> {
    pub mode: &'a str,
    pub strategy: &'a str,
    pub seed: u64,
    pub max_steps: usize,
}

impl Schedule<'_> {
    fn config(&self) -> chaoprop::error::Result<(RunConfig, Box<dyn engine::Strategy>)> {
        let cfg = RunConfig { mode: self.mode.parse()?, max_steps: self.max_steps, ..RunConfig::default() };
        Ok((cfg, StrategyKind::parse(self.strategy, self.seed)?.build()))
    }
}

/// Reduction of `p` by explicit reducer names, as the command line does it.
pub fn reduce_with(p: &Csp, reducers: &[String], s: &Schedule<'_>) -> chaoprop::error::Result<(Csp, engine::RunTrace<chaoprop::lattice::Value>)> {
    let specs = reducers
        .iter()
        .flat_map(|r| r.split_whitespace())
        .map(str::parse)
        .collect::<chaoprop::error::Result<Vec<plan::ReducerSpec>>>()?;
    let (q, fs) = plan::build(p, &specs)?;
    let layout = Layout::new(&q);
    let (cfg, mut strategy) = s.config()?;
    let r = engine::run(&fs, layout.encode(&q), &cfg, strategy.as_mut())?;
    Ok((layout.decode(&q, &r.value)?, r.trace))
}

impl PyCsp {
    fn reduction(
        py: Python<'_>,
        csp: Csp,
        trace: engine::RunTrace<chaoprop::lattice::Value>,
    ) -> PyResult<PyReduction> {
        Ok(PyReduction {
            csp: Py::new(py, PyCsp { inner: csp })?,
            outcome: outcome_name(trace.outcome),
            applications: trace.applications(),
            trace: trace.steps.iter().map(|s| cli::trace_line(s, cli::fmt_value)).collect(),
        })
    }
}

#[pymethods]
impl PyCsp {
    /// Parses and validates the text format.
    #[staticmethod]
    fn from_text(src: &str) -> PyResult<Self> {
        let p = cli::parse_csp(src).map_err(py_err)?;
        let issues = p.issues();
        if !issues.is_empty() {
            let msgs: Vec<String> = issues.iter().map(ToString::to_string).collect();
            return Err(ChaopropError::new_err(msgs.join("; ")));
        }
        Ok(PyCsp { inner: p })
    }

    fn to_text(&self) -> String {
        cli::to_text(&self.inner)
    }

    fn to_json(&self) -> String {
        cli::json::csp_json(&self.inner).to_string()
    }

    #[getter]
    fn arity(&self) -> usize {
        self.inner.arity()
    }

    /// Constraint ids in order.
    #[getter]
    fn constraint_ids(&self) -> Vec<String> {
        self.inner.constraints.iter().map(|c| c.id.clone()).collect()
    }

    /// Domain `i` (1-based) in the text format.
    fn domain(&self, i: usize) -> PyResult<String> {
        let d = i
            .checked_sub(1)
            .and_then(|k| self.inner.domains.get(k))
            .ok_or_else(|| ChaopropError::new_err(format!("no domain {i}")))?;
        Ok(cli::fmt_value(d))
    }

    fn solutions(&self, py: Python<'_>) -> PyResult<Vec<Vec<Py<PyAny>>>> {
        let sols = self.inner.solutions().map_err(py_err)?;
        sols.iter().map(|t| t.iter().map(|a| atom_to_py(py, a)).collect()).collect()
    }

    fn equivalent(&self, other: &PyCsp) -> PyResult<bool> {
        self.inner.equivalent(&other.inner).map_err(py_err)
    }

    fn is_arc_consistent(&self) -> PyResult<bool> {
        consistency::is_arc_consistent(&self.inner).map_err(py_err)
    }

    fn is_relationally_m_consistent(&self, m: usize) -> PyResult<bool> {
        consistency::is_relationally_m_consistent(&self.inner, m).map_err(py_err)
    }

    /// Reduces towards `goal` (`arc`, `path`, `rel:2`, `dir-arc:1,2,3`, ...).
    #[pyo3(signature = (goal, mode = "ci", strategy = "det", seed = 0, max_steps = engine::DEFAULT_MAX_STEPS))]
    fn achieve(&self, py: Python<'_>, goal: &str, mode: &str, strategy: &str, seed: u64, max_steps: usize) -> PyResult<PyReduction> {
        let goal: Goal = goal.parse().map_err(py_err)?;
        let s = Schedule { mode, strategy, seed, max_steps };
        let (cfg, mut strat) = s.config().map_err(py_err)?;
        let r = consistency::achieve_with(&self.inner, &goal, &cfg, strat.as_mut()).map_err(py_err)?;
        Self::reduction(py, r.csp, r.trace)
    }

    /// Runs explicitly named reducers (`pi1@c1`, `lineq@c2`, `rho@c1,c2`, ...).
    #[pyo3(signature = (reducers, mode = "ci", strategy = "det", seed = 0, max_steps = engine::DEFAULT_MAX_STEPS))]
    fn run(
        &self,
        py: Python<'_>,
        reducers: Vec<String>,
        mode: &str,
        strategy: &str,
        seed: u64,
        max_steps: usize,
    ) -> PyResult<PyReduction> {
        let s = Schedule { mode, strategy, seed, max_steps };
        let (csp, trace) = reduce_with(&self.inner, &reducers, &s).map_err(py_err)?;
        Self::reduction(py, csp, trace)
    }

    fn __repr__(&self) -> String {
        format!("Csp(domains={}, constraints={})", self.inner.arity(), self.inner.constraints.len())
    }

    fn __str__(&self) -> String {
        self.to_text()
    }
}

/// Union of 1-based schemes in order of first occurrence.
#[pyfunction]
fn scheme_union(schemes: Vec<Vec<usize>>) -> PyResult<Vec<usize>> {
    let schemes = schemes.iter().map(|s| Scheme::from_one_based(s)).collect::<chaoprop::error::Result<Vec<_>>>().map_err(py_err)?;
    Ok(csp::scheme_union(&schemes).one_based())
}

/// One narrowing step for `sum coeffs[i]*x_i = rhs` over integer boxes;
/// an empty box is `None`.
#[pyfunction]
fn linear_eq_narrow(coeffs: Vec<i64>, rhs: i64, boxes: Vec<(i64, i64)>) -> PyResult<Vec<Option<(i64, i64)>>> {
    let boxes = boxes
        .iter()
        .map(|&(lo, hi)| GridInterval::integer(lo, hi))
        .collect::<chaoprop::error::Result<Vec<_>>>()
        .map_err(py_err)?;
    let out = reducers::linear_eq_narrow(&LinearForm { coeffs, rhs }, &boxes).map_err(py_err)?;
    Ok(out.iter().map(GridInterval::span).collect())
}

/// Cut from inequalities `(coefficients, rhs)` meaning `sum c_i*x_i <= rhs`
/// and rational multipliers such as `"1/2"`. Returns the cut in the same form.
#[pyfunction]
fn cutting_plane(ineqs: Vec<(Vec<i64>, i64)>, multipliers: Vec<String>) -> PyResult<(Vec<i64>, i64)> {
    let n = ineqs.iter().map(|(c, _)| c.len()).max().unwrap_or(0);
    let sys: Vec<LinearIneq> =
        ineqs.into_iter().map(|(c, rhs)| LinearIneq::new(c.into_iter().enumerate(), rhs)).collect();
    let ms = multipliers
        .iter()
        .map(|m| reducers::parse_multiplier(m))
        .collect::<chaoprop::error::Result<Vec<BigRational>>>()
        .map_err(py_err)?;
    let cut = reducers::cutting_plane(&sys, &ms).map_err(py_err)?;
    let mut dense = vec![0; n];
    for (&i, &a) in &cut.terms {
        dense[i] = a;
    }
    Ok((dense, cut.rhs))
}

/// Adds the classes and functions to `m`.
pub fn register(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCsp>()?;
    m.add_class::<PyReduction>()?;
    m.add("ChaopropError", m.py().get_type::<ChaopropError>())?;
    m.add_function(wrap_pyfunction!(scheme_union, m)?)?;
    m.add_function(wrap_pyfunction!(linear_eq_narrow, m)?)?;
    m.add_function(wrap_pyfunction!(cutting_plane, m)?)?;
    Ok(())
}

#[pymodule]
#[pyo3(name = "chaoprop")]
fn chaoprop_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    register(m)
}
