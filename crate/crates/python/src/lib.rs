//! Python bindings: parse a model, solve it, read back the stack, and
//! compare against brute-force enumeration.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyFrozenSet, PyTuple};

use genbranch::domain::Point;
use genbranch::engine::{solve, Schema, SolveResult, SolveStatus};
use genbranch::model::{parse_model as parse, print_model, CostChoice, Mode, Overrides};
use genbranch::oracle::{enumerate_solutions as enumerate, GroundValue};
use genbranch::report::RunReport;
use genbranch::{
    CspInstance, DomainValue, FilteringKind, PrecisionValue as CorePrecision, SelectorKind,
    SolverConfig, Store,
};

fn value_error(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Singletons become Python ints, floats or frozensets; anything wider is
/// rendered as text.
fn cell_to_py(py: Python<'_>, v: &DomainValue) -> PyResult<Py<PyAny>> {
    Ok(match v.point() {
        Some(Point::Int(i)) => i.into_pyobject(py)?.into_any().unbind(),
        Some(Point::Real(x)) => x.into_pyobject(py)?.into_any().unbind(),
        Some(Point::Set(s)) => PyFrozenSet::new(py, s.iter())?.into_any().unbind(),
        None => v.to_string().into_pyobject(py)?.into_any().unbind(),
    })
}

fn store_to_py(py: Python<'_>, s: &Store) -> PyResult<Py<PyAny>> {
    let items = s
        .cells()
        .iter()
        .map(|c| cell_to_py(py, c))
        .collect::<PyResult<Vec<_>>>()?;
    Ok(PyTuple::new(py, items)?.into_any().unbind())
}

#[pyclass(name = "PrecisionValue", frozen, eq, ord, from_py_object)]
#[derive(Clone, Copy, PartialEq, PartialOrd)]
struct PyPrecision(CorePrecision);

#[pymethods]
impl PyPrecision {
    #[new]
    fn new(real: f64, tag: i64) -> Self {
        PyPrecision(CorePrecision::new(real, tag))
    }

    #[classattr]
    #[allow(non_snake_case)]
    fn TOP() -> Self {
        PyPrecision(CorePrecision::TOP)
    }

    #[getter]
    fn real(&self) -> f64 {
        self.0.real
    }

    #[getter]
    fn tag(&self) -> i64 {
        self.0.tag
    }

    fn is_top(&self) -> bool {
        self.0.is_top()
    }

    fn __add__(&self, other: &Self) -> Self {
        PyPrecision(self.0 + other.0)
    }

    fn __sub__(&self, other: &Self) -> Self {
        PyPrecision(self.0 - other.0)
    }

    fn __repr__(&self) -> String {
        format!("PrecisionValue{}", self.0)
    }
}

#[pyclass(name = "Report", frozen)]
struct PyReport {
    result: SolveResult,
    report: RunReport,
    cfg: SolverConfig,
}

#[pymethods]
impl PyReport {
    /// Stores bottom to top, one tuple per store.
    #[getter]
    fn stores(&self, py: Python<'_>) -> PyResult<Vec<Py<PyAny>>> {
        self.result
            .stack
            .iter()
            .map(|s| store_to_py(py, s))
            .collect()
    }

    #[getter]
    fn costs(&self) -> PyResult<Vec<Vec<f64>>> {
        self.result
            .stack
            .iter()
            .map(|s| self.cfg.cost.eval(s).map(|c| c.0).map_err(value_error))
            .collect()
    }

    #[getter]
    fn top(&self, py: Python<'_>) -> PyResult<Option<Py<PyAny>>> {
        self.result
            .stack
            .top()
            .map(|s| store_to_py(py, s))
            .transpose()
    }

    #[getter]
    fn delta(&self) -> Vec<f64> {
        self.result.final_delta.0.clone()
    }

    #[getter]
    fn nodes(&self) -> u64 {
        self.result.node_count
    }

    #[getter]
    fn max_depth(&self) -> usize {
        self.result.max_depth
    }

    #[getter]
    fn status(&self) -> &'static str {
        match self.result.status {
            SolveStatus::Complete => "complete",
            SolveStatus::BudgetExhausted => "budget_exhausted",
        }
    }

    fn to_text(&self) -> String {
        self.report.to_text()
    }

    fn to_json(&self) -> String {
        self.report.to_json()
    }

    fn __len__(&self) -> usize {
        self.result.stack.len()
    }
}

#[pyclass(name = "Model", frozen)]
struct PyModel {
    instance: CspInstance,
    cfg: SolverConfig,
}

#[pymethods]
impl PyModel {
    #[getter]
    fn names(&self) -> Vec<String> {
        self.instance.names.clone()
    }

    #[getter]
    fn arity(&self) -> usize {
        self.instance.arity()
    }

    fn to_text(&self) -> String {
        print_model(&self.instance, &self.cfg)
    }

    /// Keyword arguments override the model's own settings.
    #[pyo3(signature = (*, mode=None, cost=None, epsilon=None, filter=None, selector=None, stack=None, plain=false, node_budget=None))]
    #[allow(clippy::too_many_arguments)]
    fn solve(
        &self,
        mode: Option<&str>,
        cost: Option<&str>,
        epsilon: Option<f64>,
        filter: Option<&str>,
        selector: Option<&str>,
        stack: Option<&str>,
        plain: bool,
        node_budget: Option<u64>,
    ) -> PyResult<PyReport> {
        let overrides = Overrides {
            mode: mode
                .map(str::parse::<Mode>)
                .transpose()
                .map_err(value_error)?,
            cost: cost
                .map(str::parse::<CostChoice>)
                .transpose()
                .map_err(value_error)?,
            epsilon,
            filtering: match filter {
                None => None,
                Some("consistency") => Some(FilteringKind::ConsistencyCheck),
                Some("fixpoint") => Some(FilteringKind::fixpoint()),
                Some(other) => return Err(value_error(format!("unknown filter `{other}`"))),
            },
            selector: match selector {
                None => None,
                Some("naive") => Some(SelectorKind::Naive),
                Some("ff") => Some(SelectorKind::FirstFail),
                Some(other) => return Err(value_error(format!("unknown selector `{other}`"))),
            },
            keep_full_stack: match stack {
                None => None,
                Some("full") => Some(true),
                Some("incumbent") => Some(false),
                Some(other) => return Err(value_error(format!("unknown stack policy `{other}`"))),
            },
            schema: plain.then_some(Schema::Plain),
            node_budget,
        };
        let mut cfg = self.cfg.clone();
        overrides
            .apply(&self.instance, &mut cfg)
            .map_err(value_error)?;
        let result =
            solve(&self.instance, &cfg).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
        let report = RunReport::new(&self.instance, &cfg, &result);
        Ok(PyReport {
            result,
            report,
            cfg,
        })
    }
}

#[pyfunction]
fn parse_model(text: &str) -> PyResult<PyModel> {
    let (instance, cfg) = parse(text).map_err(value_error)?;
    Ok(PyModel { instance, cfg })
}

/// Every satisfying assignment of a finite model, in enumeration order.
#[pyfunction]
fn enumerate_solutions(py: Python<'_>, model: &PyModel) -> PyResult<Vec<Py<PyAny>>> {
    let found = enumerate(&model.instance).map_err(value_error)?;
    found
        .assignments
        .iter()
        .map(|a| {
            let items = a
                .iter()
                .map(|g| match g {
                    GroundValue::Int(i) => Ok(i.into_pyobject(py)?.into_any().unbind()),
                    GroundValue::Set(s) => Ok(PyFrozenSet::new(py, s.iter())?.into_any().unbind()),
                })
                .collect::<PyResult<Vec<_>>>()?;
            Ok(PyTuple::new(py, items)?.into_any().unbind())
        })
        .collect()
}

/// Whether every store of the first JSON report lies below some store of
/// the second.
#[pyfunction]
fn stack_covers(finer_json: &str, coarser_json: &str) -> PyResult<bool> {
    let a = RunReport::from_json(finer_json)
        .and_then(|r| r.decode_stack())
        .map_err(value_error)?;
    let b = RunReport::from_json(coarser_json)
        .and_then(|r| r.decode_stack())
        .map_err(value_error)?;
    a.covered_by(&b).map_err(value_error)
}

#[pymodule]
fn pygenbranch(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPrecision>()?;
    m.add_class::<PyModel>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(parse_model, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_solutions, m)?)?;
    m.add_function(wrap_pyfunction!(stack_covers, m)?)?;
    Ok(())
}
