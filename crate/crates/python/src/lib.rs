//! Python bindings: kernels travel as `Kernel` objects, reports as plain dicts.

use finmarkov::asrel::{self, AseQuery};
use finmarkov::document::{emit_kernel, parse_kernel};
use finmarkov::envelope::{env_cell, env_check_markov_laws, Flavor};
use finmarkov::split::{self, SearchDomain, SearchOutcome, DEFAULT_CANDIDATE_BOUND};
use finmarkov::support::support as support_of;
use finmarkov::{functors, idempotent, structure, FinObject, Kernel, Kind};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use serde::Serialize;

create_exception!(finmarkov_py, FinMarkovError, PyException);

fn err(e: finmarkov::Error) -> PyErr {
    FinMarkovError::new_err(e.to_string())
}

fn parse_kind(s: &str) -> PyResult<Kind> {
    serde_json::from_value(serde_json::Value::String(s.to_lowercase()))
        .map_err(|_| PyValueError::new_err(format!("unknown kind {s:?}; expected stoch, signed or multi")))
}

fn parse_flavor(s: &str) -> PyResult<Flavor> {
    match s.to_lowercase().as_str() {
        "karoubi" => Ok(Flavor::Karoubi),
        "blackwell" => Ok(Flavor::Blackwell),
        _ => Err(PyValueError::new_err(format!("unknown flavor {s:?}; expected karoubi or blackwell"))),
    }
}

fn object(labels: Vec<String>) -> PyResult<FinObject> {
    FinObject::new(labels).map_err(err)
}

/// Serializes through JSON so reports arrive as dicts, lists and scalars.
fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

#[pyclass(name = "Kernel", frozen, eq, from_py_object, module = "finmarkov_py")]
#[derive(Clone, PartialEq)]
pub struct PyKernel {
    inner: Kernel,
}

impl From<Kernel> for PyKernel {
    fn from(inner: Kernel) -> Self {
        PyKernel { inner }
    }
}

#[pymethods]
impl PyKernel {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        parse_kernel(text).map(Into::into).map_err(err)
    }

    fn to_json(&self) -> String {
        emit_kernel(&self.inner)
    }

    #[staticmethod]
    fn identity(kind: &str, labels: Vec<String>) -> PyResult<Self> {
        Ok(structure::identity(parse_kind(kind)?, &object(labels)?).into())
    }

    #[staticmethod]
    fn copy(kind: &str, labels: Vec<String>) -> PyResult<Self> {
        Ok(structure::copy(parse_kind(kind)?, &object(labels)?).into())
    }

    #[staticmethod]
    fn discard(kind: &str, labels: Vec<String>) -> PyResult<Self> {
        Ok(structure::discard(parse_kind(kind)?, &object(labels)?).into())
    }

    #[getter]
    fn kind(&self) -> String {
        self.inner.kind().to_string()
    }

    #[getter]
    fn dom(&self) -> Vec<String> {
        self.inner.dom().labels().to_vec()
    }

    #[getter]
    fn cod(&self) -> Vec<String> {
        self.inner.cod().labels().to_vec()
    }

    /// `self ∘ f`.
    fn compose(&self, f: &PyKernel) -> PyResult<Self> {
        finmarkov::compose(&self.inner, &f.inner).map(Into::into).map_err(err)
    }

    fn tensor(&self, g: &PyKernel) -> PyResult<Self> {
        finmarkov::tensor(&self.inner, &g.inner).map(Into::into).map_err(err)
    }

    fn is_deterministic(&self) -> bool {
        finmarkov::is_deterministic(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Kernel({})", emit_kernel(&self.inner))
    }
}

#[pyfunction]
fn classify<'py>(py: Python<'py>, e: &PyKernel) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &idempotent::classify(&e.inner).map_err(err)?)
}

#[pyfunction]
fn balanced_cross_check<'py>(py: Python<'py>, e: &PyKernel) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &idempotent::balanced_cross_check(&e.inner).map_err(err)?)
}

#[pyfunction]
fn cauchy_schwarz<'py>(py: Python<'py>, f: &PyKernel, g: &PyKernel, h: &PyKernel) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &idempotent::cauchy_schwarz(&f.inner, &g.inner, &h.inner).map_err(err)?)
}

/// Returns a dict with `T`, `iota`, `pi` (kernels), `classes` and `transient`.
#[pyfunction]
fn blackwell_split<'py>(py: Python<'py>, e: &PyKernel) -> PyResult<Bound<'py, PyDict>> {
    let s = split::blackwell_split(&e.inner).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("T", s.object.labels().to_vec())?;
    d.set_item("iota", PyKernel::from(s.inclusion))?;
    d.set_item("pi", PyKernel::from(s.projection))?;
    d.set_item("classes", s.classes)?;
    d.set_item("transient", s.transient)?;
    Ok(d)
}

/// `(iota, pi)` for the first splitting found with `|T| <= max_t`, else `None`.
#[pyfunction]
#[pyo3(signature = (e, max_t, grid = 2, bound = DEFAULT_CANDIDATE_BOUND as u64))]
fn search_split(e: &PyKernel, max_t: usize, grid: u32, bound: u64) -> PyResult<Option<(PyKernel, PyKernel)>> {
    let domain = SearchDomain::for_kind(e.inner.kind(), grid).map_err(err)?;
    match split::search_split(&e.inner, max_t, domain, bound as u128).map_err(err)? {
        SearchOutcome::Split(s) => Ok(Some((s.inclusion.into(), s.projection.into()))),
        SearchOutcome::NoSplitUpTo { .. } => Ok(None),
    }
}

#[pyfunction]
#[pyo3(signature = (p, f, g, param_size = 1))]
fn ase(p: &PyKernel, f: &PyKernel, g: &PyKernel, param_size: usize) -> PyResult<bool> {
    let q = AseQuery::with_parameter(p.inner.clone(), f.inner.clone(), g.inner.clone(), param_size).map_err(err)?;
    Ok(asrel::ase(&q))
}

/// Whether `p ≪ q`.
#[pyfunction]
fn abs_cont(q: &PyKernel, p: &PyKernel) -> PyResult<bool> {
    asrel::abs_cont(&q.inner, &p.inner).map_err(err)
}

/// `(S, inclusion, factorization)` for the support of `p`.
#[pyfunction]
fn support(p: &PyKernel) -> PyResult<(Vec<String>, PyKernel, PyKernel)> {
    let sd = support_of(&p.inner).map_err(err)?;
    Ok((sd.object.labels().to_vec(), sd.inclusion.into(), sd.factorization.into()))
}

#[pyfunction]
fn upsilon(p: &PyKernel) -> PyResult<PyKernel> {
    functors::upsilon(&p.inner).map(Into::into).map_err(err)
}

#[pyfunction]
fn upsilon_check<'py>(py: Python<'py>, p: &PyKernel, g: &PyKernel) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &functors::upsilon_check(&p.inner, &g.inner).map_err(err)?)
}

/// Conditional `X ⊗ A → Y` of a joint `f : A → X ⊗ Y` with `|X| = x_size`.
#[pyfunction]
fn conditional(f: &PyKernel, x_size: usize) -> PyResult<PyKernel> {
    functors::conditional(&f.inner, x_size).map(Into::into).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (e, flavor = "blackwell", seed = 0))]
fn envelope_check<'py>(py: Python<'py>, e: &PyKernel, flavor: &str, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let cell = env_cell(e.inner.dom(), &e.inner, parse_flavor(flavor)?).map_err(err)?;
    to_py(py, &env_check_markov_laws(&cell, seed).map_err(err)?)
}

#[pymodule]
fn finmarkov_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("FinMarkovError", m.py().get_type::<FinMarkovError>())?;
    m.add_class::<PyKernel>()?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(balanced_cross_check, m)?)?;
    m.add_function(wrap_pyfunction!(cauchy_schwarz, m)?)?;
    m.add_function(wrap_pyfunction!(blackwell_split, m)?)?;
    m.add_function(wrap_pyfunction!(search_split, m)?)?;
    m.add_function(wrap_pyfunction!(ase, m)?)?;
    m.add_function(wrap_pyfunction!(abs_cont, m)?)?;
    m.add_function(wrap_pyfunction!(support, m)?)?;
    m.add_function(wrap_pyfunction!(upsilon, m)?)?;
    m.add_function(wrap_pyfunction!(upsilon_check, m)?)?;
    m.add_function(wrap_pyfunction!(conditional, m)?)?;
    m.add_function(wrap_pyfunction!(envelope_check, m)?)?;
    Ok(())
}
