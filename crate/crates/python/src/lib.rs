//! Python bindings for the `vinberg` crate.
//!
//! Points of `V` are lists of 5 floats, `H`-matrices lists of 5 floats
//! `(a1, a2, a3, a4, a5)`, `V′` vectors lists of 2 floats, and 6×6 matrices
//! nested lists of rows.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use nalgebra::Matrix6;
use vinberg::cone::{self, HMatrix, VPrimeVector, VVector};
use vinberg::group::{self, GElement, TripleFactors};
use vinberg::metric;
use vinberg::semigroup::{self, ConeLieElement};
use vinberg::Error;

/// Convergence failures and inconsistencies raise `RuntimeError`, everything
/// else `ValueError`.
fn to_py(e: Error) -> PyErr {
    match e {
        Error::Convergence { .. } | Error::Inconsistency(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn v5(x: [f64; 5]) -> VVector {
    VVector(x)
}

fn vp(u: [f64; 2]) -> VPrimeVector {
    VPrimeVector(u)
}

fn h5(a: [f64; 5]) -> HMatrix {
    HMatrix(a)
}

fn matrix_from_rows(rows: Vec<Vec<f64>>) -> PyResult<Matrix6<f64>> {
    if rows.len() != 6 || rows.iter().any(|r| r.len() != 6) {
        return Err(PyValueError::new_err("expected a 6x6 nested list"));
    }
    Ok(Matrix6::from_fn(|i, j| rows[i][j]))
}

fn rows_of(m: &Matrix6<f64>) -> Vec<Vec<f64>> {
    (0..6).map(|i| (0..6).map(|j| m[(i, j)]).collect()).collect()
}

/// An element of the group `G`, a 6×6 symplectic matrix with the block
/// pattern of the dual Vinberg cone.
#[pyclass(name = "GroupElement", module = "dual_vinberg", frozen)]
#[derive(Clone)]
struct PyGroupElement(GElement);

#[pymethods]
impl PyGroupElement {
    /// Validates membership in `G`.
    #[new]
    fn new(rows: Vec<Vec<f64>>) -> PyResult<Self> {
        Ok(Self(GElement::new(matrix_from_rows(rows)?).map_err(to_py)?))
    }

    #[staticmethod]
    fn identity() -> Self {
        Self(GElement::identity())
    }

    #[staticmethod]
    fn translation(v: [f64; 5]) -> Self {
        Self(group::translation(&v5(v)))
    }

    #[staticmethod]
    fn dual_translation(u: [f64; 2]) -> Self {
        Self(group::dual_translation(&vp(u)))
    }

    #[staticmethod]
    fn rho(a: [f64; 5]) -> PyResult<Self> {
        Ok(Self(group::rho_embed(&h5(a)).map_err(to_py)?))
    }

    #[staticmethod]
    fn inversion() -> Self {
        Self(group::inversion_s())
    }

    #[staticmethod]
    fn isotropy(theta: f64, phi: f64) -> Self {
        Self(group::isotropy_k(theta, phi))
    }

    fn matrix(&self) -> Vec<Vec<f64>> {
        rows_of(self.0.matrix())
    }

    fn inverse(&self) -> Self {
        Self(self.0.inverse())
    }

    fn __mul__(&self, other: &PyGroupElement) -> Self {
        Self(self.0.mul(&other.0))
    }

    /// The linear fractional action on a real point of `V`.
    fn act(&self, x: [f64; 5]) -> PyResult<[f64; 5]> {
        Ok(group::act_real(&self.0, &v5(x)).map_err(to_py)?.0)
    }

    #[pyo3(signature = (tol = cone::DEFAULT_TOL))]
    fn in_gamma(&self, tol: f64) -> bool {
        semigroup::in_gamma(self.0.matrix(), tol)
    }

    fn __repr__(&self) -> String {
        format!("GroupElement({:?})", self.matrix())
    }
}

#[pyfunction]
fn in_open_cone(x: [f64; 5]) -> bool {
    cone::in_open_cone(&v5(x))
}

#[pyfunction]
#[pyo3(signature = (x, tol = cone::DEFAULT_TOL))]
fn in_closed_cone(x: [f64; 5], tol: f64) -> bool {
    cone::in_closed_cone(&v5(x), tol)
}

/// The three leading principal minors.
#[pyfunction]
fn minors(x: [f64; 5]) -> (f64, f64, f64) {
    cone::minors(&v5(x))
}

#[pyfunction]
fn char_function(x: [f64; 5]) -> PyResult<f64> {
    cone::char_function(&v5(x)).map_err(to_py)
}

#[pyfunction]
fn delta_s(x: [f64; 5], s: [f64; 3]) -> PyResult<f64> {
    cone::delta_s(&v5(x), s[0], s[1], s[2]).map_err(to_py)
}

#[pyfunction]
fn rho(a: [f64; 5], x: [f64; 5]) -> PyResult<[f64; 5]> {
    Ok(cone::rho(&h5(a), &v5(x)).map_err(to_py)?.0)
}

#[pyfunction]
fn det_rho(a: [f64; 5]) -> f64 {
    cone::det_rho(&h5(a))
}

#[pyfunction]
fn isotropy_group_order() -> usize {
    cone::isotropy_group().len()
}

#[pyfunction]
fn in_g(rows: Vec<Vec<f64>>) -> PyResult<bool> {
    Ok(group::in_g(&matrix_from_rows(rows)?))
}

#[pyfunction]
#[pyo3(signature = (rows, tol = cone::DEFAULT_TOL))]
fn in_gamma(rows: Vec<Vec<f64>>, tol: f64) -> PyResult<bool> {
    Ok(semigroup::in_gamma(&matrix_from_rows(rows)?, tol))
}

#[pyfunction]
#[pyo3(signature = (rows, tol = cone::DEFAULT_TOL))]
fn in_gamma_sp(rows: Vec<Vec<f64>>, tol: f64) -> PyResult<bool> {
    Ok(semigroup::in_gamma_sp(&matrix_from_rows(rows)?, tol))
}

/// Returns `{"v", "L", "u"}` with `g = t_v · ρ(L) · t̃_{−u}`.
#[pyfunction]
fn triple_decompose<'py>(py: Python<'py>, g: &PyGroupElement) -> PyResult<Bound<'py, PyDict>> {
    let f = group::triple_decompose(&g.0).map_err(to_py)?;
    let d = PyDict::new_bound(py);
    d.set_item("v", f.v.0)?;
    d.set_item("L", f.l.0)?;
    d.set_item("u", f.u.0)?;
    Ok(d)
}

#[pyfunction]
fn triple_compose(v: [f64; 5], l: [f64; 5], u: [f64; 2]) -> PyResult<PyGroupElement> {
    let f = TripleFactors { v: v5(v), l: h5(l), u: vp(u) };
    Ok(PyGroupElement(group::triple_compose(&f).map_err(to_py)?))
}

#[pyfunction]
fn polar_compose(a: [f64; 5], v: [f64; 5], u: [f64; 2]) -> PyResult<PyGroupElement> {
    let x = ConeLieElement { v: v5(v), u: vp(u) };
    Ok(PyGroupElement(semigroup::polar_compose(&h5(a), &x).map_err(to_py)?))
}

/// Returns `{"A", "v", "u", "iterations"}` with `g = ρ(A) · exp(X)` and
/// `X = ((0, v), (u, 0))`.
#[pyfunction]
#[pyo3(signature = (g, max_iter = 200, tol = 1e-12))]
fn polar_factor<'py>(py: Python<'py>, g: &PyGroupElement, max_iter: usize, tol: f64) -> PyResult<Bound<'py, PyDict>> {
    let f = semigroup::polar_factor(&g.0, max_iter, tol).map_err(to_py)?;
    let d = PyDict::new_bound(py);
    d.set_item("A", f.a.0)?;
    d.set_item("v", f.x.v.0)?;
    d.set_item("u", f.x.u.0)?;
    d.set_item("iterations", f.iterations)?;
    Ok(d)
}

#[pyfunction]
fn metric_omega(x: [f64; 5], v: [f64; 5], w: [f64; 5]) -> PyResult<f64> {
    metric::metric_omega(&v5(x), &v5(v), &v5(w)).map_err(to_py)
}

fn record_dict<'py>(py: Python<'py>, r: &metric::ContractionRecord) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new_bound(py);
    d.set_item("before", r.before)?;
    d.set_item("after", r.after)?;
    d.set_item("ratio", r.ratio)?;
    d.set_item("violated", r.violated)?;
    d.set_item("x", r.x.0)?;
    d.set_item("v", r.v.0)?;
    Ok(d)
}

#[pyfunction]
fn contraction_ratio<'py>(
    py: Python<'py>,
    g: &PyGroupElement,
    x: [f64; 5],
    v: [f64; 5],
) -> PyResult<Bound<'py, PyDict>> {
    let r = metric::contraction_ratio(&g.0, &v5(x), &v5(v)).map_err(to_py)?;
    record_dict(py, &r)
}

#[pyfunction]
fn counterexample(py: Python<'_>) -> PyResult<Bound<'_, PyDict>> {
    record_dict(py, &metric::counterexample())
}

/// Summary `{"max_ratio", "violation_count", "n_samples"}` of a seeded search.
#[pyfunction]
#[pyo3(signature = (seed, samples, inject_probe = true))]
fn search(py: Python<'_>, seed: u64, samples: usize, inject_probe: bool) -> PyResult<Bound<'_, PyDict>> {
    let report = py
        .allow_threads(|| metric::search_violations(seed, samples, inject_probe))
        .map_err(to_py)?;
    let d = PyDict::new_bound(py);
    d.set_item("max_ratio", report.summary.max_ratio)?;
    d.set_item("violation_count", report.summary.violation_count)?;
    d.set_item("n_samples", report.summary.n_samples)?;
    Ok(d)
}

#[pymodule]
fn dual_vinberg(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGroupElement>()?;
    m.add_function(wrap_pyfunction!(in_open_cone, m)?)?;
    m.add_function(wrap_pyfunction!(in_closed_cone, m)?)?;
    m.add_function(wrap_pyfunction!(minors, m)?)?;
    m.add_function(wrap_pyfunction!(char_function, m)?)?;
    m.add_function(wrap_pyfunction!(delta_s, m)?)?;
    m.add_function(wrap_pyfunction!(rho, m)?)?;
    m.add_function(wrap_pyfunction!(det_rho, m)?)?;
    m.add_function(wrap_pyfunction!(isotropy_group_order, m)?)?;
    m.add_function(wrap_pyfunction!(in_g, m)?)?;
    m.add_function(wrap_pyfunction!(in_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(in_gamma_sp, m)?)?;
    m.add_function(wrap_pyfunction!(triple_decompose, m)?)?;
    m.add_function(wrap_pyfunction!(triple_compose, m)?)?;
    m.add_function(wrap_pyfunction!(polar_compose, m)?)?;
    m.add_function(wrap_pyfunction!(polar_factor, m)?)?;
    m.add_function(wrap_pyfunction!(metric_omega, m)?)?;
    m.add_function(wrap_pyfunction!(contraction_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(counterexample, m)?)?;
    m.add_function(wrap_pyfunction!(search, m)?)?;
    Ok(())
}
