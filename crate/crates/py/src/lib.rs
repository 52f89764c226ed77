use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use conicline::forms::{parse_form, ExactForm};
use conicline::report::AnalysisReport;
use conicline::scalar::{format_c64, parse_c64, C64};
use conicline::Tolerances;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A homogeneous ternary form with Gaussian-rational coefficients.
#[pyclass(name = "Form", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyForm {
    inner: ExactForm,
}

#[pymethods]
impl PyForm {
    #[new]
    #[pyo3(signature = (text, degree=None))]
    fn new(text: &str, degree: Option<u32>) -> PyResult<Self> {
        let inner = parse_form(text, degree).map_err(value_error)?;
        Ok(PyForm { inner })
    }

    #[getter]
    fn degree(&self) -> u32 {
        self.inner.degree()
    }

    /// Value at a point given as three complex numbers.
    fn evaluate(&self, x: C64, y: C64, z: C64) -> C64 {
        let v = self.inner.to_float().evaluate(&[x, y, z]);
        v
    }

    fn __str__(&self) -> String {
        self.inner.to_expr()
    }

    fn __repr__(&self) -> String {
        format!("Form('{}')", self.inner.to_expr())
    }
}

/// The pencil spanned by two forms of equal degree.
#[pyclass(name = "Pencil", frozen)]
struct PyPencil {
    inner: conicline::pencil::Pencil,
}

#[pymethods]
impl PyPencil {
    #[new]
    #[pyo3(signature = (f, g, seed=42))]
    fn new(f: &PyForm, g: &PyForm, seed: u64) -> PyResult<Self> {
        let inner = conicline::pencil::Pencil::new(f.inner.clone(), g.inner.clone(), seed).map_err(value_error)?;
        Ok(PyPencil { inner })
    }

    #[getter]
    fn degree(&self) -> u32 {
        self.inner.degree()
    }

    /// Member `lam*f + mu*g` with its largest coefficient scaled to 1, as text.
    fn member(&self, lam: C64, mu: C64) -> PyResult<String> {
        let m = self.inner.member([lam, mu]).map_err(value_error)?;
        Ok(m.to_expr())
    }

    /// Base points as coordinate triples, each listed once per multiplicity.
    fn base_points(&self) -> PyResult<Vec<(C64, C64, C64)>> {
        let base = self.inner.base_locus(&Tolerances::default()).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
        let mut out = Vec::new();
        for z in &base.points {
            let c = z.point.coords();
            for _ in 0..z.multiplicity {
                out.push((c[0], c[1], c[2]));
            }
        }
        Ok(out)
    }

    /// Full analysis as a `Report`.
    #[pyo3(signature = (tol=None))]
    fn analyze(&self, tol: Option<f64>) -> PyResult<PyReport> {
        let tol = tol.map(Tolerances::with_tau).unwrap_or_default();
        let inner = conicline::report::analyze(&self.inner, &tol).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
        Ok(PyReport { inner })
    }
}

/// Result of analyzing a pencil.
#[pyclass(name = "Report", frozen)]
struct PyReport {
    inner: AnalysisReport,
}

#[pymethods]
impl PyReport {
    #[getter]
    fn m(&self) -> usize {
        self.inner.summary.m
    }

    #[getter]
    fn p(&self) -> usize {
        self.inner.summary.p
    }

    #[getter]
    fn qbar(&self) -> usize {
        self.inner.summary.qbar
    }

    #[getter]
    fn balance(&self) -> i64 {
        self.inner.ledger.balance
    }

    #[getter]
    fn rejection(&self) -> Option<String> {
        self.inner.rejection.clone()
    }

    /// `(param, special, euler, milnor numbers)` for every singular member;
    /// `param` is `(lam, mu)`.
    fn fibers(&self) -> Vec<((C64, C64), bool, i64, Vec<usize>)> {
        self.inner
            .fibers
            .iter()
            .map(|f| {
                let p = [0, 1].map(|k| parse_c64(&f.param[k]).unwrap_or_default());
                (
                    (p[0], p[1]),
                    f.special,
                    f.euler,
                    f.singular_points.iter().map(|s| s.mu).collect(),
                )
            })
            .collect()
    }

    /// `(name, status, details)` for every check.
    fn verdicts(&self) -> Vec<(String, String, String)> {
        self.inner
            .verdicts
            .iter()
            .map(|v| {
                let status = serde_json::to_value(v.status).ok().and_then(|s| s.as_str().map(str::to_owned)).unwrap_or_default();
                (v.name.clone(), status, v.details.clone())
            })
            .collect()
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn __repr__(&self) -> String {
        format!(
            "Report(m={}, p={}, qbar={}, balance={})",
            self.inner.summary.m, self.inner.summary.p, self.inner.summary.qbar, self.inner.ledger.balance
        )
    }
}

/// Analyzes the pencil of two forms given as text and returns the JSON report.
#[pyfunction]
#[pyo3(signature = (f, g, seed=42, tol=None))]
fn analyze(f: &str, g: &str, seed: u64, tol: Option<f64>) -> PyResult<String> {
    let tol = tol.map(Tolerances::with_tau).unwrap_or_default();
    conicline::report::analyze_text(f, g, &tol, seed)
        .map(|r| r.to_json())
        .map_err(value_error)
}

/// Forms `(f, g)` of a built-in family: `fermat` (with `d`), `pa` (with `a`) or `hesse`.
#[pyfunction]
#[pyo3(signature = (name, d=None, a=None))]
fn family(name: &str, d: Option<u32>, a: Option<&str>) -> PyResult<(PyForm, PyForm)> {
    let spec = conicline::families::by_name(name, d, a).map_err(value_error)?;
    Ok((PyForm { inner: spec.f }, PyForm { inner: spec.g }))
}

/// Formats a complex number the way reports do.
#[pyfunction]
fn format_complex(z: C64) -> String {
    format_c64(z)
}

#[pymodule]
pub fn conicline_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyForm>()?;
    m.add_class::<PyPencil>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(family, m)?)?;
    m.add_function(wrap_pyfunction!(format_complex, m)?)?;
    Ok(())
}
