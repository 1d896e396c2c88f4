//! Python bindings: expressions, metric files, per-point analysis and the
//! Petrov classifier.

use std::path::Path;

use num_complex::Complex64;
use pyo3::exceptions::{PyKeyError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use semisym::classify::ClassifyOptions;
use semisym::corpus;
use semisym::expr::{parse_expr, Bindings, Expr as CoreExpr, Scope};
use semisym::metric_file::{load_metric_file, MetricFile};
use semisym::report::run_analysis;
use semisym::symmetry::DEFAULT_TOL;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A parsed closed-form expression over named coordinates and parameters.
#[pyclass(name = "Expr", frozen)]
struct PyExpr {
    expr: CoreExpr,
    scope: Scope,
}

#[pymethods]
impl PyExpr {
    #[new]
    #[pyo3(signature = (text, coords, params = Vec::new()))]
    fn new(text: &str, coords: Vec<String>, params: Vec<String>) -> PyResult<Self> {
        let scope = Scope::new(&coords, &params);
        let expr = parse_expr(text, &scope).map_err(value_err)?;
        Ok(PyExpr { expr, scope })
    }

    #[pyo3(signature = (coords, params = Vec::new()))]
    fn eval(&self, coords: Vec<f64>, params: Vec<f64>) -> PyResult<f64> {
        if coords.len() != self.scope.coords().count() || params.len() != self.scope.params().count() {
            return Err(PyValueError::new_err("wrong number of coordinate or parameter values"));
        }
        self.expr
            .eval(&Bindings::from_slices(&coords, &params))
            .map_err(value_err)
    }

    /// Partial derivative with respect to the named coordinate.
    fn diff(&self, var: &str) -> PyResult<PyExpr> {
        let expr = self.expr.differentiate_by_name(&self.scope, var).map_err(value_err)?;
        Ok(PyExpr {
            expr,
            scope: self.scope.clone(),
        })
    }

    fn __str__(&self) -> String {
        self.expr.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Expr({:?})", self.expr.to_string())
    }
}

/// A metric file, loaded from disk or from the built-in corpus.
#[pyclass(name = "Metric", frozen)]
struct PyMetric {
    file: MetricFile,
}

#[pymethods]
impl PyMetric {
    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        load_metric_file(Path::new(path))
            .map(|file| PyMetric { file })
            .map_err(value_err)
    }

    #[staticmethod]
    fn builtin(name: &str) -> PyResult<Self> {
        match corpus::load_builtin(name) {
            Some(r) => r.map(|file| PyMetric { file }).map_err(value_err),
            None => Err(PyKeyError::new_err(format!("no built-in metric `{name}`"))),
        }
    }

    #[getter]
    fn name(&self) -> String {
        self.file.name().to_string()
    }

    #[getter]
    fn is_static(&self) -> bool {
        self.file.is_static
    }

    fn points(&self) -> Vec<(String, [f64; 4])> {
        self.file
            .metric
            .points()
            .iter()
            .map(|p| (p.name.clone(), p.coords))
            .collect()
    }

    /// Metric components `g_ab` at the given coordinates.
    fn metric_at(&self, coords: [f64; 4]) -> PyResult<[[f64; 4]; 4]> {
        self.file.metric.metric_at(&coords).map_err(value_err)
    }

    /// Full analysis as the JSON text printed by `semisym analyze --json`.
    #[pyo3(signature = (point = None, tol = DEFAULT_TOL, seed = 0, cross_validate = false))]
    fn analyze(&self, py: Python<'_>, point: Option<&str>, tol: f64, seed: u64, cross_validate: bool) -> PyResult<String> {
        let opts = ClassifyOptions {
            tol,
            seed,
            cross_validate,
        };
        let reports = py
            .detach(|| run_analysis(&self.file, point, &opts))
            .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
        serde_json::to_string_pretty(&reports).map_err(|e| PyRuntimeError::new_err(e.to_string()))
    }

    /// `(point, petrov, branch)` for every point.
    #[pyo3(signature = (tol = DEFAULT_TOL))]
    fn classify(&self, py: Python<'_>, tol: f64) -> PyResult<Vec<(String, String, String)>> {
        let opts = ClassifyOptions {
            tol,
            ..ClassifyOptions::default()
        };
        let reports = py
            .detach(|| run_analysis(&self.file, None, &opts))
            .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
        Ok(reports
            .iter()
            .map(|r| {
                let c = &r.classification;
                (c.point.clone(), c.petrov.as_str().to_string(), c.branch.as_str().to_string())
            })
            .collect())
    }
}

/// Petrov type of five Weyl scalars `Ψ0 … Ψ4`.
#[pyfunction]
#[pyo3(signature = (psi, tol = DEFAULT_TOL))]
fn petrov_classify(psi: [Complex64; 5], tol: f64) -> &'static str {
    semisym::np::petrov_classify(&psi, tol).as_str()
}

/// Petrov type from root multiplicities of the Weyl quartic.
#[pyfunction]
fn root_oracle_type(psi: [Complex64; 5]) -> &'static str {
    semisym::np::root_oracle_type(&psi).as_str()
}

/// `(name, residual, expect_zero, passed)` for every spinor identity check.
#[pyfunction]
fn lemma_suite() -> Vec<(String, f64, bool, bool)> {
    semisym::spinor::lemma_suite()
        .into_iter()
        .map(|c| (c.name.clone(), c.residual, c.expect_zero, c.passed))
        .collect()
}

#[pyfunction]
fn builtin_names() -> Vec<&'static str> {
    corpus::builtin_names().collect()
}

#[pymodule]
fn semisym_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyExpr>()?;
    m.add_class::<PyMetric>()?;
    m.add_function(wrap_pyfunction!(petrov_classify, m)?)?;
    m.add_function(wrap_pyfunction!(root_oracle_type, m)?)?;
    m.add_function(wrap_pyfunction!(lemma_suite, m)?)?;
    m.add_function(wrap_pyfunction!(builtin_names, m)?)?;
    m.add("DEFAULT_TOL", DEFAULT_TOL)?;
    Ok(())
}
