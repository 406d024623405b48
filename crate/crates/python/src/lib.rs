//! Python bindings for `fracbvp-core`.
//!
//! Rationals are accepted as `str` ("3/2"), `int` or `fractions.Fraction`.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyTypeError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use fracbvp_core::bvp_solver::{
    self as solver, FixedPointParams, LimitPoint, OperatorSign, Problem as CoreProblem, Solution as CoreSolution,
};
use fracbvp_core::cli::{interval_report, solve as dispatch_solve, MethodArg};
use fracbvp_core::config::{example_config, parse_nonlinearity, parse_problem_config, print_problem_config};
use fracbvp_core::green_kernel::{green_table, verify_kernel_bounds};
use fracbvp_core::verify::{run_verify, DEFAULT_SEED};
use fracbvp_core::{BvpShape, Error, GridFunction, Rational};

create_exception!(fracbvp, FracBvpError, PyException);
create_exception!(fracbvp, DegenerateProblemError, FracBvpError);
create_exception!(fracbvp, NonConvergenceError, FracBvpError);
create_exception!(fracbvp, UnstableLimitError, FracBvpError);

fn py_err(e: Error) -> PyErr {
    let msg = e.to_string();
    match e {
        Error::DegenerateProblem(_) => DegenerateProblemError::new_err(msg),
        Error::NonConvergence { .. } => NonConvergenceError::new_err(msg),
        Error::UnstableLimit(_) => UnstableLimitError::new_err(msg),
        _ => FracBvpError::new_err(msg),
    }
}

fn rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    if let Ok(s) = obj.extract::<String>() {
        return s.parse().map_err(py_err);
    }
    if let Ok(n) = obj.extract::<i64>() {
        return Ok(Rational::from_integer(n));
    }
    if let (Ok(n), Ok(d)) = (obj.getattr("numerator"), obj.getattr("denominator")) {
        return Rational::new(n.extract()?, d.extract()?).map_err(py_err);
    }
    Err(PyTypeError::new_err("expected a rational as str, int or Fraction"))
}

#[pyfunction]
fn falling_factorial(t: &Bound<'_, PyAny>, v: &Bound<'_, PyAny>) -> PyResult<f64> {
    fracbvp_core::falling_factorial(rational(t)?, rational(v)?).map_err(py_err)
}

/// `(ln|Γ(x)|, sign Γ(x))`
#[pyfunction]
fn signed_log_gamma(x: f64) -> PyResult<(f64, f64)> {
    let g = fracbvp_core::signed_log_gamma(x).map_err(py_err)?;
    Ok((g.log_abs, g.sign))
}

#[pyfunction]
fn gamma(x: f64) -> PyResult<f64> {
    fracbvp_core::gamma(x).map_err(py_err)
}

/// Fractional sum of `values` sampled on `base, base+1, ...`; returns `(new_base, values)`.
#[pyfunction]
fn fractional_sum(values: Vec<f64>, base: &Bound<'_, PyAny>, v: &Bound<'_, PyAny>) -> PyResult<(String, Vec<f64>)> {
    let f = GridFunction::new(rational(base)?, values).map_err(py_err)?;
    let s = fracbvp_core::frac_calc::fractional_sum(&f, rational(v)?).map_err(py_err)?;
    Ok((s.base().to_string(), s.into_values()))
}

#[pyfunction]
fn fractional_difference(
    values: Vec<f64>,
    base: &Bound<'_, PyAny>,
    v: &Bound<'_, PyAny>,
) -> PyResult<(String, Vec<f64>)> {
    let f = GridFunction::new(rational(base)?, values).map_err(py_err)?;
    let d = fracbvp_core::frac_calc::fractional_difference(&f, rational(v)?).map_err(py_err)?;
    Ok((d.base().to_string(), d.into_values()))
}

/// Both admissible `λ` ranges as a dict.
#[pyfunction]
#[pyo3(name = "lambda_intervals")]
fn py_lambda_intervals<'py>(py: Python<'py>, sigma: f64, tau: f64, l: f64, big_l: f64) -> PyResult<Bound<'py, PyDict>> {
    let iv = solver::lambda_intervals(sigma, tau, l, big_l).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("superlinear", iv.superlinear)?;
    d.set_item("sublinear", iv.sublinear)?;
    d.set_item("superlinear_nonempty", iv.superlinear_nonempty)?;
    d.set_item("sublinear_nonempty", iv.sublinear_nonempty)?;
    d.set_item("superlinear_midpoint", iv.superlinear_midpoint())?;
    d.set_item("sublinear_midpoint", iv.sublinear_midpoint())?;
    Ok(d)
}

/// Classifies `lim f(y)/y`; `f` uses config syntax, `at` is `0`, `"inf"` or a finite point approached from below.
/// Returns `(class, estimate)` with class one of `"zero"`, `"finite"`, `"infinite"`.
#[pyfunction]
#[pyo3(name = "estimate_limit_ratio")]
fn py_estimate_limit_ratio(f: &str, at: &Bound<'_, PyAny>) -> PyResult<(String, f64)> {
    let spec = parse_nonlinearity(f).map_err(py_err)?;
    let point = match at.extract::<String>() {
        Ok(s) if s == "inf" => LimitPoint::Infinity,
        Ok(s) => return Err(PyTypeError::new_err(format!("unknown limit point {s:?}"))),
        Err(_) => {
            let p: f64 = at.extract()?;
            if p == 0.0 {
                LimitPoint::Zero
            } else if p.is_infinite() {
                LimitPoint::Infinity
            } else {
                LimitPoint::Below(p)
            }
        }
    };
    let est = solver::estimate_limit_ratio(&spec, point).map_err(py_err)?;
    let class = match est.class {
        solver::LimitClass::Zero => "zero",
        solver::LimitClass::Finite(_) => "finite",
        solver::LimitClass::Infinite => "infinite",
    };
    Ok((class.to_string(), est.class.as_f64()))
}

/// Order `v` and horizon `b` of the boundary value problem.
#[pyclass(name = "Shape", frozen)]
struct PyShape {
    inner: BvpShape,
}

impl PyShape {
    fn weights(&self, h: Option<Vec<f64>>) -> PyResult<GridFunction> {
        let g = match h {
            None => GridFunction::constant(self.inner.interior_grid(), 1.0),
            Some(vals) => GridFunction::new(self.inner.v() - 1, vals),
        }
        .map_err(py_err)?;
        self.inner.check_h(&g).map_err(py_err)?;
        Ok(g)
    }
}

#[pymethods]
impl PyShape {
    #[new]
    fn new(v: &Bound<'_, PyAny>, b: usize) -> PyResult<Self> {
        Ok(PyShape { inner: BvpShape::new(rational(v)?, b).map_err(py_err)? })
    }

    #[getter]
    fn v(&self) -> String {
        self.inner.v().to_string()
    }

    #[getter]
    fn b(&self) -> usize {
        self.inner.b()
    }

    #[getter]
    fn denominator(&self) -> f64 {
        self.inner.denominator()
    }

    #[getter]
    fn d(&self) -> PyResult<f64> {
        Ok(self.inner.constant_d().map_err(py_err)?.value)
    }

    #[getter]
    fn cone_coeff(&self) -> PyResult<f64> {
        self.inner.cone_coeff().map_err(py_err)
    }

    /// `G(t, s)` as rows over `t ∈ [v-2, v+b]`, columns over `s ∈ [0, b]`.
    fn green_table(&self) -> PyResult<Vec<Vec<f64>>> {
        Ok(green_table(&self.inner, None).map_err(py_err)?.rows().to_vec())
    }

    fn green_csv(&self) -> PyResult<String> {
        Ok(green_table(&self.inner, None).map_err(py_err)?.to_csv())
    }

    #[pyo3(signature = (h=None))]
    fn sigma(&self, h: Option<Vec<f64>>) -> PyResult<f64> {
        fracbvp_core::green_kernel::sigma(&self.inner, &self.weights(h)?).map_err(py_err)
    }

    #[pyo3(signature = (h=None))]
    fn tau(&self, h: Option<Vec<f64>>) -> PyResult<f64> {
        fracbvp_core::green_kernel::tau(&self.inner, &self.weights(h)?).map_err(py_err)
    }

    fn verify_kernel_bounds<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let r = verify_kernel_bounds(&self.inner).map_err(py_err)?;
        let d = PyDict::new(py);
        d.set_item("pass", r.pass)?;
        d.set_item("min_entry", r.min_entry)?;
        d.set_item("min_upper_slack", r.min_upper_slack)?;
        d.set_item("min_lower_slack", r.min_lower_slack)?;
        d.set_item("diagonal", r.diagonal)?;
        Ok(d)
    }

    /// The identity and oracle checks as `[(name, passed, worst)]`.
    #[pyo3(signature = (seed=DEFAULT_SEED))]
    fn verify(&self, seed: u64) -> PyResult<Vec<(String, bool, f64)>> {
        let r = run_verify(&self.inner, seed).map_err(py_err)?;
        Ok(r.items.into_iter().map(|i| (i.name, i.pass, i.worst)).collect())
    }

    fn __repr__(&self) -> String {
        format!("Shape(v={}, b={})", self.inner.v(), self.inner.b())
    }
}

#[pyclass(name = "Solution", frozen)]
struct PySolution {
    inner: CoreSolution,
}

#[pymethods]
impl PySolution {
    /// Grid points as exact strings.
    #[getter]
    fn t(&self) -> Vec<String> {
        self.inner.y.iter().map(|(t, _)| t.to_string()).collect()
    }

    #[getter]
    fn y(&self) -> Vec<f64> {
        self.inner.y.values().to_vec()
    }

    #[getter]
    fn method(&self) -> String {
        self.inner.method.to_string()
    }

    #[getter]
    fn iterations(&self) -> usize {
        self.inner.iterations
    }

    #[getter]
    fn residual(&self) -> f64 {
        self.inner.residual.max_abs
    }

    #[getter]
    fn equation_residuals(&self) -> Vec<f64> {
        self.inner.residual.equation_residuals.clone()
    }

    #[getter]
    fn cone_margin(&self) -> f64 {
        self.inner.cone.margin
    }

    #[getter]
    fn in_cone(&self) -> bool {
        self.inner.cone.member
    }

    fn to_csv(&self) -> String {
        self.inner.to_csv()
    }

    fn report(&self) -> String {
        self.inner.report()
    }
}

#[pyclass(name = "Problem", frozen)]
struct PyProblem {
    inner: CoreProblem,
}

#[pymethods]
impl PyProblem {
    #[staticmethod]
    fn from_config(text: &str) -> PyResult<Self> {
        Ok(PyProblem { inner: parse_problem_config(text).map_err(py_err)? })
    }

    #[staticmethod]
    fn example(n: u32) -> PyResult<Self> {
        let text = example_config(n).ok_or_else(|| FracBvpError::new_err(format!("no example {n}")))?;
        Self::from_config(text)
    }

    fn to_config(&self) -> String {
        print_problem_config(&self.inner)
    }

    #[getter]
    fn shape(&self) -> PyShape {
        PyShape { inner: *self.inner.shape() }
    }

    #[getter]
    #[pyo3(name = "lambda_")]
    fn lambda(&self) -> f64 {
        self.inner.lambda()
    }

    fn with_lambda(&self, lambda: f64) -> PyResult<Self> {
        Ok(PyProblem { inner: self.inner.with_lambda(lambda).map_err(py_err)? })
    }

    /// `method` is `"green"`, `"direct"` or `"fixedpoint"`; `operator` is `"adjudicated"` or `"as_printed"`.
    #[pyo3(signature = (method="fixedpoint", tol=1e-12, max_iter=1000, damping=1.0, operator="adjudicated"))]
    fn solve(&self, method: &str, tol: f64, max_iter: usize, damping: f64, operator: &str) -> PyResult<PySolution> {
        let method = match method {
            "green" => MethodArg::Green,
            "direct" => MethodArg::Direct,
            "fixedpoint" => MethodArg::Fixedpoint,
            m => return Err(PyTypeError::new_err(format!("unknown method {m:?}"))),
        };
        let operator = match operator {
            "adjudicated" => OperatorSign::Adjudicated,
            "as_printed" => OperatorSign::AsPrinted,
            o => return Err(PyTypeError::new_err(format!("unknown operator {o:?}"))),
        };
        let params = FixedPointParams { tol, max_iter, damping, operator };
        Ok(PySolution { inner: dispatch_solve(&self.inner, method, &params).map_err(py_err)? })
    }

    /// The `interval` report as a dict of strings.
    fn interval<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let (r, _) = interval_report(&self.inner).map_err(py_err)?;
        let d = PyDict::new(py);
        for line in r.render().lines() {
            if let Some((k, v)) = line.split_once('=') {
                d.set_item(k, v)?;
            }
        }
        Ok(d)
    }
}

#[pymodule]
fn fracbvp(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("FracBvpError", py.get_type::<FracBvpError>())?;
    m.add("DegenerateProblemError", py.get_type::<DegenerateProblemError>())?;
    m.add("NonConvergenceError", py.get_type::<NonConvergenceError>())?;
    m.add("UnstableLimitError", py.get_type::<UnstableLimitError>())?;
    m.add_function(wrap_pyfunction!(falling_factorial, m)?)?;
    m.add_function(wrap_pyfunction!(signed_log_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(gamma, m)?)?;
    m.add_function(wrap_pyfunction!(fractional_sum, m)?)?;
    m.add_function(wrap_pyfunction!(fractional_difference, m)?)?;
    m.add_function(wrap_pyfunction!(py_lambda_intervals, m)?)?;
    m.add_function(wrap_pyfunction!(py_estimate_limit_ratio, m)?)?;
    m.add_class::<PyShape>()?;
    m.add_class::<PyProblem>()?;
    m.add_class::<PySolution>()?;
    Ok(())
}
