//! Python bindings. Structured results are returned as JSON strings in the
//! same format as the command-line tool.

use expgap::algebraic::AlgebraicNumber;
use expgap::certified_eval::{decide_sign, decide_sign_with_budget, LinearForm, DEFAULT_MAX_BITS};
use expgap::exact_poly::IntPolynomial;
use expgap::explicit_bounds::{main_result_a, main_result_b, HeightInput};
use expgap::json::{parse_rational, rational_to_string};
use expgap::number_field::tower_combine;
use expgap::pigeonhole::{count_lambda, enumerate_algnums, run_search, verify_upper_bound, SearchConfig};
use expgap::Error;
use pyo3::exceptions::{PyArithmeticError, PyMemoryError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde_json::json;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::InvalidInput(_) | Error::Domain(_) => PyValueError::new_err(e.to_string()),
        Error::Undecided { .. } | Error::InsufficientPrecision(_) => PyArithmeticError::new_err(e.to_string()),
        Error::ResourceCap(_) => PyMemoryError::new_err(e.to_string()),
        Error::Certificate(_) => PyRuntimeError::new_err(e.to_string()),
    }
}

fn dump(v: &serde_json::Value) -> String {
    serde_json::to_string(v).unwrap_or_default()
}

/// An algebraic number given by its minimal polynomial and an isolating box.
#[pyclass(name = "AlgebraicNumber", frozen, from_py_object)]
#[derive(Clone)]
struct PyAlgebraicNumber {
    inner: AlgebraicNumber,
}

#[pymethods]
impl PyAlgebraicNumber {
    /// The root of the irreducible polynomial `coeffs` (lowest power first)
    /// nearest to `re + i im`.
    #[new]
    #[pyo3(signature = (coeffs, re=0.0, im=0.0))]
    fn new(coeffs: Vec<i64>, re: f64, im: f64) -> PyResult<Self> {
        let f = IntPolynomial::from_i64s(&coeffs);
        let inner = AlgebraicNumber::root_near(&f, re, im).map_err(py_err)?;
        Ok(PyAlgebraicNumber { inner })
    }

    #[staticmethod]
    fn rational(q: &str) -> PyResult<Self> {
        let q = parse_rational(q).map_err(py_err)?;
        Ok(PyAlgebraicNumber {
            inner: AlgebraicNumber::from_rational(&q),
        })
    }

    #[staticmethod]
    fn sqrt(q: &str) -> PyResult<Self> {
        let q = parse_rational(q).map_err(py_err)?;
        let inner = AlgebraicNumber::sqrt_of(&q).map_err(py_err)?;
        Ok(PyAlgebraicNumber { inner })
    }

    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        let v: serde_json::Value = serde_json::from_str(s).map_err(|e| PyValueError::new_err(e.to_string()))?;
        let inner = AlgebraicNumber::from_json(&v).map_err(py_err)?;
        Ok(PyAlgebraicNumber { inner })
    }

    fn to_json(&self) -> String {
        dump(&self.inner.to_json())
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree()
    }

    /// Minimal polynomial coefficients, lowest power first.
    #[getter]
    fn minpoly(&self) -> Vec<String> {
        self.inner.minpoly().to_strings()
    }

    fn is_real(&self) -> bool {
        self.inner.is_real()
    }

    fn as_rational(&self) -> Option<String> {
        self.inner.as_rational().map(|q| rational_to_string(&q))
    }

    /// Midpoint of the enclosure at `bits` bits, as floats.
    #[pyo3(signature = (bits=64))]
    fn approx(&self, bits: u32) -> PyResult<(f64, f64)> {
        let z = self.inner.enclosure(bits).map_err(py_err)?;
        Ok((z.re.to_f64(), z.im.to_f64()))
    }

    fn __repr__(&self) -> String {
        let (re, im) = self.approx(53).unwrap_or((f64::NAN, f64::NAN));
        format!("AlgebraicNumber({}, ~{re}{im:+}i)", self.inner.minpoly())
    }
}

/// `beta_1 e^alpha_1 + ... + beta_m e^alpha_m`.
#[pyclass(name = "LinearForm", frozen)]
struct PyLinearForm {
    inner: LinearForm,
}

#[pymethods]
impl PyLinearForm {
    /// `terms` is a list of `(alpha, beta)` pairs.
    #[new]
    fn new(terms: Vec<(PyAlgebraicNumber, PyAlgebraicNumber)>) -> PyResult<Self> {
        let terms = terms.into_iter().map(|(a, b)| (a.inner, b.inner)).collect();
        Ok(PyLinearForm {
            inner: LinearForm::new(terms).map_err(py_err)?,
        })
    }

    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        let v: serde_json::Value = serde_json::from_str(s).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(PyLinearForm {
            inner: LinearForm::from_json(&v).map_err(py_err)?,
        })
    }

    fn to_json(&self) -> String {
        dump(&self.inner.to_json())
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    /// Sign certificate as JSON. Raises `ArithmeticError` when undecided.
    #[pyo3(signature = (max_bits=DEFAULT_MAX_BITS, with_budget=false))]
    fn decide_sign(&self, py: Python<'_>, max_bits: u32, with_budget: bool) -> PyResult<String> {
        let form = &self.inner;
        let cert = py
            .detach(|| {
                if with_budget {
                    decide_sign_with_budget(form, max_bits)
                } else {
                    decide_sign(form, max_bits)
                }
            })
            .map_err(py_err)?;
        Ok(dump(&cert.to_json()))
    }

    /// One of "positive-real", "negative-real", "nonzero-complex".
    #[pyo3(signature = (max_bits=DEFAULT_MAX_BITS))]
    fn verdict(&self, py: Python<'_>, max_bits: u32) -> PyResult<&'static str> {
        let form = &self.inner;
        let cert = py.detach(|| decide_sign(form, max_bits)).map_err(py_err)?;
        Ok(cert.verdict.as_str())
    }
}

fn height(h: &str) -> PyResult<HeightInput> {
    HeightInput::parse(h).map_err(py_err)
}

/// Primitive element certificate for the generators, as JSON.
#[pyfunction]
fn primitive_element(py: Python<'_>, gens: Vec<PyAlgebraicNumber>) -> PyResult<String> {
    let gens: Vec<AlgebraicNumber> = gens.into_iter().map(|g| g.inner).collect();
    let cert = py.detach(|| tower_combine(&gens)).map_err(py_err)?;
    Ok(dump(&cert.to_json()))
}

/// Lower-bound report for `(m, d, h)`; `h` is a rational or `"ln N"`.
#[pyfunction]
fn bound_a(m: u64, d: u64, h: &str) -> PyResult<String> {
    let r = main_result_a(m, d, &height(h)?).map_err(py_err)?;
    Ok(dump(&r.to_json()))
}

#[pyfunction]
fn bound_b(m: u64, d: u64, h: &str) -> PyResult<String> {
    let r = main_result_b(m, d, &height(h)?).map_err(py_err)?;
    Ok(dump(&r.to_json()))
}

/// Algebraic numbers of degree `d` and multiplicative height at most `h_mult`.
#[pyfunction]
#[pyo3(signature = (d, h_mult, unit_disk_only=false))]
fn enumerate(py: Python<'_>, d: usize, h_mult: &str, unit_disk_only: bool) -> PyResult<Vec<PyAlgebraicNumber>> {
    let h = parse_rational(h_mult).map_err(py_err)?;
    let set = py.detach(|| enumerate_algnums(d, &h, unit_disk_only)).map_err(py_err)?;
    Ok(set.members.into_iter().map(|inner| PyAlgebraicNumber { inner }).collect())
}

/// Exact `|Lambda|` as a decimal string.
#[pyfunction]
fn lambda_count(n1: u64, n2: u64, ell: u64) -> String {
    count_lambda(n1, n2, ell).total.to_string()
}

/// Pigeonhole search report as JSON.
#[pyfunction]
#[pyo3(signature = (m, d, h, cap_t=None))]
fn min_search(py: Python<'_>, m: u64, d: u64, h: &str, cap_t: Option<u64>) -> PyResult<String> {
    let mut cfg = SearchConfig::new(m, d, &height(h)?).map_err(py_err)?;
    cfg.grid_t_cap = cap_t;
    let (res, rep) = py
        .detach(|| {
            let res = run_search(&cfg)?;
            let rep = verify_upper_bound(&res, &cfg)?;
            Ok::<_, Error>((res, rep))
        })
        .map_err(py_err)?;
    Ok(dump(&json!({"collision": res.to_json(), "bounds": rep.to_json()})))
}

#[pymodule]
fn expgap_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyAlgebraicNumber>()?;
    m.add_class::<PyLinearForm>()?;
    m.add_function(wrap_pyfunction!(primitive_element, m)?)?;
    m.add_function(wrap_pyfunction!(bound_a, m)?)?;
    m.add_function(wrap_pyfunction!(bound_b, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate, m)?)?;
    m.add_function(wrap_pyfunction!(lambda_count, m)?)?;
    m.add_function(wrap_pyfunction!(min_search, m)?)?;
    Ok(())
}
