//! Python bindings for `hermfree`.
//!
//! Exact rationals cross the boundary as `fractions.Fraction`; symbolic
//! values are wrapped as `ExactValue`.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use pyo3::exceptions::{PyArithmeticError, PyRuntimeError, PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;

use hermfree::bruinier::{self, SUPPORTED_FIELDS};
use hermfree::characters::{self, QuadChar};
use hermfree::covolumes::{self as cov, DiscCase, Lattice};
use hermfree::exact_numbers::{self as exact, Rational};
use hermfree::report;
use hermfree::special_values as sv;
use hermfree::Error;

fn to_py_err(e: Error) -> PyErr {
    let msg = e.to_string();
    match e {
        Error::DivisionByZero => PyZeroDivisionError::new_err(msg),
        Error::NotRational { .. }
        | Error::IncompatibleField { .. }
        | Error::IncompatibleTerms { .. } => PyArithmeticError::new_err(msg),
        Error::Internal(_) => PyRuntimeError::new_err(msg),
        _ => PyValueError::new_err(msg),
    }
}

trait IntoPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for hermfree::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(to_py_err)
    }
}

/// Accepts `int`, `fractions.Fraction`, or a `"p/q"` string.
fn extract_rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    if let Ok(s) = obj.extract::<String>() {
        return exact::parse_rational(&s).py();
    }
    obj.extract::<Rational>()
}

/// `coeff · π^pi_exp · (√d)^sqrt_d_exp` with an exact rational coefficient.
#[pyclass(frozen, module = "hermfree_py", name = "ExactValue")]
struct PyExactValue(exact::ExactValue);

#[pymethods]
impl PyExactValue {
    #[new]
    #[pyo3(signature = (coeff, pi_exp = 0, sqrt_d_exp = 0, d = 1))]
    fn new(coeff: &Bound<'_, PyAny>, pi_exp: i32, sqrt_d_exp: u8, d: u64) -> PyResult<Self> {
        let coeff = extract_rational(coeff)?;
        exact::ExactValue::new(coeff, pi_exp, sqrt_d_exp, d)
            .py()
            .map(Self)
    }

    /// Parses the canonical rendering, e.g. `"32/2401 * pi^3 * sqrt(7)"`.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        text.parse().py().map(Self)
    }

    /// `n^(half_exp/2)`, square factors pulled into the coefficient.
    #[staticmethod]
    fn half_power(n: u64, half_exp: i64) -> Self {
        Self(exact::ExactValue::half_power(n, half_exp))
    }

    #[getter]
    fn coeff(&self) -> Rational {
        self.0.coeff().clone()
    }

    #[getter]
    fn pi_exp(&self) -> i32 {
        self.0.pi_exp()
    }

    #[getter]
    fn sqrt_d_exp(&self) -> u8 {
        self.0.sqrt_d_exp()
    }

    #[getter]
    fn d(&self) -> u64 {
        self.0.d()
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// The coefficient, if no π or √d factor remains.
    fn as_rational(&self) -> PyResult<Rational> {
        self.0.as_rational().py()
    }

    /// Correctly rounded decimal string with `digits` significant digits.
    #[pyo3(signature = (digits = 15))]
    fn to_decimal(&self, digits: u32) -> PyResult<String> {
        if digits == 0 {
            return Err(PyValueError::new_err("digits must be at least 1"));
        }
        Ok(self.0.to_decimal(digits).to_string())
    }

    fn __float__(&self) -> f64 {
        self.0.to_f64()
    }

    fn __mul__(&self, other: &Self) -> PyResult<Self> {
        self.0.mul(&other.0).py().map(Self)
    }

    fn __truediv__(&self, other: &Self) -> PyResult<Self> {
        self.0.div(&other.0).py().map(Self)
    }

    fn __pow__(&self, exp: i32, modulo: Option<i64>) -> PyResult<Self> {
        if modulo.is_some() {
            return Err(PyValueError::new_err("modular power is not defined"));
        }
        self.0.pow(exp).py().map(Self)
    }

    fn __neg__(&self) -> Self {
        Self(self.0.scale(&exact::integer(-1)))
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __hash__(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.0.to_string().hash(&mut h);
        h.finish()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("ExactValue('{}')", self.0)
    }
}

/// Bruinier invariant and freeness verdict for one `(d, n)`.
#[pyclass(frozen, module = "hermfree_py", name = "KReport")]
struct PyKReport(bruinier::KReport);

#[pymethods]
impl PyKReport {
    #[getter]
    fn d(&self) -> u64 {
        self.0.d
    }

    #[getter]
    fn n(&self) -> u32 {
        self.0.n
    }

    #[getter]
    fn k_exact(&self) -> Rational {
        self.0.k_exact.clone()
    }

    #[getter]
    fn k_float(&self) -> f64 {
        self.0.k_float
    }

    #[getter]
    fn bound(&self) -> u32 {
        self.0.bound
    }

    #[getter]
    fn is_integer(&self) -> bool {
        self.0.is_integer
    }

    #[getter]
    fn passes_bound(&self) -> bool {
        self.0.passes_bound
    }

    #[getter]
    fn congruence_ok(&self) -> Option<bool> {
        self.0.congruence_ok
    }

    /// `"PossiblyFree"` or `"NotFree"`.
    #[getter]
    fn verdict(&self) -> String {
        self.0.verdict.to_string()
    }

    fn to_json(&self) -> String {
        report::render_report(&self.0, report::OutputFormat::Json, 6)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        report::parse_report_json(text).py().map(Self)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!(
            "KReport(d={}, n={}, k_exact={}, bound={}, verdict={})",
            self.0.d, self.0.n, self.0.k_exact, self.0.bound, self.0.verdict
        )
    }
}

fn parse_lattice(name: &str) -> PyResult<Lattice> {
    match name {
        "L" | "l" => Ok(Lattice::L),
        "M" | "m" => Ok(Lattice::M),
        other => Err(PyValueError::new_err(format!(
            "lattice must be 'L' or 'M', got {other:?}"
        ))),
    }
}

fn parse_case(name: Option<&str>, d: u64) -> PyResult<DiscCase> {
    match name {
        None => Ok(DiscCase::for_field(d)),
        Some("minus-d") => Ok(DiscCase::MinusD),
        Some("minus-four-d") => Ok(DiscCase::MinusFourD),
        Some(other) => Err(PyValueError::new_err(format!(
            "disc_case must be 'minus-d' or 'minus-four-d', got {other:?}"
        ))),
    }
}

/// Kronecker symbol `(a/n)`.
#[pyfunction]
fn kronecker(a: i64, n: i64) -> i32 {
    characters::kronecker(a, n)
}

#[pyfunction]
fn bernoulli(n: u32) -> Rational {
    sv::bernoulli(n)
}

/// `B_{n,χ}` for the quadratic character of `ℚ(√−d)`.
#[pyfunction]
fn gen_bernoulli(n: u32, d: u64) -> PyResult<Rational> {
    if n == 0 {
        return Err(PyValueError::new_err("n must be at least 1"));
    }
    let chi = QuadChar::for_field(d).py()?;
    Ok(sv::gen_bernoulli(n, &chi))
}

/// `ζ(k)` for even `k ≥ 2`.
#[pyfunction]
fn zeta_value(k: u32) -> PyResult<PyExactValue> {
    sv::zeta_even_exact(k).py().map(PyExactValue)
}

/// `L(k, χ)` for odd `k ≥ 3` and the field `ℚ(√−d)`.
#[pyfunction]
fn l_value(d: u64, k: u32) -> PyResult<PyExactValue> {
    let chi = QuadChar::for_field(d).py()?;
    sv::l_odd_exact(k, &chi).py().map(|l| PyExactValue(l.value))
}

/// Truncated Dirichlet series for `L(k, χ)`.
#[pyfunction]
#[pyo3(signature = (d, k, terms = sv::DEFAULT_TERMS))]
fn l_numeric(d: u64, k: u32, terms: u64) -> PyResult<f64> {
    if k < 2 || terms == 0 {
        return Err(PyValueError::new_err("need k >= 2 and terms >= 1"));
    }
    let chi = QuadChar::for_field(d).py()?;
    Ok(sv::l_numeric(k, &chi, terms).value)
}

/// Truncated series for `ζ(k)` with a tail correction.
#[pyfunction]
#[pyo3(signature = (k, terms = sv::DEFAULT_TERMS))]
fn zeta_numeric(k: u32, terms: u64) -> PyResult<f64> {
    if k < 2 || terms == 0 {
        return Err(PyValueError::new_err("need k >= 2 and terms >= 1"));
    }
    Ok(sv::zeta_numeric(k, terms).value)
}

/// Exact covolume of `U(L_n)` or `U(M_n)`.
#[pyfunction]
#[pyo3(signature = (lattice, d, n, disc_case = None))]
fn covolume(lattice: &str, d: u64, n: u32, disc_case: Option<&str>) -> PyResult<PyExactValue> {
    let lattice = parse_lattice(lattice)?;
    let case = parse_case(disc_case, d)?;
    cov::covolume(lattice, n, d, case)
        .py()
        .map(|c| PyExactValue(c.value))
}

/// Relative deviation of the covolume from its series-based recomputation.
#[pyfunction]
#[pyo3(signature = (lattice, d, n, terms = sv::DEFAULT_TERMS))]
fn covolume_deviation(lattice: &str, d: u64, n: u32, terms: u64) -> PyResult<f64> {
    let c = cov::covolume(parse_lattice(lattice)?, n, d, DiscCase::for_field(d)).py()?;
    Ok(cov::vol_numeric(&c, terms).relative_deviation)
}

/// `K` as the ratio of covolumes.
#[pyfunction]
fn k_raw(d: u64, n: u32) -> PyResult<Rational> {
    bruinier::k_raw(d, n).py()
}

/// `K` from the simplified closed forms.
#[pyfunction]
fn k_closed(d: u64, n: u32) -> PyResult<Rational> {
    bruinier::k_closed(d, n).py()
}

#[pyfunction]
fn freeness_bound(d: u64, n: u32) -> PyResult<u32> {
    bruinier::check_supported(d).py()?;
    Ok(bruinier::freeness_bound(d, n))
}

#[pyfunction]
#[pyo3(signature = (d, n, congruence = false))]
fn verdict(d: u64, n: u32, congruence: bool) -> PyResult<PyKReport> {
    bruinier::verdict(d, n, congruence).py().map(PyKReport)
}

/// Reports for every `d` in `d_list` (default: all supported fields) and
/// `2 ≤ n ≤ n_max`, sorted by `d` then `n`.
#[pyfunction]
#[pyo3(signature = (d_list = None, n_max = 12, congruence = false))]
fn sweep(
    py: Python<'_>,
    d_list: Option<Vec<u64>>,
    n_max: u32,
    congruence: bool,
) -> PyResult<Vec<PyKReport>> {
    let ds = d_list.unwrap_or_else(|| SUPPORTED_FIELDS.to_vec());
    let table = py.detach(|| bruinier::sweep(&ds, n_max, congruence)).py()?;
    Ok(table.reports.into_iter().map(PyKReport).collect())
}

#[pymodule]
fn hermfree_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("SUPPORTED_FIELDS", SUPPORTED_FIELDS.to_vec())?;
    m.add_class::<PyExactValue>()?;
    m.add_class::<PyKReport>()?;
    m.add_function(wrap_pyfunction!(kronecker, m)?)?;
    m.add_function(wrap_pyfunction!(bernoulli, m)?)?;
    m.add_function(wrap_pyfunction!(gen_bernoulli, m)?)?;
    m.add_function(wrap_pyfunction!(zeta_value, m)?)?;
    m.add_function(wrap_pyfunction!(l_value, m)?)?;
    m.add_function(wrap_pyfunction!(l_numeric, m)?)?;
    m.add_function(wrap_pyfunction!(zeta_numeric, m)?)?;
    m.add_function(wrap_pyfunction!(covolume, m)?)?;
    m.add_function(wrap_pyfunction!(covolume_deviation, m)?)?;
    m.add_function(wrap_pyfunction!(k_raw, m)?)?;
    m.add_function(wrap_pyfunction!(k_closed, m)?)?;
    m.add_function(wrap_pyfunction!(freeness_bound, m)?)?;
    m.add_function(wrap_pyfunction!(verdict, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    Ok(())
}
