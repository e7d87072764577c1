//! Python bindings for `truncbin-core`.
//!
//! Integers cross the boundary as Python `int`s of any size. Structured
//! reports that have no dedicated class come back as plain dicts, built from
//! the same JSON the CLI emits.

use num_bigint::BigInt;
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use truncbin_core as core;
use truncbin_core::verify::{run_suite, ClaimId, SuiteConfig};
use truncbin_core::{BinomialPair, OddPrime, ScanConstraints, ScanOptions, TrinomialTriple};

create_exception!(truncbin, PreconditionError, PyValueError, "A documented precondition does not hold.");
create_exception!(truncbin, BudgetError, PyRuntimeError, "A scan exceeds its cell budget.");

fn to_py_err(e: core::Error) -> PyErr {
    match e {
        core::Error::Domain(_) => PyValueError::new_err(e.to_string()),
        core::Error::Precondition(_) | core::Error::Inconsistency(_) => PreconditionError::new_err(e.to_string()),
        core::Error::Budget { .. } => BudgetError::new_err(e.to_string()),
    }
}

fn prime(n: u32) -> PyResult<OddPrime> {
    OddPrime::new(n).map_err(to_py_err)
}

fn pair(a: BigInt, b: BigInt, n: u32) -> PyResult<BinomialPair> {
    Ok(BinomialPair::new(a, b, prime(n)?))
}

fn triple(a: BigInt, b: BigInt, c: BigInt, n: u32) -> PyResult<TrinomialTriple> {
    Ok(TrinomialTriple::new(a, b, c, prime(n)?))
}

fn json_to_py<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

#[pyclass(name = "Valuation", module = "truncbin", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
pub struct PyValuation {
    base: u32,
    /// `None` for the valuation of zero.
    exponent: Option<u64>,
    cofactor: BigInt,
}

#[pymethods]
impl PyValuation {
    #[getter]
    fn is_infinite(&self) -> bool {
        self.exponent.is_none()
    }

    fn divisible_by_power(&self, k: u64) -> bool {
        self.exponent.is_none_or(|e| e >= k)
    }

    fn __repr__(&self) -> String {
        match self.exponent {
            Some(e) => format!("Valuation(base={}, exponent={e}, cofactor={})", self.base, self.cofactor),
            None => format!("Valuation(base={}, exponent=inf)", self.base),
        }
    }
}

impl From<core::Valuation> for PyValuation {
    fn from(v: core::Valuation) -> Self {
        PyValuation {
            base: v.base.get(),
            exponent: v.exponent.finite(),
            cofactor: v.cofactor,
        }
    }
}

#[pyclass(name = "Verdict", module = "truncbin", frozen)]
pub struct PyVerdict {
    inner: core::Verdict,
}

#[pymethods]
impl PyVerdict {
    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind.name()
    }

    #[getter]
    fn reason(&self) -> &str {
        &self.inner.reason
    }

    /// `(tier, kind, reason)` for each evidence tier.
    #[getter]
    fn tiers(&self) -> Vec<(String, &'static str, String)> {
        self.inner
            .tiers
            .iter()
            .map(|t| {
                let tier = match t.tier {
                    core::Tier::PaperRule => "paper_rule",
                    core::Tier::ExactRefinement => "exact_refinement",
                };
                (tier.to_string(), t.kind.name(), t.reason.clone())
            })
            .collect()
    }

    /// Evidence as a list of `{"name", "value"}` dicts.
    fn evidence<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        json_to_py(py, &self.inner.evidence)
    }

    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        json_to_py(py, &self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Verdict(kind={:?}, reason={:?})", self.kind(), self.inner.reason)
    }
}

#[pyclass(name = "ExponentProfile", module = "truncbin", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
pub struct PyExponentProfile {
    rho_c: u64,
    rho_beta: u64,
    rho_q: u64,
}

#[pymethods]
impl PyExponentProfile {
    fn __repr__(&self) -> String {
        format!(
            "ExponentProfile(rho_c={}, rho_beta={}, rho_q={})",
            self.rho_c, self.rho_beta, self.rho_q
        )
    }
}

#[pyclass(name = "ScanReport", module = "truncbin", frozen)]
pub struct PyScanReport {
    inner: core::ScanReport,
}

#[pymethods]
impl PyScanReport {
    #[getter]
    fn n(&self) -> u32 {
        self.inner.n.get()
    }

    #[getter]
    fn power_k(&self) -> u32 {
        self.inner.power_k
    }

    #[getter]
    fn modulus(&self) -> u64 {
        self.inner.modulus
    }

    #[getter]
    fn witnesses(&self) -> Vec<(u64, u64)> {
        self.inner.witnesses.clone()
    }

    #[getter]
    fn cells_scanned(&self) -> u64 {
        self.inner.cells_scanned
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(|e| PyRuntimeError::new_err(e.to_string()))
    }

    fn __repr__(&self) -> String {
        format!(
            "ScanReport(n={}, k={}, witnesses={}, cells_scanned={})",
            self.inner.n,
            self.inner.power_k,
            self.inner.witnesses.len(),
            self.inner.cells_scanned
        )
    }
}

#[pyfunction]
fn binom_coeff(n: u64, v: u64) -> PyResult<BigInt> {
    core::binom_coeff(n, v).map_err(to_py_err)
}

#[pyfunction]
fn truncated2_direct(a: BigInt, b: BigInt, n: u32) -> PyResult<BigInt> {
    Ok(core::truncated2_direct(&pair(a, b, n)?))
}

#[pyfunction]
#[pyo3(signature = (a, b, n, form = "mixed"))]
fn truncated2_series(a: BigInt, b: BigInt, n: u32, form: &str) -> PyResult<BigInt> {
    let form: core::SeriesForm = form.parse().map_err(to_py_err)?;
    Ok(core::truncated2_series(&pair(a, b, n)?, form))
}

#[pyfunction]
fn truncated3(a: BigInt, b: BigInt, c: BigInt, n: u32) -> PyResult<BigInt> {
    Ok(core::truncated3(&triple(a, b, c, n)?))
}

#[pyfunction]
fn gcd_normalize(values: Vec<BigInt>) -> PyResult<(Vec<BigInt>, BigInt)> {
    core::gcd_normalize(&values).map_err(to_py_err)
}

#[pyfunction]
fn padic_valuation(x: BigInt, p: u32) -> PyResult<PyValuation> {
    Ok(core::padic_valuation(&x, prime(p)?).into())
}

#[pyfunction]
fn factored_u2(a: BigInt, b: BigInt, n: u32) -> PyResult<BigInt> {
    core::factored_u2(&pair(a, b, n)?).map_err(to_py_err)
}

#[pyfunction]
fn trinomial_rhs_factored(a: BigInt, b: BigInt, c: BigInt, n: u32) -> PyResult<BigInt> {
    core::trinomial_rhs_factored(&triple(a, b, c, n)?).map_err(to_py_err)
}

#[pyfunction]
fn quadratic_form_mod(da: u64, db: u64, n: u32) -> PyResult<u64> {
    Ok(core::quadratic_form_mod(da, db, prime(n)?))
}

#[pyfunction]
fn u2_mod(a_res: u64, b_res: u64, n: u32, m: u64) -> PyResult<u64> {
    core::u2_mod(a_res, b_res, prime(n)?, m).map_err(to_py_err)
}

#[pyfunction]
fn binomial_equation_verdict(a: BigInt, b: BigInt, n: u32) -> PyResult<PyVerdict> {
    Ok(PyVerdict {
        inner: core::binomial_equation_verdict(&pair(a, b, n)?),
    })
}

#[pyfunction]
fn necessary_conditions_2<'py>(py: Python<'py>, a: BigInt, b: BigInt, n: u32) -> PyResult<Bound<'py, PyAny>> {
    let report = core::necessary_conditions_2(&pair(a, b, n)?).map_err(to_py_err)?;
    json_to_py(py, &report)
}

/// `("A", None)` or `(variable, rho)`; `rho` is `None` for a zero variable.
#[pyfunction]
fn classify_divisibility_case(a: BigInt, b: BigInt, c: BigInt, n: u32) -> PyResult<(String, Option<u64>)> {
    match core::classify_divisibility_case(&triple(a, b, c, n)?).map_err(to_py_err)? {
        core::DivisibilityCase::CaseA => Ok(("A".into(), None)),
        core::DivisibilityCase::CaseB { variable, rho } => Ok((variable.name().into(), rho.finite())),
    }
}

#[pyfunction]
fn case_a_verdict(a: BigInt, b: BigInt, c: BigInt, n: u32) -> PyResult<PyVerdict> {
    let inner = core::case_a_verdict(&triple(a, b, c, n)?).map_err(to_py_err)?;
    Ok(PyVerdict { inner })
}

#[pyfunction]
fn case_b_exponents(rho_c: u64, n: u32) -> PyResult<PyExponentProfile> {
    let e = core::case_b_exponents(rho_c, prime(n)?).map_err(to_py_err)?;
    Ok(PyExponentProfile {
        rho_c: e.rho_c,
        rho_beta: e.rho_beta,
        rho_q: e.rho_q,
    })
}

#[pyfunction]
fn case_b_consistency_check<'py>(
    py: Python<'py>,
    a: BigInt,
    b: BigInt,
    c: BigInt,
    n: u32,
) -> PyResult<Bound<'py, PyAny>> {
    let report = core::case_b_consistency_check(&triple(a, b, c, n)?).map_err(to_py_err)?;
    let out = json_to_py(py, &report)?;
    out.cast::<PyDict>()?.set_item("exponents_match", report.exponents_match())?;
    Ok(out)
}

#[pyfunction]
#[pyo3(signature = (n, k = 2, case_a = true, workers = 0, budget_cells = None))]
fn scan_divisibility(
    py: Python<'_>,
    n: u32,
    k: u32,
    case_a: bool,
    workers: usize,
    budget_cells: Option<u128>,
) -> PyResult<PyScanReport> {
    let constraints = if case_a {
        ScanConstraints::case_a()
    } else {
        ScanConstraints::unconstrained()
    };
    let options = ScanOptions {
        budget_cells: budget_cells.unwrap_or(core::DEFAULT_BUDGET_CELLS),
        workers,
    };
    let n = prime(n)?;
    let inner = py
        .detach(|| core::scan_divisibility(n, k, constraints, options))
        .map_err(to_py_err)?;
    Ok(PyScanReport { inner })
}

#[pyfunction]
fn scan_quadratic<'py>(py: Python<'py>, n: u32) -> PyResult<Bound<'py, PyAny>> {
    let table = core::scan_quadratic(prime(n)?);
    let out = json_to_py(py, &table)?;
    out.cast::<PyDict>()?.set_item("zero_set", table.zero_set())?;
    Ok(out)
}

/// Runs the claim suite; returns a list of outcome dicts.
#[pyfunction]
#[pyo3(signature = (full = false, claim = None, seed = 2026))]
fn verify<'py>(py: Python<'py>, full: bool, claim: Option<&str>, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let only = claim
        .map(|key| ClaimId::from_key(key).ok_or_else(|| PyValueError::new_err(format!("unknown claim {key:?}"))))
        .transpose()?;
    let config = if full { SuiteConfig::full(seed) } else { SuiteConfig::quick(seed) };
    let outcomes = py.detach(|| run_suite(&config, only));
    json_to_py(py, &outcomes)
}

#[pymodule]
fn truncbin(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("PreconditionError", py.get_type::<PreconditionError>())?;
    m.add("BudgetError", py.get_type::<BudgetError>())?;
    m.add_class::<PyValuation>()?;
    m.add_class::<PyVerdict>()?;
    m.add_class::<PyExponentProfile>()?;
    m.add_class::<PyScanReport>()?;
    m.add_function(wrap_pyfunction!(binom_coeff, m)?)?;
    m.add_function(wrap_pyfunction!(truncated2_direct, m)?)?;
    m.add_function(wrap_pyfunction!(truncated2_series, m)?)?;
    m.add_function(wrap_pyfunction!(truncated3, m)?)?;
    m.add_function(wrap_pyfunction!(gcd_normalize, m)?)?;
    m.add_function(wrap_pyfunction!(padic_valuation, m)?)?;
    m.add_function(wrap_pyfunction!(factored_u2, m)?)?;
    m.add_function(wrap_pyfunction!(trinomial_rhs_factored, m)?)?;
    m.add_function(wrap_pyfunction!(quadratic_form_mod, m)?)?;
    m.add_function(wrap_pyfunction!(u2_mod, m)?)?;
    m.add_function(wrap_pyfunction!(binomial_equation_verdict, m)?)?;
    m.add_function(wrap_pyfunction!(necessary_conditions_2, m)?)?;
    m.add_function(wrap_pyfunction!(classify_divisibility_case, m)?)?;
    m.add_function(wrap_pyfunction!(case_a_verdict, m)?)?;
    m.add_function(wrap_pyfunction!(case_b_exponents, m)?)?;
    m.add_function(wrap_pyfunction!(case_b_consistency_check, m)?)?;
    m.add_function(wrap_pyfunction!(scan_divisibility, m)?)?;
    m.add_function(wrap_pyfunction!(scan_quadratic, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
