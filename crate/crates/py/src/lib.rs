//! Python bindings for `discmax`.

use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyAny;

use discmax::corpus::{self, GeneratorSpec, Kind};
use discmax::czdecomp::{cz_decompose, CZParams};
use discmax::maxops::{self, CenteredDivisor, Operator, OperatorConfig, Profile};
use discmax::seq::{FiniteSequence, IntInterval};
use discmax::verify::{self, CheckId, Corpus, RatioId, SearchConfig, VerifyConfig};
use discmax::Error;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io { .. } => PyOSError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn json_to_py<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

fn config(divisor: &str, min_level: u32, singletons: bool) -> PyResult<OperatorConfig> {
    let centered_divisor: CenteredDivisor = divisor.parse().map_err(to_py)?;
    Ok(OperatorConfig {
        centered_divisor,
        dyadic_min_level: min_level,
        include_singleton_intervals: singletons,
    })
}

fn operator(name: &str) -> PyResult<Operator> {
    name.parse().map_err(to_py)
}

/// A finitely supported real sequence `a(offset + k) = values[k]`.
#[pyclass(name = "Sequence", module = "discmax", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PySequence {
    inner: FiniteSequence,
}

#[pymethods]
impl PySequence {
    #[new]
    #[pyo3(signature = (offset, values))]
    fn new(offset: i64, values: Vec<f64>) -> PyResult<Self> {
        Ok(PySequence {
            inner: FiniteSequence::new(offset, values).map_err(to_py)?,
        })
    }

    #[staticmethod]
    fn delta(at: i64, height: f64) -> PyResult<Self> {
        Ok(PySequence {
            inner: FiniteSequence::delta(at, height).map_err(to_py)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PySequence {
            inner: FiniteSequence::from_json(text).map_err(to_py)?,
        })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn offset(&self) -> i64 {
        self.inner.offset()
    }

    #[getter]
    fn values(&self) -> Vec<f64> {
        self.inner.values().to_vec()
    }

    /// `(lo, hi)` of the nonzero entries, or `None`.
    #[getter]
    fn support(&self) -> Option<(i64, i64)> {
        self.inner.support().map(|s| (s.lo(), s.hi()))
    }

    fn at(&self, m: i64) -> f64 {
        self.inner.at(m)
    }

    fn l1_norm(&self) -> f64 {
        self.inner.l1_norm()
    }

    fn sup_norm(&self) -> f64 {
        self.inner.sup_norm()
    }

    fn lp_power(&self, p: f64) -> PyResult<f64> {
        self.inner.lp_power(p).map_err(to_py)
    }

    fn layer_cake_power(&self, p: f64) -> PyResult<f64> {
        self.inner.layer_cake_power(p).map_err(to_py)
    }

    fn distribution_count(&self, lam: f64) -> PyResult<u64> {
        self.inner.distribution_count(lam).map_err(to_py)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Sequence(offset={}, values={:?})", self.inner.offset(), self.inner.values())
    }
}

/// `op(a)(m)` for op in centered, uncentered, dyadic, sharp.
#[pyfunction]
#[pyo3(signature = (op, a, m, *, divisor = "2r+1", min_level = 1, singletons = true))]
fn evaluate(op: &str, a: &PySequence, m: i64, divisor: &str, min_level: u32, singletons: bool) -> PyResult<f64> {
    Ok(operator(op)?.eval(&a.inner, m, &config(divisor, min_level, singletons)?))
}

/// `[(m, op(a)(m))]` over `window` (default: the certified window).
#[pyfunction]
#[pyo3(signature = (op, a, window = None, *, divisor = "2r+1", min_level = 1, singletons = true))]
fn evaluate_window(
    op: &str,
    a: &PySequence,
    window: Option<(i64, i64)>,
    divisor: &str,
    min_level: u32,
    singletons: bool,
) -> PyResult<Vec<(i64, f64)>> {
    let op = operator(op)?;
    let cfg = config(divisor, min_level, singletons)?;
    let window = match window {
        Some((lo, hi)) => Some(IntInterval::new(lo, hi).map_err(to_py)?),
        None => verify::certified_window(&a.inner),
    };
    let profile = Profile::new(&a.inner, op, &cfg);
    Ok(window
        .into_iter()
        .flat_map(|w| w.iter())
        .map(|m| (m, profile.at(m)))
        .collect())
}

#[pyfunction]
fn certified_window(a: &PySequence) -> Option<(i64, i64)> {
    verify::certified_window(&a.inner).map(|w| (w.lo(), w.hi()))
}

/// Exact `|{m : op(a)(m) > lam}|`.
#[pyfunction]
#[pyo3(signature = (op, a, lam, *, divisor = "2r+1", min_level = 1, singletons = true))]
fn superlevel_count(op: &str, a: &PySequence, lam: f64, divisor: &str, min_level: u32, singletons: bool) -> PyResult<u64> {
    verify::superlevel_count(operator(op)?, &a.inner, lam, &config(divisor, min_level, singletons)?).map_err(to_py)
}

/// `(value, tail_bound)` for `Σ_m op(a)(m)^p`.
#[pyfunction]
#[pyo3(signature = (op, a, p, eps = 1e-6, *, divisor = "2r+1", min_level = 1, singletons = true))]
fn lp_power_certified(
    op: &str,
    a: &PySequence,
    p: f64,
    eps: f64,
    divisor: &str,
    min_level: u32,
    singletons: bool,
) -> PyResult<(f64, f64)> {
    let s = verify::lp_power_certified(operator(op)?, &a.inner, p, eps, &config(divisor, min_level, singletons)?)
        .map_err(to_py)?;
    Ok((s.value, s.tail_bound))
}

#[pyfunction]
fn bmo_norm(a: &PySequence) -> f64 {
    maxops::bmo_norm(&a.inner, &OperatorConfig::default())
}

#[pyfunction]
fn med_bmo_norm(a: &PySequence) -> f64 {
    maxops::med_bmo_norm(&a.inner)
}

/// Selected intervals as dicts `lo, hi, avg, parent_lo, parent_hi, parent_avg`.
#[pyfunction]
#[pyo3(signature = (a, t, alpha = 0.0, min_level = 0))]
fn cz<'py>(py: Python<'py>, a: &PySequence, t: f64, alpha: f64, min_level: u32) -> PyResult<Bound<'py, PyAny>> {
    let params = CZParams {
        min_level,
        ..CZParams::new(t, alpha)
    };
    let r = cz_decompose(&a.inner, &params).map_err(to_py)?;
    json_to_py(py, &r.to_json())
}

/// Run one check over a list of sequences; returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (check_id, sequences, descriptor = "python"))]
fn run_check<'py>(
    py: Python<'py>,
    check_id: &str,
    sequences: Vec<PyRef<'py, PySequence>>,
    descriptor: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let corpus = Corpus::new(descriptor, sequences.iter().map(|s| s.inner.clone()).collect());
    let cfg = VerifyConfig::default();
    let report = py
        .detach(|| verify::run_check(check_id, &corpus, &cfg))
        .map_err(to_py)?;
    json_to_py(py, &report.to_json())
}

#[pyfunction]
fn check_ids() -> Vec<&'static str> {
    CheckId::ALL.iter().map(|c| c.name()).collect()
}

/// `(best_ratio, witness)` from seeded hill climbing.
#[pyfunction]
#[pyo3(signature = (ratio_id, *, seed = 1, restarts = 4, iterations = 200, width = 8, p = 2.0))]
fn estimate_constant(
    py: Python<'_>,
    ratio_id: &str,
    seed: u64,
    restarts: u32,
    iterations: u32,
    width: usize,
    p: f64,
) -> PyResult<(f64, PySequence)> {
    let id: RatioId = ratio_id.parse().map_err(to_py)?;
    let search = SearchConfig {
        seed,
        restarts,
        iterations,
        width,
        p,
        ..SearchConfig::default()
    };
    let r = py.detach(|| verify::estimate_constant(id, &search)).map_err(to_py)?;
    Ok((r.best_ratio, PySequence { inner: r.witness }))
}

#[pyfunction]
#[pyo3(signature = (kind, width, amplitude, seed, density = 1.0))]
fn generate(kind: &str, width: usize, amplitude: f64, seed: u64, density: f64) -> PyResult<PySequence> {
    let kind: Kind = kind.parse().map_err(to_py)?;
    let spec = GeneratorSpec {
        density,
        ..GeneratorSpec::new(kind, width, amplitude, seed)
    };
    Ok(PySequence {
        inner: corpus::generate(&spec).map_err(to_py)?,
    })
}

/// The built-in corpus manifest as JSON text.
#[pyfunction]
fn standard_manifest() -> String {
    corpus::manifest_to_json(&corpus::standard_corpus())
}

/// Sequences of a manifest given as JSON text.
#[pyfunction]
fn materialize(manifest: &str) -> PyResult<Vec<PySequence>> {
    let specs = corpus::manifest_from_json(manifest).map_err(to_py)?;
    Ok(corpus::materialize(&specs)
        .map_err(to_py)?
        .into_iter()
        .map(|inner| PySequence { inner })
        .collect())
}

#[pymodule]
#[pyo3(name = "discmax")]
fn py_discmax(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySequence>()?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate_window, m)?)?;
    m.add_function(wrap_pyfunction!(certified_window, m)?)?;
    m.add_function(wrap_pyfunction!(superlevel_count, m)?)?;
    m.add_function(wrap_pyfunction!(lp_power_certified, m)?)?;
    m.add_function(wrap_pyfunction!(bmo_norm, m)?)?;
    m.add_function(wrap_pyfunction!(med_bmo_norm, m)?)?;
    m.add_function(wrap_pyfunction!(cz, m)?)?;
    m.add_function(wrap_pyfunction!(run_check, m)?)?;
    m.add_function(wrap_pyfunction!(check_ids, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_constant, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(standard_manifest, m)?)?;
    m.add_function(wrap_pyfunction!(materialize, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
