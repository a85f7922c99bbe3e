//! Python bindings. Exact values cross the boundary as `p/q` strings, reports
//! as `Report` objects carrying their JSON.

use logbehave::audit::{self, AsymOrder};
use logbehave::kernel::{fmt_float, fmt_rational, IntPoly};
use logbehave::logbehavior::{self, Direction, PuiseuxFit, RootMode};
use logbehave::recurrence::{catalog, roots_real, PRecurrence};
use logbehave::report::AnalysisReport;
use logbehave::sequences::{self, SequenceName, SequenceStore, SequenceValues};
use logbehave::Error;
use pyo3::exceptions::{PyIndexError, PyOSError, PyValueError};
use pyo3::prelude::*;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Coverage(_) => PyIndexError::new_err(e.to_string()),
        Error::Io(_) => PyOSError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn name(seq: &str) -> PyResult<SequenceName> {
    seq.parse().map_err(py_err)
}

fn values(seq: &str, start: i64, end: i64) -> PyResult<SequenceValues> {
    sequences::table(name(seq)?, start, end).map_err(py_err)
}

fn known(seq: &str) -> PyResult<PRecurrence> {
    match name(seq)? {
        SequenceName::A => Ok(catalog::a_recurrence()),
        SequenceName::B => Ok(catalog::b_recurrence()),
        SequenceName::Apery => Ok(catalog::apery_recurrence()),
        SequenceName::S => Err(PyValueError::new_err("no known recurrence for s")),
    }
}

/// Outcome of a certification or audit.
#[pyclass(frozen, module = "logbehave_py")]
struct Report {
    inner: AnalysisReport,
}

#[pymethods]
impl Report {
    #[getter]
    fn sequence(&self) -> String {
        self.inner.subject.sequence.clone()
    }

    #[getter]
    fn property(&self) -> String {
        self.inner.subject.property.clone()
    }

    #[getter]
    fn range(&self) -> (i64, i64) {
        (self.inner.range[0], self.inner.range[1])
    }

    /// True when the property holds on the whole range.
    #[getter]
    fn holds(&self) -> bool {
        self.inner.holds()
    }

    /// True for `holds` or an eventual threshold.
    #[getter]
    fn passed(&self) -> bool {
        self.inner.passed()
    }

    #[getter]
    fn first_violation(&self) -> Option<(i64, String)> {
        self.inner.first_violation().map(|(n, w)| (n, w.to_string()))
    }

    #[getter]
    fn notes(&self) -> Vec<String> {
        self.inner.notes.clone()
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn summary(&self) -> String {
        self.inner.summary()
    }

    fn __repr__(&self) -> String {
        format!("<Report {}>", self.inner.summary())
    }
}

fn report(r: logbehave::Result<AnalysisReport>) -> PyResult<Report> {
    r.map(|inner| Report { inner }).map_err(py_err)
}

/// Exact terms `[(n, "p/q"), ...]` of a, b, apery or s.
#[pyfunction]
fn eval(seq: &str, start: i64, end: i64) -> PyResult<Vec<(i64, String)>> {
    Ok(values(seq, start, end)?.iter().map(|(n, v)| (n, fmt_rational(v))).collect())
}

#[pyfunction]
fn char_poly(seq: &str) -> PyResult<String> {
    Ok(known(seq)?.characteristic_poly().display_in("x"))
}

/// Real roots of the polynomial with ascending integer coefficients, as
/// `(kind, exact form or None, decimal)`.
#[pyfunction]
#[pyo3(signature = (coeffs, precision=256, digits=30))]
fn roots(coeffs: Vec<i64>, precision: u32, digits: usize) -> PyResult<Vec<(String, Option<String>, String)>> {
    let res = roots_real(&IntPoly::from_i64s(&coeffs), precision).map_err(py_err)?;
    Ok(res.roots.iter().map(|r| (r.kind.as_str().to_string(), r.exact.clone(), fmt_float(&r.value, digits))).collect())
}

#[pyfunction]
fn verify_recurrence(seq: &str, start: i64, end: i64) -> PyResult<Report> {
    let rec = known(seq)?;
    let vals = values(seq, start, end + rec.order() as i64)?;
    report(logbehave::recurrence::verify_recurrence(&rec, &vals, start, end))
}

#[pyfunction]
fn classify(seq: &str, start: i64, end: i64) -> PyResult<Report> {
    report(logbehavior::classify_log_behavior(&values(seq, start, end)?, end))
}

#[pyfunction]
#[pyo3(signature = (seq, start, end, direction="increasing"))]
fn certify_ratio(seq: &str, start: i64, end: i64, direction: &str) -> PyResult<Report> {
    let dir: Direction = direction.parse().map_err(py_err)?;
    report(logbehavior::monotone_ratio_certify(&values(seq, start, end + 1)?, dir, start, end))
}

#[pyfunction]
#[pyo3(signature = (seq, start, end, mode="auto"))]
fn certify_nth_root(seq: &str, start: i64, end: i64, mode: &str) -> PyResult<Report> {
    let mode: RootMode = mode.parse().map_err(py_err)?;
    report(logbehavior::nth_root_ratio_certify(&values(seq, start - 1, end + 1)?, start, end, mode))
}

type FitTuple = (f64, f64, f64, (i64, i64), Option<u32>, Option<String>);

/// `(c, alpha, beta, window, r, flavor)`; `r` and `flavor` are None when the
/// fitted parameters are outside the r-order rule.
#[pyfunction]
#[pyo3(signature = (seq, start, end, window=None, beta=None, precision=256))]
fn fit_puiseux(
    seq: &str,
    start: i64,
    end: i64,
    window: Option<(i64, i64)>,
    beta: Option<f64>,
    precision: u32,
) -> PyResult<FitTuple> {
    let r2 = logbehavior::ratio2_seq(&values(seq, start, end + 2)?).map_err(py_err)?;
    let fit = logbehavior::puiseux_fit(&r2, window, beta, precision).map_err(py_err)?;
    let order = logbehavior::r_order(&fit).ok();
    Ok((
        fit.c.to_f64(),
        fit.alpha.to_f64(),
        fit.beta.to_f64(),
        fit.window,
        order.map(|o| o.r),
        order.map(|o| o.flavor.to_string()),
    ))
}

/// r-order from given parameters: `(r, flavor)`.
#[pyfunction]
fn r_order(c: f64, alpha: f64, beta: f64) -> PyResult<(u32, String)> {
    let o = logbehavior::r_order(&PuiseuxFit::from_params(c, alpha, beta)).map_err(py_err)?;
    Ok((o.r, o.flavor.to_string()))
}

#[pyfunction]
fn audit_bounds(seq: &str, start: i64, end: i64) -> PyResult<Report> {
    let store = SequenceStore::new();
    match name(seq)? {
        SequenceName::A => report(audit::a_bounds_audit(&store, start, end)),
        SequenceName::B => report(audit::b_bounds_audit(&store, start, end)),
        _ => Err(PyValueError::new_err("bounds are audited for a and b only")),
    }
}

/// `(exact, formula, relative_error)` for the Apéry asymptotic at `n`.
#[pyfunction]
#[pyo3(signature = (n, order="corrected", precision=256, digits=30))]
fn apery_asymptotic(n: i64, order: &str, precision: u32, digits: usize) -> PyResult<(String, String, f64)> {
    let order: AsymOrder = order.parse().map_err(py_err)?;
    let ev = audit::apery_asymptotic(n, order, precision).map_err(py_err)?;
    Ok((fmt_rational(&ev.exact), fmt_float(&ev.formula, digits), ev.relative_error().to_f64()))
}

/// Runs the command-line front end in-process: `(exit_code, stdout, stderr)`.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("logbehave".to_string()).chain(args);
    let code = logbehave::cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8_lossy(&out).into_owned(), String::from_utf8_lossy(&err).into_owned())
}

#[pymodule]
fn logbehave_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Report>()?;
    m.add_function(wrap_pyfunction!(eval, m)?)?;
    m.add_function(wrap_pyfunction!(char_poly, m)?)?;
    m.add_function(wrap_pyfunction!(roots, m)?)?;
    m.add_function(wrap_pyfunction!(verify_recurrence, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(certify_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(certify_nth_root, m)?)?;
    m.add_function(wrap_pyfunction!(fit_puiseux, m)?)?;
    m.add_function(wrap_pyfunction!(r_order, m)?)?;
    m.add_function(wrap_pyfunction!(audit_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(apery_asymptotic, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
