//! Python bindings for the stark-sic pipeline.

use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use stark_sic::num::fmt_float;
use stark_sic::pipeline::{self, Line, RunConfig};
use stark_sic::recognition::RecognizedPolynomial;
use stark_sic::sic::FiducialCertificate;
use stark_sic::{fixtures, lfun, quadfield, rayclass, Error};

create_exception!(starksic, StageError, PyRuntimeError);

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Config(_) | Error::Field(_) | Error::Unsupported(_) | Error::Format(_) | Error::Io(_) => PyValueError::new_err(e.to_string()),
        _ => StageError::new_err(e.to_string()),
    }
}

#[pyclass(frozen, get_all, module = "starksic")]
struct Field {
    d: u64,
    delta: u64,
    radicand: u64,
    discriminant: u64,
    fundamental_unit: String,
    zauner_unit: String,
    class_number: u64,
    narrow_class_number: u64,
}

#[pymethods]
impl Field {
    #[new]
    fn new(d: u64) -> PyResult<Self> {
        let c = quadfield::make_field(d).map_err(to_py)?;
        Ok(Field {
            d: c.d,
            delta: c.delta,
            radicand: c.radicand,
            discriminant: c.discriminant,
            fundamental_unit: c.fundamental_unit.to_string(),
            zauner_unit: c.zauner_unit.to_string(),
            class_number: c.class_number,
            narrow_class_number: c.narrow_class_number,
        })
    }

    /// ε³ as a string; it generates the units ≡ 1 mod d.
    fn minimal_congruent_unit(&self) -> PyResult<String> {
        let c = quadfield::make_field(self.d).map_err(to_py)?;
        Ok(quadfield::minimal_congruent_unit(&c).map_err(to_py)?.to_string())
    }

    fn __repr__(&self) -> String {
        format!("Field(d={}, K=Q(sqrt({})), eps={})", self.d, self.radicand, self.zauner_unit)
    }
}

#[pyclass(frozen, module = "starksic")]
struct RayClassGroup {
    inner: rayclass::RayClassGroup,
}

#[pymethods]
impl RayClassGroup {
    #[new]
    fn new(d: u64) -> PyResult<Self> {
        let c = quadfield::make_field(d).map_err(to_py)?;
        Ok(RayClassGroup { inner: rayclass::build_ray_class_group(&c).map_err(to_py)? })
    }

    #[getter]
    fn invariants(&self) -> Vec<u64> {
        self.inner.invariants.clone()
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order
    }

    #[getter]
    fn r_index(&self) -> usize {
        self.inner.r_index
    }

    /// Class exponent k of A_{m,n}.
    fn amn_class(&self, m: i64, n: i64) -> PyResult<usize> {
        self.inner.amn_class(m, n).map_err(to_py)
    }

    fn fiber(&self, k: usize) -> Vec<(u64, u64)> {
        self.inner.fiber(k)
    }

    fn __repr__(&self) -> String {
        format!("RayClassGroup(d={}, invariants={:?})", self.inner.d, self.inner.invariants)
    }
}

#[pyclass(frozen, get_all, module = "starksic")]
struct ZetaTable {
    d: u64,
    precision: u32,
    /// Z_A'(0) as decimal strings, by class exponent
    zprime: Vec<String>,
    alpha: Vec<String>,
    antisymmetry_error: f64,
    max_l_at_zero: f64,
}

#[pyfunction]
#[pyo3(signature = (d, precision = 50))]
fn zeta_table(py: Python<'_>, d: u64, precision: u32) -> PyResult<ZetaTable> {
    let t = py
        .detach(move || -> stark_sic::Result<lfun::ZetaTable> {
            let c = quadfield::make_field(d)?;
            let g = rayclass::build_ray_class_group(&c)?;
            lfun::zeta_derivative_table(&c, &g, precision, None)
        })
        .map_err(to_py)?;
    let sig = precision as usize;
    Ok(ZetaTable {
        d,
        precision,
        zprime: t.zprime.iter().map(|z| fmt_float(z, sig)).collect(),
        alpha: t.alpha.iter().map(|z| fmt_float(z, sig)).collect(),
        antisymmetry_error: t.antisymmetry_error().to_f64(),
        max_l_at_zero: t.max_l_at_zero().to_f64(),
    })
}

#[pyclass(frozen, skip_from_py_object, module = "starksic")]
#[derive(Clone)]
struct Polynomial {
    inner: RecognizedPolynomial,
}

#[pymethods]
impl Polynomial {
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(Polynomial { inner: RecognizedPolynomial::from_text(text).map_err(to_py)? })
    }

    #[staticmethod]
    fn fixture(name: &str) -> PyResult<Self> {
        Ok(Polynomial { inner: fixtures::polynomial(name).map_err(to_py)? })
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree()
    }

    #[getter]
    fn role(&self) -> &'static str {
        self.inner.role.tag()
    }

    /// Coefficients in ascending order, as "p/r + q/r * sqrt(m)".
    #[getter]
    fn coefficients(&self) -> Vec<String> {
        self.inner.coeffs.iter().map(|c| c.to_fraction_string()).collect()
    }

    fn is_palindromic(&self) -> bool {
        self.inner.is_palindromic()
    }

    fn conj(&self) -> Self {
        Polynomial { inner: self.inner.conj() }
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Polynomial(role={}, d={}, degree={})", self.inner.role.tag(), self.inner.d, self.inner.degree())
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }
}

#[pyclass(frozen, get_all, module = "starksic")]
struct Recognition {
    precision: u32,
    f: Polynomial,
    g: Polynomial,
    gt: Polynomial,
    h: Polynomial,
    ht: Polynomial,
    signs: Vec<i8>,
    sign_strategy: String,
}

#[pyclass(frozen, get_all, module = "starksic")]
struct Certificate {
    d: u64,
    valid: bool,
    e_max: f64,
    norm_err: f64,
    precision: u32,
    lambda_: Option<u64>,
    /// entries as (re, im) decimal strings
    vector: Vec<(String, String)>,
    json: String,
}

#[pymethods]
impl Certificate {
    /// Entries rounded to Python complex numbers.
    fn vector_complex(&self) -> Vec<(f64, f64)> {
        self.vector.iter().map(|(a, b)| (a.parse().unwrap_or(f64::NAN), b.parse().unwrap_or(f64::NAN))).collect()
    }

    fn __repr__(&self) -> String {
        format!("Certificate(d={}, valid={}, e_max={:.3e})", self.d, self.valid, self.e_max)
    }
}

impl From<&FiducialCertificate> for Certificate {
    fn from(c: &FiducialCertificate) -> Self {
        let sig = c.digits as usize;
        Certificate {
            d: c.d,
            valid: c.valid,
            e_max: c.e_max.to_f64(),
            norm_err: c.norm_err.to_f64(),
            precision: c.digits,
            lambda_: c.lambda,
            vector: c.v.iter().map(|x| (fmt_float(&x.re, sig), fmt_float(&x.im, sig))).collect(),
            json: c.to_json().to_string(),
        }
    }
}

fn config(d: u64, precision: u32, sign_strategy: Option<&str>, max_precision: Option<u32>) -> PyResult<RunConfig> {
    let mut cfg = RunConfig::new(d);
    cfg.digits = precision;
    cfg.max_digits = max_precision.unwrap_or(cfg.max_digits).max(precision);
    if let Some(s) = sign_strategy {
        cfg.sign_strategy = Some(pipeline::parse_sign_strategy(s).map_err(to_py)?);
    }
    cfg.validate().map_err(to_py)?;
    Ok(cfg)
}

/// f, g, g̃, h, h̃ with automatic precision escalation.
#[pyfunction]
#[pyo3(signature = (d, precision = 50, sign_strategy = None, max_precision = None))]
fn recognize(py: Python<'_>, d: u64, precision: u32, sign_strategy: Option<&str>, max_precision: Option<u32>) -> PyResult<Recognition> {
    let cfg = config(d, precision, sign_strategy, max_precision)?;
    let r = py
        .detach(move || {
            let mut sink = |_: Line| {};
            let ctx = quadfield::make_field(cfg.d)?;
            let g = rayclass::build_ray_class_group(&ctx)?;
            pipeline::recognize(&cfg, &ctx, &g, &mut sink)
        })
        .map_err(to_py)?;
    let p = |x: &RecognizedPolynomial| Polynomial { inner: x.clone() };
    Ok(Recognition {
        precision: r.digits,
        f: p(&r.f),
        g: p(&r.g),
        gt: p(&r.gt),
        h: p(&r.h),
        ht: p(&r.ht),
        signs: r.signs.signs.clone(),
        sign_strategy: r.signs.strategy.clone(),
    })
}

/// Full pipeline ending in a certified fiducial.
#[pyfunction]
#[pyo3(signature = (d, precision = 50, sign_strategy = None, max_precision = None))]
fn fiducial(py: Python<'_>, d: u64, precision: u32, sign_strategy: Option<&str>, max_precision: Option<u32>) -> PyResult<Certificate> {
    let cfg = config(d, precision, sign_strategy, max_precision)?;
    let rep = py
        .detach(move || {
            let mut sink = |_: Line| {};
            pipeline::run_all(&cfg, &mut sink)
        })
        .map_err(to_py)?;
    Ok(Certificate::from(&rep.fiducial.cert))
}

/// Certify a fiducial given as text, one complex entry per line.
#[pyfunction]
fn verify(py: Python<'_>, d: u64, text: String) -> PyResult<Certificate> {
    let cert = py
        .detach(move || {
            let mut sink = |_: Line| {};
            pipeline::run_verify(d, &text, &mut sink)
        })
        .map_err(to_py)?;
    Ok(Certificate::from(&cert))
}

#[pyfunction]
fn fixture_text(name: &str) -> PyResult<&'static str> {
    fixtures::text(name).ok_or_else(|| PyValueError::new_err(format!("no fixture '{name}'")))
}

/// Run the command-line front end; returns (exit code, JSON lines).
#[pyfunction]
fn run_cli(py: Python<'_>, args: Vec<String>) -> (i32, Vec<String>) {
    py.detach(move || {
        let mut out = Vec::new();
        let argv = std::iter::once("stark-sic".to_string()).chain(args);
        let code = stark_sic::cli::run(argv, &mut out);
        (code, String::from_utf8_lossy(&out).lines().map(str::to_string).collect())
    })
}

#[pymodule]
fn starksic(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("StageError", m.py().get_type::<StageError>())?;
    m.add_class::<Field>()?;
    m.add_class::<RayClassGroup>()?;
    m.add_class::<ZetaTable>()?;
    m.add_class::<Polynomial>()?;
    m.add_class::<Recognition>()?;
    m.add_class::<Certificate>()?;
    m.add_function(wrap_pyfunction!(zeta_table, m)?)?;
    m.add_function(wrap_pyfunction!(recognize, m)?)?;
    m.add_function(wrap_pyfunction!(fiducial, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(fixture_text, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
