//! Python bindings. Structured results (reports, orbits, table entries) are
//! returned as plain dicts built from their JSON form; matrices and characters
//! are classes.

use moduli_core::characters::{self, SlicePoint};
use moduli_core::complex::Complex;
use moduli_core::config;
use moduli_core::dynamics::{self, OrbitParams, Window, Word};
use moduli_core::{families, filter, io, moebius, tables};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyBytes;

fn err(e: moduli_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Converts through JSON so Python sees the same schema as the CLI.
fn to_py<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let s = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (s,))
}

#[pyclass(name = "Config", from_py_object)]
#[derive(Clone)]
struct PyConfig {
    inner: config::Config,
}

#[pymethods]
impl PyConfig {
    #[new]
    #[pyo3(signature = (tol=config::DEFAULT_TOL, p_max=config::DEFAULT_P_MAX, max_iter=config::DEFAULT_MAX_ITER,
        search_depth=config::DEFAULT_SEARCH_DEPTH, zero_eps=config::DEFAULT_ZERO_EPS,
        cycle_window=config::DEFAULT_CYCLE_WINDOW, threads=None, use_dynamics=true))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        tol: f64,
        p_max: u32,
        max_iter: usize,
        search_depth: usize,
        zero_eps: f64,
        cycle_window: usize,
        threads: Option<usize>,
        use_dynamics: bool,
    ) -> PyResult<Self> {
        let inner = config::Config {
            tol,
            p_max,
            max_iter,
            search_depth,
            zero_eps,
            cycle_window,
            threads: threads.unwrap_or_else(config::default_threads),
            use_dynamics,
        };
        inner.validate().map_err(err)?;
        Ok(PyConfig { inner })
    }

    #[getter]
    fn tol(&self) -> f64 {
        self.inner.tol
    }

    #[getter]
    fn p_max(&self) -> u32 {
        self.inner.p_max
    }

    #[getter]
    fn threads(&self) -> usize {
        self.inner.threads
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.inner)
    }
}

fn cfg(c: Option<PyConfig>) -> config::Config {
    c.map(|c| c.inner).unwrap_or_default()
}

#[pyclass(name = "MoebiusMap", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyMoebius {
    inner: moebius::MoebiusMap,
}

#[pymethods]
impl PyMoebius {
    /// Normalized to determinant 1.
    #[new]
    fn new(a: Complex, b: Complex, c: Complex, d: Complex) -> PyResult<Self> {
        moebius::MoebiusMap::new(a, b, c, d).map(|inner| PyMoebius { inner }).map_err(err)
    }

    #[staticmethod]
    fn identity() -> Self {
        PyMoebius {
            inner: moebius::MoebiusMap::identity(),
        }
    }

    fn entries(&self) -> (Complex, Complex, Complex, Complex) {
        let m = self.inner;
        (m.a, m.b, m.c, m.d)
    }

    fn trace(&self) -> Complex {
        self.inner.trace()
    }

    fn det(&self) -> Complex {
        self.inner.det()
    }

    fn inverse(&self) -> Self {
        PyMoebius {
            inner: self.inner.inverse(),
        }
    }

    /// `h self h^-1`.
    fn conjugate_by(&self, h: &PyMoebius) -> Self {
        PyMoebius {
            inner: self.inner.conjugate_by(&h.inner),
        }
    }

    fn __mul__(&self, other: &PyMoebius) -> Self {
        PyMoebius {
            inner: self.inner * other.inner,
        }
    }

    #[pyo3(signature = (tol=config::DEFAULT_TOL, p_max=config::DEFAULT_P_MAX))]
    fn classify<'py>(&self, py: Python<'py>, tol: f64, p_max: u32) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &moebius::classify(&self.inner, tol, p_max))
    }

    fn __repr__(&self) -> String {
        let m = self.inner;
        format!("MoebiusMap({}, {}, {}, {})", m.a, m.b, m.c, m.d)
    }
}

#[pyclass(name = "PrincipalCharacter", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyCharacter {
    inner: characters::PrincipalCharacter,
}

#[pymethods]
impl PyCharacter {
    #[new]
    fn new(gamma: Complex, beta: Complex, beta_tilde: Complex) -> Self {
        PyCharacter {
            inner: characters::PrincipalCharacter::new(gamma, beta, beta_tilde),
        }
    }

    #[getter]
    fn gamma(&self) -> Complex {
        self.inner.gamma
    }

    #[getter]
    fn beta(&self) -> Complex {
        self.inner.beta
    }

    #[getter]
    fn beta_tilde(&self) -> Complex {
        self.inner.beta_tilde
    }

    /// Equal up to `tol`, allowing the two generators to be swapped.
    #[pyo3(signature = (other, tol=config::DEFAULT_TOL))]
    fn matches(&self, other: &PyCharacter, tol: f64) -> bool {
        self.inner.matches(&other.inner, tol)
    }

    fn __repr__(&self) -> String {
        let c = self.inner;
        format!("PrincipalCharacter({}, {}, {})", c.gamma, c.beta, c.beta_tilde)
    }
}

fn wrap(inner: characters::PrincipalCharacter) -> PyCharacter {
    PyCharacter { inner }
}

#[pyfunction]
fn character_of(f: &PyMoebius, g: &PyMoebius) -> PyCharacter {
    wrap(characters::character_of(&f.inner, &g.inner))
}

#[pyfunction]
fn zext_characters(gamma: Complex, beta: Complex) -> (PyCharacter, PyCharacter) {
    let (a, b) = characters::zext_characters(&SlicePoint::new(gamma, beta));
    (wrap(a), wrap(b))
}

#[pyfunction]
fn subgroup_character(gamma: Complex, beta: Complex) -> PyCharacter {
    wrap(characters::subgroup_character(&SlicePoint::new(gamma, beta)))
}

#[pyfunction]
#[pyo3(signature = (gamma, beta, beta_tilde=Complex::new(-4.0, 0.0), config=None))]
fn discreteness_filter<'py>(
    py: Python<'py>,
    gamma: Complex,
    beta: Complex,
    beta_tilde: Complex,
    config: Option<PyConfig>,
) -> PyResult<Bound<'py, PyAny>> {
    let ch = characters::PrincipalCharacter::new(gamma, beta, beta_tilde);
    to_py(py, &filter::discreteness_filter(&ch, &cfg(config)))
}

#[pyfunction]
#[pyo3(signature = (gamma, beta, beta_tilde, tol=config::DEFAULT_TOL))]
fn complex_distance(gamma: Complex, beta: Complex, beta_tilde: Complex, tol: f64) -> PyResult<Complex> {
    let ch = characters::PrincipalCharacter::new(gamma, beta, beta_tilde);
    moebius::complex_distance(&ch, tol).map(|d| d.as_complex()).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (gamma, beta, tol=config::DEFAULT_TOL))]
fn realize(gamma: Complex, beta: Complex, tol: f64) -> (PyMoebius, PyMoebius) {
    let r = families::realize(&SlicePoint::new(gamma, beta), tol);
    (PyMoebius { inner: r.f }, PyMoebius { inner: r.g })
}

fn word(s: &str) -> PyResult<Word> {
    s.parse().map_err(err)
}

#[pyfunction]
#[pyo3(signature = (gamma, beta, word_str, config=None))]
fn iterate<'py>(
    py: Python<'py>,
    gamma: Complex,
    beta: Complex,
    word_str: &str,
    config: Option<PyConfig>,
) -> PyResult<Bound<'py, PyAny>> {
    let params = OrbitParams::from_config(beta, &cfg(config));
    to_py(py, &dynamics::iterate(beta, gamma, &word(word_str)?, &params))
}

/// First certificate found, or `None`.
#[pyfunction]
#[pyo3(signature = (gamma, beta, config=None))]
fn semigroup_search<'py>(
    py: Python<'py>,
    gamma: Complex,
    beta: Complex,
    config: Option<PyConfig>,
) -> PyResult<Bound<'py, PyAny>> {
    let c = cfg(config);
    let params = OrbitParams::from_config(beta, &c);
    to_py(py, &dynamics::semigroup_search(beta, gamma, c.search_depth, &params))
}

/// Binary PGM of the slice `(gamma, beta, -4)` over `window = (re_min, re_max, im_min, im_max)`.
#[pyfunction]
#[pyo3(signature = (beta, window, width, height, config=None))]
fn scan_pgm<'py>(
    py: Python<'py>,
    beta: Complex,
    window: (f64, f64, f64, f64),
    width: usize,
    height: usize,
    config: Option<PyConfig>,
) -> PyResult<Bound<'py, PyBytes>> {
    let (a, b, c, d) = window;
    let w = Window::new(a, b, c, d).map_err(err)?;
    let c = cfg(config);
    let raster = py.detach(|| dynamics::scan_slice(beta, w, width, height, &c)).map_err(err)?;
    Ok(PyBytes::new(py, &io::pgm_bytes(&raster)))
}

#[pyfunction]
#[pyo3(signature = (p_max=config::DEFAULT_P_MAX))]
fn exceptional_tables(py: Python<'_>, p_max: u32) -> PyResult<Bound<'_, PyAny>> {
    to_py(py, &tables::exceptional_tables(p_max))
}

#[pyfunction]
fn regenerate_table_entry(order_g: u32, order_f: u32, sin2_theta: f64, k_f: u32, k_g: u32) -> PyResult<PyCharacter> {
    tables::regenerate_table_entry(order_g, order_f, sin2_theta, k_f, k_g).map(wrap).map_err(err)
}

#[pyfunction]
fn dehn_surgery_point(py: Python<'_>, p: u32) -> PyResult<Bound<'_, PyAny>> {
    to_py(py, &families::dehn_surgery_point(p).map_err(err)?)
}

#[pyfunction]
fn dehn_gamma_limit() -> Complex {
    families::dehn_gamma_limit()
}

#[pymodule]
fn moduli(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyConfig>()?;
    m.add_class::<PyMoebius>()?;
    m.add_class::<PyCharacter>()?;
    m.add_function(wrap_pyfunction!(character_of, m)?)?;
    m.add_function(wrap_pyfunction!(zext_characters, m)?)?;
    m.add_function(wrap_pyfunction!(subgroup_character, m)?)?;
    m.add_function(wrap_pyfunction!(discreteness_filter, m)?)?;
    m.add_function(wrap_pyfunction!(complex_distance, m)?)?;
    m.add_function(wrap_pyfunction!(realize, m)?)?;
    m.add_function(wrap_pyfunction!(iterate, m)?)?;
    m.add_function(wrap_pyfunction!(semigroup_search, m)?)?;
    m.add_function(wrap_pyfunction!(scan_pgm, m)?)?;
    m.add_function(wrap_pyfunction!(exceptional_tables, m)?)?;
    m.add_function(wrap_pyfunction!(regenerate_table_entry, m)?)?;
    m.add_function(wrap_pyfunction!(dehn_surgery_point, m)?)?;
    m.add_function(wrap_pyfunction!(dehn_gamma_limit, m)?)?;
    Ok(())
}
