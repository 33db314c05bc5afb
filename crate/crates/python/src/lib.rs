//! Python bindings. Heavy solves release the GIL.

use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

use widom::asymptotics::{self, CompareOptions};
use widom::chebyshev::{self, Method, MinimaxResult, Solver};
use widom::cli;
use widom::elliptic;
use widom::geometry::{self, CompactSystem};
use widom::potential;

create_exception!(widom, WidomError, PyException);

fn to_py<T>(r: widom::Result<T>) -> PyResult<T> {
    r.map_err(|e| WidomError::new_err(e.to_string()))
}

/// One component of a compact set: a real interval, or a circle or ellipse
/// centred on the real axis.
#[pyclass(name = "Component", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyComponent(geometry::Component);

#[pymethods]
impl PyComponent {
    #[staticmethod]
    fn interval(left: f64, right: f64) -> Self {
        Self(geometry::Component::interval(left, right))
    }

    #[staticmethod]
    fn circle(center: f64, radius: f64) -> Self {
        Self(geometry::Component::circle(center, radius))
    }

    #[staticmethod]
    fn ellipse(center: f64, semi_x: f64, semi_y: f64) -> Self {
        Self(geometry::Component::ellipse(center, semi_x, semi_y))
    }

    #[getter]
    fn is_arc(&self) -> bool {
        self.0.is_arc()
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.0)
    }
}

/// A finite union of disjoint components.
#[pyclass(name = "System", frozen)]
struct PySystem(CompactSystem);

#[pymethods]
impl PySystem {
    #[new]
    fn new(components: Vec<PyComponent>) -> PyResult<Self> {
        let sys = CompactSystem::new(components.into_iter().map(|c| c.0).collect());
        to_py(sys.validate().into_result())?;
        Ok(Self(sys))
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    #[pyo3(signature = (nodes_per_component = 512))]
    fn capacity(&self, py: Python<'_>, nodes_per_component: usize) -> PyResult<f64> {
        let sys = &self.0;
        Ok(to_py(py.detach(|| potential::equilibrium_of(sys, nodes_per_component)))?.capacity)
    }

    /// `(capacity, robin_constant, component_masses)`.
    #[pyo3(signature = (nodes_per_component = 512))]
    fn equilibrium(&self, py: Python<'_>, nodes_per_component: usize) -> PyResult<(f64, f64, Vec<f64>)> {
        let sys = &self.0;
        let sol = to_py(py.detach(|| potential::equilibrium_of(sys, nodes_per_component)))?;
        Ok((sol.capacity, sol.robin_constant, sol.component_mass))
    }

    #[pyo3(signature = (k, nodes_per_component = 512))]
    fn harmonic_measure(&self, py: Python<'_>, k: usize, nodes_per_component: usize) -> PyResult<f64> {
        let sys = &self.0;
        to_py(py.detach(|| potential::harmonic_measure_at_infinity(sys, k, nodes_per_component)))
    }

    #[pyo3(signature = (nodes_per_component = 512))]
    fn condenser_modulus(&self, py: Python<'_>, nodes_per_component: usize) -> PyResult<f64> {
        let sys = &self.0;
        Ok(to_py(py.detach(|| potential::condenser_modulus(sys, nodes_per_component)))?.modulus)
    }

    /// Green's function with pole at infinity, evaluated at each point.
    #[pyo3(signature = (points, nodes_per_component = 512))]
    fn green(&self, py: Python<'_>, points: Vec<Complex64>, nodes_per_component: usize) -> PyResult<Vec<f64>> {
        let sys = &self.0;
        to_py(py.detach(|| {
            let gd = potential::greens_function(&potential::equilibrium_of(sys, nodes_per_component)?);
            points.iter().map(|&z| gd.eval(z)).collect()
        }))
    }

    /// Real critical points of the Green's function as `(gap, location, value)`.
    #[pyo3(signature = (nodes_per_component = 512))]
    fn critical_points(&self, py: Python<'_>, nodes_per_component: usize) -> PyResult<Vec<(usize, f64, f64)>> {
        let sys = &self.0;
        let cps = to_py(py.detach(|| {
            let mut gd = potential::greens_function(&potential::equilibrium_of(sys, nodes_per_component)?);
            potential::critical_points(&mut gd, sys)
        }))?;
        Ok(cps.iter().map(|c| (c.gap, c.location, c.value)).collect())
    }

    /// Bounds `(lower, upper)` for the limit points of `M_n / C(E)^n`.
    #[pyo3(signature = (nodes_per_component = 512))]
    fn widom_interval(&self, py: Python<'_>, nodes_per_component: usize) -> PyResult<(f64, f64)> {
        let sys = &self.0;
        let wi = to_py(py.detach(|| asymptotics::widom_interval_of(sys, nodes_per_component)))?;
        Ok((wi.lower, wi.upper))
    }
}

/// Outcome of a minimax solve.
#[pyclass(name = "MinimaxResult", frozen)]
struct PyMinimax(MinimaxResult);

#[pymethods]
impl PyMinimax {
    #[getter]
    fn degree(&self) -> usize {
        self.0.degree
    }

    #[getter]
    fn cheb_number(&self) -> f64 {
        self.0.cheb_number
    }

    #[getter]
    fn log_cheb_number(&self) -> f64 {
        self.0.log_cheb_number
    }

    #[getter]
    fn log_lower_bound(&self) -> f64 {
        self.0.log_lower_bound
    }

    #[getter]
    fn method(&self) -> &'static str {
        match self.0.diagnostics.method {
            Method::Remez => "remez",
            Method::Lp => "lp",
        }
    }

    #[getter]
    fn gap(&self) -> f64 {
        self.0.diagnostics.gap
    }

    #[getter]
    fn warnings(&self) -> Vec<String> {
        self.0.diagnostics.warnings.clone()
    }

    #[getter]
    fn extreme_points(&self) -> Vec<Complex64> {
        self.0
            .extreme_points
            .iter()
            .map(|p| Complex64::new(p.re, p.im))
            .collect()
    }

    fn ratio_bracket(&self, capacity: f64) -> (f64, f64) {
        self.0.ratio_bracket(capacity)
    }

    /// Evaluates the monic minimax polynomial.
    fn __call__(&self, z: Complex64) -> Complex64 {
        self.0.polynomial.eval(z)
    }
}

fn solver_of(sys: &CompactSystem, solver: &str, lp_nodes: usize, directions: usize) -> PyResult<Solver> {
    let lp = Solver::Lp {
        nodes_per_component: lp_nodes,
        directions,
    };
    match solver {
        "remez" => Ok(Solver::Remez),
        "lp" => Ok(lp),
        "auto" if sys.is_real() => Ok(Solver::Remez),
        "auto" => Ok(lp),
        other => Err(WidomError::new_err(format!(
            "unknown solver `{other}` (expected auto, remez or lp)"
        ))),
    }
}

/// Minimax (Chebyshev) polynomial of degree `n` on the system.
#[pyfunction]
#[pyo3(signature = (system, n, solver = "auto", lp_nodes = 256, directions = 64))]
fn chebyshev_number(
    py: Python<'_>,
    system: &PySystem,
    n: usize,
    solver: &str,
    lp_nodes: usize,
    directions: usize,
) -> PyResult<PyMinimax> {
    let sys = &system.0;
    let s = solver_of(sys, solver, lp_nodes, directions)?;
    Ok(PyMinimax(to_py(py.detach(|| chebyshev::chebyshev_number(sys, n, s)))?))
}

/// `M_n / C(E)^n`; the capacity is computed when not supplied.
#[pyfunction]
#[pyo3(signature = (system, n, capacity = None, solver = "auto", lp_nodes = 256, directions = 64))]
fn widom_ratio(
    py: Python<'_>,
    system: &PySystem,
    n: usize,
    capacity: Option<f64>,
    solver: &str,
    lp_nodes: usize,
    directions: usize,
) -> PyResult<f64> {
    let sys = &system.0;
    let s = solver_of(sys, solver, lp_nodes, directions)?;
    to_py(py.detach(|| {
        let cap = match capacity {
            Some(c) => c,
            None => potential::equilibrium_of(sys, 512)?.capacity,
        };
        chebyshev::widom_ratio(sys, n, s, cap)
    }))
}

/// Complete elliptic integrals `(K(k), K(√(1−k²)))`.
#[pyfunction]
fn agm_complete(k: f64) -> PyResult<(f64, f64)> {
    to_py(elliptic::agm_complete(k))
}

/// Gap and band periods `(K, K′)` for four increasing endpoints.
#[pyfunction]
fn elliptic_periods(endpoints: [f64; 4]) -> PyResult<(f64, f64)> {
    let p = to_py(elliptic::elliptic_periods(endpoints))?;
    Ok((p.k, p.k_prime))
}

#[pyfunction]
fn theta0(t: f64, abs_tau_prime: f64) -> PyResult<f64> {
    to_py(elliptic::theta0(t, abs_tau_prime))
}

/// Predicted Widom factor `(phase, ratio, near_wrap)` from the condenser
/// modulus and the harmonic measure of the interval at infinity.
#[pyfunction]
fn predict_elliptic(modulus: f64, omega_infinity: f64, n: usize) -> PyResult<(f64, f64, bool)> {
    let ed = to_py(elliptic::build_elliptic_data(modulus, omega_infinity))?;
    let p = to_py(asymptotics::predict_elliptic(&ed, n))?;
    Ok((p.phase, p.predicted_ratio, p.near_wrap))
}

/// Computed against predicted ratios for an interval plus a curve. Returns
/// `(rows, max_tail_deviation, tail_correlation)` with rows
/// `(n, phase, computed, predicted, rel_dev, near_wrap)`.
#[pyfunction]
#[pyo3(signature = (system, degrees, lp_nodes = 256, directions = 64, potential_nodes = 512, tail_start = 20))]
#[allow(clippy::type_complexity)]
fn compare_prediction(
    py: Python<'_>,
    system: &PySystem,
    degrees: Vec<usize>,
    lp_nodes: usize,
    directions: usize,
    potential_nodes: usize,
    tail_start: usize,
) -> PyResult<(Vec<(usize, f64, f64, f64, f64, bool)>, f64, f64)> {
    let sys = &system.0;
    let opts = CompareOptions {
        lp_nodes,
        directions,
        potential_nodes,
        tail_start,
    };
    let cmp = to_py(py.detach(|| asymptotics::compare_prediction(sys, degrees, &opts)))?;
    let rows = cmp
        .rows
        .iter()
        .map(|r| (r.n, r.phase, r.computed_ratio, r.predicted_ratio, r.rel_dev, r.near_wrap))
        .collect();
    Ok((rows, cmp.max_tail_deviation, cmp.tail_correlation))
}

/// Runs an experiment configuration and returns the rendered output text.
#[pyfunction]
fn run_config(py: Python<'_>, text: &str) -> PyResult<String> {
    let cfg = cli::parse_config(text).map_err(|e| WidomError::new_err(e.to_string()))?;
    let report = py
        .detach(|| cli::run_experiment(&cfg))
        .map_err(|e| WidomError::new_err(e.to_string()))?;
    Ok(cli::render(&report, cfg.format))
}

#[pymodule]
#[pyo3(name = "widom")]
fn widom_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("WidomError", m.py().get_type::<WidomError>())?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyComponent>()?;
    m.add_class::<PySystem>()?;
    m.add_class::<PyMinimax>()?;
    m.add_function(wrap_pyfunction!(chebyshev_number, m)?)?;
    m.add_function(wrap_pyfunction!(widom_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(agm_complete, m)?)?;
    m.add_function(wrap_pyfunction!(elliptic_periods, m)?)?;
    m.add_function(wrap_pyfunction!(theta0, m)?)?;
    m.add_function(wrap_pyfunction!(predict_elliptic, m)?)?;
    m.add_function(wrap_pyfunction!(compare_prediction, m)?)?;
    m.add_function(wrap_pyfunction!(run_config, m)?)?;
    Ok(())
}
