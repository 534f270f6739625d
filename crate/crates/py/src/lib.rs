//! Python bindings for the approximation library: the symmetrized kernel,
//! the three operator kinds, the built-in benchmark targets, and the
//! convergence sweep.
//!
//! Operator targets can be either a `BuiltinFunction` (evaluated without
//! crossing back into the interpreter) or any Python callable taking a list
//! of coordinates and returning a float. Exceptions raised by a callable
//! propagate out of the operator call.

use std::cell::RefCell;

use pyo3::exceptions::{PyIOError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use qtanh_core::activation::{self, ActivationParams};
use qtanh_core::convergence::{self, SweepPlan};
use qtanh_core::density::MultivariatePoint;
use qtanh_core::operators::{self, OperatorConfig, OperatorKind};
use qtanh_core::testbed::{self, GridSpec, NormKind, TestFunction};

fn to_py_err(e: qtanh_core::Error) -> PyErr {
    use qtanh_core::Error;
    match e {
        Error::InvalidParameter(_) | Error::InvalidConfig(_) => {
            PyValueError::new_err(e.to_string())
        }
        Error::Saturated(_) | Error::NonFinite(_) => PyRuntimeError::new_err(e.to_string()),
        Error::Io(_) => PyIOError::new_err(e.to_string()),
    }
}

/// Symmetrized perturbed-tanh kernel with shape `q` and slope `lam`.
#[pyclass(frozen)]
struct Kernel {
    params: ActivationParams,
}

#[pymethods]
impl Kernel {
    #[new]
    #[pyo3(signature = (q = 1.0, lam = 1.0))]
    fn new(q: f64, lam: f64) -> PyResult<Self> {
        Ok(Self {
            params: ActivationParams::new(q, lam).map_err(to_py_err)?,
        })
    }

    #[getter]
    fn q(&self) -> f64 {
        self.params.q()
    }

    #[getter]
    fn lam(&self) -> f64 {
        self.params.lambda()
    }

    /// Kernel value at `x`. Even in `x` for every admissible `q`.
    fn phi(&self, x: f64) -> f64 {
        activation::phi(&self.params, x)
    }

    /// Kernel derivative at `x`.
    fn phi_prime(&self, x: f64) -> f64 {
        activation::phi_prime(&self.params, x)
    }

    /// Adaptive quadrature of the kernel over the real line; equals 1 up to
    /// the requested tolerance.
    #[pyo3(signature = (tol = 1e-9))]
    fn integral(&self, tol: f64) -> PyResult<f64> {
        activation::phi_integral(&self.params, tol).map_err(to_py_err)
    }

    /// Smallest lattice window radius whose tail mass stays below `tol`.
    fn window_radius(&self, tol: f64) -> PyResult<u32> {
        activation::window_radius(&self.params, tol).map_err(to_py_err)
    }

    fn __repr__(&self) -> String {
        format!("Kernel(q={}, lam={})", self.params.q(), self.params.lambda())
    }
}

/// Built-in benchmark target with analytic partial derivatives.
#[pyclass(frozen)]
struct BuiltinFunction {
    inner: TestFunction,
}

#[pymethods]
impl BuiltinFunction {
    #[getter]
    fn name(&self) -> String {
        self.inner.name().to_string()
    }

    #[getter]
    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    /// Highest derivative order available through `partial`.
    #[getter]
    fn max_derivative_order(&self) -> usize {
        self.inner.m_max()
    }

    /// Smoothness class as `(m, alpha)`: `m` full derivatives plus a Holder
    /// modulus of exponent `alpha` on the last one.
    #[getter]
    fn smoothness(&self) -> (usize, f64) {
        let r = self.inner.regularity();
        (r.m, r.alpha)
    }

    fn __call__(&self, x: Vec<f64>) -> PyResult<f64> {
        if x.len() != self.inner.dimension() {
            return Err(PyValueError::new_err(format!(
                "expected {} coordinates, got {}",
                self.inner.dimension(),
                x.len()
            )));
        }
        Ok(self.inner.eval(&x))
    }

    /// Partial derivative for the multi-index `alpha` at `x`.
    fn partial(&self, alpha: Vec<usize>, x: Vec<f64>) -> PyResult<f64> {
        self.inner.partial(&alpha, &x).map_err(to_py_err)
    }

    fn __repr__(&self) -> String {
        format!(
            "BuiltinFunction(name='{}', dimension={})",
            self.inner.name(),
            self.inner.dimension()
        )
    }
}

/// Names of the built-in targets available at the given dimension.
#[pyfunction]
fn list_functions(dimension: usize) -> PyResult<Vec<String>> {
    Ok(testbed::builtin_functions(dimension)
        .map_err(to_py_err)?
        .iter()
        .map(|f| f.name().to_string())
        .collect())
}

/// Looks up one built-in target by name.
#[pyfunction]
fn builtin_function(name: &str, dimension: usize) -> PyResult<BuiltinFunction> {
    Ok(BuiltinFunction {
        inner: testbed::lookup_function(name, dimension).map_err(to_py_err)?,
    })
}

/// One operator instance: kind ('basic', 'kantorovich', or 'quadrature'),
/// scale n, dimension, and the kernel/truncation knobs.
#[pyclass(frozen)]
struct Operator {
    config: OperatorConfig,
}

impl Operator {
    fn call_operator(
        &self,
        f: &Bound<'_, PyAny>,
        x: Vec<f64>,
        axis: Option<usize>,
    ) -> PyResult<f64> {
        let x = MultivariatePoint::new(x).map_err(to_py_err)?;

        if let Ok(builtin) = f.cast::<BuiltinFunction>() {
            let inner = builtin.get().inner.clone();
            let target = move |t: &[f64]| inner.eval(t);
            let result = match axis {
                None => operators::apply(&self.config, &target, &x),
                Some(a) => operators::apply_derivative(&self.config, &target, &x, a),
            };
            return result.map_err(to_py_err);
        }

        // generic callable: stash the first Python error, feed the engine a
        // NaN so it stops cleanly, then re-raise
        let failure: RefCell<Option<PyErr>> = RefCell::new(None);
        let target = |t: &[f64]| -> f64 {
            match f.call1((t.to_vec(),)).and_then(|v| v.extract::<f64>()) {
                Ok(v) => v,
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    f64::NAN
                }
            }
        };
        let result = match axis {
            None => operators::apply(&self.config, &target, &x),
            Some(a) => operators::apply_derivative(&self.config, &target, &x, a),
        };
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        result.map_err(to_py_err)
    }
}

#[pymethods]
impl Operator {
    #[new]
    #[pyo3(signature = (
        kind, n, dimension,
        q = 1.0, lam = 1.0, truncation_tol = 1e-12,
        theta = 3, weights = None, cell_quad_order = 5
    ))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        kind: &str,
        n: u32,
        dimension: usize,
        q: f64,
        lam: f64,
        truncation_tol: f64,
        theta: u32,
        weights: Option<Vec<f64>>,
        cell_quad_order: u32,
    ) -> PyResult<Self> {
        let kind: OperatorKind = kind.parse().map_err(to_py_err)?;
        let params = ActivationParams::new(q, lam).map_err(to_py_err)?;
        let mut config = OperatorConfig::new(kind, n, dimension, params)
            .map_err(to_py_err)?
            .with_truncation_tol(truncation_tol)
            .map_err(to_py_err)?
            .with_theta(theta)
            .map_err(to_py_err)?
            .with_cell_quad_order(cell_quad_order)
            .map_err(to_py_err)?;
        if let Some(w) = weights {
            config = config.with_weights(w).map_err(to_py_err)?;
        }
        Ok(Self { config })
    }

    #[getter]
    fn kind(&self) -> String {
        self.config.kind().to_string()
    }

    #[getter]
    fn n(&self) -> u32 {
        self.config.n()
    }

    #[getter]
    fn dimension(&self) -> usize {
        self.config.dimension()
    }

    #[getter]
    fn theta(&self) -> u32 {
        self.config.theta()
    }

    #[getter]
    fn weights(&self) -> Vec<f64> {
        self.config.weights().to_vec()
    }

    /// Copy of this operator at a different scale.
    fn with_n(&self, n: u32) -> PyResult<Self> {
        Ok(Self {
            config: self.config.clone().with_n(n).map_err(to_py_err)?,
        })
    }

    /// Operator value at `x` for the target `f` (a BuiltinFunction or any
    /// callable mapping a coordinate list to a float).
    fn apply(&self, f: &Bound<'_, PyAny>, x: Vec<f64>) -> PyResult<f64> {
        self.call_operator(f, x, None)
    }

    /// Partial derivative of the operator along `axis` at `x`.
    fn derivative(&self, f: &Bound<'_, PyAny>, x: Vec<f64>, axis: usize) -> PyResult<f64> {
        self.call_operator(f, x, Some(axis))
    }

    /// Centered monomial moment: the operator applied to
    /// prod_i (t_i - x_i)^alpha_i at `x`.
    fn moment(&self, x: Vec<f64>, alpha: Vec<usize>) -> PyResult<f64> {
        let x = MultivariatePoint::new(x).map_err(to_py_err)?;
        convergence::moment(&self.config, &x, &alpha).map_err(to_py_err)
    }

    /// Derivative-weighted expansion of the basic operator at `x` up to
    /// order `m`: returns `(main, residual)` with
    /// value == f(x) + main + residual to machine precision.
    fn voronovskaya(&self, f: &BuiltinFunction, x: Vec<f64>, m: usize) -> PyResult<(f64, f64)> {
        let x = MultivariatePoint::new(x).map_err(to_py_err)?;
        convergence::voronovskaya_residual(&self.config, &f.inner, &x, m).map_err(to_py_err)
    }

    fn __repr__(&self) -> String {
        format!(
            "Operator(kind='{}', n={}, dimension={})",
            self.config.kind(),
            self.config.n(),
            self.config.dimension()
        )
    }
}

/// Error sweep over the given scales, fitted to a power law.
///
/// Returns a dict with `records` (list of `(n, error)`), `slope`,
/// `intercept`, `r_squared`, and `saturated`. When every measurement sits at
/// the noise floor the fit fields are None and `saturated` is True.
#[pyfunction]
#[pyo3(signature = (
    function, n_values,
    kind = "basic", norm = "sup",
    lower = None, upper = None, grid_points = 101,
    q = 1.0, lam = 1.0, truncation_tol = 1e-12, seed = 0
))]
#[allow(clippy::too_many_arguments)]
fn sweep<'py>(
    py: Python<'py>,
    function: &str,
    n_values: Vec<u32>,
    kind: &str,
    norm: &str,
    lower: Option<Vec<f64>>,
    upper: Option<Vec<f64>>,
    grid_points: usize,
    q: f64,
    lam: f64,
    truncation_tol: f64,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let kind: OperatorKind = kind.parse().map_err(to_py_err)?;
    let norm: NormKind = norm.parse().map_err(to_py_err)?;
    let lower = lower.unwrap_or_else(|| vec![-1.0]);
    let upper = upper.unwrap_or_else(|| vec![1.0]);
    let dim = lower.len();
    let first = n_values.first().copied().unwrap_or(1);

    let params = ActivationParams::new(q, lam).map_err(to_py_err)?;
    let base = OperatorConfig::new(kind, first, dim, params)
        .map_err(to_py_err)?
        .with_truncation_tol(truncation_tol)
        .map_err(to_py_err)?;
    let grid = GridSpec::new(lower, upper, grid_points).map_err(to_py_err)?;
    let plan = SweepPlan::new(base, n_values, norm, function, grid, seed).map_err(to_py_err)?;
    let records = convergence::run_sweep(&plan).map_err(to_py_err)?;

    let dict = PyDict::new(py);
    let pairs: Vec<(u32, f64)> = records.iter().map(|r| (r.n, r.value)).collect();
    dict.set_item("records", pairs)?;
    match convergence::fit_rate_with_floor(&records, 100.0 * truncation_tol) {
        Ok(fit) => {
            dict.set_item("slope", fit.slope)?;
            dict.set_item("intercept", fit.intercept)?;
            dict.set_item("r_squared", fit.r_squared)?;
            dict.set_item("saturated", fit.saturated)?;
        }
        Err(qtanh_core::Error::Saturated(_)) => {
            dict.set_item("slope", py.None())?;
            dict.set_item("intercept", py.None())?;
            dict.set_item("r_squared", py.None())?;
            dict.set_item("saturated", true)?;
        }
        Err(e) => return Err(to_py_err(e)),
    }
    Ok(dict)
}

/// Sampling-type approximation operators on a symmetrized perturbed-tanh
/// kernel: kernel evaluation, operator application, moments, expansion
/// residuals, and convergence-rate sweeps.
#[pymodule]
fn qtanh(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Kernel>()?;
    m.add_class::<BuiltinFunction>()?;
    m.add_class::<Operator>()?;
    m.add_function(wrap_pyfunction!(list_functions, m)?)?;
    m.add_function(wrap_pyfunction!(builtin_function, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    Ok(())
}
