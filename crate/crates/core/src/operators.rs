//! The three sampling operators built on the window machinery: plain sampling
//! at lattice points, cell-averaged (Kantorovich-style) sampling, and
//! quadrature-weighted sampling over shifted nodes, plus first-order spatial
//! derivatives of all three.
//!
//! Every operator is a finite window sum `sum_k coeff(k) * prod_i phi(n x_i - k_i)`;
//! the kinds differ only in how `coeff` samples the target function.

use std::fmt;
use std::str::FromStr;

use crate::activation::{self, ActivationParams};
use crate::density::{self, MultivariatePoint, MAX_DIMENSION};
use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre_01;
use crate::util::{for_each_lattice, tensor_window_sum};

/// How the operator turns function samples into window coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    /// Point samples f(k/n).
    Basic,
    /// Mean of f over the cell [k/n, (k+1)/n]^N.
    Kantorovich,
    /// Weighted samples at the shifted nodes k/n + r/(n theta), r = 1..theta.
    Quadrature,
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            OperatorKind::Basic => "basic",
            OperatorKind::Kantorovich => "kantorovich",
            OperatorKind::Quadrature => "quadrature",
        };
        write!(f, "{name}")
    }
}

impl FromStr for OperatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "basic" => Ok(OperatorKind::Basic),
            "kantorovich" => Ok(OperatorKind::Kantorovich),
            "quadrature" => Ok(OperatorKind::Quadrature),
            other => Err(Error::InvalidConfig(format!(
                "unknown operator kind '{other}'; expected basic, kantorovich, or quadrature"
            ))),
        }
    }
}

/// Full description of one operator instance. Constructed with defaults for
/// the kind-specific knobs; the `with_*` builders adjust them and re-validate.
#[derive(Debug, Clone)]
pub struct OperatorConfig {
    kind: OperatorKind,
    n: u32,
    dimension: usize,
    activation: ActivationParams,
    truncation_tol: f64,
    theta: u32,
    weights: Vec<f64>,
    cell_quad_order: u32,
}

impl OperatorConfig {
    pub fn new(
        kind: OperatorKind,
        n: u32,
        dimension: usize,
        activation: ActivationParams,
    ) -> Result<Self> {
        let config = Self {
            kind,
            n,
            dimension,
            activation,
            truncation_tol: 1e-12,
            theta: 3,
            weights: vec![1.0 / 3.0; 3],
            cell_quad_order: 5,
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidConfig("scale n must be >= 1".into()));
        }
        if self.dimension == 0 || self.dimension > MAX_DIMENSION {
            return Err(Error::InvalidConfig(format!(
                "dimension must lie in 1..={MAX_DIMENSION}, got {}",
                self.dimension
            )));
        }
        if !(self.truncation_tol > 0.0 && self.truncation_tol < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "truncation tolerance must lie in (0, 1), got {}",
                self.truncation_tol
            )));
        }
        if self.theta == 0 {
            return Err(Error::InvalidConfig("theta must be >= 1".into()));
        }
        if self.cell_quad_order == 0 || self.cell_quad_order > 32 {
            return Err(Error::InvalidConfig(format!(
                "cell quadrature order must lie in 1..=32, got {}",
                self.cell_quad_order
            )));
        }
        if self.weights.len() != self.theta as usize {
            return Err(Error::InvalidConfig(format!(
                "expected {} quadrature weights, got {}",
                self.theta,
                self.weights.len()
            )));
        }
        if self.weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidConfig(
                "quadrature weights must be finite and non-negative".into(),
            ));
        }
        let total: f64 = self.weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidConfig(format!(
                "quadrature weights must sum to 1, got {total}"
            )));
        }
        Ok(())
    }

    pub fn with_n(mut self, n: u32) -> Result<Self> {
        self.n = n;
        self.validate()?;
        Ok(self)
    }

    pub fn with_truncation_tol(mut self, tol: f64) -> Result<Self> {
        self.truncation_tol = tol;
        self.validate()?;
        Ok(self)
    }

    /// Sets the quadrature node count and resets the weights to uniform.
    pub fn with_theta(mut self, theta: u32) -> Result<Self> {
        self.theta = theta;
        if theta > 0 {
            self.weights = vec![1.0 / theta as f64; theta as usize];
        }
        self.validate()?;
        Ok(self)
    }

    pub fn with_weights(mut self, weights: Vec<f64>) -> Result<Self> {
        self.weights = weights;
        self.validate()?;
        Ok(self)
    }

    pub fn with_cell_quad_order(mut self, order: u32) -> Result<Self> {
        self.cell_quad_order = order;
        self.validate()?;
        Ok(self)
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn activation(&self) -> &ActivationParams {
        &self.activation
    }

    pub fn truncation_tol(&self) -> f64 {
        self.truncation_tol
    }

    pub fn theta(&self) -> u32 {
        self.theta
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn cell_quad_order(&self) -> u32 {
        self.cell_quad_order
    }
}

/// Shared engine: window sum with kind-specific coefficients, optionally with
/// one axis's density factor replaced by its derivative. Coefficients never
/// depend on x, so the derivative touches only the density tables.
fn operator_sum(
    config: &OperatorConfig,
    f: &dyn Fn(&[f64]) -> f64,
    x: &MultivariatePoint,
    derivative_axis: Option<usize>,
) -> Result<f64> {
    if x.dimension() != config.dimension {
        return Err(Error::InvalidParameter(format!(
            "point dimension {} does not match operator dimension {}",
            x.dimension(),
            config.dimension
        )));
    }
    let window = density::build_window(config.n, x, &config.activation, config.truncation_tol)?;
    let lo = window.lo();
    let mut tables = density::phi_tables(&config.activation, config.n, x.coords(), &window);

    let n_f = config.n as f64;
    if let Some(axis) = derivative_axis {
        if axis >= config.dimension {
            return Err(Error::InvalidParameter(format!(
                "axis {axis} is out of range for dimension {}",
                config.dimension
            )));
        }
        let u = n_f * x.coords()[axis];
        for (j, slot) in tables[axis].iter_mut().enumerate() {
            let k = lo[axis] + j as i64;
            *slot = n_f * activation::phi_prime(&config.activation, u - k as f64);
        }
    }

    let dim = config.dimension;
    let mut node = vec![0.0; dim];
    let value = match config.kind {
        OperatorKind::Basic => tensor_window_sum(&tables, &lo, &mut |k| {
            for (slot, &ki) in node.iter_mut().zip(k) {
                *slot = ki as f64 / n_f;
            }
            f(&node)
        }),
        OperatorKind::Kantorovich => {
            let (cell_nodes, cell_weights) = gauss_legendre_01(config.cell_quad_order as usize);
            let inner_lo = vec![0i64; dim];
            let inner_hi = vec![cell_nodes.len() as i64 - 1; dim];
            tensor_window_sum(&tables, &lo, &mut |k| {
                let mut mean = 0.0;
                for_each_lattice(&inner_lo, &inner_hi, |j| {
                    let mut w = 1.0;
                    for axis in 0..dim {
                        let jj = j[axis] as usize;
                        w *= cell_weights[jj];
                        node[axis] = (k[axis] as f64 + cell_nodes[jj]) / n_f;
                    }
                    mean += w * f(&node);
                });
                mean
            })
        }
        OperatorKind::Quadrature => {
            let span = (config.n as u64 * config.theta as u64) as f64;
            let shifts: Vec<f64> = (1..=config.theta).map(|r| r as f64 / span).collect();
            if config.theta == 1 && config.weights[0] == 1.0 {
                // single-node rule degenerates to sampling at the shifted lattice
                tensor_window_sum(&tables, &lo, &mut |k| {
                    for (slot, &ki) in node.iter_mut().zip(k) {
                        *slot = ki as f64 / n_f + shifts[0];
                    }
                    f(&node)
                })
            } else {
                let inner_lo = vec![0i64; dim];
                let inner_hi = vec![config.theta as i64 - 1; dim];
                tensor_window_sum(&tables, &lo, &mut |k| {
                    let mut acc = 0.0;
                    for_each_lattice(&inner_lo, &inner_hi, |r| {
                        let mut w = 1.0;
                        for axis in 0..dim {
                            let rr = r[axis] as usize;
                            w *= config.weights[rr];
                            node[axis] = k[axis] as f64 / n_f + shifts[rr];
                        }
                        acc += w * f(&node);
                    });
                    acc
                })
            }
        }
    };

    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite(format!(
            "operator value {value} at {:?} (kind {}, n = {})",
            x.coords(),
            config.kind,
            config.n
        )))
    }
}

fn require_kind(config: &OperatorConfig, expected: OperatorKind) -> Result<()> {
    if config.kind != expected {
        return Err(Error::InvalidConfig(format!(
            "this entry point requires a {expected} config, got {}",
            config.kind
        )));
    }
    Ok(())
}

/// Point-sampling operator: coefficients f(k/n).
pub fn apply_basic(
    config: &OperatorConfig,
    f: &dyn Fn(&[f64]) -> f64,
    x: &MultivariatePoint,
) -> Result<f64> {
    require_kind(config, OperatorKind::Basic)?;
    operator_sum(config, f, x, None)
}

/// Cell-averaging operator: coefficients are tensor Gauss-Legendre means of f
/// over [k/n, (k+1)/n]^N.
pub fn apply_kantorovich(
    config: &OperatorConfig,
    f: &dyn Fn(&[f64]) -> f64,
    x: &MultivariatePoint,
) -> Result<f64> {
    require_kind(config, OperatorKind::Kantorovich)?;
    operator_sum(config, f, x, None)
}

/// Quadrature-weighted operator: coefficients sum w_r f(k/n + r/(n theta))
/// per axis with product weights.
pub fn apply_quadrature(
    config: &OperatorConfig,
    f: &dyn Fn(&[f64]) -> f64,
    x: &MultivariatePoint,
) -> Result<f64> {
    require_kind(config, OperatorKind::Quadrature)?;
    operator_sum(config, f, x, None)
}

/// Evaluates whichever operator the config selects.
pub fn apply(
    config: &OperatorConfig,
    f: &dyn Fn(&[f64]) -> f64,
    x: &MultivariatePoint,
) -> Result<f64> {
    operator_sum(config, f, x, None)
}

/// Partial derivative of the operator value along `axis`, taken analytically:
/// the axis density factor becomes n * phi'(n x_axis - k_axis) while the
/// coefficients, which do not depend on x, are untouched.
pub fn apply_derivative(
    config: &OperatorConfig,
    f: &dyn Fn(&[f64]) -> f64,
    x: &MultivariatePoint,
    axis: usize,
) -> Result<f64> {
    operator_sum(config, f, x, Some(axis))
}
