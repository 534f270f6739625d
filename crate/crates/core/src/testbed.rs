//! Registry of analytic test functions with known derivatives and regularity
//! class, plus discrete norm estimators: sup, L^p, a Sobolev-style surrogate,
//! and a Hölder-style surrogate.
//!
//! The estimators act on sampled values over a finite grid; they estimate the
//! corresponding function-space norms rather than bound them. Rate slopes
//! fitted from these surrogates are robust to that substitution because the
//! surrogate error is n-independent.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::util::{compositions, pairwise_sum};

/// Smoothness label (m, alpha): m classical derivatives whose m-th order
/// satisfies a Hölder condition with exponent alpha in (0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Regularity {
    pub m: usize,
    pub alpha: f64,
}

type EvalFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type PartialFn = Arc<dyn Fn(&[usize], &[f64]) -> f64 + Send + Sync>;

/// A target function with analytic partial derivatives up to `m_max` and a
/// declared regularity class.
#[derive(Clone)]
pub struct TestFunction {
    name: String,
    dimension: usize,
    m_max: usize,
    regularity: Regularity,
    eval: EvalFn,
    partial: PartialFn,
}

impl fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TestFunction")
            .field("name", &self.name)
            .field("dimension", &self.dimension)
            .field("m_max", &self.m_max)
            .field("regularity", &self.regularity)
            .finish()
    }
}

impl TestFunction {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Highest derivative order the registry entry provides analytically.
    pub fn m_max(&self) -> usize {
        self.m_max
    }

    pub fn regularity(&self) -> Regularity {
        self.regularity
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dimension);
        (self.eval)(x)
    }

    /// Partial derivative for the multi-index `alpha`. The zero multi-index
    /// routes through `eval` itself, so order-0 agreement is exact by
    /// construction. Orders above `m_max` are refused rather than guessed.
    pub fn partial(&self, alpha: &[usize], x: &[f64]) -> Result<f64> {
        if alpha.len() != self.dimension || x.len() != self.dimension {
            return Err(Error::InvalidParameter(format!(
                "multi-index and point must have dimension {}",
                self.dimension
            )));
        }
        let order: usize = alpha.iter().sum();
        if order > self.m_max {
            return Err(Error::InvalidParameter(format!(
                "derivative order {order} exceeds the available order {} for '{}'",
                self.m_max, self.name
            )));
        }
        if order == 0 {
            return Ok(self.eval(x));
        }
        Ok((self.partial)(alpha, x))
    }
}

/// Sum of monomial terms (coefficient, per-axis exponents).
fn polynomial(name: &str, dimension: usize, terms: Vec<(f64, Vec<usize>)>) -> TestFunction {
    debug_assert!(terms.iter().all(|(_, e)| e.len() == dimension));
    let eval_terms = terms.clone();
    let eval = move |x: &[f64]| -> f64 {
        eval_terms
            .iter()
            .map(|(c, exps)| {
                c * exps
                    .iter()
                    .zip(x)
                    .map(|(&e, &xi)| xi.powi(e as i32))
                    .product::<f64>()
            })
            .sum()
    };
    let partial = move |alpha: &[usize], x: &[f64]| -> f64 {
        terms
            .iter()
            .map(|(c, exps)| {
                let mut factor = *c;
                for ((&e, &a), &xi) in exps.iter().zip(alpha).zip(x) {
                    if a > e {
                        return 0.0;
                    }
                    // falling factorial e (e-1) ... (e-a+1)
                    for k in 0..a {
                        factor *= (e - k) as f64;
                    }
                    factor *= xi.powi((e - a) as i32);
                }
                factor
            })
            .sum()
    };
    TestFunction {
        name: name.to_string(),
        dimension,
        m_max: 4,
        regularity: Regularity { m: 4, alpha: 1.0 },
        eval: Arc::new(eval),
        partial: Arc::new(partial),
    }
}

/// Probabilists' Hermite polynomial He_n(t) via the three-term recurrence.
fn hermite_prob(n: usize, t: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = t;
    for k in 1..n {
        let next = t * cur - k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

fn gaussian(dimension: usize) -> TestFunction {
    let eval = move |x: &[f64]| -> f64 {
        (-0.5 * x.iter().map(|c| c * c).sum::<f64>()).exp()
    };
    // d^a/dt^a e^{-t^2/2} = (-1)^a He_a(t) e^{-t^2/2}, applied per axis
    let partial = move |alpha: &[usize], x: &[f64]| -> f64 {
        let base = (-0.5 * x.iter().map(|c| c * c).sum::<f64>()).exp();
        let mut factor = 1.0;
        for (&a, &xi) in alpha.iter().zip(x) {
            factor *= hermite_prob(a, xi);
            if a % 2 == 1 {
                factor = -factor;
            }
        }
        factor * base
    };
    TestFunction {
        name: "gaussian".to_string(),
        dimension,
        m_max: 6,
        regularity: Regularity { m: 6, alpha: 1.0 },
        eval: Arc::new(eval),
        partial: Arc::new(partial),
    }
}

fn trig(dimension: usize) -> TestFunction {
    let eval = move |x: &[f64]| -> f64 { x.iter().map(|&c| c.sin()).product() };
    // d^a/dt^a sin t = sin(t + a pi/2)
    let partial = move |alpha: &[usize], x: &[f64]| -> f64 {
        alpha
            .iter()
            .zip(x)
            .map(|(&a, &xi)| (xi + a as f64 * std::f64::consts::FRAC_PI_2).sin())
            .product()
    };
    TestFunction {
        name: "trig".to_string(),
        dimension,
        m_max: 6,
        regularity: Regularity { m: 6, alpha: 1.0 },
        eval: Arc::new(eval),
        partial: Arc::new(partial),
    }
}

fn exponential(dimension: usize) -> TestFunction {
    let eval = move |x: &[f64]| -> f64 { x.iter().sum::<f64>().exp() };
    let partial = move |_alpha: &[usize], x: &[f64]| -> f64 { x.iter().sum::<f64>().exp() };
    TestFunction {
        name: "exp".to_string(),
        dimension,
        m_max: 6,
        regularity: Regularity { m: 6, alpha: 1.0 },
        eval: Arc::new(eval),
        partial: Arc::new(partial),
    }
}

/// Fractional-smoothness target: ||x - c||^{1/2} times a Gaussian far-field
/// mollifier, centered at c = (0.5, …, 0.5). Hölder continuous with exponent
/// 1/2 at the center and smooth elsewhere; the mollifier keeps it bounded so
/// operator windows over all of R^N stay finite.
fn holder_half(dimension: usize) -> TestFunction {
    let eval = move |x: &[f64]| -> f64 {
        let r2: f64 = x.iter().map(|&c| (c - 0.5) * (c - 0.5)).sum();
        r2.sqrt().sqrt() * (-r2).exp()
    };
    let partial = move |_alpha: &[usize], _x: &[f64]| -> f64 {
        unreachable!("no derivatives are registered for the fractional target")
    };
    TestFunction {
        name: "holder05".to_string(),
        dimension,
        m_max: 0,
        regularity: Regularity { m: 0, alpha: 0.5 },
        eval: Arc::new(eval),
        partial: Arc::new(partial),
    }
}

/// All registered target functions for the given dimension.
pub fn builtin_functions(dimension: usize) -> Result<Vec<TestFunction>> {
    if !(1..=3).contains(&dimension) {
        return Err(Error::InvalidParameter(format!(
            "the function registry supports dimensions 1 to 3, got {dimension}"
        )));
    }
    let zeros = vec![0usize; dimension];
    let mut e1 = zeros.clone();
    e1[0] = 1;
    let mut sq1 = zeros.clone();
    sq1[0] = 2;

    let constant = polynomial("const", dimension, vec![(2.5, zeros.clone())]);
    let linear = polynomial("linear", dimension, vec![(1.0, e1)]);
    let square = polynomial("square", dimension, vec![(1.0, sq1)]);

    // total degree 4 with a few lower-order terms
    let mut quartic_terms = vec![(2.0, zeros.clone())];
    for axis in 0..dimension {
        let mut e4 = zeros.clone();
        e4[axis] = 4;
        quartic_terms.push((1.0, e4));
        let mut e2 = zeros.clone();
        e2[axis] = 2;
        quartic_terms.push((-1.5, e2));
    }
    let mut e1b = zeros.clone();
    e1b[0] = 1;
    quartic_terms.push((0.25, e1b));
    let poly4 = polynomial("poly4", dimension, quartic_terms);

    Ok(vec![
        constant,
        linear,
        square,
        poly4,
        gaussian(dimension),
        trig(dimension),
        exponential(dimension),
        holder_half(dimension),
    ])
}

/// Finds a registered function by name for the given dimension.
pub fn lookup_function(name: &str, dimension: usize) -> Result<TestFunction> {
    let all = builtin_functions(dimension)?;
    let names: Vec<&str> = all.iter().map(|f| f.name()).collect();
    all.iter()
        .find(|f| f.name() == name)
        .cloned()
        .ok_or_else(|| {
            Error::InvalidConfig(format!(
                "unknown function '{name}'; available: {}",
                names.join(", ")
            ))
        })
}

/// Uniform evaluation lattice over an axis-aligned box.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    lower: Vec<f64>,
    upper: Vec<f64>,
    points_per_axis: usize,
}

impl GridSpec {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>, points_per_axis: usize) -> Result<Self> {
        if lower.is_empty() || lower.len() != upper.len() {
            return Err(Error::InvalidParameter(
                "grid bounds must be non-empty and of equal dimension".into(),
            ));
        }
        for (l, u) in lower.iter().zip(&upper) {
            if !l.is_finite() || !u.is_finite() || l >= u {
                return Err(Error::InvalidParameter(format!(
                    "grid bounds must satisfy lower < upper, got [{l}, {u}]"
                )));
            }
        }
        if points_per_axis < 2 {
            return Err(Error::InvalidParameter(
                "grid needs at least 2 points per axis".into(),
            ));
        }
        let total = (points_per_axis as u128).pow(lower.len() as u32);
        if total > 4_000_000 {
            return Err(Error::InvalidParameter(format!(
                "grid has {total} points; cap is 4e6"
            )));
        }
        Ok(Self {
            lower,
            upper,
            points_per_axis,
        })
    }

    pub fn dimension(&self) -> usize {
        self.lower.len()
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    pub fn total_points(&self) -> usize {
        self.points_per_axis.pow(self.dimension() as u32)
    }

    /// Product of the axis extents.
    pub fn volume(&self) -> f64 {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(l, u)| u - l)
            .product()
    }

    /// Euclidean length of the box diagonal.
    pub fn diameter(&self) -> f64 {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(l, u)| (u - l) * (u - l))
            .sum::<f64>()
            .sqrt()
    }

    fn coord(&self, axis: usize, index: usize) -> f64 {
        let t = index as f64 / (self.points_per_axis - 1) as f64;
        self.lower[axis] + (self.upper[axis] - self.lower[axis]) * t
    }

    /// Grid point for a flat (row-major, last axis fastest) index.
    pub fn point_from_flat(&self, flat: usize) -> Vec<f64> {
        debug_assert!(flat < self.total_points());
        let mut rem = flat;
        let mut coords = vec![0.0; self.dimension()];
        for axis in (0..self.dimension()).rev() {
            coords[axis] = self.coord(axis, rem % self.points_per_axis);
            rem /= self.points_per_axis;
        }
        coords
    }

    /// Visits every grid point in flat order.
    pub fn for_each_point(&self, mut visit: impl FnMut(&[f64])) {
        let dim = self.dimension();
        let p = self.points_per_axis;
        let mut idx = vec![0usize; dim];
        let mut coords: Vec<f64> = (0..dim).map(|a| self.coord(a, 0)).collect();
        'next: loop {
            visit(&coords);
            for axis in (0..dim).rev() {
                if idx[axis] + 1 < p {
                    idx[axis] += 1;
                    coords[axis] = self.coord(axis, idx[axis]);
                    for later in axis + 1..dim {
                        idx[later] = 0;
                        coords[later] = self.coord(later, 0);
                    }
                    continue 'next;
                }
            }
            return;
        }
    }
}

/// Which discrete error functional a sweep measures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormKind {
    Sup,
    Lp { p: f64 },
    Sobolev { m: usize, p: f64 },
    Holder { m: usize, alpha: f64 },
}

impl NormKind {
    pub fn validate(&self) -> Result<()> {
        match *self {
            NormKind::Sup => Ok(()),
            NormKind::Lp { p } => {
                if p.is_finite() && p >= 1.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidConfig(format!("lp exponent must be >= 1, got {p}")))
                }
            }
            NormKind::Sobolev { m, p } => {
                if !(p.is_finite() && p >= 1.0) {
                    return Err(Error::InvalidConfig(format!(
                        "sobolev exponent must be >= 1, got {p}"
                    )));
                }
                if m > 1 {
                    return Err(Error::InvalidConfig(
                        "sobolev order is limited to m <= 1 (operator derivatives stop at first order)"
                            .into(),
                    ));
                }
                Ok(())
            }
            NormKind::Holder { m, alpha } => {
                if m > 1 {
                    return Err(Error::InvalidConfig(
                        "holder order is limited to m <= 1".into(),
                    ));
                }
                if alpha.is_finite() && alpha > 0.0 && alpha <= 1.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidConfig(format!(
                        "holder exponent must lie in (0, 1], got {alpha}"
                    )))
                }
            }
        }
    }
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            NormKind::Sup => write!(f, "sup"),
            NormKind::Lp { p } => write!(f, "lp:{p}"),
            NormKind::Sobolev { m, p } => write!(f, "sobolev:{m},{p}"),
            NormKind::Holder { m, alpha } => write!(f, "holder:{m},{alpha}"),
        }
    }
}

impl FromStr for NormKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |s: &str| {
            Error::InvalidConfig(format!(
                "unrecognized norm '{s}'; expected sup, lp:<p>, sobolev:<m>,<p>, or holder:<m>,<alpha>"
            ))
        };
        let kind = match s.split_once(':') {
            None if s == "sup" => NormKind::Sup,
            None => return Err(bad(s)),
            Some(("lp", rest)) => NormKind::Lp {
                p: rest.parse().map_err(|_| bad(s))?,
            },
            Some(("sobolev", rest)) => {
                let (m, p) = rest.split_once(',').ok_or_else(|| bad(s))?;
                NormKind::Sobolev {
                    m: m.parse().map_err(|_| bad(s))?,
                    p: p.parse().map_err(|_| bad(s))?,
                }
            }
            Some(("holder", rest)) => {
                let (m, a) = rest.split_once(',').ok_or_else(|| bad(s))?;
                NormKind::Holder {
                    m: m.parse().map_err(|_| bad(s))?,
                    alpha: a.parse().map_err(|_| bad(s))?,
                }
            }
            Some(_) => return Err(bad(s)),
        };
        kind.validate()?;
        Ok(kind)
    }
}

/// One measured error at one scale.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorRecord {
    pub n: u32,
    pub norm_kind: NormKind,
    pub value: f64,
}

impl ErrorRecord {
    pub fn new(n: u32, norm_kind: NormKind, value: f64) -> Result<Self> {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::NonFinite(format!(
                "error value must be finite and non-negative, got {value} at n = {n}"
            )));
        }
        Ok(Self {
            n,
            norm_kind,
            value,
        })
    }
}

fn check_grid(f: &TestFunction, grid: &GridSpec) -> Result<()> {
    if f.dimension() != grid.dimension() {
        return Err(Error::InvalidParameter(format!(
            "function dimension {} does not match grid dimension {}",
            f.dimension(),
            grid.dimension()
        )));
    }
    Ok(())
}

/// Largest pointwise deviation |approx - f| over the grid.
pub fn sup_error(
    approx: &dyn Fn(&[f64]) -> f64,
    f: &TestFunction,
    grid: &GridSpec,
) -> Result<f64> {
    check_grid(f, grid)?;
    let mut worst = 0.0f64;
    grid.for_each_point(|x| {
        worst = worst.max((approx(x) - f.eval(x)).abs());
    });
    Ok(worst)
}

/// Discrete Sobolev-style surrogate:
///
/// ```text
/// ( sum over |alpha| <= m of  mean over grid |D^alpha approx - D^alpha f|^p  * V )^{1/p}
/// ```
///
/// with V the box volume. `approx_partials` must answer multi-indices up to
/// order m; the zero multi-index is the plain value.
pub fn sobolev_error(
    approx_partials: &dyn Fn(&[usize], &[f64]) -> f64,
    f: &TestFunction,
    grid: &GridSpec,
    m: usize,
    p: f64,
) -> Result<f64> {
    check_grid(f, grid)?;
    NormKind::Sobolev { m, p }.validate()?;
    if m > f.m_max() {
        return Err(Error::InvalidParameter(format!(
            "sobolev order {m} exceeds the derivatives available for '{}'",
            f.name()
        )));
    }
    let mut total = 0.0;
    for order in 0..=m {
        for alpha in compositions(grid.dimension(), order) {
            let mut powered = Vec::with_capacity(grid.total_points());
            let mut failure = None;
            grid.for_each_point(|x| {
                if failure.is_some() {
                    return;
                }
                match f.partial(&alpha, x) {
                    Ok(truth) => {
                        let d = (approx_partials(&alpha, x) - truth).abs();
                        powered.push(d.powf(p));
                    }
                    Err(e) => failure = Some(e),
                }
            });
            if let Some(e) = failure {
                return Err(e);
            }
            total += pairwise_sum(&powered) / powered.len() as f64;
        }
    }
    Ok((total * grid.volume()).powf(p.recip()))
}

/// Upper bound on the number of point pairs examined by the Hölder seminorm.
const MAX_HOLDER_PAIRS: usize = 100_000;

/// Discrete Hölder-style surrogate:
///
/// ```text
/// sum over |beta| <= m of sup |D^beta (approx - f)|
/// + sum over |beta| = m of max over pairs |d(x) - d(y)| / ||x - y||^alpha
/// ```
///
/// The pair set is restricted to grid pairs within 0.25 of the box diagonal,
/// where the seminorm sup is typically attained; if the full pair set exceeds
/// 100 000 it is subsampled with a ChaCha stream seeded by `seed`, keeping the
/// estimate deterministic for fixed inputs.
pub fn holder_error(
    approx: &dyn Fn(&[f64]) -> f64,
    approx_partials: &dyn Fn(&[usize], &[f64]) -> f64,
    f: &TestFunction,
    grid: &GridSpec,
    m: usize,
    alpha: f64,
    seed: u64,
) -> Result<f64> {
    check_grid(f, grid)?;
    NormKind::Holder { m, alpha }.validate()?;
    if m > f.m_max() {
        return Err(Error::InvalidParameter(format!(
            "holder order {m} exceeds the derivatives available for '{}'",
            f.name()
        )));
    }

    // difference arrays per multi-index, grid-flat order
    let mut sup_part = 0.0;
    let mut top_order_diffs: Vec<Vec<f64>> = Vec::new();
    for order in 0..=m {
        for beta in compositions(grid.dimension(), order) {
            let mut diffs = Vec::with_capacity(grid.total_points());
            let mut failure = None;
            grid.for_each_point(|x| {
                if failure.is_some() {
                    return;
                }
                let ours = if order == 0 {
                    approx(x)
                } else {
                    approx_partials(&beta, x)
                };
                match f.partial(&beta, x) {
                    Ok(truth) => diffs.push(ours - truth),
                    Err(e) => failure = Some(e),
                }
            });
            if let Some(e) = failure {
                return Err(e);
            }
            sup_part += diffs.iter().fold(0.0f64, |acc, d| acc.max(d.abs()));
            if order == m {
                top_order_diffs.push(diffs);
            }
        }
    }

    let cutoff = 0.25 * grid.diameter();
    let total = grid.total_points();
    let all_pairs = total * total.saturating_sub(1) / 2 <= MAX_HOLDER_PAIRS;

    let mut seminorm_total = 0.0;
    for diffs in &top_order_diffs {
        let mut worst = 0.0f64;
        let mut consider = |i: usize, j: usize| {
            let xi = grid.point_from_flat(i);
            let xj = grid.point_from_flat(j);
            let dist: f64 = xi
                .iter()
                .zip(&xj)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            if dist > 0.0 && dist <= cutoff {
                worst = worst.max((diffs[i] - diffs[j]).abs() / dist.powf(alpha));
            }
        };
        if all_pairs {
            for i in 0..total {
                for j in i + 1..total {
                    consider(i, j);
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut kept = 0usize;
            let mut attempts = 0usize;
            while kept < MAX_HOLDER_PAIRS && attempts < 4 * MAX_HOLDER_PAIRS {
                attempts += 1;
                let i = rng.random_range(0..total);
                let j = rng.random_range(0..total);
                if i == j {
                    continue;
                }
                consider(i, j);
                kept += 1;
            }
        }
        seminorm_total += worst;
    }

    Ok(sup_part + seminorm_total)
}

/// Dispatches a norm kind to its estimator. `approx` answers plain values,
/// `approx_partials` answers derivative multi-indices (used for m = 1 norms).
pub fn compute_error(
    norm: NormKind,
    approx: &dyn Fn(&[f64]) -> f64,
    approx_partials: &dyn Fn(&[usize], &[f64]) -> f64,
    f: &TestFunction,
    grid: &GridSpec,
    seed: u64,
) -> Result<f64> {
    norm.validate()?;
    match norm {
        NormKind::Sup => sup_error(approx, f, grid),
        NormKind::Lp { p } => {
            let zero_order = |alpha: &[usize], x: &[f64]| -> f64 {
                debug_assert!(alpha.iter().all(|&a| a == 0));
                approx(x)
            };
            sobolev_error(&zero_order, f, grid, 0, p)
        }
        NormKind::Sobolev { m, p } => {
            let routed = |alpha: &[usize], x: &[f64]| -> f64 {
                if alpha.iter().all(|&a| a == 0) {
                    approx(x)
                } else {
                    approx_partials(alpha, x)
                }
            };
            sobolev_error(&routed, f, grid, m, p)
        }
        NormKind::Holder { m, alpha } => {
            holder_error(approx, approx_partials, f, grid, m, alpha, seed)
        }
    }
}
