//! Experiment driver: n-sweeps over the operators, log-log rate fitting,
//! lattice moments of the window density, and the main-term/remainder
//! decomposition that isolates the asymptotic residual at a point.

use std::cell::RefCell;

use crate::density::{self, MultivariatePoint};
use crate::error::{Error, Result};
use crate::operators::{self, OperatorConfig, OperatorKind};
use crate::testbed::{
    compute_error, lookup_function, ErrorRecord, GridSpec, NormKind, TestFunction,
};
use crate::util::{compositions, multi_factorial, tensor_window_sum};

/// A full sweep description: which operator, which scales, which error
/// functional, which target, where to sample it. The template's own scale is
/// ignored; each sweep entry re-instantiates it at one of `n_values`.
#[derive(Debug, Clone)]
pub struct SweepPlan {
    base: OperatorConfig,
    n_values: Vec<u32>,
    norm: NormKind,
    function: String,
    grid: GridSpec,
    seed: u64,
}

impl SweepPlan {
    pub fn new(
        base: OperatorConfig,
        n_values: Vec<u32>,
        norm: NormKind,
        function: &str,
        grid: GridSpec,
        seed: u64,
    ) -> Result<Self> {
        if n_values.len() < 3 {
            return Err(Error::InvalidConfig(format!(
                "a sweep needs at least 3 scales, got {}",
                n_values.len()
            )));
        }
        if n_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig(
                "sweep scales must be strictly increasing".into(),
            ));
        }
        if n_values[0] == 0 {
            return Err(Error::InvalidConfig("sweep scales must be >= 1".into()));
        }
        norm.validate()?;
        if grid.dimension() != base.dimension() {
            return Err(Error::InvalidConfig(format!(
                "grid dimension {} does not match operator dimension {}",
                grid.dimension(),
                base.dimension()
            )));
        }
        let f = lookup_function(function, base.dimension())?;
        let needs_derivatives = match norm {
            NormKind::Sobolev { m, .. } | NormKind::Holder { m, .. } => m,
            _ => 0,
        };
        if needs_derivatives > f.m_max() {
            return Err(Error::InvalidConfig(format!(
                "norm '{norm}' needs derivatives of order {needs_derivatives}, but '{}' provides {}",
                f.name(),
                f.m_max()
            )));
        }
        Ok(Self {
            base,
            n_values,
            norm,
            function: function.to_string(),
            grid,
            seed,
        })
    }

    pub fn base(&self) -> &OperatorConfig {
        &self.base
    }

    pub fn n_values(&self) -> &[u32] {
        &self.n_values
    }

    pub fn norm(&self) -> NormKind {
        self.norm
    }

    pub fn function(&self) -> &str {
        &self.function
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Measures the plan's error functional at every scale, in order.
pub fn run_sweep(plan: &SweepPlan) -> Result<Vec<ErrorRecord>> {
    let f = lookup_function(&plan.function, plan.base.dimension())?;
    let mut records = Vec::with_capacity(plan.n_values.len());
    for &n in &plan.n_values {
        let config = plan.base.clone().with_n(n)?;
        records.push(measure_error(&config, &f, plan.norm, &plan.grid, plan.seed)?);
    }
    Ok(records)
}

/// One error measurement: wraps the operator (and its first derivatives, for
/// the norms that need them) as grid closures and hands them to the estimator.
/// Operator failures inside a closure are stashed and re-raised afterwards.
pub fn measure_error(
    config: &OperatorConfig,
    f: &TestFunction,
    norm: NormKind,
    grid: &GridSpec,
    seed: u64,
) -> Result<ErrorRecord> {
    let target = f.clone();
    let eval_target = move |t: &[f64]| target.eval(t);
    let failure: RefCell<Option<Error>> = RefCell::new(None);

    let approx = |t: &[f64]| -> f64 {
        match MultivariatePoint::new(t.to_vec())
            .and_then(|x| operators::apply(config, &eval_target, &x))
        {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    };
    let approx_partials = |alpha: &[usize], t: &[f64]| -> f64 {
        let order: usize = alpha.iter().sum();
        let result = MultivariatePoint::new(t.to_vec()).and_then(|x| {
            if order == 0 {
                operators::apply(config, &eval_target, &x)
            } else {
                debug_assert_eq!(order, 1, "norms are limited to first derivatives");
                let axis = alpha.iter().position(|&a| a > 0).unwrap();
                operators::apply_derivative(config, &eval_target, &x, axis)
            }
        });
        match result {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    };

    let value = compute_error(norm, &approx, &approx_partials, f, grid, seed)?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    ErrorRecord::new(config.n(), norm, value)
}

/// Least-squares power-law fit through a sweep's (n, error) pairs.
#[derive(Debug, Clone)]
pub struct RateFit {
    /// Fitted exponent s in error ~ C * n^s.
    pub slope: f64,
    /// ln C of the fitted law.
    pub intercept: f64,
    /// Coefficient of determination of the log-log line, in [0, 1].
    pub r_squared: f64,
    /// The records that actually entered the fit, in input order.
    pub records: Vec<ErrorRecord>,
    /// True when records were dropped for sitting at or below the noise floor.
    pub saturated: bool,
}

/// Default noise floor: at or below this, an error value carries no rate
/// information in double precision.
const SATURATION_FLOOR: f64 = 1e-15;

pub fn fit_rate(records: &[ErrorRecord]) -> Result<RateFit> {
    fit_rate_with_floor(records, SATURATION_FLOOR)
}

/// Fits ln(error) against ln(n), excluding records with error <= floor
/// (clamped no lower than 1e-15). Needs at least 3 surviving records.
pub fn fit_rate_with_floor(records: &[ErrorRecord], floor: f64) -> Result<RateFit> {
    let floor = floor.max(SATURATION_FLOOR);
    let usable: Vec<ErrorRecord> = records
        .iter()
        .filter(|r| r.value > floor)
        .cloned()
        .collect();
    let saturated = usable.len() < records.len();
    if usable.len() < 3 {
        return Err(Error::Saturated(format!(
            "only {} of {} sweep errors sit above the noise floor {floor:.1e}; no rate can be fitted",
            usable.len(),
            records.len()
        )));
    }

    let m = usable.len() as f64;
    let xs: Vec<f64> = usable.iter().map(|r| (r.n as f64).ln()).collect();
    let ys: Vec<f64> = usable.iter().map(|r| r.value.ln()).collect();
    let mean_x = xs.iter().sum::<f64>() / m;
    let mean_y = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mean_x) * (x - mean_x)).sum();
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - mean_x) * (y - mean_y))
        .sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;

    let ss_tot: f64 = ys.iter().map(|y| (y - mean_y) * (y - mean_y)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let p = intercept + slope * x;
            (y - p) * (y - p)
        })
        .sum();
    let r_squared = if ss_tot < 1e-30 {
        1.0 // a flat log-error line is fitted perfectly by slope 0
    } else {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    };

    Ok(RateFit {
        slope,
        intercept,
        r_squared,
        records: usable,
        saturated,
    })
}

/// Window moment: the operator's density applied to the centered monomial
/// prod_i (k_i/n - x_i)^{alpha_i}. The zero multi-index reproduces the bare
/// weight sum. Moments describe the window itself, so the config's kind does
/// not enter.
pub fn moment(config: &OperatorConfig, x: &MultivariatePoint, alpha: &[usize]) -> Result<f64> {
    if alpha.len() != config.dimension() || x.dimension() != config.dimension() {
        return Err(Error::InvalidParameter(format!(
            "moment multi-index and point must have dimension {}",
            config.dimension()
        )));
    }
    let order: usize = alpha.iter().sum();
    if order > 6 {
        return Err(Error::InvalidParameter(format!(
            "moment order {order} exceeds the supported maximum 6"
        )));
    }
    let window = density::build_window(
        config.n(),
        x,
        config.activation(),
        config.truncation_tol(),
    )?;
    let lo = window.lo();
    let tables = density::phi_tables(config.activation(), config.n(), x.coords(), &window);
    let n_f = config.n() as f64;
    let coords = x.coords();
    let value = tensor_window_sum(&tables, &lo, &mut |k| {
        let mut prod = 1.0;
        for axis in 0..alpha.len() {
            let a = alpha[axis];
            if a > 0 {
                prod *= (k[axis] as f64 / n_f - coords[axis]).powi(a as i32);
            }
        }
        prod
    });
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite(format!(
            "moment {alpha:?} at {coords:?} is not finite"
        )))
    }
}

/// Splits the pointwise operator error into Taylor main terms and a residual:
///
/// ```text
/// main  = sum over 1 <= |alpha| <= m of  f^(alpha)(x)/alpha! * moment(alpha)
/// residual = A_n(f, x) - f(x) - main
/// ```
///
/// so that `main + residual + f(x)` rebuilds `A_n(f, x)` exactly up to
/// floating-point rearrangement. The residual is the part of the error the
/// moment expansion cannot explain; it shrinks faster than any single
/// main term as n grows.
pub fn voronovskaya_residual(
    config: &OperatorConfig,
    f: &TestFunction,
    x: &MultivariatePoint,
    m: usize,
) -> Result<(f64, f64)> {
    if config.kind() != OperatorKind::Basic {
        return Err(Error::InvalidConfig(format!(
            "the main-term decomposition is defined for the basic operator, got {}",
            config.kind()
        )));
    }
    if f.dimension() != config.dimension() {
        return Err(Error::InvalidParameter(format!(
            "function dimension {} does not match operator dimension {}",
            f.dimension(),
            config.dimension()
        )));
    }
    if m > f.m_max() {
        return Err(Error::InvalidParameter(format!(
            "expansion order {m} exceeds the derivatives available for '{}'",
            f.name()
        )));
    }
    let target = f.clone();
    let eval_target = move |t: &[f64]| target.eval(t);
    let operator_value = operators::apply_basic(config, &eval_target, x)?;

    let mut main = 0.0;
    for order in 1..=m {
        for alpha in compositions(config.dimension(), order) {
            let derivative = f.partial(&alpha, x.coords())?;
            if derivative == 0.0 {
                continue;
            }
            main += derivative / multi_factorial(&alpha) * moment(config, x, &alpha)?;
        }
    }
    let residual = operator_value - f.eval(x.coords()) - main;
    Ok((main, residual))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::activation::ActivationParams;
    use approx::assert_relative_eq;

    fn params(q: f64, lambda: f64) -> ActivationParams {
        ActivationParams::new(q, lambda).unwrap()
    }

    fn basic_config(n: u32, dim: usize, q: f64, lambda: f64) -> OperatorConfig {
        OperatorConfig::new(OperatorKind::Basic, n, dim, params(q, lambda)).unwrap()
    }

    fn point(coords: &[f64]) -> MultivariatePoint {
        MultivariatePoint::new(coords.to_vec()).unwrap()
    }

    fn record(n: u32, value: f64) -> ErrorRecord {
        ErrorRecord::new(n, NormKind::Sup, value).unwrap()
    }

    #[test]
    fn plan_validation_rejects_malformed_sweeps() {
        let base = basic_config(8, 1, 1.0, 1.0);
        let grid = GridSpec::new(vec![-1.0], vec![1.0], 11).unwrap();
        let ok = SweepPlan::new(
            base.clone(),
            vec![8, 16, 32],
            NormKind::Sup,
            "gaussian",
            grid.clone(),
            0,
        );
        assert!(ok.is_ok());
        // too short
        assert!(SweepPlan::new(base.clone(), vec![8, 16], NormKind::Sup, "gaussian", grid.clone(), 0).is_err());
        // not increasing
        assert!(SweepPlan::new(base.clone(), vec![8, 8, 16], NormKind::Sup, "gaussian", grid.clone(), 0).is_err());
        // unknown function
        assert!(SweepPlan::new(base.clone(), vec![8, 16, 32], NormKind::Sup, "nope", grid.clone(), 0).is_err());
        // norm wants derivatives the target does not provide
        assert!(SweepPlan::new(
            base.clone(),
            vec![8, 16, 32],
            NormKind::Sobolev { m: 1, p: 2.0 },
            "holder05",
            grid.clone(),
            0
        )
        .is_err());
        // grid dimension mismatch
        let grid2 = GridSpec::new(vec![-1.0, -1.0], vec![1.0, 1.0], 5).unwrap();
        assert!(SweepPlan::new(base, vec![8, 16, 32], NormKind::Sup, "gaussian", grid2, 0).is_err());
    }

    #[test]
    fn pure_power_law_is_fitted_exactly() {
        let records: Vec<ErrorRecord> = [8u32, 16, 32, 64, 128, 256]
            .iter()
            .map(|&n| record(n, 7.0 * (n as f64).powi(-2)))
            .collect();
        let fit = fit_rate(&records).unwrap();
        assert!((fit.slope + 2.0).abs() < 1e-12, "slope {}", fit.slope);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        assert_relative_eq!(fit.intercept.exp(), 7.0, max_relative = 1e-10);
        assert!(!fit.saturated);
        assert_eq!(fit.records.len(), 6);
    }

    #[test]
    fn wobbled_power_law_is_fitted_within_tolerance() {
        let records: Vec<ErrorRecord> = [8u32, 16, 32, 64, 128]
            .iter()
            .enumerate()
            .map(|(i, &n)| {
                let wobble = 1.0 + 0.01 * if i % 2 == 0 { 1.0 } else { -1.0 };
                record(n, 3.0 * (n as f64).powf(-1.5) * wobble)
            })
            .collect();
        let fit = fit_rate(&records).unwrap();
        assert!((fit.slope + 1.5).abs() < 0.05, "slope {}", fit.slope);
    }

    #[test]
    fn saturated_records_are_excluded_and_flagged() {
        let mut records: Vec<ErrorRecord> = [8u32, 16, 32]
            .iter()
            .map(|&n| record(n, 1e-2 * (n as f64).powi(-2)))
            .collect();
        records.push(record(64, 0.0));
        let fit = fit_rate(&records).unwrap();
        assert!(fit.saturated);
        assert_eq!(fit.records.len(), 3);
        assert!((fit.slope + 2.0).abs() < 1e-9);

        // all at the floor: an explicit saturation error, not a fit
        let flat: Vec<ErrorRecord> = [8u32, 16, 32].iter().map(|&n| record(n, 0.0)).collect();
        match fit_rate(&flat) {
            Err(Error::Saturated(_)) => {}
            other => panic!("expected saturation, got {other:?}"),
        }
    }

    #[test]
    fn custom_floors_widen_the_exclusion() {
        let records: Vec<ErrorRecord> = [(8u32, 1e-2), (16, 1e-3), (32, 1e-4), (64, 1e-7)]
            .iter()
            .map(|&(n, v)| record(n, v))
            .collect();
        let fit = fit_rate_with_floor(&records, 1e-6).unwrap();
        assert!(fit.saturated);
        assert_eq!(fit.records.len(), 3);
        assert!(fit_rate(&records).unwrap().records.len() == 4);
    }

    #[test]
    fn constant_sweeps_sit_below_the_truncation_tolerance() {
        let base = basic_config(8, 1, 1.3, 1.1);
        let grid = GridSpec::new(vec![-1.0], vec![1.0], 21).unwrap();
        let plan = SweepPlan::new(base, vec![8, 16, 32], NormKind::Sup, "const", grid, 0).unwrap();
        for r in run_sweep(&plan).unwrap() {
            assert!(
                r.value < 1e-12,
                "constant error {} at n = {} is above the truncation tolerance",
                r.value,
                r.n
            );
        }
    }

    #[test]
    fn gaussian_sup_errors_decrease_strictly() {
        let base = basic_config(8, 1, 1.0, 1.0);
        let grid = GridSpec::new(vec![-1.0], vec![1.0], 41).unwrap();
        let plan =
            SweepPlan::new(base, vec![8, 16, 32, 64], NormKind::Sup, "gaussian", grid, 0).unwrap();
        let records = run_sweep(&plan).unwrap();
        for pair in records.windows(2) {
            assert!(
                pair[1].value < pair[0].value,
                "error did not drop from n = {} to n = {}",
                pair[0].n,
                pair[1].n
            );
        }
    }

    #[test]
    fn sweeps_are_insensitive_to_the_truncation_tolerance() {
        // the window budget changes the operator value by about the budget
        // itself, far below the approximation error being measured
        let grid = GridSpec::new(vec![-1.0], vec![1.0], 21).unwrap();
        let sweep_at = |tol: f64| -> Vec<ErrorRecord> {
            let base = basic_config(8, 1, 1.0, 1.0).with_truncation_tol(tol).unwrap();
            let plan = SweepPlan::new(
                base,
                vec![8, 16, 32, 64],
                NormKind::Sup,
                "gaussian",
                grid.clone(),
                0,
            )
            .unwrap();
            run_sweep(&plan).unwrap()
        };
        let tight = sweep_at(1e-12);
        let loose = sweep_at(1e-6);
        for (a, b) in tight.iter().zip(&loose) {
            assert!(
                (a.value - b.value).abs() < 1e-5 * a.value.max(1.0),
                "n = {}: {} vs {}",
                a.n,
                a.value,
                b.value
            );
        }
    }

    #[test]
    fn sweeps_are_deterministic_bit_for_bit() {
        let base = basic_config(8, 1, 0.8, 1.2);
        let grid = GridSpec::new(vec![-1.0], vec![1.0], 21).unwrap();
        let plan =
            SweepPlan::new(base, vec![8, 16, 32], NormKind::Sup, "trig", grid, 42).unwrap();
        let first = run_sweep(&plan).unwrap();
        let second = run_sweep(&plan).unwrap();
        for (a, b) in first.iter().zip(&second) {
            assert_eq!(a.value.to_bits(), b.value.to_bits());
        }
    }

    #[test]
    fn moment_zero_is_the_weight_sum() {
        for (kind, q, lambda, n, dim) in [
            (OperatorKind::Basic, 1.0, 1.0, 8u32, 1usize),
            (OperatorKind::Kantorovich, 0.6, 2.0, 16, 2),
            (OperatorKind::Quadrature, 2.5, 0.9, 32, 1),
        ] {
            let cfg = OperatorConfig::new(kind, n, dim, params(q, lambda)).unwrap();
            let coords: Vec<f64> = (0..dim).map(|i| 0.3 + 0.4 * i as f64).collect();
            let x = MultivariatePoint::new(coords).unwrap();
            let window =
                density::build_window(n, &x, cfg.activation(), cfg.truncation_tol()).unwrap();
            let ws = density::weight_sum(n, &x, cfg.activation(), &window);
            let m0 = moment(&cfg, &x, &vec![0; dim]).unwrap();
            assert!((m0 - ws).abs() < 1e-14, "{m0} vs {ws}");
            assert!((m0 - 1.0).abs() < cfg.truncation_tol());
        }
    }

    #[test]
    fn odd_moments_cancel_exactly_at_lattice_points_for_unit_asymmetry() {
        // x on the lattice and q = 1: the window pairs k0 + j with k0 - j,
        // the density weights agree bit for bit, and the centered monomial
        // flips sign, so the end-paired sum cancels to exactly zero
        let cfg = basic_config(8, 1, 1.0, 1.0);
        let x = point(&[0.375]);
        for order in [1usize, 3, 5] {
            let m = moment(&cfg, &x, &[order]).unwrap();
            assert_eq!(m, 0.0, "order {order} moment {m}");
        }
    }

    #[test]
    fn even_moments_are_positive() {
        let cfg1 = basic_config(8, 1, 1.4, 1.0);
        assert!(moment(&cfg1, &point(&[0.2]), &[2]).unwrap() > 0.0);
        assert!(moment(&cfg1, &point(&[0.2]), &[4]).unwrap() > 0.0);
        let cfg2 = basic_config(8, 2, 0.7, 1.3);
        assert!(moment(&cfg2, &point(&[0.2, -0.5]), &[2, 2]).unwrap() > 0.0);
    }

    #[test]
    fn moment_rejects_oversized_orders_and_mismatched_shapes() {
        let cfg = basic_config(8, 1, 1.0, 1.0);
        assert!(moment(&cfg, &point(&[0.2]), &[7]).is_err());
        assert!(moment(&cfg, &point(&[0.2]), &[1, 1]).is_err());
        assert!(moment(&cfg, &point(&[0.2, 0.3]), &[1]).is_err());
    }

    #[test]
    fn second_moment_scales_inverse_quadratically() {
        let x = point(&[0.3]);
        let records: Vec<ErrorRecord> = [8u32, 16, 32, 64, 128, 256]
            .iter()
            .map(|&n| {
                let cfg = basic_config(n, 1, 1.3, 0.9);
                record(n, moment(&cfg, &x, &[2]).unwrap())
            })
            .collect();
        let fit = fit_rate(&records).unwrap();
        assert!(
            (fit.slope + 2.0).abs() < 0.05,
            "second-moment slope {}",
            fit.slope
        );
    }

    #[test]
    fn residual_vanishes_for_polynomials_within_the_expansion_order() {
        let x = point(&[0.3]);
        for (name, m) in [("square", 2usize), ("square", 3), ("poly4", 4)] {
            let f = lookup_function(name, 1).unwrap();
            let cfg = basic_config(16, 1, 1.0, 1.0);
            let (_, residual) = voronovskaya_residual(&cfg, &f, &x, m).unwrap();
            assert!(
                residual.abs() < 1e-10,
                "{name} at order {m}: residual {residual}"
            );
        }
    }

    #[test]
    fn decomposition_rebuilds_the_operator_value_exactly() {
        let f = lookup_function("gaussian", 1).unwrap();
        let x = point(&[0.3]);
        for n in [8u32, 32, 128] {
            let cfg = basic_config(n, 1, 1.2, 1.0);
            let (main, residual) = voronovskaya_residual(&cfg, &f, &x, 2).unwrap();
            let eval_target = |t: &[f64]| f.eval(t);
            let a = operators::apply_basic(&cfg, &eval_target, &x).unwrap();
            let rebuilt = main + residual + f.eval(x.coords());
            assert!(
                (rebuilt - a).abs() <= 1e-14 * a.abs().max(1.0),
                "n = {n}: rebuilt {rebuilt} vs operator {a}"
            );
        }
    }

    #[test]
    fn odd_main_terms_vanish_at_lattice_symmetric_points() {
        // each odd-order term carries an odd moment, which is exactly zero
        // at a lattice point with q = 1
        let f = lookup_function("gaussian", 1).unwrap();
        let cfg = basic_config(8, 1, 1.0, 1.0);
        let x = point(&[0.375]);
        let (main1, _) = voronovskaya_residual(&cfg, &f, &x, 1).unwrap();
        assert!(main1.abs() < 1e-10, "order-1 main term {main1}");
    }

    #[test]
    fn residual_decays_faster_than_the_raw_error() {
        let f = lookup_function("gaussian", 1).unwrap();
        let x = point(&[0.0]);
        let eval_target = |t: &[f64]| f.eval(t);
        let mut raw = Vec::new();
        let mut residuals = Vec::new();
        for &n in &[8u32, 16, 32, 64, 128, 256] {
            let cfg = basic_config(n, 1, 1.0, 1.0);
            let a = operators::apply_basic(&cfg, &eval_target, &x).unwrap();
            raw.push(record(n, (a - f.eval(x.coords())).abs()));
            let (_, residual) = voronovskaya_residual(&cfg, &f, &x, 2).unwrap();
            residuals.push(record(n, residual.abs()));
        }
        let raw_fit = fit_rate_with_floor(&raw, 1e-10).unwrap();
        let residual_fit = fit_rate_with_floor(&residuals, 1e-10).unwrap();
        assert!(
            raw_fit.slope - residual_fit.slope >= 0.5,
            "raw {} vs residual {}",
            raw_fit.slope,
            residual_fit.slope
        );
    }

    #[test]
    fn decomposition_requires_basic_kind_and_available_derivatives() {
        let f = lookup_function("gaussian", 1).unwrap();
        let x = point(&[0.3]);
        let kant =
            OperatorConfig::new(OperatorKind::Kantorovich, 8, 1, params(1.0, 1.0)).unwrap();
        assert!(voronovskaya_residual(&kant, &f, &x, 2).is_err());
        let cfg = basic_config(8, 1, 1.0, 1.0);
        assert!(voronovskaya_residual(&cfg, &f, &x, 7).is_err());
        let h = lookup_function("holder05", 1).unwrap();
        assert!(voronovskaya_residual(&cfg, &h, &x, 1).is_err());
    }
}
