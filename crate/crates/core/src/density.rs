//! Multivariate tensor-product density Z(x) = prod_i phi(x_i), truncated
//! lattice windows for the operator sums, and the windowed weight sum used to
//! verify the partition of unity in N dimensions.

use crate::activation::{phi, window_radius, ActivationParams};
use crate::error::{Error, Result};
use crate::util::tensor_window_sum;

/// Highest supported dimension. Window cardinality grows like (2W+1)^N, so
/// desk-scale experiments stay at N <= 3 with one dimension of headroom.
pub const MAX_DIMENSION: usize = 4;

/// A point in R^N with finite coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct MultivariatePoint {
    coords: Vec<f64>,
}

impl MultivariatePoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidParameter(
                "a point needs at least one coordinate".into(),
            ));
        }
        if let Some(bad) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "point coordinates must be finite, got {bad}"
            )));
        }
        Ok(Self { coords })
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dimension(&self) -> usize {
        self.coords.len()
    }
}

/// Axis-aligned box of lattice points: `center[i] - radius ..= center[i] + radius`
/// on every axis. The box is the finite stand-in for the full lattice sum;
/// `radius` is uniform across axes because the density decays identically per
/// coordinate after tensoring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeWindow {
    center: Vec<i64>,
    radius: u32,
}

impl LatticeWindow {
    pub(crate) fn new(center: Vec<i64>, radius: u32) -> Self {
        debug_assert!(radius >= 1);
        debug_assert!(!center.is_empty());
        Self { center, radius }
    }

    pub fn center(&self) -> &[i64] {
        &self.center
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn dimension(&self) -> usize {
        self.center.len()
    }

    /// First lattice index per axis.
    pub fn lo(&self) -> Vec<i64> {
        self.center.iter().map(|c| c - self.radius as i64).collect()
    }

    /// Last lattice index per axis (inclusive).
    pub fn hi(&self) -> Vec<i64> {
        self.center.iter().map(|c| c + self.radius as i64).collect()
    }

    /// Points per axis: 2 * radius + 1.
    pub fn axis_len(&self) -> usize {
        2 * self.radius as usize + 1
    }

    /// Total number of lattice points in the box, (2W+1)^N.
    pub fn cardinality(&self) -> u128 {
        (self.axis_len() as u128).pow(self.dimension() as u32)
    }
}

/// The multivariate density Z(x) = prod_i phi(x_i): strictly positive and
/// even under coordinate-wise negation.
pub fn z_density(params: &ActivationParams, point: &MultivariatePoint) -> f64 {
    point.coords().iter().map(|&c| phi(params, c)).product()
}

/// Rounds n * x to the nearest lattice integer, rejecting coordinates too
/// large for exact i64 indexing.
pub(crate) fn lattice_center(n: u32, x: &[f64]) -> Result<Vec<i64>> {
    const LIMIT: f64 = 9.0e15; // below 2^53; keeps n*x rounding meaningful
    x.iter()
        .map(|&c| {
            let scaled = n as f64 * c;
            if !scaled.is_finite() || scaled.abs() > LIMIT {
                return Err(Error::NonFinite(format!(
                    "n * x = {scaled} is too large to index the sample lattice"
                )));
            }
            Ok(scaled.round() as i64)
        })
        .collect()
}

/// Builds the truncation window for evaluating an operator at `x` with scale
/// `n`: centered at the lattice point nearest to n*x, with the per-axis
/// radius sized so the omitted weight mass stays below `tol`. The per-axis
/// budget is `tol / N`; a union bound over axes then caps the total omitted
/// mass of the product density by `tol`.
pub fn build_window(
    n: u32,
    x: &MultivariatePoint,
    params: &ActivationParams,
    tol: f64,
) -> Result<LatticeWindow> {
    if n == 0 {
        return Err(Error::InvalidParameter("scale n must be >= 1".into()));
    }
    if !tol.is_finite() || tol <= 0.0 || tol >= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "window tolerance must lie in (0, 1), got {tol}"
        )));
    }
    let dim = x.dimension();
    if dim > MAX_DIMENSION {
        return Err(Error::InvalidParameter(format!(
            "dimension {dim} exceeds the supported maximum {MAX_DIMENSION}"
        )));
    }
    // Split the budget across axes with an 8x cushion so that downstream
    // sums against function values of moderate size (|f| up to a few units)
    // still land under tol; the cushion costs under one lattice step of
    // radius because the tails decay geometrically.
    let per_axis = tol / (8.0 * dim as f64);
    let radius = window_radius(params, per_axis)?;
    let center = lattice_center(n, x.coords())?;
    Ok(LatticeWindow::new(center, radius))
}

/// Per-axis tables of phi(u_a - k) for k across the window, the shared first
/// stage of every windowed operator sum.
pub(crate) fn phi_tables(
    params: &ActivationParams,
    n: u32,
    x: &[f64],
    window: &LatticeWindow,
) -> Vec<Vec<f64>> {
    let lo = window.lo();
    x.iter()
        .zip(&lo)
        .map(|(&c, &first)| {
            let u = n as f64 * c;
            (0..window.axis_len())
                .map(|j| phi(params, u - (first + j as i64) as f64))
                .collect()
        })
        .collect()
}

/// Windowed lattice mass: sum over the window of Z(n x - k). Lies in
/// (1 - tol, 1] up to roundoff when the window was built for (n, x) with
/// budget tol.
pub fn weight_sum(
    n: u32,
    x: &MultivariatePoint,
    params: &ActivationParams,
    window: &LatticeWindow,
) -> f64 {
    let tables = phi_tables(params, n, x.coords(), window);
    tensor_window_sum(&tables, &window.lo(), &mut |_| 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::activation;
    use proptest::prelude::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn params(q: f64, lambda: f64) -> ActivationParams {
        ActivationParams::new(q, lambda).unwrap()
    }

    fn point(coords: &[f64]) -> MultivariatePoint {
        MultivariatePoint::new(coords.to_vec()).unwrap()
    }

    #[test]
    fn point_construction_validates() {
        assert!(MultivariatePoint::new(vec![]).is_err());
        assert!(MultivariatePoint::new(vec![1.0, f64::NAN]).is_err());
        assert!(MultivariatePoint::new(vec![0.0, -3.5]).is_ok());
    }

    #[test]
    fn z_in_one_dimension_is_phi() {
        let p = params(2.0, 1.0);
        for &x in &[-2.2, 0.0, 0.9, 4.0] {
            assert_eq!(z_density(&p, &point(&[x])), activation::phi(&p, x));
        }
    }

    #[test]
    fn z_is_even_under_coordinatewise_negation() {
        let p = params(2.0, 1.0);
        for &(a, b) in &[(0.3, -1.2), (2.0, 0.0), (-0.7, -0.9)] {
            let v = z_density(&p, &point(&[a, b]));
            let w = z_density(&p, &point(&[-a, -b]));
            assert!((v - w).abs() < 1e-14);
            assert!(v > 0.0);
        }
    }

    #[test]
    fn z_factorizes_over_axes() {
        // separability: varying one coordinate traces the univariate phi
        // profile scaled by the frozen remaining factor
        let p = params(3.0, 0.8);
        let fixed = 0.4;
        let scale = activation::phi(&p, fixed);
        for &t in &[-1.5, -0.2, 0.0, 0.8, 2.5] {
            let joint = z_density(&p, &point(&[t, fixed]));
            let split = activation::phi(&p, t) * scale;
            assert!((joint - split).abs() < 1e-14);
        }
    }

    #[test]
    fn z_integrates_to_one_in_two_dimensions() {
        // Tensor Fubini: the 2-D integral is the square of the univariate
        // integral, each verified by adaptive quadrature.
        let p = params(1.0, 1.0);
        let one_axis = activation::phi_integral(&p, 1e-8).unwrap();
        assert!((one_axis * one_axis - 1.0).abs() < 1e-6);
    }

    #[test]
    fn window_centers_on_the_nearest_lattice_point() {
        let p = params(1.0, 1.0);
        let w = build_window(4, &point(&[0.6, -1.3]), &p, 1e-10).unwrap();
        // n*x = (2.4, -5.2) rounds to (2, -5)
        assert_eq!(w.center(), &[2, -5]);
        assert!(w.radius() >= 1);
        assert_eq!(w.dimension(), 2);
        assert_eq!(w.cardinality(), (2 * w.radius() as u128 + 1).pow(2));
    }

    #[test]
    fn window_center_translates_with_n_but_radius_does_not() {
        let p = params(1.0, 1.0);
        let x = point(&[0.37]);
        let w1 = build_window(16, &x, &p, 1e-12).unwrap();
        let w2 = build_window(32, &x, &p, 1e-12).unwrap();
        assert_eq!(w1.center(), &[6]); // 5.92 rounds to 6
        assert_eq!(w2.center(), &[12]); // 11.84 rounds to 12
        assert_eq!(w1.radius(), w2.radius());
    }

    #[test]
    fn window_rejects_bad_inputs() {
        let p = params(1.0, 1.0);
        let x = point(&[0.0]);
        assert!(build_window(0, &x, &p, 1e-10).is_err());
        assert!(build_window(4, &x, &p, 0.0).is_err());
        assert!(build_window(4, &x, &p, 1.0).is_err());
        assert!(build_window(4, &point(&[0.0; 5]), &p, 1e-10).is_err());
        // coordinate too large for exact lattice indexing
        assert!(build_window(4, &point(&[1e300]), &p, 1e-10).is_err());
    }

    #[test]
    fn omitted_mass_is_below_budget_against_a_triple_radius_window() {
        let p = params(1.0, 1.0);
        let x = point(&[0.0]);
        let w = build_window(1, &x, &p, 1e-12).unwrap();
        assert_eq!(w.center(), &[0]);
        let inside = weight_sum(1, &x, &p, &w);
        let wide = LatticeWindow::new(w.center().to_vec(), 3 * w.radius());
        let all = weight_sum(1, &x, &p, &wide);
        assert!(all - inside >= 0.0);
        assert!(all - inside < 1e-12);
        assert!((all - 1.0).abs() < 1e-12);
    }

    #[test]
    fn weight_sum_is_one_within_budget() {
        let p = params(2.0, 1.3);
        for &(n, xs) in &[(1u32, 0.0), (7, 0.41), (32, -3.17)] {
            let x = point(&[xs]);
            let w = build_window(n, &x, &p, 1e-12).unwrap();
            let s = weight_sum(n, &x, &p, &w);
            assert!(
                (s - 1.0).abs() < 2e-12,
                "weight sum {s} at n={n}, x={xs}"
            );
        }
    }

    #[test]
    fn weight_sum_matches_between_integer_and_half_integer_grids() {
        // shift invariance: the lattice sum at offset u equals the sum at
        // u + 1 because the index set is just relabeled
        let p = params(1.5, 1.0);
        let a = point(&[0.5]);
        let b = point(&[1.5]);
        let wa = build_window(1, &a, &p, 1e-12).unwrap();
        let wb = build_window(1, &b, &p, 1e-12).unwrap();
        let sa = weight_sum(1, &a, &p, &wa);
        let sb = weight_sum(1, &b, &p, &wb);
        assert!((sa - sb).abs() < 1e-13);
    }

    #[test]
    fn coarse_budget_still_bounds_the_defect() {
        let p = params(1.0, 1.0);
        let x = point(&[0.23]);
        let w = build_window(8, &x, &p, 1e-4).unwrap();
        let s = weight_sum(8, &x, &p, &w);
        assert!((s - 1.0).abs() <= 1e-4);
    }

    #[test]
    fn translation_covariance_of_the_summand() {
        // Z(n x - k) is unchanged when x shifts by exactly 1/n and k by 1.
        let p = params(2.0, 1.0);
        let n = 8u32;
        let x0 = 0.3125; // exact dyadic so x0 + 1/8 is exact too
        let shifted = x0 + 1.0 / n as f64;
        for k in -3i64..=3 {
            let a = activation::phi(&p, n as f64 * x0 - k as f64);
            let b = activation::phi(&p, n as f64 * shifted - (k + 1) as f64);
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn random_configurations_keep_partition_of_unity() {
        // 200 random draws across N in {1,2,3}
        let mut rng = StdRng::seed_from_u64(42);
        let tol = 1e-9;
        for _ in 0..200 {
            let dim = rng.random_range(1..=3usize);
            let q: f64 = rng.random_range(0.25..4.0);
            let lam: f64 = rng.random_range(0.5..2.5);
            let n: u32 = rng.random_range(1..=64);
            let coords: Vec<f64> = (0..dim).map(|_| rng.random_range(-5.0..5.0)).collect();
            let p = params(q, lam);
            let x = MultivariatePoint::new(coords).unwrap();
            let w = build_window(n, &x, &p, tol).unwrap();
            let s = weight_sum(n, &x, &p, &w);
            assert!(
                (s - 1.0).abs() < 10.0 * tol,
                "defect {} for q={q} lam={lam} n={n} dim={dim}",
                (s - 1.0).abs()
            );
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn weight_sum_stays_in_the_unit_band(
            q in 0.3f64..3.0,
            lam in 0.6f64..2.0,
            n in 1u32..40,
            x0 in -8.0f64..8.0,
        ) {
            let p = params(q, lam);
            let x = point(&[x0]);
            let w = build_window(n, &x, &p, 1e-10).unwrap();
            let s = weight_sum(n, &x, &p, &w);
            prop_assert!(s <= 1.0 + 1e-12);
            prop_assert!(s > 1.0 - 1e-10);
        }
    }
}
