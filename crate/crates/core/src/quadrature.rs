//! Gauss-Legendre rules on [0, 1] and an adaptive Simpson integrator.

/// Nodes and weights of the `order`-point Gauss-Legendre rule mapped to [0, 1].
/// Weights sum to 1, so the rule computes the mean of the integrand over the
/// cell, which is exactly the normalization the cell-average operator needs.
pub(crate) fn gauss_legendre_01(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1, "quadrature order must be at least 1");
    let n = order;
    // Positive roots of P_n in decreasing order (the last is 0 for odd n).
    let mut upper: Vec<(f64, f64)> = Vec::with_capacity(n.div_ceil(2));
    for i in 1..=n.div_ceil(2) {
        // Newton iteration on P_n starting from the Chebyshev-like estimate.
        let mut x = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            let step = p / d;
            x -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        upper.push((x, 2.0 / ((1.0 - x * x) * d * d)));
    }
    // Assemble the full rule in ascending node order; roots come in +/- pairs.
    let has_center = n % 2 == 1;
    let mut full: Vec<(f64, f64)> = Vec::with_capacity(n);
    for &(x, w) in upper.iter() {
        if !(has_center && x.abs() < 1e-12) {
            full.push((-x, w));
        }
    }
    if has_center {
        full.push((0.0, upper[upper.len() - 1].1));
    }
    for &(x, w) in upper.iter().rev() {
        if !(has_center && x.abs() < 1e-12) {
            full.push((x, w));
        }
    }
    (
        full.iter().map(|(x, _)| 0.5 * (x + 1.0)).collect(),
        full.iter().map(|(_, w)| 0.5 * w).collect(),
    )
}

/// (P_n(x), P_n'(x)) via the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Adaptive Simpson integration of `f` over [a, b] to absolute tolerance `tol`.
pub(crate) fn adaptive_simpson<F: Fn(f64) -> f64 + Copy>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    let m = 0.5 * (a + b);
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    let whole = simpson(a, b, fa, fm, fb);
    step(f, a, b, fa, fm, fb, whole, tol, 60)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn step<F: Fn(f64) -> f64 + Copy>(
    f: F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gauss_nodes_match_reference_tables() {
        // Order 2 on [-1,1]: +-1/sqrt(3), weights 1. Mapped to [0,1].
        let (n2, w2) = gauss_legendre_01(2);
        assert_relative_eq!(n2[0], 0.5 * (1.0 - 1.0 / 3.0_f64.sqrt()), epsilon = 1e-14);
        assert_relative_eq!(n2[1], 0.5 * (1.0 + 1.0 / 3.0_f64.sqrt()), epsilon = 1e-14);
        assert_relative_eq!(w2[0], 0.5, epsilon = 1e-14);

        // Order 3 on [-1,1]: 0, +-sqrt(3/5); weights 8/9, 5/9.
        let (n3, w3) = gauss_legendre_01(3);
        assert_relative_eq!(n3[1], 0.5, epsilon = 1e-14);
        assert_relative_eq!(n3[2], 0.5 * (1.0 + (3.0_f64 / 5.0).sqrt()), epsilon = 1e-14);
        assert_relative_eq!(w3[1], 4.0 / 9.0, epsilon = 1e-14);
        assert_relative_eq!(w3[0], 5.0 / 18.0, epsilon = 1e-14);

        // Order 5 central node and weight (128/225 on [-1,1]).
        let (n5, w5) = gauss_legendre_01(5);
        assert_relative_eq!(n5[2], 0.5, epsilon = 1e-14);
        assert_relative_eq!(w5[2], 64.0 / 225.0, epsilon = 1e-14);
    }

    #[test]
    fn gauss_weights_sum_to_one() {
        for order in 1..=12 {
            let (nodes, weights) = gauss_legendre_01(order);
            assert_eq!(nodes.len(), order);
            let total: f64 = weights.iter().sum();
            assert_relative_eq!(total, 1.0, epsilon = 1e-13);
            assert!(nodes.iter().all(|&x| (0.0..=1.0).contains(&x)));
        }
    }

    #[test]
    fn gauss_rule_is_exact_for_polynomials() {
        // order p integrates degree 2p-1 exactly
        for order in 1..=6usize {
            let deg = 2 * order - 1;
            let (nodes, weights) = gauss_legendre_01(order);
            let approx: f64 = nodes
                .iter()
                .zip(&weights)
                .map(|(x, w)| w * x.powi(deg as i32))
                .sum();
            let exact = 1.0 / (deg as f64 + 1.0);
            assert_relative_eq!(approx, exact, epsilon = 1e-13);
        }
    }

    #[test]
    fn simpson_integrates_smooth_functions() {
        let v = adaptive_simpson(|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-10);
        assert_relative_eq!(v, 2.0, epsilon = 1e-9);
        let g = adaptive_simpson(|x: f64| (-x * x).exp(), -8.0, 8.0, 1e-10);
        assert_relative_eq!(g, std::f64::consts::PI.sqrt(), epsilon = 1e-9);
    }
}
