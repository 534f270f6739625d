//! Perturbed hyperbolic tangent and the symmetrized bump density built from it.
//!
//! The activation is
//!
//! ```text
//! g_{q,lambda}(x) = (e^{lambda x} - q e^{-lambda x}) / (e^{lambda x} + q e^{-lambda x})
//! ```
//!
//! for q, lambda > 0, equal to tanh(lambda x - ln(q)/2). It is strictly
//! increasing from -1 to 1 and satisfies the duality
//! g_{q,lambda}(-x) = -g_{1/q,lambda}(x); it is odd only when q = 1.
//! Differencing across a unit step yields the strictly positive bump
//!
//! ```text
//! M_{q,lambda}(x) = (g_{q,lambda}(x + 1) - g_{q,lambda}(x - 1)) / 4,
//! ```
//!
//! a mass-one bump centered at mu = ln(q)/(2 lambda) that decays like
//! e^{-2 lambda |x|}. Averaging the bump with its q -> 1/q dual,
//!
//! ```text
//! phi(x) = (M_{q,lambda}(x) + M_{1/q,lambda}(x)) / 2,
//! ```
//!
//! gives an even, strictly positive density whose integer translates sum to 1,
//! which is what makes the operators built on it reproduce constants.
//!
//! Raw evaluation of the defining ratio overflows near |lambda x| > 709, so
//! g and its derivative are computed in two branches that factor out the
//! dominant exponential and only ever exponentiate non-positive arguments.
//! The bump is not computed as a difference of g values: that cancels to
//! exactly 0 once both g values round to +-1 (|lambda x| beyond roughly 19).
//! Instead it uses the algebraically identical product form derived from
//! tanh(a) - tanh(b) = sinh(a - b) / (cosh(a) cosh(b)) with a - b = 2 lambda,
//! which stays strictly positive until the true value underflows f64 entirely.

use crate::error::{Error, Result};
use crate::quadrature::adaptive_simpson;

/// Parameters of the perturbed hyperbolic tangent: asymmetry `q > 0` and
/// slope `lambda > 0`. Carries two derived constants so the bump evaluation
/// in the operators' inner loops does not recompute logarithms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActivationParams {
    q: f64,
    lambda: f64,
    half_ln_q: f64,
    bump_front: f64,
}

impl ActivationParams {
    /// Builds a validated parameter set. Both values must be finite and
    /// strictly positive, and `q` must be large enough that `1/q` is finite,
    /// since the symmetrized density always evaluates the dual parameter.
    pub fn new(q: f64, lambda: f64) -> Result<Self> {
        if !q.is_finite() || q <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "q must be finite and positive, got {q}"
            )));
        }
        if !q.recip().is_finite() {
            return Err(Error::InvalidParameter(format!(
                "q = {q} is too small: 1/q overflows"
            )));
        }
        if !lambda.is_finite() || lambda <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "lambda must be finite and positive, got {lambda}"
            )));
        }
        Ok(Self {
            q,
            lambda,
            half_ln_q: 0.5 * q.ln(),
            // (1 - e^{-4 lambda}) / 2, exact for small lambda via exp_m1
            bump_front: -0.5 * (-4.0 * lambda).exp_m1(),
        })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// The dual parameter set with q replaced by 1/q.
    pub fn reciprocal(&self) -> Self {
        Self::new(self.q.recip(), self.lambda)
            .expect("the dual of a valid parameter set is valid")
    }

    /// Center of the bump built from these parameters: mu = ln(q)/(2 lambda).
    pub(crate) fn mode(&self) -> f64 {
        self.half_ln_q / self.lambda
    }
}

/// The activation g itself. Finite and in [-1, 1] for every finite `x`; the
/// value rounds to exactly +-1.0 once the correction term q e^{-2|lambda x|}
/// drops below half an ulp of 1 (|lambda x| beyond roughly 19 for moderate q).
pub fn g(params: &ActivationParams, x: f64) -> f64 {
    let t = params.lambda * x;
    if t >= 0.0 {
        let e = (-2.0 * t).exp();
        (1.0 - params.q * e) / (1.0 + params.q * e)
    } else {
        let e = (2.0 * t).exp();
        (e - params.q) / (e + params.q)
    }
}

/// First derivative of the activation: 4 q lambda / (e^{lambda x} + q e^{-lambda x})^2,
/// evaluated in the same two overflow-safe branches as [`g`]. Always strictly
/// positive in exact arithmetic; underflows to 0 in the far tails.
pub fn g_prime(params: &ActivationParams, x: f64) -> f64 {
    let scale = 4.0 * params.q * params.lambda;
    let t = params.lambda * x;
    if t >= 0.0 {
        let e = (-2.0 * t).exp();
        let den = 1.0 + params.q * e;
        scale * e / (den * den)
    } else {
        let e = (2.0 * t).exp();
        let den = e + params.q;
        scale * e / (den * den)
    }
}

/// The unit-step difference bump M(x) = (g(x+1) - g(x-1)) / 4. Strictly
/// positive, mass one, centered at ln(q)/(2 lambda).
///
/// Computed in the cancellation-free product form: with
/// a = lambda (x+1) - ln(q)/2 and b = lambda (x-1) - ln(q)/2,
///
/// ```text
/// M(x) = (1 - e^{-4 lambda}) / 2
///        * e^{2 lambda - |a| - |b|} / ((1 + e^{-2|a|}) (1 + e^{-2|b|})).
/// ```
///
/// |a| + |b| >= a - b = 2 lambda, so the exponent is never positive. The
/// larger magnitude is subtracted first, making the evaluation invariant
/// under swapping a and b; the bump of the q = 1 kernel is therefore even
/// bit for bit.
pub fn bump_m(params: &ActivationParams, x: f64) -> f64 {
    let lam = params.lambda;
    let a = (lam * (x + 1.0) - params.half_ln_q).abs();
    let b = (lam * (x - 1.0) - params.half_ln_q).abs();
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    let decay = ((2.0 * lam - hi) - lo).exp();
    params.bump_front * decay / ((1.0 + (-2.0 * a).exp()) * (1.0 + (-2.0 * b).exp()))
}

/// Derivative of the bump: M'(x) = -lambda (tanh(a) + tanh(b)) M(x), with the
/// same a, b as in [`bump_m`]. Zero exactly at the mode where a = -b.
pub fn bump_m_prime(params: &ActivationParams, x: f64) -> f64 {
    let lam = params.lambda;
    let a = lam * (x + 1.0) - params.half_ln_q;
    let b = lam * (x - 1.0) - params.half_ln_q;
    -lam * (a.tanh() + b.tanh()) * bump_m(params, x)
}

/// The symmetrized density phi(x) = (M_{q}(x) + M_{1/q}(x)) / 2: even,
/// strictly positive, integrates to 1, and its integer translates form a
/// partition of unity.
pub fn phi(params: &ActivationParams, x: f64) -> f64 {
    let dual = params.reciprocal();
    0.5 * (bump_m(params, x) + bump_m(&dual, x))
}

/// Derivative of the symmetrized density; odd, zero at the origin.
pub fn phi_prime(params: &ActivationParams, x: f64) -> f64 {
    let dual = params.reciprocal();
    0.5 * (bump_m_prime(params, x) + bump_m_prime(&dual, x))
}

/// Hard cap on the window search; tolerances that would need a larger radius
/// are rejected rather than silently truncated.
const RADIUS_CAP: u32 = 1 << 20;

/// Smallest integer radius `W` such that the lattice mass of phi outside
/// [-W, W] stays below `tol` for every window-center offset `u` with
/// |u| <= 1. Past both bump modes phi is strictly decreasing, so the worst
/// offset is exactly u = 1; the search tests that single offset against
/// 0.9 * tol, leaving a 10% margin over the brute-force tail sum.
/// Monotone non-increasing in `tol`.
pub fn window_radius(params: &ActivationParams, tol: f64) -> Result<u32> {
    if !tol.is_finite() || tol <= 0.0 || tol >= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "truncation tolerance must lie in (0, 1), got {tol}"
        )));
    }
    // Radii below this floor may still contain a bump mode, where the
    // monotone-tail argument does not apply.
    let floor = (params.mode().abs().ceil() as u32).saturating_add(2);
    let ok = |w: u32| lattice_tail(params, w, 1.0) < 0.9 * tol;
    let mut hi = floor;
    while !ok(hi) {
        if hi >= RADIUS_CAP {
            return Err(Error::InvalidParameter(format!(
                "window radius exceeds {RADIUS_CAP} before reaching tolerance {tol:e}; \
                 lambda = {} decays too slowly",
                params.lambda
            )));
        }
        hi = (hi.saturating_mul(2)).min(RADIUS_CAP);
    }
    let mut lo = floor;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(hi)
}

/// Brute-force lattice tail: sum of phi(u - k) over |k| > w, plus a geometric
/// remainder bound once the summed terms have entered the exponential tail.
/// Requires w at least one unit past both bump modes so the tail is monotone.
fn lattice_tail(params: &ActivationParams, w: u32, u: f64) -> f64 {
    let ratio = (-2.0 * params.lambda).exp();
    // With the per-step decay ratio r, the tail after the current pair is at
    // most pair * r / (1 - r).
    let tail_factor = if ratio < 1.0 {
        ratio / (1.0 - ratio)
    } else {
        f64::INFINITY
    };
    let mut total = 0.0;
    let mut j = w as i64 + 1;
    loop {
        let jf = j as f64;
        let pair = phi(params, u - jf) + phi(params, u + jf);
        total += pair;
        let remainder = pair * tail_factor;
        if remainder <= 1e-3 * (total + f64::MIN_POSITIVE) {
            return total + remainder;
        }
        if j - (w as i64) > 400_000 {
            // Decay too shallow to certify within the term budget; the
            // caller treats this as an unreachable tolerance.
            return f64::INFINITY;
        }
        j += 1;
    }
}

/// Integral of phi over the real line, computed by adaptive quadrature on
/// [-R, R] with R chosen so that the analytic exponential-tail bound of the
/// omitted mass is below `tol / 4`, then integrated to a matching interior
/// budget. The result differs from the true integral by less than `tol`.
pub fn phi_integral(params: &ActivationParams, tol: f64) -> Result<f64> {
    if !tol.is_finite() || tol <= 0.0 || tol > 0.1 {
        return Err(Error::InvalidParameter(format!(
            "quadrature tolerance must lie in (0, 0.1], got {tol}"
        )));
    }
    let mut r = params.mode().abs() + 2.0;
    while integral_tail_bound(params, r) >= 0.25 * tol {
        r += 1.0;
        if r > 1e7 {
            return Err(Error::InvalidParameter(format!(
                "quadrature interval exceeds 1e7 before reaching tolerance {tol:e}"
            )));
        }
    }
    Ok(adaptive_simpson(|x| phi(params, x), -r, r, 0.5 * tol))
}

/// Closed-form bound on the phi-mass outside [-r, r], valid for
/// r >= |mode| + 1. Both bumps obey M(x) <= e^{-2 lambda (x - 1 - mu)} / 2
/// past their mode, which integrates to the expression below.
fn integral_tail_bound(params: &ActivationParams, r: f64) -> f64 {
    let mu = params.mode();
    let lam = params.lambda;
    let near = (-2.0 * lam * (r - 1.0 - mu.abs())).exp();
    let far = (-2.0 * lam * (r - 1.0 + mu.abs())).exp();
    (near + far) / (4.0 * lam)
}
