//! Special functions and scalar root bracketing.

use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{domain, Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// First positive zero of J0.
pub const J0_FIRST_ZERO: f64 = 2.404_825_557_695_773;

/// Below this argument J0 is summed from its power series; above it the
/// trapezoidal rule on the Bessel integral is used.
const J0_SERIES_LIMIT: f64 = 8.0;

/// Bessel function of the first kind, order zero.
///
/// For `|x| < 8` the power series is summed directly (largest term is about
/// 113 at `x = 8`, so cancellation costs two digits at most). Beyond that,
/// `J0(x) = (1/π) ∫_0^π cos(x sin θ) dθ` is evaluated with the trapezoidal
/// rule. The integrand is π-periodic and entire, so the rule converges
/// geometrically; its error is bounded by `2 |J_{2N}(x)|`, negligible once
/// `2N > x + 60`. Absolute accuracy is about 1e-15 over `[0, 100]`.
pub fn bessel_j0(x: f64) -> f64 {
    let x = x.abs();
    if x < J0_SERIES_LIMIT {
        j0_series(x)
    } else {
        j0_trapezoid(x)
    }
}

fn j0_series(x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    loop {
        term *= q / (k * k);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs().max(1e-3) {
            break;
        }
        k += 1.0;
    }
    sum
}

fn j0_trapezoid(x: f64) -> f64 {
    let n = (x.ceil() as usize) / 2 + 40;
    let h = PI / n as f64;
    let mut acc = 0.0;
    for m in 0..n {
        acc += (x * (h * m as f64).sin()).cos();
    }
    acc / n as f64
}

/// Harmonic number `H_n = Σ_{r=1}^{n} 1/r`.
pub fn harmonic(n: u32) -> f64 {
    (1..=n).map(|r| 1.0 / r as f64).sum()
}

/// Digamma at a positive integer: `ψ(x) = −γ_E + H_{x−1}`.
pub fn digamma_int(x: u32) -> Result<f64> {
    if x < 1 {
        return Err(domain("digamma argument", x as f64));
    }
    Ok(-EULER_GAMMA + harmonic(x - 1))
}

/// Bracketed bisection for a root of `f` on `[lo, hi]`.
///
/// `f(lo)` and `f(hi)` must have opposite signs (or one of them be zero).
/// Stops once the bracket is narrower than `x_tol` or after `max_iter`
/// halvings, returning the endpoint with the smaller residual.
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, x_tol: f64, max_iter: usize) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() || f_lo.is_nan() || f_hi.is_nan() {
        return Err(Error::NoConvergence("bisection (root not bracketed)"));
    }
    let mut f_hi = f_hi;
    for _ in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= x_tol || mid <= lo || mid >= hi {
            return Ok(if f_lo.abs() <= f_hi.abs() { lo } else { hi });
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }
    Err(Error::NoConvergence("bisection"))
}
