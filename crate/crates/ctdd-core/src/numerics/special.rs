//! Special functions used by the analytic engine: the pathloss integral
//! Theta, the Gamma CCDF, the Alzer bound constant, and small combinatorial
//! helpers.

use crate::error::{CoreError, Result};
use crate::numerics::quad::{integrate, DEFAULT_TOL};

/// `Theta(alpha, beta, u, d) = Int_0^d r^beta / (1 + u r^alpha) dr`.
///
/// Evaluated by adaptive quadrature of the bounded positive integrand.
/// The hypergeometric series form (see [`theta_series`]) only converges for
/// `u d^alpha < 1`, so quadrature is the primary route.
pub fn theta(alpha: f64, beta: f64, u: f64, d: f64) -> Result<f64> {
    if !(alpha > 0.0) || !(beta >= 0.0) || !(u >= 0.0) || !(d >= 0.0) {
        return Err(CoreError::Domain(format!(
            "theta requires alpha>0, beta>=0, u>=0, d>=0; got ({alpha}, {beta}, {u}, {d})"
        )));
    }
    if d == 0.0 || u.is_infinite() {
        // u -> inf is the s -> 0 limit of the interference exponent.
        return Ok(0.0);
    }
    integrate(|r| r.powf(beta) / (1.0 + u * r.powf(alpha)), 0.0, d, DEFAULT_TOL)
}

/// Series form of Theta via the Gauss hypergeometric function:
/// `d^{beta+1}/(beta+1) * 2F1(1, b; b+1; -u d^alpha)` with `b = (beta+1)/alpha`.
///
/// Only valid where the series converges (`u d^alpha < 1`); used as a
/// cross-check of the quadrature route.
pub fn theta_series(alpha: f64, beta: f64, u: f64, d: f64) -> Result<f64> {
    let z = -u * d.powf(alpha);
    let b = (beta + 1.0) / alpha;
    let f = hyp2f1_1b(b, z)?;
    Ok(d.powf(beta + 1.0) / (beta + 1.0) * f)
}

/// `2F1(1, b; b+1; z) = sum_k b/(b+k) z^k` for `|z| < 1`.
///
/// Restricted to the parameter family the Theta identity needs; not a
/// general hypergeometric implementation.
pub fn hyp2f1_1b(b: f64, z: f64) -> Result<f64> {
    if z.abs() >= 1.0 {
        return Err(CoreError::Domain(format!(
            "2F1(1,b;b+1;z) series diverges for |z| >= 1 (z = {z})"
        )));
    }
    let mut sum = 0.0;
    let mut zk = 1.0;
    for k in 0..100_000 {
        let term = b / (b + k as f64) * zk;
        sum += term;
        if term.abs() < 1e-16 * sum.abs().max(1.0) {
            return Ok(sum);
        }
        zk *= z;
    }
    Err(CoreError::Domain(format!(
        "2F1 series did not converge for b={b}, z={z}"
    )))
}

/// CCDF of a Gamma(m, 1) variable at `z`:
/// `e^{-z} sum_{i=0}^{m-1} z^i / i!`.
pub fn gamma_ccdf(m: u32, z: f64) -> f64 {
    assert!(m >= 1, "gamma_ccdf requires shape m >= 1");
    debug_assert!(z >= 0.0);
    if z > 745.0 {
        // e^{-z} underflows; the CCDF is below f64 resolution.
        return 0.0;
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    for i in 1..m {
        term *= z / i as f64;
        sum += term;
    }
    sum * (-z).exp()
}

/// Regularized lower incomplete gamma `P(m, z) = 1 - gamma_ccdf(m, z)` for
/// integer shape; the CDF of Gamma(m, 1).
pub fn gamma_cdf(m: u32, z: f64) -> f64 {
    if z <= 0.0 {
        return 0.0;
    }
    1.0 - gamma_ccdf(m, z)
}

/// Alzer's constant `c = (m!)^{-1/m}`, the tightest coefficient for which
/// `gamma(m, z)/Gamma(m) > (1 - e^{-c z})^m` holds for m > 1.
pub fn alzer_constant(m: u32) -> f64 {
    assert!(m >= 1);
    (-ln_factorial(m) / m as f64).exp()
}

/// `ln(m!)` by direct summation (shapes here are small antenna counts).
pub fn ln_factorial(m: u32) -> f64 {
    (2..=m).map(|i| (i as f64).ln()).sum()
}

/// Binomial coefficient C(n, k) as f64.
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut c = 1.0;
    for i in 0..k {
        c = c * (n - i) as f64 / (i + 1) as f64;
    }
    c
}
