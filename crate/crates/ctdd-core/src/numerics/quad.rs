//! Gauss–Legendre quadrature: fixed rules plus an adaptive bisection driver.
//!
//! Fixed rules are generated at runtime by Newton iteration on the Legendre
//! polynomial (Chebyshev initial guesses converge in a handful of steps to
//! machine precision). The adaptive driver estimates each panel's error by
//! comparing a 7-point and a 15-point rule and bisects until the requested
//! absolute tolerance is met.

use std::sync::OnceLock;

use crate::error::{CoreError, Result};
use crate::numerics::jet::Jet;

/// Default absolute tolerance for adaptive integration.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Maximum adaptive bisection depth.
pub const MAX_DEPTH: usize = 40;

/// Fixed-order Gauss–Legendre rule on an interval `[a, b]`.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    /// Subdivision tolerance carried for adaptive use of this rule.
    pub tol: f64,
}

impl QuadratureRule {
    /// Gauss–Legendre rule with `order` points on `[a, b]`.
    ///
    /// Exact for polynomials of degree `2*order - 1`; the weights sum to
    /// `b - a`.
    pub fn gauss_legendre(order: usize, a: f64, b: f64) -> Self {
        let (xs, ws) = legendre_nodes(order);
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        QuadratureRule {
            nodes: xs.iter().map(|x| mid + half * x).collect(),
            weights: ws.iter().map(|w| half * w).collect(),
            tol: DEFAULT_TOL,
        }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Apply the fixed rule to `f`.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
///
/// Newton iteration on P_n with the Chebyshev guess
/// `cos(pi (i + 0.75) / (n + 0.5))`; weights `2 / ((1 - x^2) P_n'(x)^2)`.
fn legendre_nodes(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_p_dp(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_p_dp(n, x);
        xs[i] = x;
        ws[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (xs, ws)
}

/// Legendre polynomial P_n and derivative P_n' by the three-term recurrence.
fn legendre_p_dp(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn base_rules() -> &'static (Vec<(f64, f64)>, Vec<(f64, f64)>) {
    static RULES: OnceLock<(Vec<(f64, f64)>, Vec<(f64, f64)>)> = OnceLock::new();
    RULES.get_or_init(|| {
        let (x7, w7) = legendre_nodes(7);
        let (x15, w15) = legendre_nodes(15);
        (
            x7.into_iter().zip(w7).collect(),
            x15.into_iter().zip(w15).collect(),
        )
    })
}

/// Values an adaptive panel can accumulate: scalars and jets.
pub trait PanelValue: Copy {
    fn accumulate(acc: Option<Self>, term: Self, weight: f64) -> Self;
    fn combine(self, other: Self) -> Self;
    fn error_against(&self, coarse: &Self) -> f64;
    fn magnitude(&self) -> f64;
}

impl PanelValue for f64 {
    fn accumulate(acc: Option<Self>, term: Self, weight: f64) -> Self {
        acc.unwrap_or(0.0) + weight * term
    }
    fn combine(self, other: Self) -> Self {
        self + other
    }
    fn error_against(&self, coarse: &Self) -> f64 {
        let d = self - coarse;
        if d.is_nan() {
            f64::INFINITY
        } else {
            d.abs()
        }
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl PanelValue for Jet {
    fn accumulate(acc: Option<Self>, term: Self, weight: f64) -> Self {
        match acc {
            Some(a) => a + term.scale(weight),
            None => term.scale(weight),
        }
    }
    fn combine(self, other: Self) -> Self {
        self + other
    }
    fn error_against(&self, coarse: &Self) -> f64 {
        let d = (*self - *coarse).norm_inf();
        if d.is_nan() {
            f64::INFINITY
        } else {
            d
        }
    }
    fn magnitude(&self) -> f64 {
        self.norm_inf()
    }
}

fn panel<V: PanelValue>(f: &mut impl FnMut(f64) -> V, a: f64, b: f64) -> (V, f64) {
    let (rule7, rule15) = base_rules();
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut fine: Option<V> = None;
    for &(x, w) in rule15 {
        fine = Some(V::accumulate(fine, f(mid + half * x), half * w));
    }
    let mut coarse: Option<V> = None;
    for &(x, w) in rule7 {
        coarse = Some(V::accumulate(coarse, f(mid + half * x), half * w));
    }
    let fine = fine.expect("nonempty rule");
    let err = fine.error_against(&coarse.expect("nonempty rule"));
    (fine, err)
}

fn adapt<V: PanelValue>(
    f: &mut impl FnMut(f64) -> V,
    a: f64,
    b: f64,
    tol: f64,
    depth: usize,
    root_scale: f64,
) -> Result<V> {
    let (value, err) = panel(f, a, b);
    // Below the roundoff floor of the accumulated values, |GL15 - GL7|
    // measures noise, not discretization error; splitting further cannot
    // help. 50 ulps of the larger of the root and panel magnitudes.
    let noise_floor = 50.0 * f64::EPSILON * root_scale.max(value.magnitude());
    if err <= tol.max(noise_floor) {
        return Ok(value);
    }
    if depth >= MAX_DEPTH {
        return Err(CoreError::QuadratureNonConvergence {
            panel_lo: a,
            panel_hi: b,
            error: err,
            max_depth: MAX_DEPTH,
        });
    }
    let scale = root_scale.max(value.magnitude());
    let mid = 0.5 * (a + b);
    let left = adapt(f, a, mid, 0.5 * tol, depth + 1, scale)?;
    let right = adapt(f, mid, b, 0.5 * tol, depth + 1, scale)?;
    Ok(left.combine(right))
}

/// Adaptive integration of a scalar function over `[a, b]` to absolute
/// tolerance `tol`.
pub fn integrate(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a > b {
        return Err(CoreError::Domain(format!(
            "integration bounds reversed: [{a}, {b}]"
        )));
    }
    if a == b {
        return Ok(0.0);
    }
    adapt(&mut f, a, b, tol, 0, 0.0)
}

/// Adaptive integration of a jet-valued integrand over `[a, b]`.
///
/// `f(r, s)` evaluates the integrand at abscissa `r` in jet arithmetic about
/// the expansion point carried by `s`; coefficient `i` of the result is
/// `(1/i!) d^i/ds^i` of the parameterized integral. The panel error is the
/// worst coefficient deviation, so every derivative order meets `tol`.
pub fn integrate_jet(
    f: impl Fn(f64, &Jet) -> Jet,
    s: &Jet,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<Jet> {
    if a > b {
        return Err(CoreError::Domain(format!(
            "integration bounds reversed: [{a}, {b}]"
        )));
    }
    if a == b {
        return Ok(Jet::constant(0.0, s.order()));
    }
    let mut g = |r: f64| f(r, s);
    adapt(&mut g, a, b, tol, 0, 0.0)
}
