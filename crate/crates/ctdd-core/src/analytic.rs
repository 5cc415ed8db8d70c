//! Closed-form performance evaluation: interference Laplace transforms in
//! jet arithmetic, per-tier success probabilities (exact derivative-sum form
//! and the Alzer upper bound), overall success, and area throughput.
//!
//! The interference seen by the typical receiver decomposes into an
//! intra-cluster part and a product over hexagonal rings approximating the
//! cross-cluster zone; each ring contributes a two-way mixture of a DL-SAP
//! exponent and a UL-MU exponent weighted by the cluster direction
//! probability. High-order s-derivatives of the transform are propagated
//! through every exponential, product and quadrature by jets, which avoids
//! finite-difference step tuning entirely.

use std::cell::RefCell;
use std::sync::OnceLock;

use crate::error::{CoreError, Result};
use crate::model::{derive_geometry, Direction, NetworkConfig, TierPmf};
use crate::numerics::jet::{Jet, MAX_ORDER};
use crate::numerics::quad::{integrate, integrate_jet, QuadratureRule, DEFAULT_TOL};
use crate::numerics::special::{alzer_constant, binomial};

/// Controls for one Laplace-transform evaluation.
#[derive(Debug, Clone, Copy)]
pub struct LaplaceParams {
    pub direction: Direction,
    /// Serving distance. For DL this is the intra-cluster exclusion radius
    /// (no interfering SAP can be closer than the serving one); the UL intra
    /// term has no exclusion and ignores it.
    pub r0: f64,
    /// Maximum ring index of the cross-cluster product.
    pub ring_cap: u32,
    /// Convergence threshold: the product stops early once a ring factor
    /// deviates from one by less than this in the order-0 coefficient and in
    /// every higher coefficient magnitude.
    pub ring_tol: f64,
}

impl LaplaceParams {
    pub fn new(direction: Direction, r0: f64) -> Self {
        LaplaceParams {
            direction,
            r0,
            ring_cap: 256,
            ring_tol: 1e-12,
        }
    }

    fn validate(&self, rho: f64) -> Result<()> {
        if !(self.r0 >= 0.0) || self.r0 > rho {
            return Err(CoreError::InvalidConfig(format!(
                "serving distance r0 must lie in [0, rho] (r0 = {}, rho = {rho})",
                self.r0
            )));
        }
        if self.ring_cap < 1 {
            return Err(CoreError::InvalidConfig("ring_cap must be >= 1".into()));
        }
        if !(self.ring_tol > 0.0) {
            return Err(CoreError::InvalidConfig("ring_tol must be > 0".into()));
        }
        Ok(())
    }
}

/// Below this the transform is evaluated at its s -> 0 limit (the constant
/// one); the reciprocal `(s Q_u)^{-1}` in the MU term is unstable there.
const S_FLOOR: f64 = 1e-300;

/// Rings are integrated adaptively up to this index and with a fixed
/// Gauss-Legendre rule beyond, where the integrand is smooth over an
/// ever-narrowing interval. `fixed_ring_rule_matches_adaptive` pins the
/// scheme against the fully adaptive route.
const ADAPTIVE_RING_LIMIT: u32 = 4;

fn ring_rule() -> &'static QuadratureRule {
    static RULE: OnceLock<QuadratureRule> = OnceLock::new();
    RULE.get_or_init(|| QuadratureRule::gauss_legendre(7, -1.0, 1.0))
}

struct LaplaceEvaluator<'a> {
    cfg: &'a NetworkConfig,
    pmf: &'a TierPmf,
    s_jet: Jet,
    /// (s P_s)^l for l = 0..=N.
    sap_pows: Vec<Jet>,
    /// s Q_u.
    mu_scale: Jet,
    /// Total served-MU density over tiers.
    lambda_u_total: f64,
    order: usize,
}

impl<'a> LaplaceEvaluator<'a> {
    fn new(cfg: &'a NetworkConfig, pmf: &'a TierPmf, s: f64, order: usize) -> Self {
        let s_jet = Jet::variable(s, order);
        let t = s_jet * cfg.p_s;
        let mut sap_pows = Vec::with_capacity(cfg.n_max as usize + 1);
        sap_pows.push(Jet::constant(1.0, order));
        for l in 1..=cfg.n_max as usize {
            let prev = sap_pows[l - 1];
            sap_pows.push(prev * t);
        }
        LaplaceEvaluator {
            cfg,
            pmf,
            s_jet,
            sap_pows,
            mu_scale: s_jet * cfg.q_u,
            lambda_u_total: pmf.lambda_u_n.iter().sum(),
            order,
        }
    }

    /// Integrand of the DL-SAP interference exponent at radius `r`, summed
    /// over tiers and binomial terms:
    ///
    /// `sum_n lambda_{s,n} sum_l C(n,l) (s P)^l r^{1 + alpha (n-l)} / (r^alpha + s P)^n`
    ///
    /// This is `(s P r^-a)^l r / (1 + s P r^-a)^n` with numerator and
    /// denominator scaled by `r^{alpha n}` so small radii cannot overflow
    /// the negative power.
    fn sap_integrand(&self, r: f64) -> Jet {
        let alpha = self.cfg.alpha;
        let ra = r.powf(alpha);
        let inv_base = (self.sap_pows[1] + ra).recip();
        let mut sum = Jet::constant(0.0, self.order);
        let mut denom_inv = Jet::constant(1.0, self.order);
        for n in 1..=self.cfg.n_max {
            denom_inv = denom_inv * inv_base;
            let lam = self.pmf.lambda_s_n[n as usize];
            if lam == 0.0 {
                continue;
            }
            let mut inner = Jet::constant(0.0, self.order);
            // r^{1 + alpha (n-l)} = r * (r^alpha)^{n-l}
            let mut r_pow = r;
            for l in (1..=n).rev() {
                inner = inner + self.sap_pows[l as usize].scale(binomial(n, l) * r_pow);
                r_pow *= ra;
            }
            sum = sum + (inner * denom_inv).scale(lam);
        }
        sum
    }

    /// Integrand of the UL-MU interference exponent at radius `r`:
    /// `(sum_n lambda_{u,n}) * r * s Q_u / (s Q_u + r^alpha)`.
    fn mu_integrand(&self, r: f64) -> Jet {
        let ra = r.powf(self.cfg.alpha);
        (self.mu_scale * (self.mu_scale + ra).recip()).scale(self.lambda_u_total * r)
    }

    fn sap_exponent(&self, a: f64, b: f64, adaptive: bool) -> Result<Jet> {
        let integral = if adaptive {
            integrate_jet(|r, _| self.sap_integrand(r), &self.s_jet, a, b, DEFAULT_TOL)?
        } else {
            self.fixed_rule(a, b, |r| self.sap_integrand(r))
        };
        Ok(integral.scale(-2.0 * std::f64::consts::PI))
    }

    fn mu_exponent(&self, a: f64, b: f64, adaptive: bool) -> Result<Jet> {
        let integral = if adaptive {
            integrate_jet(|r, _| self.mu_integrand(r), &self.s_jet, a, b, DEFAULT_TOL)?
        } else {
            self.fixed_rule(a, b, |r| self.mu_integrand(r))
        };
        Ok(integral.scale(-2.0 * std::f64::consts::PI))
    }

    fn fixed_rule(&self, a: f64, b: f64, f: impl Fn(f64) -> Jet) -> Jet {
        let rule = ring_rule();
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut acc = Jet::constant(0.0, self.order);
        for (&x, &w) in rule.nodes().iter().zip(rule.weights()) {
            acc = acc + f(mid + half * x).scale(half * w);
        }
        acc
    }
}

/// Laplace transform of the interference-plus-noise at the typical receiver,
/// as a jet about the evaluation point `s` carrying derivatives up to
/// `order`.
pub fn laplace_transform(
    cfg: &NetworkConfig,
    pmf: &TierPmf,
    params: &LaplaceParams,
    s: f64,
    order: usize,
) -> Result<Jet> {
    cfg.validate()?;
    let geo = derive_geometry(cfg)?;
    params.validate(geo.rho)?;
    if order > MAX_ORDER {
        return Err(CoreError::Domain(format!(
            "jet order {order} exceeds the supported maximum {MAX_ORDER}"
        )));
    }
    if !(s >= 0.0) {
        return Err(CoreError::Domain(format!("s must be nonnegative, got {s}")));
    }
    if s < S_FLOOR {
        return Ok(Jet::constant(1.0, order));
    }

    let ev = LaplaceEvaluator::new(cfg, pmf, s, order);

    // Noise factor e^{-s sigma^2}.
    let mut product = (-(ev.s_jet.scale(cfg.noise))).exp();

    // Intra-cluster factor. The DL typical cluster holds only DL SAPs
    // outside the serving exclusion ball; the UL typical cluster holds only
    // active UL MUs, with no exclusion.
    let intra = match params.direction {
        Direction::Downlink => ev.sap_exponent(params.r0, geo.rho, true)?,
        Direction::Uplink => ev.mu_exponent(0.0, geo.rho, true)?,
    };
    product = product * intra.exp();

    // Cross-cluster rings: each ring is a p_D-weighted mixture of an all-DL
    // and an all-UL cluster exponent.
    let p_d = cfg.p_d;
    for k in 1..=params.ring_cap {
        let (a, b) = (geo.ring_inner(k), geo.ring_outer(k));
        let adaptive = k <= ADAPTIVE_RING_LIMIT;
        let mut factor = Jet::constant(0.0, order);
        if p_d > 0.0 {
            factor = factor + ev.sap_exponent(a, b, adaptive)?.exp().scale(p_d);
        }
        if p_d < 1.0 {
            factor = factor + ev.mu_exponent(a, b, adaptive)?.exp().scale(1.0 - p_d);
        }
        product = product * factor;

        let mut converged = (factor.value() - 1.0).abs() < params.ring_tol;
        for i in 1..=order {
            converged &= factor.coeff(i).abs() < params.ring_tol;
        }
        if converged {
            break;
        }
    }
    Ok(product)
}

/// DL interference-plus-noise Laplace transform (jet form).
pub fn laplace_dl(
    cfg: &NetworkConfig,
    pmf: &TierPmf,
    params: &LaplaceParams,
    s: f64,
    order: usize,
) -> Result<Jet> {
    let params = LaplaceParams {
        direction: Direction::Downlink,
        ..*params
    };
    laplace_transform(cfg, pmf, &params, s, order)
}

/// UL interference-plus-noise Laplace transform (jet form).
pub fn laplace_ul(
    cfg: &NetworkConfig,
    pmf: &TierPmf,
    params: &LaplaceParams,
    s: f64,
    order: usize,
) -> Result<Jet> {
    let params = LaplaceParams {
        direction: Direction::Uplink,
        ..*params
    };
    laplace_transform(cfg, pmf, &params, s, order)
}

/// The derivative sum `sum_{i=0}^{d} (1/i!) (-s)^i L^(i)(s)` assembled from
/// a jet of `L` about `s`. Under the interference expectation this equals
/// the conditional success probability of a Gamma(d+1, 1) fading gain; for
/// a point-mass interference with transform `e^{-s I0}` it collapses to the
/// Gamma CCDF exactly.
pub fn ccdf_bracket(laplace_jet: &Jet, s: f64) -> f64 {
    let mut sum = 0.0;
    let mut pow = 1.0;
    for i in 0..=laplace_jet.order() {
        sum += pow * laplace_jet.coeff(i);
        pow *= -s;
    }
    sum
}

/// How the per-tier success probability is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Derivative-sum form (jet-based).
    Exact,
    /// Alzer-inequality upper bound (order-0 transform evaluations only).
    AlzerBound,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::Exact => "analytic_exact",
            Method::AlzerBound => "analytic_bound",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = CoreError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "exact" | "analytic_exact" => Ok(Method::Exact),
            "bound" | "alzer_bound" | "analytic_bound" => Ok(Method::AlzerBound),
            other => Err(CoreError::InvalidConfig(format!(
                "unknown method '{other}' (expected exact or alzer_bound)"
            ))),
        }
    }
}

/// Numerical-health record for the bracket clamping.
#[derive(Debug, Clone, Copy, Default)]
pub struct BracketDiagnostics {
    /// Evaluations where the bracket left [0, 1] by more than 1e-6.
    pub excursions: u64,
    /// Largest observed excursion outside [0, 1].
    pub max_excursion: f64,
}

const EXCURSION_FLAG: f64 = 1e-6;

/// Absolute tolerance of the outer serving-distance integral.
const OUTER_TOL: f64 = 1e-9;

fn serving_pdf(lambda_s: f64, r0: f64) -> f64 {
    2.0 * std::f64::consts::PI * lambda_s * r0 * (-std::f64::consts::PI * lambda_s * r0 * r0).exp()
}

/// Success probability of a typical link served in tier `n0`, by the
/// derivative-sum form. The outer integral runs over the serving-distance
/// density truncated at the cluster edge, exactly as the closed form does;
/// the bracket is a probability and is clamped to [0, 1], with excursions
/// beyond 1e-6 counted in the diagnostics.
pub fn success_exact_with_diag(
    cfg: &NetworkConfig,
    pmf: &TierPmf,
    direction: Direction,
    n0: u32,
) -> Result<(f64, BracketDiagnostics)> {
    check_tier(cfg, n0)?;
    let geo = derive_geometry(cfg)?;
    let order = (cfg.m_antennas - n0) as usize;
    let gamma = cfg.gamma(direction);
    let power = cfg.link_power(direction);

    let err_slot = RefCell::new(None::<CoreError>);
    let diag = RefCell::new(BracketDiagnostics::default());

    let integrand = |r0: f64| -> f64 {
        if err_slot.borrow().is_some() {
            return 0.0;
        }
        let s = gamma * r0.powf(cfg.alpha) / power;
        let params = LaplaceParams::new(direction, r0);
        match laplace_transform(cfg, pmf, &params, s, order) {
            Ok(jet) => {
                let bracket = ccdf_bracket(&jet, s);
                let exc = (-bracket).max(bracket - 1.0).max(0.0);
                {
                    let mut d = diag.borrow_mut();
                    if exc > EXCURSION_FLAG {
                        d.excursions += 1;
                    }
                    d.max_excursion = d.max_excursion.max(exc);
                }
                serving_pdf(cfg.lambda_s, r0) * bracket.clamp(0.0, 1.0)
            }
            Err(e) => {
                *err_slot.borrow_mut() = Some(e);
                0.0
            }
        }
    };

    let mu = integrate(integrand, 0.0, geo.rho, OUTER_TOL)?;
    if let Some(e) = err_slot.into_inner() {
        return Err(e);
    }
    Ok((mu.clamp(0.0, 1.0), diag.into_inner()))
}

/// Success probability in tier `n0`, derivative-sum form.
pub fn success_exact(
    cfg: &NetworkConfig,
    pmf: &TierPmf,
    direction: Direction,
    n0: u32,
) -> Result<f64> {
    success_exact_with_diag(cfg, pmf, direction, n0).map(|(mu, _)| mu)
}

/// Alzer upper bound on the tier-`n0` success probability:
///
/// `int f_r(r0) sum_{i=1}^{D} (-1)^{i+1} C(D,i) L(i c s) dr0`
///
/// with `D = M - n0 + 1` and `c = (D!)^{-1/D}`. Only order-0 transform
/// evaluations are needed. Coincides with the exact form when `D = 1`.
pub fn success_bound(
    cfg: &NetworkConfig,
    pmf: &TierPmf,
    direction: Direction,
    n0: u32,
) -> Result<f64> {
    check_tier(cfg, n0)?;
    let geo = derive_geometry(cfg)?;
    let delta = cfg.m_antennas - n0 + 1;
    let c = alzer_constant(delta);
    let gamma = cfg.gamma(direction);
    let power = cfg.link_power(direction);

    let err_slot = RefCell::new(None::<CoreError>);
    let integrand = |r0: f64| -> f64 {
        if err_slot.borrow().is_some() {
            return 0.0;
        }
        let s = gamma * r0.powf(cfg.alpha) / power;
        let params = LaplaceParams::new(direction, r0);
        let mut sum = 0.0;
        for i in 1..=delta {
            match laplace_transform(cfg, pmf, &params, i as f64 * c * s, 0) {
                Ok(jet) => {
                    let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
                    sum += sign * binomial(delta, i) * jet.value();
                }
                Err(e) => {
                    *err_slot.borrow_mut() = Some(e);
                    return 0.0;
                }
            }
        }
        serving_pdf(cfg.lambda_s, r0) * sum.clamp(0.0, 1.0)
    };

    let mu = integrate(integrand, 0.0, geo.rho, OUTER_TOL)?;
    if let Some(e) = err_slot.into_inner() {
        return Err(e);
    }
    Ok(mu.clamp(0.0, 1.0))
}

fn check_tier(cfg: &NetworkConfig, n0: u32) -> Result<()> {
    cfg.validate()?;
    if n0 < 1 || n0 > cfg.n_max {
        return Err(CoreError::InvalidConfig(format!(
            "serving tier n0 must lie in 1..={} (got {n0})",
            cfg.n_max
        )));
    }
    Ok(())
}

/// Per-tier and overall success probabilities.
#[derive(Debug, Clone)]
pub struct SuccessResult {
    /// `per_n0[i]` is the tier `i+1` success probability.
    pub per_n0: Vec<f64>,
    /// Weighted combination over serving tiers.
    pub overall: f64,
    pub method: Method,
}

/// Evaluate every serving tier with the chosen method and combine with the
/// tier weights (law of total probability over the serving load).
pub fn success_overall(
    cfg: &NetworkConfig,
    pmf: &TierPmf,
    direction: Direction,
    method: Method,
) -> Result<SuccessResult> {
    cfg.validate()?;
    let mut per_n0 = Vec::with_capacity(cfg.n_max as usize);
    for n0 in 1..=cfg.n_max {
        let mu = match method {
            Method::Exact => success_exact(cfg, pmf, direction, n0)?,
            Method::AlzerBound => success_bound(cfg, pmf, direction, n0)?,
        };
        per_n0.push(mu);
    }
    let weights = pmf.overall_weights(cfg.normalize_tier_weights);
    let overall = per_n0.iter().zip(&weights).map(|(m, w)| m * w).sum();
    Ok(SuccessResult {
        per_n0,
        overall,
        method,
    })
}

/// Network area throughput in bits/s/Hz/m^2:
/// `p_TX * lambda_s * log2(1 + gamma) * sum_n mu(n) w(n) n`, where the
/// direction prefactor is `p_D` for DL and `1 - p_D` for UL and the weights
/// follow the tier-normalization switch.
pub fn throughput(
    cfg: &NetworkConfig,
    pmf: &TierPmf,
    direction: Direction,
    method: Method,
) -> Result<f64> {
    let success = success_overall(cfg, pmf, direction, method)?;
    Ok(throughput_from_success(cfg, pmf, direction, &success.per_n0))
}

/// Throughput from already-computed per-tier success probabilities (shared
/// by the analytic and simulation engines).
pub fn throughput_from_success(
    cfg: &NetworkConfig,
    pmf: &TierPmf,
    direction: Direction,
    per_n0: &[f64],
) -> f64 {
    let prefactor = match direction {
        Direction::Downlink => cfg.p_d,
        Direction::Uplink => 1.0 - cfg.p_d,
    };
    let gamma = cfg.gamma(direction);
    let weights = pmf.overall_weights(cfg.normalize_tier_weights);
    let sum: f64 = per_n0
        .iter()
        .zip(&weights)
        .enumerate()
        .map(|(i, (mu, w))| mu * w * (i + 1) as f64)
        .sum();
    prefactor * cfg.lambda_s * (1.0 + gamma).log2() * sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{rho_for_cluster_size, tier_pmf};
    use approx::assert_relative_eq;

    fn default_setup() -> (NetworkConfig, TierPmf) {
        let cfg = NetworkConfig::default();
        let pmf = tier_pmf(&cfg).unwrap();
        (cfg, pmf)
    }

    #[test]
    fn laplace_at_zero_is_one() {
        let (cfg, pmf) = default_setup();
        let params = LaplaceParams::new(Direction::Downlink, 10.0);
        let jet = laplace_dl(&cfg, &pmf, &params, 0.0, 3).unwrap();
        assert_eq!(jet.value(), 1.0);
    }

    #[test]
    fn laplace_decreasing_in_s() {
        let (cfg, pmf) = default_setup();
        for direction in [Direction::Downlink, Direction::Uplink] {
            let params = LaplaceParams::new(direction, 10.0);
            let mut prev = 1.0;
            for i in 1..=8 {
                let s = 1e3 * 1.8f64.powi(i);
                let v = laplace_transform(&cfg, &pmf, &params, s, 0)
                    .unwrap()
                    .value();
                assert!(v > 0.0 && v <= 1.0);
                assert!(v < prev, "not decreasing at s={s}: {v} >= {prev}");
                prev = v;
            }
        }
    }

    #[test]
    fn fixed_ring_rule_matches_adaptive() {
        let (cfg, pmf) = default_setup();
        let geo = derive_geometry(&cfg).unwrap();
        let s = 1.0 * 15.0f64.powi(4) / cfg.p_s;
        let ev = LaplaceEvaluator::new(&cfg, &pmf, s, 3);
        for k in [5u32, 20, 120] {
            let (a, b) = (geo.ring_inner(k), geo.ring_outer(k));
            let fixed = ev.sap_exponent(a, b, false).unwrap();
            let adaptive = ev.sap_exponent(a, b, true).unwrap();
            assert!((fixed - adaptive).norm_inf() < 1e-13);
            let fixed_mu = ev.mu_exponent(a, b, false).unwrap();
            let adaptive_mu = ev.mu_exponent(a, b, true).unwrap();
            assert!((fixed_mu - adaptive_mu).norm_inf() < 1e-13);
        }
    }

    #[test]
    fn pure_dl_ring_product_collapses_to_single_integral() {
        // With p_D = 1 every ring factor is exp(A_k) and the product over
        // the tiled rings equals one exponential over the union interval.
        let (mut cfg, _) = default_setup();
        cfg.p_d = 1.0;
        let pmf = tier_pmf(&cfg).unwrap();
        let geo = derive_geometry(&cfg).unwrap();
        let r0: f64 = 12.0;
        let s = cfg.gamma_d * r0.powf(cfg.alpha) / cfg.p_s;
        let params = LaplaceParams::new(Direction::Downlink, r0);

        let via_rings = laplace_dl(&cfg, &pmf, &params, s, 0).unwrap().value();

        let union_hi = geo.ring_outer(params.ring_cap);
        let alpha = cfg.alpha;
        let exponent: f64 = (1..=cfg.n_max)
            .map(|n| {
                let lam = pmf.lambda_s_n[n as usize];
                (1..=n)
                    .map(|l| {
                        let integral = integrate(
                            |r| {
                                let ra = r.powf(alpha);
                                let t = s * cfg.p_s;
                                t.powi(l as i32) * r * ra.powi((n - l) as i32)
                                    / (ra + t).powi(n as i32)
                            },
                            r0,
                            union_hi,
                            1e-13,
                        )
                        .unwrap();
                        binomial(n, l) * lam * integral
                    })
                    .sum::<f64>()
            })
            .sum();
        let direct = (-2.0 * std::f64::consts::PI * exponent).exp();
        assert_relative_eq!(via_rings, direct, max_relative = 1e-8);
    }

    #[test]
    fn pure_ul_has_no_sap_ring_term() {
        // p_D = 0 in UL mode: only MU exponents anywhere; scaling P_s must
        // then not change the transform.
        let (mut cfg, _) = default_setup();
        cfg.p_d = 0.0;
        let pmf = tier_pmf(&cfg).unwrap();
        let params = LaplaceParams::new(Direction::Uplink, 9.0);
        let s = 1e4;
        let a = laplace_ul(&cfg, &pmf, &params, s, 0).unwrap().value();
        cfg.p_s *= 57.0;
        let pmf2 = tier_pmf(&cfg).unwrap();
        let b = laplace_ul(&cfg, &pmf2, &params, s, 0).unwrap().value();
        assert_relative_eq!(a, b, epsilon = 1e-15);
    }

    #[test]
    fn ring_cap_doubling_moves_result_only_at_tail_scale() {
        let (cfg, pmf) = default_setup();
        let r0: f64 = 15.0;
        let s = cfg.gamma_d * r0.powf(cfg.alpha) / cfg.p_s;
        let mut params = LaplaceParams::new(Direction::Downlink, r0);
        let v256 = laplace_dl(&cfg, &pmf, &params, s, 2).unwrap();
        params.ring_cap = 512;
        let v512 = laplace_dl(&cfg, &pmf, &params, s, 2).unwrap();
        assert!((v256.value() - v512.value()).abs() < 5e-3);
        assert!(v512.value() <= v256.value());
    }

    #[test]
    fn bracket_of_point_mass_is_gamma_ccdf() {
        // For deterministic interference I0 the transform is e^{-s I0} and
        // the derivative sum collapses to the Gamma CCDF. Substituting the
        // point-mass jet isolates the bracket assembly and jet arithmetic
        // from the quadrature.
        use crate::numerics::special::gamma_ccdf;
        for (m, n0) in [(8u32, 3u32), (8, 1), (4, 2), (12, 5)] {
            let order = (m - n0) as usize;
            for (s, i0) in [(1e-4, 350.0), (2e-3, 40.0), (0.3, 1.2)] {
                let s_jet = Jet::variable(s, order);
                let jet = (-(s_jet * i0)).exp();
                let bracket = ccdf_bracket(&jet, s);
                let want = gamma_ccdf(m - n0 + 1, s * i0);
                assert_relative_eq!(bracket, want, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn success_low_threshold_approaches_truncated_pdf_mass() {
        // gamma -> 0 drives the bracket to one, leaving the serving-distance
        // mass inside the cluster: 1 - exp(-pi lambda_s rho^2) ~ 0.93416 for
        // l = 3 at lambda_s = 1e-3.
        let (mut cfg, _) = default_setup();
        cfg.gamma_d = 1e-9;
        let pmf = tier_pmf(&cfg).unwrap();
        let mu = success_exact(&cfg, &pmf, Direction::Downlink, 3).unwrap();
        let want = 1.0 - (-std::f64::consts::PI * cfg.lambda_s * cfg.rho * cfg.rho).exp();
        assert_relative_eq!(want, 0.93416, epsilon = 1e-4);
        assert_relative_eq!(mu, want, epsilon = 1e-4);
    }

    #[test]
    fn bound_equals_exact_when_delta_is_one() {
        // M = n0 leaves a single exponential diversity order, where the
        // Alzer bound is tight.
        let (mut cfg, _) = default_setup();
        cfg.m_antennas = 3;
        cfg.n_max = 3;
        let pmf = tier_pmf(&cfg).unwrap();
        let exact = success_exact(&cfg, &pmf, Direction::Downlink, 3).unwrap();
        let bound = success_bound(&cfg, &pmf, Direction::Downlink, 3).unwrap();
        assert_relative_eq!(exact, bound, epsilon = 1e-9);
    }

    #[test]
    fn bound_dominates_exact() {
        let (cfg, pmf) = default_setup();
        for direction in [Direction::Downlink, Direction::Uplink] {
            for n0 in 1..=3 {
                let exact = success_exact(&cfg, &pmf, direction, n0).unwrap();
                let bound = success_bound(&cfg, &pmf, direction, n0).unwrap();
                assert!(
                    bound >= exact - 1e-9,
                    "{} n0={n0}: bound {bound} < exact {exact}",
                    direction.label()
                );
            }
        }
    }

    #[test]
    fn success_monotone_in_tier_and_threshold() {
        let (cfg, pmf) = default_setup();
        let mut prev = 1.0;
        for n0 in 1..=3 {
            let mu = success_exact(&cfg, &pmf, Direction::Downlink, n0).unwrap();
            assert!(mu <= prev + 1e-9, "mu not nonincreasing in n0");
            prev = mu;
        }
        let mut cfg_hi = cfg.clone();
        cfg_hi.gamma_d *= 4.0;
        let lo = success_exact(&cfg, &pmf, Direction::Downlink, 1).unwrap();
        let hi = success_exact(&cfg_hi, &pmf, Direction::Downlink, 1).unwrap();
        assert!(hi < lo);
    }

    #[test]
    fn overall_is_convex_combination() {
        let (cfg, pmf) = default_setup();
        let res = success_overall(&cfg, &pmf, Direction::Downlink, Method::AlzerBound).unwrap();
        let lo = res.per_n0.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = res.per_n0.iter().cloned().fold(0.0f64, f64::max);
        assert!(res.overall >= lo - 1e-12 && res.overall <= hi + 1e-12);
        let weights = pmf.overall_weights(true);
        let recombined: f64 = res.per_n0.iter().zip(&weights).map(|(m, w)| m * w).sum();
        assert_relative_eq!(res.overall, recombined, epsilon = 1e-12);
    }

    #[test]
    fn single_tier_overall_equals_tier_one() {
        let (mut cfg, _) = default_setup();
        cfg.n_max = 1;
        let pmf = tier_pmf(&cfg).unwrap();
        let res = success_overall(&cfg, &pmf, Direction::Uplink, Method::AlzerBound).unwrap();
        assert_eq!(res.per_n0.len(), 1);
        assert_relative_eq!(res.overall, res.per_n0[0], epsilon = 1e-15);
    }

    #[test]
    fn throughput_degenerate_cases() {
        let (mut cfg, _) = default_setup();
        cfg.p_d = 1.0;
        let pmf = tier_pmf(&cfg).unwrap();
        let t_u = throughput(&cfg, &pmf, Direction::Uplink, Method::AlzerBound).unwrap();
        assert_eq!(t_u, 0.0);

        let mut cfg2 = NetworkConfig::default();
        cfg2.gamma_d = 1e-15;
        let pmf2 = tier_pmf(&cfg2).unwrap();
        let t_d = throughput(&cfg2, &pmf2, Direction::Downlink, Method::AlzerBound).unwrap();
        assert!(t_d < 1e-12);
    }

    #[test]
    fn rejects_out_of_range_tier() {
        let (cfg, pmf) = default_setup();
        assert!(success_exact(&cfg, &pmf, Direction::Downlink, 0).is_err());
        assert!(success_exact(&cfg, &pmf, Direction::Downlink, 4).is_err());
    }

    #[test]
    fn cluster_size_sweep_has_interior_dl_throughput_maximum() {
        // Cluster-size trade-off at N = 4: growing clusters first remove
        // cross-link MU interference, then pile up same-direction SAP
        // interference, so DL throughput peaks strictly inside the grid
        // while UL keeps improving.
        let ls = [1.0, 2.0, 3.0, 4.0, 6.0, 8.0];
        let mut t_d = Vec::new();
        let mut mu_u = Vec::new();
        for l in ls {
            let mut cfg = NetworkConfig::default();
            cfg.n_max = 4;
            cfg.rho = rho_for_cluster_size(l, cfg.lambda_s).unwrap();
            let pmf = tier_pmf(&cfg).unwrap();
            t_d.push(throughput(&cfg, &pmf, Direction::Downlink, Method::AlzerBound).unwrap());
            mu_u.push(
                success_overall(&cfg, &pmf, Direction::Uplink, Method::AlzerBound)
                    .unwrap()
                    .overall,
            );
        }
        let argmax = t_d
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        assert!(
            argmax > 0 && argmax < ls.len() - 1,
            "DL throughput maximizer not interior: {t_d:?}"
        );
        for i in 1..argmax {
            assert!(t_d[i] >= t_d[i - 1], "not rising before peak: {t_d:?}");
        }
        for i in argmax + 1..ls.len() {
            assert!(t_d[i] <= t_d[i - 1], "not falling after peak: {t_d:?}");
        }
        for i in 1..ls.len() {
            assert!(mu_u[i] >= mu_u[i - 1], "UL success not nondecreasing: {mu_u:?}");
        }
    }
}
