//! Scenario configuration, cluster geometry, and the per-SAP load
//! decomposition shared by the analytic and Monte Carlo engines.

use serde::Deserialize;

use crate::error::{CoreError, Result};

/// Convert a dBm figure to watts.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    1e-3 * 10f64.powf(dbm / 10.0)
}

/// Convert a dB figure to a linear ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Full scenario parameterization. Powers and SINR thresholds are stored
/// linear-scale (watts / ratios); dB and dBm happen only at config parse.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkConfig {
    /// SAP intensity, points per m^2.
    pub lambda_s: f64,
    /// MU intensity, points per m^2.
    pub lambda_u: f64,
    /// SAP transmit power per served MU, watts.
    pub p_s: f64,
    /// MU transmit power, watts.
    pub q_u: f64,
    /// Antennas per SAP.
    pub m_antennas: u32,
    /// Maximum MUs served by one SAP.
    pub n_max: u32,
    /// Pathloss exponent (> 2).
    pub alpha: f64,
    /// Noise power, watts.
    pub noise: f64,
    /// Probability a cluster configures downlink.
    pub p_d: f64,
    /// Cluster apothem (hexagon center to edge midpoint), meters.
    pub rho: f64,
    /// DL SINR threshold, linear.
    pub gamma_d: f64,
    /// UL SINR threshold, linear.
    pub gamma_u: f64,
    /// Whether the per-tier weights in the overall success probability and
    /// throughput sums are renormalized over the active tiers 1..=N. The
    /// unnormalized variant uses the raw load pmf f(n), which sums to less
    /// than one whenever f(0) > 0.
    pub normalize_tier_weights: bool,
}

impl Default for NetworkConfig {
    /// Baseline scenario: SAP density 1e-3 /m^2, ten MUs per SAP on
    /// average, Q_u = 17 dBm, P_s = 30 dBm, N = 3, M = 8, pathloss
    /// exponent 4, interference-limited (zero noise), balanced UL/DL,
    /// cluster size l = 3, both SINR thresholds 0 dB.
    fn default() -> Self {
        let lambda_s = 1e-3;
        NetworkConfig {
            lambda_s,
            lambda_u: 10.0 * lambda_s,
            p_s: dbm_to_watts(30.0),
            q_u: dbm_to_watts(17.0),
            m_antennas: 8,
            n_max: 3,
            alpha: 4.0,
            noise: 0.0,
            p_d: 0.5,
            rho: rho_for_cluster_size(3.0, lambda_s).expect("valid default"),
            gamma_d: 1.0,
            gamma_u: 1.0,
            normalize_tier_weights: true,
        }
    }
}

impl NetworkConfig {
    /// Check every model invariant, naming the violated one on failure.
    pub fn validate(&self) -> Result<()> {
        fn bad(msg: String) -> Result<()> {
            Err(CoreError::InvalidConfig(msg))
        }
        if !(self.alpha > 2.0) {
            return bad(format!("alpha must exceed 2 (got {})", self.alpha));
        }
        if self.n_max < 1 || self.n_max > self.m_antennas {
            return bad(format!(
                "n_max must satisfy 1 <= n_max <= m_antennas (got n_max={}, m_antennas={})",
                self.n_max, self.m_antennas
            ));
        }
        if !(0.0..=1.0).contains(&self.p_d) {
            return bad(format!("p_d must lie in [0, 1] (got {})", self.p_d));
        }
        for (name, v) in [
            ("lambda_s", self.lambda_s),
            ("lambda_u", self.lambda_u),
            ("p_s", self.p_s),
            ("q_u", self.q_u),
            ("rho", self.rho),
            ("gamma_d", self.gamma_d),
            ("gamma_u", self.gamma_u),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return bad(format!("{name} must be strictly positive (got {v})"));
            }
        }
        if !(self.noise >= 0.0) || !self.noise.is_finite() {
            return bad(format!("noise must be nonnegative (got {})", self.noise));
        }
        Ok(())
    }

    /// Threshold for the given direction.
    pub fn gamma(&self, direction: Direction) -> f64 {
        match direction {
            Direction::Downlink => self.gamma_d,
            Direction::Uplink => self.gamma_u,
        }
    }

    /// Transmit power of the desired link for the given direction.
    pub fn link_power(&self, direction: Direction) -> f64 {
        match direction {
            Direction::Downlink => self.p_s,
            Direction::Uplink => self.q_u,
        }
    }
}

/// Link direction of the typical receiver under study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Downlink,
    Uplink,
}

impl Direction {
    pub fn label(self) -> &'static str {
        match self {
            Direction::Downlink => "DL",
            Direction::Uplink => "UL",
        }
    }
}

impl std::str::FromStr for Direction {
    type Err = CoreError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dl" | "d" | "downlink" => Ok(Direction::Downlink),
            "ul" | "u" | "uplink" => Ok(Direction::Uplink),
            other => Err(CoreError::InvalidConfig(format!(
                "unknown direction '{other}' (expected DL or UL)"
            ))),
        }
    }
}

/// Hexagonal cluster geometry derived from the apothem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterGeometry {
    /// Apothem (center to edge midpoint), meters.
    pub rho: f64,
    /// Hexagon area `2 sqrt(3) rho^2`, m^2.
    pub area: f64,
    /// Mean SAPs per cluster, `area * lambda_s`.
    pub cluster_size_l: f64,
}

impl ClusterGeometry {
    /// Inner radius of ring `k` (`k >= 1`): `sqrt(k) * rho`.
    pub fn ring_inner(&self, k: u32) -> f64 {
        (k as f64).sqrt() * self.rho
    }

    /// Outer radius of ring `k`: `sqrt(k+1) * rho`. Each ring then has the
    /// same area as the central cluster.
    pub fn ring_outer(&self, k: u32) -> f64 {
        ((k + 1) as f64).sqrt() * self.rho
    }
}

/// Derive the cluster geometry from a validated config.
pub fn derive_geometry(cfg: &NetworkConfig) -> Result<ClusterGeometry> {
    cfg.validate()?;
    let area = 2.0 * 3.0f64.sqrt() * cfg.rho * cfg.rho;
    Ok(ClusterGeometry {
        rho: cfg.rho,
        area,
        cluster_size_l: area * cfg.lambda_s,
    })
}

/// Apothem that yields a target mean cluster size `l` at SAP density
/// `lambda_s`: `rho = sqrt(l / (2 sqrt(3) lambda_s))`.
pub fn rho_for_cluster_size(l: f64, lambda_s: f64) -> Result<f64> {
    if !(l > 0.0) {
        return Err(CoreError::InvalidConfig(format!(
            "cluster size l must be strictly positive (got {l})"
        )));
    }
    if !(lambda_s > 0.0) {
        return Err(CoreError::InvalidConfig(format!(
            "lambda_s must be strictly positive (got {lambda_s})"
        )));
    }
    Ok((l / (2.0 * 3.0f64.sqrt() * lambda_s)).sqrt())
}

/// Distribution of the number of MUs served per SAP, with the derived tier
/// densities and the typical link's serving-tier weights.
#[derive(Debug, Clone, PartialEq)]
pub struct TierPmf {
    /// `probs[n]` = probability a SAP serves exactly `n` MUs, n = 0..=N;
    /// the top entry absorbs the tail mass of the uncapped load.
    pub probs: Vec<f64>,
    /// Serving-tier distribution of the typical link:
    /// `probs[n] / sum_{k=1..N} probs[k]` for n = 1..=N (index 0 is n=1).
    pub serving_probs: Vec<f64>,
    /// Tier SAP densities `lambda_s * f(n)`, n = 0..=N.
    pub lambda_s_n: Vec<f64>,
    /// Tier densities of served MUs `lambda_s * n * f(n)`, n = 0..=N.
    pub lambda_u_n: Vec<f64>,
}

/// Shape constant of the Poisson-Voronoi cell-load model.
const VORONOI_SHAPE: f64 = 3.5;

/// Per-SAP load pmf under the Poisson-Voronoi model with load ratio
/// `u = lambda_u / lambda_s`:
///
/// ```text
/// f(n) = 3.5^3.5 Gamma(n+3.5) u^n / (Gamma(3.5) n! (u+3.5)^{n+3.5}),  n < N
/// ```
///
/// with all mass for `n >= N` folded into `f(N)` (the cap tier). Depends on
/// the densities only through their ratio.
pub fn tier_pmf(cfg: &NetworkConfig) -> Result<TierPmf> {
    cfg.validate()?;
    let n_max = cfg.n_max as usize;
    let u = cfg.lambda_u / cfg.lambda_s;
    let c = VORONOI_SHAPE;

    let mut probs = vec![0.0; n_max + 1];
    // f(0) = (3.5/(u+3.5))^3.5, then the term ratio
    // f(n+1)/f(n) = (n+3.5) u / ((n+1)(u+3.5)).
    let mut f = (c / (u + c)).powf(c);
    let mut below_cap = 0.0;
    for (n, p) in probs.iter_mut().enumerate().take(n_max) {
        *p = f;
        below_cap += f;
        f *= (n as f64 + c) * u / ((n as f64 + 1.0) * (u + c));
    }
    probs[n_max] = (1.0 - below_cap).max(0.0);

    let active_mass: f64 = probs[1..].iter().sum();
    let serving_probs: Vec<f64> = probs[1..].iter().map(|p| p / active_mass).collect();

    let lambda_s_n: Vec<f64> = probs.iter().map(|p| cfg.lambda_s * p).collect();
    let lambda_u_n: Vec<f64> = probs
        .iter()
        .enumerate()
        .map(|(n, p)| cfg.lambda_s * n as f64 * p)
        .collect();

    Ok(TierPmf {
        probs,
        serving_probs,
        lambda_s_n,
        lambda_u_n,
    })
}

impl TierPmf {
    /// Weights applied to per-tier success probabilities when aggregating
    /// the overall figures. `normalize` selects the renormalized serving
    /// distribution; otherwise the raw pmf over n = 1..=N is used.
    pub fn overall_weights(&self, normalize: bool) -> Vec<f64> {
        if normalize {
            self.serving_probs.clone()
        } else {
            self.probs[1..].to_vec()
        }
    }
}

// ---------------------------------------------------------------------------
// JSON ingestion
// ---------------------------------------------------------------------------

/// Raw JSON schema. Every power accepts a `_dbm` twin and every threshold a
/// `_db` twin; the cluster may be given by apothem or by mean size. Unknown
/// keys are rejected.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    lambda_s: Option<f64>,
    lambda_u: Option<f64>,
    p_s: Option<f64>,
    p_s_dbm: Option<f64>,
    q_u: Option<f64>,
    q_u_dbm: Option<f64>,
    m_antennas: Option<u32>,
    n_max: Option<u32>,
    alpha: Option<f64>,
    noise: Option<f64>,
    noise_dbm: Option<f64>,
    p_d: Option<f64>,
    rho: Option<f64>,
    cluster_size_l: Option<f64>,
    gamma_d: Option<f64>,
    gamma_d_db: Option<f64>,
    gamma_u: Option<f64>,
    gamma_u_db: Option<f64>,
    normalize_tier_weights: Option<bool>,
    /// Sweep description, passed through untouched for the CLI to interpret.
    sweep: Option<serde_json::Value>,
}

/// Parse a JSON config document. Returns the validated config and the raw
/// `sweep` block, if present.
pub fn parse_config_document(json: &str) -> Result<(NetworkConfig, Option<serde_json::Value>)> {
    let raw: RawConfig = serde_json::from_str(json)
        .map_err(|e| CoreError::InvalidConfig(format!("config JSON: {e}")))?;
    let defaults = NetworkConfig::default();

    fn pick(
        name: &str,
        linear: Option<f64>,
        converted: Option<f64>,
        fallback: f64,
    ) -> Result<f64> {
        match (linear, converted) {
            (Some(_), Some(_)) => Err(CoreError::InvalidConfig(format!(
                "config sets both {name} and its dB(m) twin; choose one"
            ))),
            (Some(v), None) => Ok(v),
            (None, Some(v)) => Ok(v),
            (None, None) => Ok(fallback),
        }
    }

    let lambda_s = raw.lambda_s.unwrap_or(defaults.lambda_s);
    let rho = match (raw.rho, raw.cluster_size_l) {
        (Some(_), Some(_)) => {
            return Err(CoreError::InvalidConfig(
                "config sets both rho and cluster_size_l; choose one".into(),
            ))
        }
        (Some(r), None) => r,
        (None, Some(l)) => rho_for_cluster_size(l, lambda_s)?,
        (None, None) => rho_for_cluster_size(3.0, lambda_s)?,
    };

    let cfg = NetworkConfig {
        lambda_s,
        lambda_u: raw.lambda_u.unwrap_or(10.0 * lambda_s),
        p_s: pick("p_s", raw.p_s, raw.p_s_dbm.map(dbm_to_watts), defaults.p_s)?,
        q_u: pick("q_u", raw.q_u, raw.q_u_dbm.map(dbm_to_watts), defaults.q_u)?,
        m_antennas: raw.m_antennas.unwrap_or(defaults.m_antennas),
        n_max: raw.n_max.unwrap_or(defaults.n_max),
        alpha: raw.alpha.unwrap_or(defaults.alpha),
        noise: pick(
            "noise",
            raw.noise,
            raw.noise_dbm.map(dbm_to_watts),
            defaults.noise,
        )?,
        p_d: raw.p_d.unwrap_or(defaults.p_d),
        rho,
        gamma_d: pick(
            "gamma_d",
            raw.gamma_d,
            raw.gamma_d_db.map(db_to_linear),
            defaults.gamma_d,
        )?,
        gamma_u: pick(
            "gamma_u",
            raw.gamma_u,
            raw.gamma_u_db.map(db_to_linear),
            defaults.gamma_u,
        )?,
        normalize_tier_weights: raw
            .normalize_tier_weights
            .unwrap_or(defaults.normalize_tier_weights),
    };
    cfg.validate()?;
    Ok((cfg, raw.sweep))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn default_config_is_valid() {
        let cfg = NetworkConfig::default();
        cfg.validate().unwrap();
        let geo = derive_geometry(&cfg).unwrap();
        assert_relative_eq!(geo.cluster_size_l, 3.0, epsilon = 1e-12);
    }

    #[test]
    fn rho_inverse_closed_form() {
        // lambda_s = 1e-3, l = 3 -> rho = sqrt(3/(2 sqrt(3) 1e-3)) ~ 29.428 m
        let rho = rho_for_cluster_size(3.0, 1e-3).unwrap();
        assert_relative_eq!(rho, 29.428, epsilon = 1e-3);
        assert_relative_eq!(rho * rho * 2.0 * 3.0f64.sqrt() * 1e-3, 3.0, epsilon = 1e-12);
    }

    #[test]
    fn geometry_round_trips_cluster_size() {
        for l in [0.5, 1.0, 3.0, 8.0, 20.0] {
            let mut cfg = NetworkConfig::default();
            cfg.rho = rho_for_cluster_size(l, cfg.lambda_s).unwrap();
            let geo = derive_geometry(&cfg).unwrap();
            assert_relative_eq!(geo.cluster_size_l, l, epsilon = 1e-12);
            assert_relative_eq!(
                geo.area,
                2.0 * 3.0f64.sqrt() * cfg.rho * cfg.rho,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn ring_areas_equal_cluster_area() {
        let cfg = NetworkConfig::default();
        let geo = derive_geometry(&cfg).unwrap();
        for k in 1..=20 {
            let ring_area =
                2.0 * 3.0f64.sqrt() * (geo.ring_outer(k).powi(2) - geo.ring_inner(k).powi(2));
            assert_relative_eq!(ring_area, geo.area, max_relative = 1e-12);
        }
    }

    #[test]
    fn zero_cluster_size_rejected() {
        assert!(rho_for_cluster_size(0.0, 1e-3).is_err());
    }

    #[test]
    fn invalid_configs_name_the_violation() {
        let mut cfg = NetworkConfig::default();
        cfg.alpha = 2.0;
        let msg = cfg.validate().unwrap_err().to_string();
        assert!(msg.contains("alpha"));

        let mut cfg = NetworkConfig::default();
        cfg.n_max = 9; // exceeds M = 8
        assert!(cfg.validate().unwrap_err().to_string().contains("n_max"));

        let mut cfg = NetworkConfig::default();
        cfg.p_d = 1.5;
        assert!(cfg.validate().unwrap_err().to_string().contains("p_d"));
    }

    #[test]
    fn tier_pmf_normalizes() {
        let cfg = NetworkConfig::default();
        let pmf = tier_pmf(&cfg).unwrap();
        let total: f64 = pmf.probs.iter().sum();
        assert_relative_eq!(total, 1.0, epsilon = 1e-12);
        let serving: f64 = pmf.serving_probs.iter().sum();
        assert_relative_eq!(serving, 1.0, epsilon = 1e-12);
        assert!(pmf.probs.iter().all(|&p| p >= 0.0));
    }

    #[test]
    fn tier_pmf_tail_absorption() {
        let cfg = NetworkConfig::default(); // u = 10, N = 3
        let pmf = tier_pmf(&cfg).unwrap();
        let head: f64 = pmf.probs[..3].iter().sum();
        assert_relative_eq!(pmf.probs[3], 1.0 - head, epsilon = 1e-12);
        // With ten MUs per SAP on average, most SAPs are saturated.
        assert!(pmf.probs[3] > 0.8);
    }

    #[test]
    fn tier_pmf_depends_only_on_density_ratio() {
        let cfg_a = NetworkConfig::default();
        let mut cfg_b = cfg_a.clone();
        cfg_b.lambda_s *= 37.0;
        cfg_b.lambda_u *= 37.0;
        cfg_b.rho = rho_for_cluster_size(3.0, cfg_b.lambda_s).unwrap();
        let (a, b) = (tier_pmf(&cfg_a).unwrap(), tier_pmf(&cfg_b).unwrap());
        for n in 0..=3 {
            assert_relative_eq!(a.probs[n], b.probs[n], epsilon = 1e-13);
        }
    }

    #[test]
    fn served_mu_density_within_total() {
        let cfg = NetworkConfig::default();
        let pmf = tier_pmf(&cfg).unwrap();
        let served: f64 = pmf.lambda_u_n.iter().sum();
        assert!(served <= cfg.lambda_u);
        assert!(served > 0.0);
    }

    #[test]
    fn json_dbm_and_db_twins() {
        let (cfg, sweep) = parse_config_document(
            r#"{
                "lambda_s": 1e-3,
                "lambda_u": 1e-2,
                "q_u_dbm": 17,
                "p_s_dbm": 30,
                "m_antennas": 8,
                "n_max": 3,
                "cluster_size_l": 3,
                "gamma_d_db": 0,
                "gamma_u_db": 0,
                "p_d": 0.5
            }"#,
        )
        .unwrap();
        assert!(sweep.is_none());
        assert_relative_eq!(cfg.q_u, dbm_to_watts(17.0), epsilon = 1e-15);
        assert_relative_eq!(cfg.p_s, 1.0, epsilon = 1e-12);
        assert_relative_eq!(cfg.gamma_d, 1.0, epsilon = 1e-15);
        assert_relative_eq!(cfg.rho, 29.428309563827188, epsilon = 1e-6);
    }

    #[test]
    fn json_unknown_key_rejected() {
        let err = parse_config_document(r#"{"lambda_s": 1e-3, "bogus": 1}"#).unwrap_err();
        assert!(err.to_string().contains("bogus"));
    }

    #[test]
    fn json_conflicting_twins_rejected() {
        let err = parse_config_document(r#"{"q_u": 0.05, "q_u_dbm": 17}"#).unwrap_err();
        assert!(err.to_string().contains("q_u"));
    }
}
