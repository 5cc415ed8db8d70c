//! Monte Carlo ground truth: spatial realizations of the clustered dynamic
//! TDD network, per-drop SINR samples with the effective fading-gain marks,
//! and seeded, parallel, reproducible estimation.
//!
//! A drop factors into four phases: (A) point placement and nearest-SAP
//! association with the service cap, (B) per-cluster direction assignment,
//! (C) interference accumulation at the typical receiver, (D) the desired
//! fading gain. Each phase consumes its own ChaCha substream derived from
//! the drop index, so sweeps can re-run only the phases an axis actually
//! dirties (association is invariant under gamma, M, p_D, cluster size and
//! power changes) while staying bit-reproducible under any thread count.

pub mod estimate;
pub mod hex;
pub mod sampling;
pub mod zf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analytic::throughput_from_success;
use crate::error::{CoreError, Result};
use crate::model::{rho_for_cluster_size, tier_pmf, Direction, NetworkConfig};
use estimate::{Estimate, SimEstimate};
use hex::{HexGrid, HexIndex};
use sampling::{
    associate_with_preselection, exp1, gamma_int, local_cell_members, sample_ppp, SapGrid,
};

/// Runner options shared by all simulation entry points.
#[derive(Debug, Clone, Copy)]
pub struct SimOptions {
    /// Square observation window side, meters.
    pub window: f64,
    pub iterations: u64,
    pub seed: u64,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions {
            window: 1000.0,
            iterations: 10_000,
            seed: 0,
        }
    }
}

/// One realization's typical-link outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DropSample {
    /// Serving tier (number of MUs at the typical link's SAP).
    pub n0: u32,
    /// Serving distance, meters.
    pub r0: f64,
    /// Linear SINR.
    pub sinr: f64,
    /// Aggregate interference power, watts.
    pub interference: f64,
}

/// A batch of drops for one configuration and direction, in drop order.
#[derive(Debug, Clone)]
pub struct DropBatch {
    pub direction: Direction,
    pub samples: Vec<DropSample>,
    /// Realizations redrawn because the typical link could not be formed
    /// (no SAP in the window, an empty typical UL cell, or the typical MU
    /// losing the service-cap lottery).
    pub retries: u64,
}

const MAX_RETRIES: u32 = 10_000;

#[derive(Debug, Clone, Copy)]
enum DropMode {
    /// Typical link sampled from the point process.
    Typical,
    /// Serving distance pinned (conditional law given r0), for validating
    /// the analytic transform at a fixed exclusion radius.
    FixedServing(f64),
}

// ---------------------------------------------------------------------------
// Phase A: geometry
// ---------------------------------------------------------------------------

struct DropGeometry {
    saps: Vec<(f64, f64)>,
    /// Served MU positions grouped by SAP.
    served_offsets: Vec<u32>,
    served_pos: Vec<(f64, f64)>,
    serving: usize,
    n0: u32,
    r0: f64,
}

impl DropGeometry {
    #[inline]
    fn served_count(&self, sap: usize) -> u32 {
        self.served_offsets[sap + 1] - self.served_offsets[sap]
    }
}

fn build_geometry<R: Rng>(
    cfg: &NetworkConfig,
    direction: Direction,
    mode: DropMode,
    window: f64,
    rng: &mut R,
) -> Option<DropGeometry> {
    let half = window / 2.0;
    let (min, max) = ((-half, -half), (half, half));

    let mut saps = sample_ppp(cfg.lambda_s, min, max, rng);
    match (direction, mode) {
        (Direction::Downlink, DropMode::FixedServing(r0)) => {
            // Conditional law given serving distance r0: no SAP inside the
            // exclusion ball, the serving SAP pinned on its boundary.
            saps.retain(|p| p.0 * p.0 + p.1 * p.1 >= r0 * r0);
            saps.push((r0, 0.0));
        }
        (Direction::Uplink, DropMode::FixedServing(r0)) => {
            // The tagged MU at (r0, 0) must have the origin SAP nearest.
            saps.retain(|p| (p.0 - r0) * (p.0 - r0) + p.1 * p.1 >= r0 * r0);
            saps.push((0.0, 0.0));
        }
        (Direction::Uplink, DropMode::Typical) => saps.push((0.0, 0.0)),
        (Direction::Downlink, DropMode::Typical) => {}
    }
    if saps.is_empty() {
        return None;
    }

    let mut mus = sample_ppp(cfg.lambda_u, min, max, rng);
    let special_mu = match (direction, mode) {
        (Direction::Downlink, _) => {
            mus.push((0.0, 0.0));
            Some(mus.len() - 1)
        }
        (Direction::Uplink, DropMode::FixedServing(r0)) => {
            mus.push((r0, 0.0));
            Some(mus.len() - 1)
        }
        (Direction::Uplink, DropMode::Typical) => None,
    };

    let (assoc, serving, n0, r0) = match direction {
        Direction::Downlink => {
            // Decide the typical MU's service-cap lottery before paying for
            // the full association: with heavy loads most redraws come from
            // the typical MU losing its cell's lottery.
            let typical = special_mu.expect("DL drop has a typical MU") as u32;
            let grid = SapGrid::build(&saps, min, max);
            let (serving, d2) = grid.nearest(&saps, 0.0, 0.0);
            let mut cell =
                local_cell_members(&mus, &saps, &grid, serving, cfg.lambda_s);
            if !cell.contains(&typical) {
                return None;
            }
            let take = cell.len().min(cfg.n_max as usize);
            if cell.len() > take {
                for j in 0..take {
                    let pick = rng.gen_range(j..cell.len());
                    cell.swap(j, pick);
                }
            }
            let served_local = &cell[..take];
            if !served_local.contains(&typical) {
                return None;
            }
            let assoc = associate_with_preselection(
                &mus,
                &saps,
                min,
                max,
                cfg.n_max,
                Some((serving, served_local)),
                rng,
            );
            let n0 = assoc.served_count(serving);
            (assoc, serving, n0, d2.sqrt())
        }
        Direction::Uplink => {
            let assoc = associate_with_preselection(&mus, &saps, min, max, cfg.n_max, None, rng);
            let serving = saps.len() - 1;
            let n0 = assoc.served_count(serving);
            if n0 == 0 {
                return None;
            }
            let tagged = match special_mu {
                Some(m) => {
                    if !assoc.is_served(serving, m as u32) {
                        return None;
                    }
                    m as u32
                }
                None => {
                    let group = assoc.served_group(serving);
                    group[rng.gen_range(0..group.len())]
                }
            };
            let (tx, ty) = mus[tagged as usize];
            (assoc, serving, n0, (tx * tx + ty * ty).sqrt())
        }
    };

    // Positions of served MUs grouped by SAP; only these ever transmit.
    let mut served_pos = Vec::with_capacity(assoc.served.len());
    for &m in &assoc.served {
        served_pos.push(mus[m as usize]);
    }
    Some(DropGeometry {
        saps,
        served_offsets: assoc.served_offsets,
        served_pos,
        serving,
        n0,
        r0,
    })
}

// ---------------------------------------------------------------------------
// Phase B: cluster directions
// ---------------------------------------------------------------------------

/// Direction of every hexagonal cluster cell covering the window, drawn
/// i.i.d. Bernoulli(p_D) in fixed row-major cell order, with the typical
/// link's cells forced to the direction under study.
pub struct DirectionMap {
    grid: HexGrid,
    q_lo: i32,
    r_lo: i32,
    q_n: i32,
    r_n: i32,
    dl: Vec<bool>,
}

impl DirectionMap {
    pub fn assign<R: Rng>(
        rho: f64,
        window: f64,
        p_d: f64,
        forced_dl: &[(f64, f64)],
        forced_ul: &[(f64, f64)],
        rng: &mut R,
    ) -> Self {
        let grid = HexGrid::new(rho);
        let half = window / 2.0;
        let corners = [(-half, -half), (-half, half), (half, -half), (half, half)];
        let mut q_lo = i32::MAX;
        let mut q_hi = i32::MIN;
        let mut r_lo = i32::MAX;
        let mut r_hi = i32::MIN;
        for (x, y) in corners {
            let (q, r) = grid.index(x, y);
            q_lo = q_lo.min(q);
            q_hi = q_hi.max(q);
            r_lo = r_lo.min(r);
            r_hi = r_hi.max(r);
        }
        // The axial box of the corners bounds all interior cells; pad for
        // cells whose centers sit just outside the window.
        q_lo -= 2;
        q_hi += 2;
        r_lo -= 2;
        r_hi += 2;
        let q_n = q_hi - q_lo + 1;
        let r_n = r_hi - r_lo + 1;
        let mut dl = Vec::with_capacity((q_n * r_n) as usize);
        for _ in 0..q_n * r_n {
            dl.push(rng.gen::<f64>() < p_d);
        }
        let mut map = DirectionMap {
            grid,
            q_lo,
            r_lo,
            q_n,
            r_n,
            dl,
        };
        for &(x, y) in forced_dl {
            let idx = map.grid.index(x, y);
            let slot = map.slot(idx);
            map.dl[slot] = true;
        }
        for &(x, y) in forced_ul {
            let idx = map.grid.index(x, y);
            let slot = map.slot(idx);
            map.dl[slot] = false;
        }
        map
    }

    #[inline]
    fn slot(&self, (q, r): HexIndex) -> usize {
        let qi = (q - self.q_lo).clamp(0, self.q_n - 1);
        let ri = (r - self.r_lo).clamp(0, self.r_n - 1);
        (ri * self.q_n + qi) as usize
    }

    #[inline]
    pub fn is_dl(&self, x: f64, y: f64) -> bool {
        self.dl[self.slot(self.grid.index(x, y))]
    }

    /// Fraction of cells configured DL (for distribution checks).
    pub fn dl_fraction(&self) -> f64 {
        self.dl.iter().filter(|&&d| d).count() as f64 / self.dl.len() as f64
    }
}

fn directions_for_drop<R: Rng>(
    cfg: &NetworkConfig,
    geo: &DropGeometry,
    direction: Direction,
    window: f64,
    rng: &mut R,
) -> DirectionMap {
    let serving_pos = geo.saps[geo.serving];
    match direction {
        Direction::Downlink => DirectionMap::assign(
            cfg.rho,
            window,
            cfg.p_d,
            &[(0.0, 0.0), serving_pos],
            &[],
            rng,
        ),
        Direction::Uplink => {
            DirectionMap::assign(cfg.rho, window, cfg.p_d, &[], &[(0.0, 0.0)], rng)
        }
    }
}

// ---------------------------------------------------------------------------
// Phases C and D: interference and SINR
// ---------------------------------------------------------------------------

#[inline]
fn inv_pathloss(d2: f64, alpha: f64) -> f64 {
    if alpha == 4.0 {
        1.0 / (d2 * d2)
    } else {
        d2.powf(-alpha * 0.5)
    }
}

/// Unit-power interference sums at the origin: `(sap_unit, mu_unit)` so that
/// the aggregate is `P_s * sap_unit + Q_u * mu_unit`.
///
/// SAPs in DL cells contribute a Gamma(n, 1) effective gain over their n
/// streams; served MUs of SAPs in UL cells contribute Exp(1) each. The
/// typical link's own SAP is excluded: in DL it is the desired transmitter,
/// in UL its served MUs are the desired signal and the ZF-nulled co-cell
/// interferers.
fn accumulate_interference<R: Rng>(
    cfg: &NetworkConfig,
    geo: &DropGeometry,
    dirs: &DirectionMap,
    rng: &mut R,
) -> (f64, f64) {
    let mut sap_unit = 0.0;
    let mut mu_unit = 0.0;
    for (i, &(sx, sy)) in geo.saps.iter().enumerate() {
        if i == geo.serving {
            continue;
        }
        let n = geo.served_count(i);
        if n == 0 {
            continue;
        }
        if dirs.is_dl(sx, sy) {
            let d2 = sx * sx + sy * sy;
            sap_unit += inv_pathloss(d2, cfg.alpha) * gamma_int(rng, n);
        } else {
            let (lo, hi) = (
                geo.served_offsets[i] as usize,
                geo.served_offsets[i + 1] as usize,
            );
            for &(mx, my) in &geo.served_pos[lo..hi] {
                let d2 = mx * mx + my * my;
                mu_unit += inv_pathloss(d2, cfg.alpha) * exp1(rng);
            }
        }
    }
    (sap_unit, mu_unit)
}

#[inline]
fn assemble_sample(
    cfg: &NetworkConfig,
    direction: Direction,
    geo_n0: u32,
    geo_r0: f64,
    desired_gain: f64,
    sap_unit: f64,
    mu_unit: f64,
) -> DropSample {
    let interference = cfg.p_s * sap_unit + cfg.q_u * mu_unit;
    let signal =
        cfg.link_power(direction) * inv_pathloss(geo_r0 * geo_r0, cfg.alpha) * desired_gain;
    DropSample {
        n0: geo_n0,
        r0: geo_r0,
        sinr: signal / (interference + cfg.noise),
        interference,
    }
}

// ---------------------------------------------------------------------------
// Drop runners
// ---------------------------------------------------------------------------

fn phase_seeds<R: Rng>(master: &mut R) -> [u64; 4] {
    [master.gen(), master.gen(), master.gen(), master.gen()]
}

fn single_drop(
    cfg: &NetworkConfig,
    direction: Direction,
    mode: DropMode,
    window: f64,
    master: &mut ChaCha8Rng,
) -> Result<(DropSample, u64)> {
    for attempt in 0..MAX_RETRIES {
        let seeds = phase_seeds(master);
        let mut geo_rng = ChaCha8Rng::seed_from_u64(seeds[0]);
        let Some(geo) = build_geometry(cfg, direction, mode, window, &mut geo_rng) else {
            continue;
        };
        let mut dir_rng = ChaCha8Rng::seed_from_u64(seeds[1]);
        let dirs = directions_for_drop(cfg, &geo, direction, window, &mut dir_rng);
        let mut intf_rng = ChaCha8Rng::seed_from_u64(seeds[2]);
        let (sap_unit, mu_unit) = accumulate_interference(cfg, &geo, &dirs, &mut intf_rng);
        let mut gain_rng = ChaCha8Rng::seed_from_u64(seeds[3]);
        let g = gamma_int(&mut gain_rng, cfg.m_antennas - geo.n0 + 1);
        let sample = assemble_sample(cfg, direction, geo.n0, geo.r0, g, sap_unit, mu_unit);
        return Ok((sample, attempt as u64));
    }
    Err(CoreError::Domain(format!(
        "typical {} link could not be formed after {MAX_RETRIES} attempts; \
         check densities and window",
        direction.label()
    )))
}

/// Run one Monte Carlo drop: place the network, form the typical link,
/// accumulate interference, and sample the SINR.
pub fn run_drop(
    cfg: &NetworkConfig,
    direction: Direction,
    window: f64,
    master: &mut ChaCha8Rng,
) -> Result<DropSample> {
    cfg.validate()?;
    single_drop(cfg, direction, DropMode::Typical, window, master).map(|(s, _)| s)
}

fn drop_master(seed: u64, drop_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(drop_index);
    rng
}

const CHUNK: u64 = 64;

fn run_batch(
    cfg: &NetworkConfig,
    direction: Direction,
    mode: DropMode,
    opts: &SimOptions,
) -> Result<DropBatch> {
    cfg.validate()?;
    let n = opts.iterations;
    let n_chunks = n.div_ceil(CHUNK);
    let chunks: Result<Vec<(Vec<DropSample>, u64)>> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = ((c + 1) * CHUNK).min(n);
            let mut out = Vec::with_capacity((hi - lo) as usize);
            let mut retries = 0u64;
            for i in lo..hi {
                let mut master = drop_master(opts.seed, i);
                let (sample, r) = single_drop(cfg, direction, mode, opts.window, &mut master)?;
                out.push(sample);
                retries += r;
            }
            Ok((out, retries))
        })
        .collect();
    let chunks = chunks?;
    let mut samples = Vec::with_capacity(n as usize);
    let mut retries = 0;
    for (s, r) in chunks {
        samples.extend(s);
        retries += r;
    }
    Ok(DropBatch {
        direction,
        samples,
        retries,
    })
}

/// Monte Carlo batch for one configuration and direction. Deterministic for
/// a given `(cfg, direction, opts)` regardless of thread count: drop `i`
/// consumes only its own counter-mode substream, and samples are assembled
/// in drop order.
pub fn run_drops(cfg: &NetworkConfig, direction: Direction, opts: &SimOptions) -> Result<DropBatch> {
    run_batch(cfg, direction, DropMode::Typical, opts)
}

/// Batch with the serving distance pinned to `r0` (the conditional law the
/// analytic transform describes); used as the Laplace-transform oracle.
pub fn run_conditioned_drops(
    cfg: &NetworkConfig,
    direction: Direction,
    r0: f64,
    opts: &SimOptions,
) -> Result<DropBatch> {
    if !(r0 > 0.0) || r0 > cfg.rho {
        return Err(CoreError::InvalidConfig(format!(
            "conditioned serving distance must lie in (0, rho] (got {r0})"
        )));
    }
    run_batch(cfg, direction, DropMode::FixedServing(r0), opts)
}

impl DropBatch {
    /// Success and throughput estimates at the thresholds in `cfg`.
    pub fn estimate(&self, cfg: &NetworkConfig) -> Result<SimEstimate> {
        let pmf = tier_pmf(cfg)?;
        let gamma = cfg.gamma(self.direction);
        let tiers = cfg.n_max as usize;
        let mut totals = vec![0u64; tiers];
        let mut hits = vec![0u64; tiers];
        for s in &self.samples {
            let t = (s.n0 - 1) as usize;
            totals[t] += 1;
            if s.sinr > gamma {
                hits[t] += 1;
            }
        }
        let per_n0: Vec<Estimate> = (0..tiers)
            .map(|t| Estimate::proportion(hits[t], totals[t]))
            .collect();
        let overall = Estimate::proportion(hits.iter().sum(), totals.iter().sum());
        let means: Vec<f64> = per_n0.iter().map(|e| e.mean).collect();
        let throughput = throughput_from_success(cfg, &pmf, self.direction, &means);
        Ok(SimEstimate {
            per_n0,
            overall,
            throughput,
            retries: self.retries,
        })
    }

    /// Empirical Laplace transform of the interference: mean of
    /// `exp(-s * I)` with its confidence interval.
    pub fn laplace_empirical(&self, s: f64) -> Estimate {
        Estimate::from_samples(self.samples.iter().map(|d| (-s * d.interference).exp()))
    }
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

/// Sweepable parameter axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    GammaDb,
    MAntennas,
    PD,
    ClusterSizeL,
    PSDbm,
}

impl SweepAxis {
    pub fn key(self) -> &'static str {
        match self {
            SweepAxis::GammaDb => "gamma_db",
            SweepAxis::MAntennas => "m_antennas",
            SweepAxis::PD => "p_d",
            SweepAxis::ClusterSizeL => "cluster_size_l",
            SweepAxis::PSDbm => "p_s_dbm",
        }
    }

    /// Base config with the axis value applied (dB conversions happen
    /// here, once).
    pub fn apply(self, base: &NetworkConfig, value: f64) -> Result<NetworkConfig> {
        let mut cfg = base.clone();
        match self {
            SweepAxis::GammaDb => {
                let g = crate::model::db_to_linear(value);
                cfg.gamma_d = g;
                cfg.gamma_u = g;
            }
            SweepAxis::MAntennas => {
                if value.fract() != 0.0 || value < 1.0 {
                    return Err(CoreError::InvalidConfig(format!(
                        "antenna count must be a positive integer (got {value})"
                    )));
                }
                cfg.m_antennas = value as u32;
            }
            SweepAxis::PD => cfg.p_d = value,
            SweepAxis::ClusterSizeL => cfg.rho = rho_for_cluster_size(value, base.lambda_s)?,
            SweepAxis::PSDbm => cfg.p_s = crate::model::dbm_to_watts(value),
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

impl std::str::FromStr for SweepAxis {
    type Err = CoreError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gamma_db" => Ok(SweepAxis::GammaDb),
            "m_antennas" => Ok(SweepAxis::MAntennas),
            "p_d" => Ok(SweepAxis::PD),
            "cluster_size_l" => Ok(SweepAxis::ClusterSizeL),
            "p_s_dbm" => Ok(SweepAxis::PSDbm),
            other => Err(CoreError::InvalidConfig(format!(
                "unknown sweep axis '{other}'"
            ))),
        }
    }
}

#[derive(Clone, Default)]
struct TierAcc {
    total: u64,
    hits: u64,
}

/// Simulate every axis value over a common set of drops.
///
/// Point placement and association do not depend on any sweepable axis, so
/// each drop realizes its geometry once and re-runs only the dirtied
/// phases per value: nothing for `gamma_db` (thresholding), the desired
/// gain for `m_antennas`, directions and interference for `p_d` and
/// `cluster_size_l`, and a power recombination for `p_s_dbm`. Phase
/// substreams are value-independent, so the common-random-number coupling
/// across values is deterministic.
pub fn simulate_sweep(
    base: &NetworkConfig,
    axis: SweepAxis,
    values: &[f64],
    direction: Direction,
    opts: &SimOptions,
) -> Result<Vec<SimEstimate>> {
    base.validate()?;
    if values.is_empty() {
        return Err(CoreError::InvalidConfig("sweep values are empty".into()));
    }
    let cfgs: Result<Vec<NetworkConfig>> = values.iter().map(|&v| axis.apply(base, v)).collect();
    let cfgs = cfgs?;
    let tiers = base.n_max as usize;
    let n = opts.iterations;
    let n_chunks = n.div_ceil(CHUNK);

    let chunk_results: Result<Vec<(Vec<Vec<TierAcc>>, u64)>> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = ((c + 1) * CHUNK).min(n);
            let mut acc = vec![vec![TierAcc::default(); tiers]; cfgs.len()];
            let mut retries = 0u64;
            for i in lo..hi {
                let mut master = drop_master(opts.seed, i);
                retries += sweep_drop(base, &cfgs, axis, direction, opts.window, &mut master, &mut acc)?;
            }
            Ok((acc, retries))
        })
        .collect();

    let mut acc = vec![vec![TierAcc::default(); tiers]; cfgs.len()];
    let mut retries = 0u64;
    for (chunk_acc, r) in chunk_results? {
        retries += r;
        for (v, per_tier) in chunk_acc.into_iter().enumerate() {
            for (t, a) in per_tier.into_iter().enumerate() {
                acc[v][t].total += a.total;
                acc[v][t].hits += a.hits;
            }
        }
    }

    let pmf = tier_pmf(base)?;
    let mut out = Vec::with_capacity(cfgs.len());
    for (v, cfg_v) in cfgs.iter().enumerate() {
        let per_n0: Vec<Estimate> = (0..tiers)
            .map(|t| Estimate::proportion(acc[v][t].hits, acc[v][t].total))
            .collect();
        let overall = Estimate::proportion(
            acc[v].iter().map(|a| a.hits).sum(),
            acc[v].iter().map(|a| a.total).sum(),
        );
        let means: Vec<f64> = per_n0.iter().map(|e| e.mean).collect();
        let throughput = throughput_from_success(cfg_v, &pmf, direction, &means);
        out.push(SimEstimate {
            per_n0,
            overall,
            throughput,
            retries,
        });
    }
    Ok(out)
}

fn sweep_drop(
    base: &NetworkConfig,
    cfgs: &[NetworkConfig],
    axis: SweepAxis,
    direction: Direction,
    window: f64,
    master: &mut ChaCha8Rng,
    acc: &mut [Vec<TierAcc>],
) -> Result<u64> {
    for attempt in 0..MAX_RETRIES {
        let seeds = phase_seeds(master);
        let mut geo_rng = ChaCha8Rng::seed_from_u64(seeds[0]);
        let Some(geo) = build_geometry(base, direction, DropMode::Typical, window, &mut geo_rng)
        else {
            continue;
        };
        let tier = (geo.n0 - 1) as usize;

        match axis {
            SweepAxis::GammaDb | SweepAxis::PSDbm => {
                // One realization; per value only the threshold or the
                // power recombination changes.
                let mut dir_rng = ChaCha8Rng::seed_from_u64(seeds[1]);
                let dirs = directions_for_drop(base, &geo, direction, window, &mut dir_rng);
                let mut intf_rng = ChaCha8Rng::seed_from_u64(seeds[2]);
                let (sap_unit, mu_unit) =
                    accumulate_interference(base, &geo, &dirs, &mut intf_rng);
                let mut gain_rng = ChaCha8Rng::seed_from_u64(seeds[3]);
                let g = gamma_int(&mut gain_rng, base.m_antennas - geo.n0 + 1);
                for (v, cfg_v) in cfgs.iter().enumerate() {
                    let s = assemble_sample(cfg_v, direction, geo.n0, geo.r0, g, sap_unit, mu_unit);
                    acc[v][tier].total += 1;
                    if s.sinr > cfg_v.gamma(direction) {
                        acc[v][tier].hits += 1;
                    }
                }
            }
            SweepAxis::MAntennas => {
                let mut dir_rng = ChaCha8Rng::seed_from_u64(seeds[1]);
                let dirs = directions_for_drop(base, &geo, direction, window, &mut dir_rng);
                let mut intf_rng = ChaCha8Rng::seed_from_u64(seeds[2]);
                let (sap_unit, mu_unit) =
                    accumulate_interference(base, &geo, &dirs, &mut intf_rng);
                let mut gain_rng = ChaCha8Rng::seed_from_u64(seeds[3]);
                for (v, cfg_v) in cfgs.iter().enumerate() {
                    let g = gamma_int(&mut gain_rng, cfg_v.m_antennas - geo.n0 + 1);
                    let s = assemble_sample(cfg_v, direction, geo.n0, geo.r0, g, sap_unit, mu_unit);
                    acc[v][tier].total += 1;
                    if s.sinr > cfg_v.gamma(direction) {
                        acc[v][tier].hits += 1;
                    }
                }
            }
            SweepAxis::PD | SweepAxis::ClusterSizeL => {
                // Directions and interference are re-realized per value from
                // the same substreams; the desired gain is shared.
                let mut gain_rng = ChaCha8Rng::seed_from_u64(seeds[3]);
                let g = gamma_int(&mut gain_rng, base.m_antennas - geo.n0 + 1);
                for (v, cfg_v) in cfgs.iter().enumerate() {
                    let mut dir_rng = ChaCha8Rng::seed_from_u64(seeds[1]);
                    let dirs = directions_for_drop(cfg_v, &geo, direction, window, &mut dir_rng);
                    let mut intf_rng = ChaCha8Rng::seed_from_u64(seeds[2]);
                    let (sap_unit, mu_unit) =
                        accumulate_interference(cfg_v, &geo, &dirs, &mut intf_rng);
                    let s = assemble_sample(cfg_v, direction, geo.n0, geo.r0, g, sap_unit, mu_unit);
                    acc[v][tier].total += 1;
                    if s.sinr > cfg_v.gamma(direction) {
                        acc[v][tier].hits += 1;
                    }
                }
            }
        }
        return Ok(attempt as u64);
    }
    Err(CoreError::Domain(format!(
        "typical {} link could not be formed after {MAX_RETRIES} attempts",
        direction.label()
    )))
}

/// Warn when the window cannot contain the interference range the analytic
/// ring truncation accounts for.
pub fn window_guidance(cfg: &NetworkConfig, window: f64, ring_cap: u32) -> Option<String> {
    let needed = 2.0 * ((ring_cap + 1) as f64).sqrt() * cfg.rho;
    if window < needed {
        Some(format!(
            "window side {window} m is below the {needed:.0} m the ring truncation \
             (K = {ring_cap}) reaches; cross-engine tails will differ"
        ))
    } else {
        None
    }
}
