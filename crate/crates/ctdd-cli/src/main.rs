//! Command-line front end: single-point evaluation, cross-engine
//! comparison, parameter sweeps with CSV output, and the ZF distribution
//! checks.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ctdd_core::analytic::{success_overall, throughput_from_success, Method};
use ctdd_core::model::{parse_config_document, tier_pmf, Direction, NetworkConfig};
use ctdd_core::sim::estimate::{ks_critical, ks_statistic};
use ctdd_core::sim::zf::zf_validation;
use ctdd_core::sim::{run_drops, simulate_sweep, window_guidance, SimOptions, SweepAxis};
use ctdd_core::CoreError;

use output::{CsvSink, Row};

/// Exit codes: 0 success, 2 config error, 3 numerical failure, 4 bound
/// violation in `compare`.
const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
const EXIT_BOUND_VIOLATION: u8 = 4;

#[derive(Parser)]
#[command(
    name = "ctdd",
    about = "Success probability and throughput of multi-antenna small-cell \
             networks under clustered dynamic TDD: closed-form evaluation \
             and Monte Carlo simulation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// JSON configuration file; defaults apply to missing keys.
    #[arg(long)]
    config: Option<PathBuf>,
    /// CSV output path (stdout otherwise).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Master seed for the simulation substreams.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Monte Carlo drops per point.
    #[arg(long, default_value_t = 10_000)]
    iterations: u64,
    /// Square simulation window side, meters.
    #[arg(long, default_value_t = 1000.0)]
    window: f64,
    /// Link direction: DL, UL, or both.
    #[arg(long, default_value = "both")]
    direction: String,
    /// Fill the wall_ms CSV column. Timings vary run to run, so this
    /// sacrifices byte-identical output.
    #[arg(long, default_value_t = false)]
    timings: bool,
}

impl CommonArgs {
    fn directions(&self) -> Result<Vec<Direction>, CoreError> {
        match self.direction.to_ascii_lowercase().as_str() {
            "both" => Ok(vec![Direction::Downlink, Direction::Uplink]),
            other => Direction::from_str(other).map(|d| vec![d]),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the closed-form success probability and throughput.
    Analytic {
        #[command(flatten)]
        common: CommonArgs,
        /// Engines: comma list of analytic_exact, analytic_bound.
        #[arg(long, default_value = "analytic_exact,analytic_bound")]
        engine: String,
    },
    /// Estimate success probability and throughput by Monte Carlo.
    Simulate {
        #[command(flatten)]
        common: CommonArgs,
        /// Write one CSV row per drop (direction, n0, r0_m, sinr_linear,
        /// interference_w).
        #[arg(long)]
        dump_samples: Option<PathBuf>,
    },
    /// Sweep one parameter axis and emit a result table.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        /// Sweep axis: gamma_db, m_antennas, p_d, cluster_size_l, p_s_dbm.
        /// Overrides the config file's sweep block.
        #[arg(long)]
        axis: Option<String>,
        /// Comma-separated axis values (strictly monotone).
        #[arg(long)]
        values: Option<String>,
        /// Engines: comma list of analytic_exact, analytic_bound, simulation.
        #[arg(long)]
        engine: Option<String>,
    },
    /// Single-point cross-engine comparison with bound checking.
    Compare {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Validate the zero-forcing effective-gain distributions.
    ValidateZf {
        /// Antennas per SAP.
        #[arg(long, default_value_t = 8)]
        m: usize,
        /// Served MUs at the SAP under test.
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                CoreError::InvalidConfig(_) => EXIT_CONFIG,
                _ => EXIT_NUMERICAL,
            })
        }
    }
}

fn load_config(
    common: &CommonArgs,
) -> Result<(NetworkConfig, Option<serde_json::Value>), CoreError> {
    match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CoreError::InvalidConfig(format!("cannot read {}: {e}", path.display()))
            })?;
            parse_config_document(&text)
        }
        None => Ok((NetworkConfig::default(), None)),
    }
}

fn run(cli: Cli) -> Result<ExitCode, CoreError> {
    match cli.command {
        Command::Analytic { common, engine } => cmd_analytic(&common, &engine),
        Command::Simulate {
            common,
            dump_samples,
        } => cmd_simulate(&common, dump_samples.as_deref()),
        Command::Sweep {
            common,
            axis,
            values,
            engine,
        } => cmd_sweep(
            &common,
            axis.as_deref(),
            values.as_deref(),
            engine.as_deref(),
        ),
        Command::Compare { common } => cmd_compare(&common),
        Command::ValidateZf {
            m,
            n,
            samples,
            seed,
        } => cmd_validate_zf(m, n, samples, seed),
    }
}

fn parse_methods(engine: &str) -> Result<Vec<Method>, CoreError> {
    engine.split(',').map(|e| Method::from_str(e.trim())).collect()
}

fn cmd_analytic(common: &CommonArgs, engine: &str) -> Result<ExitCode, CoreError> {
    let (cfg, _) = load_config(common)?;
    let pmf = tier_pmf(&cfg)?;
    let methods = parse_methods(engine)?;
    let mut sink = CsvSink::open(common.out.as_deref())?;
    for &direction in &common.directions()? {
        for &method in &methods {
            let started = Instant::now();
            let result = success_overall(&cfg, &pmf, direction, method);
            let wall = started.elapsed();
            match result {
                Ok(res) => {
                    let tput = throughput_from_success(&cfg, &pmf, direction, &res.per_n0);
                    for (i, &mu) in res.per_n0.iter().enumerate() {
                        sink.write(&Row {
                            direction,
                            engine: method.label(),
                            n0: Some((i + 1) as u32),
                            success: Some(mu),
                            ..Row::default()
                        })?;
                    }
                    sink.write(&Row {
                        direction,
                        engine: method.label(),
                        success: Some(res.overall),
                        throughput: Some(tput),
                        wall_ms: common.timings.then(|| wall.as_secs_f64() * 1e3),
                        ..Row::default()
                    })?;
                }
                Err(e) => sink.write(&Row {
                    direction,
                    engine: method.label(),
                    error: Some(e.to_string()),
                    ..Row::default()
                })?,
            }
        }
    }
    sink.finish()?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_simulate(
    common: &CommonArgs,
    dump: Option<&std::path::Path>,
) -> Result<ExitCode, CoreError> {
    let (cfg, _) = load_config(common)?;
    if let Some(warning) = window_guidance(&cfg, common.window, 256) {
        eprintln!("warning: {warning}");
    }
    let opts = SimOptions {
        window: common.window,
        iterations: common.iterations,
        seed: common.seed,
    };
    let mut sink = CsvSink::open(common.out.as_deref())?;
    for &direction in &common.directions()? {
        let started = Instant::now();
        let batch = run_drops(&cfg, direction, &opts)?;
        let wall = started.elapsed();
        let est = batch.estimate(&cfg)?;
        for (i, e) in est.per_n0.iter().enumerate() {
            sink.write(&Row {
                direction,
                engine: "simulation",
                n0: Some((i + 1) as u32),
                success: Some(e.mean),
                ci95: Some(e.half_width_95),
                ..Row::default()
            })?;
        }
        sink.write(&Row {
            direction,
            engine: "simulation",
            success: Some(est.overall.mean),
            ci95: Some(est.overall.half_width_95),
            throughput: Some(est.throughput),
            wall_ms: common.timings.then(|| wall.as_secs_f64() * 1e3),
            ..Row::default()
        })?;
        eprintln!(
            "{}: {} drops, {} redraws",
            direction.label(),
            batch.samples.len(),
            batch.retries
        );
        if let Some(path) = dump {
            use std::io::Write;
            let mut w = std::io::BufWriter::new(std::fs::File::create(path).map_err(|e| {
                CoreError::InvalidConfig(format!("cannot create {}: {e}", path.display()))
            })?);
            writeln!(w, "direction,n0,r0_m,sinr_linear,interference_w").map_err(io_err)?;
            for s in &batch.samples {
                writeln!(
                    w,
                    "{},{},{},{},{}",
                    direction.label(),
                    s.n0,
                    s.r0,
                    s.sinr,
                    s.interference
                )
                .map_err(io_err)?;
            }
        }
    }
    sink.finish()?;
    Ok(ExitCode::SUCCESS)
}

fn io_err(e: std::io::Error) -> CoreError {
    CoreError::InvalidConfig(format!("io error: {e}"))
}

#[derive(Debug, serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepBlock {
    axis: String,
    values: Vec<f64>,
    #[serde(default)]
    engines: Option<Vec<String>>,
    #[serde(default)]
    iterations: Option<u64>,
    #[serde(default)]
    seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Engine {
    AnalyticExact,
    AnalyticBound,
    Simulation,
}

impl Engine {
    fn label(self) -> &'static str {
        match self {
            Engine::AnalyticExact => "analytic_exact",
            Engine::AnalyticBound => "analytic_bound",
            Engine::Simulation => "simulation",
        }
    }
}

impl FromStr for Engine {
    type Err = CoreError;
    fn from_str(s: &str) -> Result<Self, CoreError> {
        match s.trim() {
            "analytic_exact" => Ok(Engine::AnalyticExact),
            "analytic_bound" => Ok(Engine::AnalyticBound),
            "simulation" => Ok(Engine::Simulation),
            other => Err(CoreError::InvalidConfig(format!(
                "unknown engine '{other}' (expected analytic_exact, analytic_bound, simulation)"
            ))),
        }
    }
}

fn cmd_sweep(
    common: &CommonArgs,
    axis_flag: Option<&str>,
    values_flag: Option<&str>,
    engine_flag: Option<&str>,
) -> Result<ExitCode, CoreError> {
    let (cfg, sweep_value) = load_config(common)?;
    let block: Option<SweepBlock> = match sweep_value {
        Some(v) => Some(
            serde_json::from_value(v)
                .map_err(|e| CoreError::InvalidConfig(format!("sweep block: {e}")))?,
        ),
        None => None,
    };

    let axis_str = axis_flag
        .map(str::to_owned)
        .or_else(|| block.as_ref().map(|b| b.axis.clone()))
        .ok_or_else(|| {
            CoreError::InvalidConfig("sweep needs an axis (flag or config sweep block)".into())
        })?;
    let axis = SweepAxis::from_str(&axis_str)?;

    let values: Vec<f64> = match values_flag {
        Some(v) => v
            .split(',')
            .map(|x| {
                x.trim()
                    .parse::<f64>()
                    .map_err(|e| CoreError::InvalidConfig(format!("bad sweep value '{x}': {e}")))
            })
            .collect::<Result<_, _>>()?,
        None => block
            .as_ref()
            .map(|b| b.values.clone())
            .ok_or_else(|| CoreError::InvalidConfig("sweep needs values".into()))?,
    };
    if values.is_empty() {
        return Err(CoreError::InvalidConfig("sweep values are empty".into()));
    }
    let monotone =
        values.windows(2).all(|w| w[0] < w[1]) || values.windows(2).all(|w| w[0] > w[1]);
    if !monotone {
        return Err(CoreError::InvalidConfig(
            "sweep values must be strictly monotone".into(),
        ));
    }

    let engines: Vec<Engine> = match engine_flag {
        Some(e) => e
            .split(',')
            .map(Engine::from_str)
            .collect::<Result<_, _>>()?,
        None => match block.as_ref().and_then(|b| b.engines.clone()) {
            Some(list) => list
                .iter()
                .map(|e| Engine::from_str(e))
                .collect::<Result<_, _>>()?,
            None => vec![Engine::AnalyticBound, Engine::Simulation],
        },
    };
    if engines.is_empty() {
        return Err(CoreError::InvalidConfig("engine set is empty".into()));
    }

    let iterations = block
        .as_ref()
        .and_then(|b| b.iterations)
        .unwrap_or(common.iterations);
    let seed = block.as_ref().and_then(|b| b.seed).unwrap_or(common.seed);
    let opts = SimOptions {
        window: common.window,
        iterations,
        seed,
    };
    if engines.contains(&Engine::Simulation) && iterations < 1 {
        return Err(CoreError::InvalidConfig(
            "simulation engine needs iterations >= 1".into(),
        ));
    }

    let mut sink = CsvSink::open(common.out.as_deref())?;
    for &direction in &common.directions()? {
        // The simulation engine evaluates all axis values over shared
        // drops; analytic engines evaluate point by point.
        let sim_results = if engines.contains(&Engine::Simulation) {
            if let Some(warning) = window_guidance(&cfg, common.window, 256) {
                eprintln!("warning: {warning}");
            }
            let started = Instant::now();
            let res = simulate_sweep(&cfg, axis, &values, direction, &opts);
            Some((res, started.elapsed()))
        } else {
            None
        };

        for (vi, &value) in values.iter().enumerate() {
            for &engine in &engines {
                let row = match engine {
                    Engine::Simulation => match &sim_results {
                        Some((Ok(estimates), wall)) => {
                            let est = &estimates[vi];
                            Row {
                                axis: Some(axis.key()),
                                value: Some(value),
                                direction,
                                engine: engine.label(),
                                success: Some(est.overall.mean),
                                ci95: Some(est.overall.half_width_95),
                                throughput: Some(est.throughput),
                                wall_ms: common
                                    .timings
                                    .then(|| wall.as_secs_f64() * 1e3 / values.len() as f64),
                                ..Row::default()
                            }
                        }
                        Some((Err(e), _)) => Row {
                            axis: Some(axis.key()),
                            value: Some(value),
                            direction,
                            engine: engine.label(),
                            error: Some(e.to_string()),
                            ..Row::default()
                        },
                        None => unreachable!("simulation engine requested"),
                    },
                    Engine::AnalyticExact | Engine::AnalyticBound => {
                        let method = if engine == Engine::AnalyticExact {
                            Method::Exact
                        } else {
                            Method::AlzerBound
                        };
                        let started = Instant::now();
                        let outcome = axis.apply(&cfg, value).and_then(|cfg_v| {
                            let pmf_v = tier_pmf(&cfg_v)?;
                            let res = success_overall(&cfg_v, &pmf_v, direction, method)?;
                            let tput =
                                throughput_from_success(&cfg_v, &pmf_v, direction, &res.per_n0);
                            Ok((res.overall, tput))
                        });
                        let wall = started.elapsed();
                        match outcome {
                            Ok((mu, tput)) => Row {
                                axis: Some(axis.key()),
                                value: Some(value),
                                direction,
                                engine: engine.label(),
                                success: Some(mu),
                                throughput: Some(tput),
                                wall_ms: common.timings.then(|| wall.as_secs_f64() * 1e3),
                                ..Row::default()
                            },
                            Err(e) => Row {
                                axis: Some(axis.key()),
                                value: Some(value),
                                direction,
                                engine: engine.label(),
                                error: Some(e.to_string()),
                                ..Row::default()
                            },
                        }
                    }
                };
                sink.write(&row)?;
            }
        }
    }
    sink.finish()?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_compare(common: &CommonArgs) -> Result<ExitCode, CoreError> {
    let (cfg, _) = load_config(common)?;
    let pmf = tier_pmf(&cfg)?;
    let opts = SimOptions {
        window: common.window,
        iterations: common.iterations,
        seed: common.seed,
    };
    let mut violation = false;
    for &direction in &common.directions()? {
        let exact = success_overall(&cfg, &pmf, direction, Method::Exact)?;
        let bound = success_overall(&cfg, &pmf, direction, Method::AlzerBound)?;
        let batch = run_drops(&cfg, direction, &opts)?;
        let sim = batch.estimate(&cfg)?;
        let gap_exact = (exact.overall - sim.overall.mean).abs();
        let gap_bound = (bound.overall - sim.overall.mean).abs();
        println!(
            "=== {} (gamma = {:.4} linear) ===",
            direction.label(),
            cfg.gamma(direction)
        );
        println!("  analytic_exact : {:.6}", exact.overall);
        println!("  analytic_bound : {:.6}", bound.overall);
        println!(
            "  simulation     : {:.6} ± {:.6}  ({} drops)",
            sim.overall.mean, sim.overall.half_width_95, opts.iterations
        );
        println!("  |exact - sim|  : {gap_exact:.6}");
        println!("  |bound - sim|  : {gap_bound:.6}");
        if bound.overall < sim.overall.mean - sim.overall.half_width_95 {
            println!("  BOUND VIOLATION: bound sits below the simulation interval");
            violation = true;
        }
    }
    if violation {
        Ok(ExitCode::from(EXIT_BOUND_VIOLATION))
    } else {
        Ok(ExitCode::SUCCESS)
    }
}

fn cmd_validate_zf(m: usize, n: usize, samples: usize, seed: u64) -> Result<ExitCode, CoreError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = zf_validation(m, n, samples, &mut rng)?;
    let crit = ks_critical(0.01, samples);

    let report = |name: &str, xs: &[f64], shape: u32| {
        let mut sorted = xs.to_vec();
        sorted.sort_by(f64::total_cmp);
        let d = ks_statistic(&sorted, |x| ctdd_core::numerics::gamma_cdf(shape, x));
        let verdict = if d <= crit { "consistent" } else { "rejected" };
        println!(
            "  {name:<22} vs Gamma({shape},1): KS D = {d:.5} (1% critical {crit:.5}) -> {verdict}"
        );
    };

    println!("ZF gain distributions (M = {m}, n = {n}, {samples} samples):");
    report("desired", &v.desired, (m - n + 1) as u32);
    report("UL desired", &v.ul_desired, (m - n + 1) as u32);
    report("interferer aggregate", &v.interferer, n as u32);
    report("interferer per-stream", &v.interferer_stream, 1);
    report("UL cross-link", &v.ul_cross, n as u32);
    println!(
        "  nulling residual max  : {:.3e} (ZF orthogonality)",
        v.max_nulling_residual
    );
    println!("  rank-deficient redraws: {}", v.resampled);
    Ok(ExitCode::SUCCESS)
}
