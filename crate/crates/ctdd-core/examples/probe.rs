use ctdd_core::analytic::{laplace_transform, LaplaceParams};
use ctdd_core::model::{tier_pmf, Direction, NetworkConfig};
use ctdd_core::sim::{run_conditioned_drops, SimOptions};

fn main() {
    let cfg = NetworkConfig::default();
    let pmf = tier_pmf(&cfg).unwrap();
    let r0 = 10.0;
    let opts = SimOptions {
        window: 1000.0,
        iterations: 100_000,
        seed: 31,
    };
    for direction in [Direction::Downlink, Direction::Uplink] {
        let power = cfg.link_power(direction);
        let batch = run_conditioned_drops(&cfg, direction, r0, &opts).unwrap();
        println!("=== {} (conditioned r0={r0} m, {} drops) ===", direction.label(), opts.iterations);
        for gamma in [0.5, 1.0, 2.0] {
            let s = gamma * r0.powf(cfg.alpha) / power;
            let emp = batch.laplace_empirical(s);
            let params = LaplaceParams::new(direction, r0);
            let ana = laplace_transform(&cfg, &pmf, &params, s, 0).unwrap().value();
            println!(
                "s={s:.3e}: empirical={:.5}±{:.5}  analytic={:.5}  diff={:+.5} ({}σ)",
                emp.mean,
                emp.half_width_95,
                ana,
                ana - emp.mean,
                ((ana - emp.mean) / (emp.half_width_95 / 1.96)).round()
            );
        }
    }
}
