//! Monte Carlo estimates and distribution-fit statistics.

/// Mean with a 95% normal-approximation confidence half-width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub half_width_95: f64,
    pub samples: u64,
}

impl Estimate {
    /// Proportion estimate: `p = hits/n`, half-width `1.96 sqrt(p(1-p)/n)`.
    pub fn proportion(hits: u64, n: u64) -> Self {
        if n == 0 {
            return Estimate {
                mean: 0.0,
                half_width_95: 0.0,
                samples: 0,
            };
        }
        let p = hits as f64 / n as f64;
        Estimate {
            mean: p,
            half_width_95: 1.96 * (p * (1.0 - p) / n as f64).sqrt(),
            samples: n,
        }
    }

    /// Mean of raw samples with the usual 1.96 sigma/sqrt(n) half-width.
    pub fn from_samples(samples: impl Iterator<Item = f64> + Clone) -> Self {
        let n = samples.clone().count() as u64;
        if n == 0 {
            return Estimate {
                mean: 0.0,
                half_width_95: 0.0,
                samples: 0,
            };
        }
        let mean = samples.clone().sum::<f64>() / n as f64;
        let var = samples.map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n as f64 - 1.0).max(1.0);
        Estimate {
            mean,
            half_width_95: 1.96 * (var / n as f64).sqrt(),
            samples: n,
        }
    }
}

/// Per-tier and pooled success estimates for one simulated configuration,
/// with the throughput implied by the per-tier means.
#[derive(Debug, Clone)]
pub struct SimEstimate {
    /// Tier i+1 success estimate.
    pub per_n0: Vec<Estimate>,
    pub overall: Estimate,
    /// Bits/s/Hz/m^2 from the per-tier means and the tier weights.
    pub throughput: f64,
    /// Drops redrawn because the typical link could not be formed.
    pub retries: u64,
}

/// One-sample Kolmogorov-Smirnov statistic `sup |F_emp - F|` against a
/// reference CDF. `samples` must be sorted ascending.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = samples.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in samples.iter().enumerate() {
        let f = cdf(x);
        let lo = i as f64 / n;
        let hi = (i + 1) as f64 / n;
        d = d.max((f - lo).abs()).max((hi - f).abs());
    }
    d
}

/// Critical KS distance at significance `alpha` for sample size `n`
/// (asymptotic Kolmogorov distribution): solves
/// `2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 c^2) = alpha`, returns `c/sqrt(n)`.
pub fn ks_critical(alpha: f64, n: usize) -> f64 {
    assert!(alpha > 0.0 && alpha < 1.0);
    let tail = |c: f64| -> f64 {
        let mut sum = 0.0;
        for k in 1..200 {
            let term = (-2.0 * (k * k) as f64 * c * c).exp();
            sum += if k % 2 == 1 { term } else { -term };
            if term < 1e-18 {
                break;
            }
        }
        2.0 * sum
    };
    let (mut lo, mut hi) = (0.2, 4.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if tail(mid) > alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi) / (n as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn proportion_interval() {
        let e = Estimate::proportion(500, 1000);
        assert_eq!(e.mean, 0.5);
        assert!((e.half_width_95 - 1.96 * (0.25f64 / 1000.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn ks_critical_reference_values() {
        // Classical asymptotic coefficients: c(0.05) = 1.3581, c(0.01) = 1.6276.
        let n = 1_000_000usize;
        let root_n = (n as f64).sqrt();
        assert!((ks_critical(0.05, n) * root_n - 1.3581).abs() < 1e-3);
        assert!((ks_critical(0.01, n) * root_n - 1.6276).abs() < 1e-3);
    }

    #[test]
    fn ks_accepts_uniform_and_rejects_shifted() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut xs: Vec<f64> = (0..20_000).map(|_| rng.gen::<f64>()).collect();
        xs.sort_by(f64::total_cmp);
        let d = ks_statistic(&xs, |x| x.clamp(0.0, 1.0));
        assert!(d < ks_critical(0.01, xs.len()), "uniform rejected: D={d}");
        let d_bad = ks_statistic(&xs, |x| (x * x).clamp(0.0, 1.0));
        assert!(d_bad > ks_critical(0.01, xs.len()));
    }
}
