//! Finite-SNR outage probability of the weighted sum rate.
//!
//! Outage at operating point (r, ρ) is the event
//! `K Σ μ_i ln(1 + μ_i ρ γ_i) ≤ r ln ρ`, estimated by Monte Carlo over
//! sharded deterministic random streams.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::beta::beta_reg;

use crate::error::{Error, Result};
use crate::model::{Scenario, Weights};
use crate::sim::channel::shard_rng;
use crate::sim::gains::{EffectiveGains, GainSampler};

/// Two-sided 95% normal quantile.
const Z_95: f64 = 1.959_963_984_540_054;

/// Below this many outages the interval switches to Clopper-Pearson.
pub const MIN_NORMAL_EVENTS: u64 = 20;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Multiplexing gain and SNR of one outage evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatingPoint {
    pub r: f64,
    pub rho_db: f64,
    rho: f64,
}

impl OperatingPoint {
    /// The dB value is converted to linear scale here and nowhere else.
    pub fn new(r: f64, rho_db: f64) -> Self {
        Self {
            r,
            rho_db,
            rho: db_to_linear(rho_db),
        }
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Target rate r ln ρ in nats.
    pub fn target_rate(&self) -> f64 {
        self.r * self.rho.ln()
    }
}

/// Sample budget, seed and shard count of a Monte Carlo run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonteCarloPlan {
    pub n_samples: u64,
    pub seed: u64,
    pub shards: u32,
}

impl MonteCarloPlan {
    pub fn new(n_samples: u64, seed: u64, shards: u32) -> Self {
        Self {
            n_samples,
            seed,
            shards,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_samples == 0 {
            return Err(Error::InvalidParameter("n_samples must be at least 1".into()));
        }
        if self.shards == 0 {
            return Err(Error::InvalidParameter("shards must be at least 1".into()));
        }
        Ok(())
    }

    /// Samples assigned to `shard`; the remainder goes to the first shards.
    pub fn shard_samples(&self, shard: u32) -> u64 {
        let s = u64::from(self.shards);
        self.n_samples / s + u64::from(u64::from(shard) < self.n_samples % s)
    }

    /// Runs `work(shard, samples, rng)` for every shard and returns the
    /// results in shard order. Each shard owns its own random stream.
    pub fn run<T, F>(&self, work: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(u32, u64, &mut rand_chacha::ChaCha8Rng) -> T + Sync,
    {
        self.validate()?;
        Ok((0..self.shards)
            .into_par_iter()
            .map(|shard| {
                let mut rng = shard_rng(self.seed, u64::from(shard));
                work(shard, self.shard_samples(shard), &mut rng)
            })
            .collect())
    }
}

/// Empirical outage probability at one operating point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutageEstimate {
    pub r: f64,
    pub rho_db: f64,
    /// Realizations used (excludes discarded rank-deficient draws).
    pub n_samples: u64,
    pub n_outages: u64,
    pub n_discarded: u64,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl OutageEstimate {
    /// Builds the estimate and its 95% interval from raw counts.
    pub fn from_counts(r: f64, rho_db: f64, n_samples: u64, n_outages: u64, n_discarded: u64) -> Self {
        let p_hat = if n_samples == 0 {
            0.0
        } else {
            n_outages as f64 / n_samples as f64
        };
        let (ci_low, ci_high) = confidence_interval(n_outages, n_samples);
        Self {
            r,
            rho_db,
            n_samples,
            n_outages,
            n_discarded,
            p_hat,
            ci_low,
            ci_high,
        }
    }

    pub fn rho(&self) -> f64 {
        db_to_linear(self.rho_db)
    }

    pub fn covers(&self, p: f64) -> bool {
        self.ci_low <= p && p <= self.ci_high
    }
}

/// 95% interval for a binomial proportion: normal approximation with at
/// least [`MIN_NORMAL_EVENTS`] events, Clopper-Pearson otherwise.
pub fn confidence_interval(n_outages: u64, n_samples: u64) -> (f64, f64) {
    if n_samples == 0 {
        return (0.0, 1.0);
    }
    let n = n_samples as f64;
    let x = n_outages as f64;
    let p = x / n;
    if n_outages >= MIN_NORMAL_EVENTS && n_outages < n_samples {
        let half = Z_95 * (p * (1.0 - p) / n).sqrt();
        return ((p - half).max(0.0), (p + half).min(1.0));
    }
    let low = if n_outages == 0 {
        0.0
    } else {
        beta_quantile(x, n - x + 1.0, 0.025)
    };
    let high = if n_outages == n_samples {
        1.0
    } else {
        beta_quantile(x + 1.0, n - x, 0.975)
    };
    (low.min(p), high.max(p))
}

/// Quantile of Beta(a, b) by bisection on the regularized incomplete beta
/// function. statrs' own `inverse_cdf` stalls for shapes around 1e7.
fn beta_quantile(a: f64, b: f64, q: f64) -> f64 {
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 1e-15 * hi {
            break;
        }
        if beta_reg(a, b, mid) < q {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Weighted sum rate `K Σ μ_i ln(1 + μ_i ρ γ_i)` in nats.
pub fn weighted_capacity(gains: &EffectiveGains, weights: &Weights, rho: f64) -> f64 {
    capacity(gains.as_slice(), weights.as_slice(), rho)
}

#[inline]
fn capacity(gains: &[f64], mu: &[f64], rho: f64) -> f64 {
    let k = mu.len() as f64;
    k * mu
        .iter()
        .zip(gains)
        .map(|(&m, &g)| m * (m * rho * g).ln_1p())
        .sum::<f64>()
}

/// Outage probability at a single operating point.
pub fn outage_probability(
    scenario: &Scenario,
    point: OperatingPoint,
    plan: MonteCarloPlan,
) -> Result<OutageEstimate> {
    Ok(outage_sweep(scenario, &[point], plan)?.remove(0))
}

/// Outage probabilities at several operating points from one set of
/// channel draws (common random numbers across points).
pub fn outage_sweep(
    scenario: &Scenario,
    points: &[OperatingPoint],
    plan: MonteCarloPlan,
) -> Result<Vec<OutageEstimate>> {
    let kf = scenario.k() as f64;
    for p in points {
        if !(0.0..=kf).contains(&p.r) {
            return Err(Error::OutOfRange { r: p.r, max: kf });
        }
        if !(p.rho > 0.0 && p.rho.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "SNR {} dB is not usable",
                p.rho_db
            )));
        }
    }

    // Capacity depends only on ρ, so evaluate it once per distinct SNR.
    let mut snrs: Vec<f64> = Vec::new();
    let snr_index: Vec<usize> = points
        .iter()
        .map(|p| match snrs.iter().position(|&s| s == p.rho) {
            Some(i) => i,
            None => {
                snrs.push(p.rho);
                snrs.len() - 1
            }
        })
        .collect();
    let targets: Vec<f64> = points.iter().map(OperatingPoint::target_rate).collect();
    let mu = scenario.weights().as_slice();
    let base = GainSampler::new(scenario);

    let shards = plan.run(|_, samples, rng| {
        let mut sampler = base.clone();
        let mut gains = vec![0.0; sampler.users()];
        let mut caps = vec![0.0; snrs.len()];
        let mut outages = vec![0u64; points.len()];
        let mut discarded = 0u64;
        for _ in 0..samples {
            if sampler.sample_into(rng, &mut gains).is_err() {
                discarded += 1;
                continue;
            }
            for (c, &rho) in caps.iter_mut().zip(&snrs) {
                *c = capacity(&gains, mu, rho);
            }
            for ((count, &target), &si) in outages.iter_mut().zip(&targets).zip(&snr_index) {
                if caps[si] <= target {
                    *count += 1;
                }
            }
        }
        (outages, discarded)
    })?;

    let discarded: u64 = shards.iter().map(|(_, d)| d).sum();
    if discarded > 0 {
        log::warn!("discarded {discarded} rank-deficient channel draws");
    }
    let used = plan.n_samples - discarded;
    Ok(points
        .iter()
        .enumerate()
        .map(|(j, p)| {
            let outages = shards.iter().map(|(o, _)| o[j]).sum();
            OutageEstimate::from_counts(p.r, p.rho_db, used, outages, discarded)
        })
        .collect())
}

/// Closed-form outage probability of a single 1x1 Rayleigh link:
/// `P(|h|² ≤ (ρ^r - 1)/ρ) = 1 - exp(-(ρ^r - 1)/ρ)`.
pub fn scalar_rayleigh_outage(rho: f64, r: f64) -> f64 {
    -(-(rho.powf(r) - 1.0) / rho).exp_m1()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_weights;

    fn scalar() -> Scenario {
        Scenario::parallel_identical(1, validate_weights(&[1.0]).unwrap()).unwrap()
    }

    #[test]
    fn capacity_examples() {
        let w1 = validate_weights(&[1.0]).unwrap();
        let e = std::f64::consts::E;
        let c = weighted_capacity(&EffectiveGains(vec![1.0]), &w1, e - 1.0);
        assert!((c - 1.0).abs() < 1e-15);

        let w2 = validate_weights(&[0.5, 0.5]).unwrap();
        assert_eq!(
            weighted_capacity(&EffectiveGains(vec![0.0, 0.0]), &w2, 100.0),
            0.0
        );

        let c = weighted_capacity(&EffectiveGains(vec![1.0, 1.0]), &w2, 10.0);
        // independent scalar evaluation: 2 · (½ ln 6 + ½ ln 6)
        let expected = 2.0 * 6f64.ln();
        assert!((c - expected).abs() < 1e-14);
    }

    #[test]
    fn scalar_oracle_value() {
        assert!((scalar_rayleigh_outage(10.0, 0.5) - 0.194_448_196_3).abs() < 1e-9);
    }

    #[test]
    fn shard_split_covers_all_samples() {
        let plan = MonteCarloPlan::new(10, 0, 3);
        let per: Vec<u64> = (0..3).map(|s| plan.shard_samples(s)).collect();
        assert_eq!(per, vec![4, 3, 3]);
        let plan = MonteCarloPlan::new(2, 0, 5);
        assert_eq!((0..5).map(|s| plan.shard_samples(s)).sum::<u64>(), 2);
    }

    #[test]
    fn rejects_bad_inputs() {
        let s = scalar();
        let p = OperatingPoint::new(1.5, 10.0);
        assert!(matches!(
            outage_probability(&s, p, MonteCarloPlan::new(10, 0, 1)),
            Err(Error::OutOfRange { .. })
        ));
        let p = OperatingPoint::new(0.5, 10.0);
        assert!(outage_probability(&s, p, MonteCarloPlan::new(0, 0, 1)).is_err());
        assert!(outage_probability(&s, p, MonteCarloPlan::new(10, 0, 0)).is_err());
    }

    #[test]
    fn zero_rate_never_outage() {
        let w = validate_weights(&[0.5, 0.5]).unwrap();
        for s in [
            scalar(),
            Scenario::bc_zf(3, w.clone()).unwrap(),
            Scenario::bc_dpc(3, w.clone()).unwrap(),
        ] {
            let e = outage_probability(
                &s,
                OperatingPoint::new(0.0, 40.0),
                MonteCarloPlan::new(100_000, 4, 2),
            )
            .unwrap();
            assert_eq!(e.n_outages, 0);
            assert_eq!(e.p_hat, 0.0);
            assert!(e.ci_high < 1e-4);
        }
    }

    #[test]
    fn scalar_matches_closed_form() {
        let e = outage_probability(
            &scalar(),
            OperatingPoint::new(0.5, 10.0),
            MonteCarloPlan::new(200_000, 42, 4),
        )
        .unwrap();
        assert!(e.covers(scalar_rayleigh_outage(10.0, 0.5)), "{e:?}");
    }

    #[test]
    fn deterministic_for_seed_and_shards() {
        let pts = [OperatingPoint::new(0.5, 10.0), OperatingPoint::new(0.25, 20.0)];
        let plan = MonteCarloPlan::new(50_000, 9, 3);
        let a = outage_sweep(&scalar(), &pts, plan).unwrap();
        let b = outage_sweep(&scalar(), &pts, plan).unwrap();
        assert_eq!(a, b);
        let c = outage_sweep(&scalar(), &pts, MonteCarloPlan::new(50_000, 10, 3)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn interval_contains_estimate() {
        for (x, n) in [
            (0, 100),
            (1, 100),
            (19, 1000),
            (20, 1000),
            (500, 1000),
            (100, 100),
        ] {
            let (lo, hi) = confidence_interval(x, n);
            let p = x as f64 / n as f64;
            assert!(
                lo <= p && p <= hi && (0.0..=1.0).contains(&lo) && hi <= 1.0,
                "{x}/{n}"
            );
        }
    }

    #[test]
    fn clopper_pearson_reference_values() {
        // scipy.stats.beta.ppf(0.025, 3, 98), beta.ppf(0.975, 4, 97)
        let (lo, hi) = confidence_interval(3, 100);
        assert!((lo - 0.006_229_971_538).abs() < 1e-10, "{lo}");
        assert!((hi - 0.085_176_052_974).abs() < 1e-10, "{hi}");
        // zero events: 1 - 0.025^(1/n)
        let (lo, hi) = confidence_interval(0, 1000);
        assert_eq!(lo, 0.0);
        assert!((hi - (1.0 - 0.025f64.powf(1.0 / 1000.0))).abs() < 1e-8, "{hi}");
    }

    #[test]
    fn clopper_pearson_large_samples() {
        let n = 1_000_000_000u64;
        let (_, hi) = confidence_interval(0, n);
        let expected = -(0.025f64.ln() / n as f64).exp_m1();
        // beta_reg loses some relative accuracy for shapes this large
        assert!((hi / expected - 1.0).abs() < 1e-6, "{hi} vs {expected}");
        let (lo, hi) = confidence_interval(5, 10_000_000);
        assert!(lo < 5e-7 && 5e-7 < hi);
    }
}
