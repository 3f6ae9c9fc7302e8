//! Checks simulated effective gains against their Gamma(k, 1) law.

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Gamma};

use crate::error::{Error, Result};
use crate::model::Scenario;
use crate::sim::gains::GainSampler;
use crate::sim::outage::MonteCarloPlan;

/// Relative tolerance on the sample mean.
pub const MEAN_TOLERANCE: f64 = 0.01;
/// Relative tolerance on the sample variance.
pub const VARIANCE_TOLERANCE: f64 = 0.03;
/// Asymptotic Kolmogorov-Smirnov coefficient at the 1% level.
pub const KS_COEFF_1PCT: f64 = 1.627_6;

/// Comparison of one user's empirical gains with Gamma(shape, 1).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GainReport {
    pub user: usize,
    pub shape: u32,
    pub n_samples: u64,
    pub n_discarded: u64,
    pub mean: f64,
    pub variance: f64,
    pub mean_rel_err: f64,
    pub var_rel_err: f64,
    pub ks_statistic: f64,
    pub ks_critical: f64,
    pub pass: bool,
}

/// Two-sided KS distance between `samples` and a continuous `cdf`.
/// Sorts `samples` in place.
pub fn ks_statistic(samples: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

fn draw_gains(scenario: &Scenario, plan: MonteCarloPlan) -> Result<(Vec<Vec<f64>>, u64)> {
    let base = GainSampler::new(scenario);
    let k = scenario.k();
    let shards = plan.run(|_, samples, rng| {
        let mut sampler = base.clone();
        let mut per_user = vec![Vec::with_capacity(samples as usize); k];
        let mut buf = vec![0.0; k];
        let mut discarded = 0u64;
        for _ in 0..samples {
            if sampler.sample_into(rng, &mut buf).is_err() {
                discarded += 1;
                continue;
            }
            for (col, &g) in per_user.iter_mut().zip(&buf) {
                col.push(g);
            }
        }
        (per_user, discarded)
    })?;
    let mut columns = vec![Vec::with_capacity(plan.n_samples as usize); k];
    let mut discarded = 0;
    for (per_user, d) in shards {
        discarded += d;
        for (col, part) in columns.iter_mut().zip(per_user) {
            col.extend(part);
        }
    }
    Ok((columns, discarded))
}

fn report(user: usize, shape: u32, mut samples: Vec<f64>, n_discarded: u64) -> GainReport {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let variance = samples.iter().map(|g| (g - mean).powi(2)).sum::<f64>() / (n - 1.0);
    // Gamma(k, 1): mean k, variance k
    let k = f64::from(shape);
    let mean_rel_err = (mean - k).abs() / k;
    let var_rel_err = (variance - k).abs() / k;
    let gamma = Gamma::new(k, 1.0).expect("positive shape");
    let ks = ks_statistic(&mut samples, |x| gamma.cdf(x));
    let ks_critical = KS_COEFF_1PCT / n.sqrt();
    GainReport {
        user,
        shape,
        n_samples: samples.len() as u64,
        n_discarded,
        mean,
        variance,
        mean_rel_err,
        var_rel_err,
        ks_statistic: ks,
        ks_critical,
        pass: mean_rel_err <= MEAN_TOLERANCE && var_rel_err <= VARIANCE_TOLERANCE && ks < ks_critical,
    }
}

/// Reports for every user of `scenario`, all from one set of draws.
///
/// User i's gain should follow Gamma(n_i, 1), with n_i taken from the
/// scenario's equivalent parallel profile.
pub fn validate_gains(scenario: &Scenario, plan: MonteCarloPlan) -> Result<Vec<GainReport>> {
    let shapes = scenario.equivalent_profile();
    let (columns, discarded) = draw_gains(scenario, plan)?;
    if columns.iter().any(|c| c.len() < 2) {
        return Err(Error::InvalidParameter("need at least two usable draws".into()));
    }
    Ok(columns
        .into_iter()
        .enumerate()
        .map(|(user, col)| report(user, shapes.as_slice()[user], col, discarded))
        .collect())
}

/// Report for a single user index.
pub fn validate_gain_distribution(
    scenario: &Scenario,
    user: usize,
    plan: MonteCarloPlan,
) -> Result<GainReport> {
    if user >= scenario.k() {
        return Err(Error::DimensionMismatch {
            expected: scenario.k(),
            found: user + 1,
        });
    }
    Ok(validate_gains(scenario, plan)?.swap_remove(user))
}
