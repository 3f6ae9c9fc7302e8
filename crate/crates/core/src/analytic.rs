//! Closed-form tradeoff curves for weighted parallel channels and for the
//! ZF/DPC broadcast channel, the greedy solution of the outage-exponent
//! linear program, and the weight vector that maximizes the curve.
//!
//! For K parallel channels with antenna counts `n` and weights `μ`, channels
//! are ranked by per-antenna weight `μ_i / n_i` (largest first). With `μ̂`,
//! `n̂` the ranked vectors, the curve connects
//!
//! ```text
//! r(i) = K (1 - Σ_{j ≤ K-i} μ̂_j),   d(i) = Σ_{j ≤ K-i} n̂_j,   i = 0..K
//! ```
//!
//! Broadcast channels reduce to parallel channels: ZF gives K identical
//! channels with `M - K + 1` antennas, DPC (encoding in decreasing-weight
//! order) gives the j-th encoded user `M - j + 1`.

use crate::curve::{Corner, DmtCurve};
use crate::error::{Error, Result};
use crate::model::{ordering, AntennaProfile, Scenario, Topology, Weights};

/// Per-channel outage exponents achieving the minimal diversity at some `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentSolution {
    /// α_k in `[0, 1]`, in the caller's channel indexing.
    pub alpha: Vec<f64>,
    /// Σ n_k α_k.
    pub d: f64,
}

impl ExponentSolution {
    /// Checks box bounds and the outage constraint Σ μ_k α_k ≥ 1 - r/K.
    pub fn is_feasible(&self, weights: &Weights, r: f64) -> bool {
        let k = weights.len() as f64;
        let lhs: f64 = weights
            .as_slice()
            .iter()
            .zip(&self.alpha)
            .map(|(m, a)| m * a)
            .sum();
        self.alpha.iter().all(|&a| (0.0..=1.0).contains(&a)) && lhs >= 1.0 - r / k - 1e-12
    }
}

fn corners_from_ranked(mu_hat: &[f64], n_hat: &[u32]) -> Result<DmtCurve> {
    let k = mu_hat.len();
    let kf = k as f64;
    let mut corners = Vec::with_capacity(k + 1);
    corners.push(Corner {
        r: 0.0,
        d: n_hat.iter().map(|&n| f64::from(n)).sum(),
    });
    // 1 - Σ_{j ≤ K-i} μ̂_j is evaluated as the tail sum Σ_{j > K-i} μ̂_j.
    let mut tail = 0.0;
    for i in 1..k {
        tail += mu_hat[k - i];
        let d = n_hat[..k - i].iter().map(|&n| f64::from(n)).sum();
        corners.push(Corner { r: kf * tail, d });
    }
    corners.push(Corner { r: kf, d: 0.0 });
    DmtCurve::from_corners(corners)
}

/// Tradeoff of K identical `nt x 1` channels.
pub fn dmt_identical(k: usize, nt: u32, weights: &Weights) -> Result<DmtCurve> {
    if weights.len() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            found: weights.len(),
        });
    }
    if nt == 0 {
        return Err(Error::ZeroAntennas { index: 0 });
    }
    let mu = weights.as_slice();
    let mu_hat: Vec<f64> = weights.descending_order().iter().map(|&i| mu[i]).collect();
    corners_from_ranked(&mu_hat, &vec![nt; k])
}

/// Tradeoff of K parallel channels with per-channel antenna counts.
pub fn dmt_different(profile: &AntennaProfile, weights: &Weights) -> Result<DmtCurve> {
    let t = ordering(weights, profile)?;
    corners_from_ranked(&t.apply(weights.as_slice()), &t.apply(profile.as_slice()))
}

fn check_broadcast(m: u32, k: usize, weights: &Weights) -> Result<()> {
    if weights.len() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            found: weights.len(),
        });
    }
    if k > m as usize {
        return Err(Error::TooManyUsers {
            users: k,
            antennas: m,
        });
    }
    Ok(())
}

/// Broadcast channel with M transmit antennas, K users, zero forcing.
pub fn dmt_bc_zf(m: u32, k: usize, weights: &Weights) -> Result<DmtCurve> {
    check_broadcast(m, k, weights)?;
    dmt_identical(k, m - k as u32 + 1, weights)
}

/// Broadcast channel with M transmit antennas, K users, dirty-paper coding.
pub fn dmt_bc_dpc(m: u32, k: usize, weights: &Weights) -> Result<DmtCurve> {
    check_broadcast(m, k, weights)?;
    let scenario = Scenario::bc_dpc(m, weights.clone())?;
    dmt_different(&scenario.equivalent_profile(), weights)
}

impl Scenario {
    /// Closed-form tradeoff curve of this scenario.
    pub fn dmt_curve(&self) -> Result<DmtCurve> {
        let w = self.weights();
        match self.topology() {
            Topology::ParallelIdentical { nt } => dmt_identical(self.k(), *nt, w),
            Topology::ParallelDifferent { profile } => dmt_different(profile, w),
            Topology::BcZf { m } => dmt_bc_zf(*m, self.k(), w),
            Topology::BcDpc { m } => dmt_bc_dpc(*m, self.k(), w),
        }
    }
}

/// Greedy solution of `min Σ n_k α_k` s.t. `Σ μ_k α_k ≥ 1 - r/K`, `0 ≤ α ≤ 1`.
///
/// In the scaled variables `x = n α` the constraint coefficients are the
/// per-antenna weights, so channels are filled to capacity in decreasing
/// `μ_i / n_i` order until the constraint is met.
pub fn lp_greedy(profile: &AntennaProfile, weights: &Weights, r: f64) -> Result<ExponentSolution> {
    let k = weights.len();
    let kf = k as f64;
    if !(0.0..=kf).contains(&r) {
        return Err(Error::OutOfRange { r, max: kf });
    }
    let t = ordering(weights, profile)?;
    let n = profile.as_slice();
    if r == 0.0 {
        return Ok(ExponentSolution {
            alpha: vec![1.0; k],
            d: f64::from(profile.total_diversity()),
        });
    }

    let mu = weights.as_slice();
    let bound = 1.0 - r / kf;
    let mut alpha = vec![0.0; k];
    let mut d = 0.0;
    // Σ_{j<i} μ̄̂_j n̂_j, i.e. the weight of all higher-ranked channels
    let mut covered = 0.0;
    for &i in t.perm() {
        let cap = f64::from(n[i]);
        let per_antenna = mu[i] / cap;
        let x = ((bound - covered).max(0.0) / per_antenna).min(cap);
        alpha[i] = x / cap;
        d += x;
        covered += mu[i];
    }
    Ok(ExponentSolution { alpha, d })
}

/// Weights μ*_i = n_i / Σ n_j, whose curve is the straight line d(0)(1 - r/K).
pub fn optimal_weights(profile: &AntennaProfile) -> Weights {
    let total = f64::from(profile.total_diversity());
    let raw = profile.as_slice().iter().map(|&n| f64::from(n) / total).collect();
    Weights::new(raw).expect("n_i / Σn is a valid weight vector")
}
