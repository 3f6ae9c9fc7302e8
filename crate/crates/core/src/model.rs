//! Domain types shared by every layer: weight vectors, antenna profiles,
//! the per-antenna weight ordering and scenario descriptions.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// Accepted deviation of a raw weight vector's sum from 1.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;

/// Relative gap below which two per-antenna weights count as tied.
pub(crate) const TIE_TOLERANCE: f64 = 1e-12;

/// Normalized channel/user weights: strictly positive, summing to 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Weights(Vec<f64>);

impl Weights {
    /// Validates `raw` and renormalizes it so the entries sum to exactly 1.
    pub fn new(raw: Vec<f64>) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::EmptyWeights);
        }
        if let Some((index, &value)) = raw.iter().enumerate().find(|(_, v)| !(**v > 0.0)) {
            return Err(Error::NonPositiveWeight { index, value });
        }
        let sum: f64 = raw.iter().sum();
        if !sum.is_finite() || (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(Error::BadSum { sum });
        }
        Ok(Self(renormalize(raw, sum)))
    }

    /// Uniform weights 1/K.
    pub fn uniform(k: usize) -> Result<Self> {
        Self::new(vec![1.0 / k as f64; k])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Indices sorted by decreasing weight, ties kept in ascending index order.
    pub fn descending_order(&self) -> Vec<usize> {
        stable_descending(&self.0)
    }
}

/// Free-function form of [`Weights::new`].
pub fn validate_weights(raw: &[f64]) -> Result<Weights> {
    Weights::new(raw.to_vec())
}

fn renormalize(mut w: Vec<f64>, sum: f64) -> Vec<f64> {
    if sum == 1.0 {
        return w;
    }
    for v in w.iter_mut() {
        *v /= sum;
    }
    // Close the left-to-right sum exactly on the last entry, which makes
    // renormalization idempotent. `1 - head` is exact whenever head ≥ 1/2;
    // otherwise a few ulp steps finish the job.
    let last = w.len() - 1;
    let head: f64 = w[..last].iter().sum();
    if 1.0 - head > 0.0 {
        w[last] = 1.0 - head;
    }
    for _ in 0..64 {
        let s: f64 = w.iter().sum();
        if s == 1.0 {
            break;
        }
        w[last] = if s < 1.0 {
            w[last].next_up()
        } else {
            w[last].next_down()
        };
    }
    w
}

/// Antenna count of each parallel channel (transmit antennas of each MISO link).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct AntennaProfile(Vec<u32>);

impl AntennaProfile {
    pub fn new(n: Vec<u32>) -> Result<Self> {
        if n.is_empty() {
            return Err(Error::EmptyProfile);
        }
        if let Some(index) = n.iter().position(|&v| v == 0) {
            return Err(Error::ZeroAntennas { index });
        }
        Ok(Self(n))
    }

    /// `k` identical channels with `nt` antennas each.
    pub fn uniform(k: usize, nt: u32) -> Result<Self> {
        Self::new(vec![nt; k])
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Maximal diversity Σ n_i.
    pub fn total_diversity(&self) -> u32 {
        self.0.iter().sum()
    }
}

/// Permutation sorting channels by per-antenna weight μ_i / n_i, largest first.
///
/// `perm()[j]` is the original index of the channel placed at position `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelOrdering {
    perm: Vec<usize>,
}

impl ChannelOrdering {
    pub fn identity(k: usize) -> Self {
        Self {
            perm: (0..k).collect(),
        }
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    /// Reorders `values` so that position `j` holds `values[perm[j]]`.
    pub fn apply<T: Copy>(&self, values: &[T]) -> Vec<T> {
        self.perm.iter().map(|&i| values[i]).collect()
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.perm.len()];
        for (pos, &orig) in self.perm.iter().enumerate() {
            inv[orig] = pos;
        }
        Self { perm: inv }
    }

    /// Permutation equal to applying `self` first and then `next`.
    pub fn then(&self, next: &Self) -> Self {
        Self {
            perm: next.perm.iter().map(|&j| self.perm[j]).collect(),
        }
    }
}

/// Orders channels by μ_i / n_i descending, breaking ties by ascending index.
pub fn ordering(weights: &Weights, profile: &AntennaProfile) -> Result<ChannelOrdering> {
    if weights.len() != profile.len() {
        return Err(Error::DimensionMismatch {
            expected: weights.len(),
            found: profile.len(),
        });
    }
    let per_antenna: Vec<f64> = weights
        .as_slice()
        .iter()
        .zip(profile.as_slice())
        .map(|(&mu, &n)| mu / f64::from(n))
        .collect();
    Ok(ChannelOrdering {
        perm: stable_descending(&per_antenna),
    })
}

fn strictly_greater(a: f64, b: f64) -> bool {
    a - b > TIE_TOLERANCE * a.abs().max(b.abs())
}

// Insertion sort: K is small and the tie-tolerant comparison is not a total
// order, which the std sorts may reject.
fn stable_descending(values: &[f64]) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..values.len()).collect();
    for i in 1..perm.len() {
        let mut j = i;
        while j > 0 && strictly_greater(values[perm[j]], values[perm[j - 1]]) {
            perm.swap(j, j - 1);
            j -= 1;
        }
    }
    perm
}

/// The four channel families with a closed-form tradeoff.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ScenarioKind {
    #[serde(rename = "parallel-identical")]
    ParallelIdentical,
    #[serde(rename = "parallel-different")]
    ParallelDifferent,
    #[serde(rename = "bc-zf")]
    BcZf,
    #[serde(rename = "bc-dpc")]
    BcDpc,
}

impl ScenarioKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioKind::ParallelIdentical => "parallel-identical",
            ScenarioKind::ParallelDifferent => "parallel-different",
            ScenarioKind::BcZf => "bc-zf",
            ScenarioKind::BcDpc => "bc-dpc",
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScenarioKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim() {
            "parallel-identical" => Ok(ScenarioKind::ParallelIdentical),
            "parallel-different" => Ok(ScenarioKind::ParallelDifferent),
            "bc-zf" => Ok(ScenarioKind::BcZf),
            "bc-dpc" => Ok(ScenarioKind::BcDpc),
            other => Err(format!(
                "unknown scenario '{other}' (expected parallel-identical, parallel-different, bc-zf or bc-dpc)"
            )),
        }
    }
}

/// Antenna configuration of a scenario.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Topology {
    /// K parallel `nt x 1` channels.
    ParallelIdentical { nt: u32 },
    /// K parallel `n_i x 1` channels.
    ParallelDifferent { profile: AntennaProfile },
    /// M-antenna broadcast channel with zero-forcing precoding.
    BcZf { m: u32 },
    /// M-antenna broadcast channel with dirty-paper coding.
    BcDpc { m: u32 },
}

/// A channel family together with its weights; K is the number of weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    topology: Topology,
    weights: Weights,
    pub notes: String,
}

impl Scenario {
    pub fn new(topology: Topology, weights: Weights) -> Result<Self> {
        let k = weights.len();
        match &topology {
            Topology::ParallelIdentical { nt } => {
                if *nt == 0 {
                    return Err(Error::ZeroAntennas { index: 0 });
                }
            }
            Topology::ParallelDifferent { profile } => {
                if profile.len() != k {
                    return Err(Error::DimensionMismatch {
                        expected: k,
                        found: profile.len(),
                    });
                }
            }
            Topology::BcZf { m } | Topology::BcDpc { m } => {
                if k > *m as usize {
                    return Err(Error::TooManyUsers {
                        users: k,
                        antennas: *m,
                    });
                }
            }
        }
        Ok(Self {
            topology,
            weights,
            notes: String::new(),
        })
    }

    pub fn parallel_identical(nt: u32, weights: Weights) -> Result<Self> {
        Self::new(Topology::ParallelIdentical { nt }, weights)
    }

    pub fn parallel_different(profile: AntennaProfile, weights: Weights) -> Result<Self> {
        Self::new(Topology::ParallelDifferent { profile }, weights)
    }

    pub fn bc_zf(m: u32, weights: Weights) -> Result<Self> {
        Self::new(Topology::BcZf { m }, weights)
    }

    pub fn bc_dpc(m: u32, weights: Weights) -> Result<Self> {
        Self::new(Topology::BcDpc { m }, weights)
    }

    pub fn with_notes(mut self, notes: impl Into<String>) -> Self {
        self.notes = notes.into();
        self
    }

    pub fn kind(&self) -> ScenarioKind {
        match self.topology {
            Topology::ParallelIdentical { .. } => ScenarioKind::ParallelIdentical,
            Topology::ParallelDifferent { .. } => ScenarioKind::ParallelDifferent,
            Topology::BcZf { .. } => ScenarioKind::BcZf,
            Topology::BcDpc { .. } => ScenarioKind::BcDpc,
        }
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    /// Number of channels / users.
    pub fn k(&self) -> usize {
        self.weights.len()
    }

    /// Transmit antenna count for broadcast scenarios.
    pub fn transmit_antennas(&self) -> Option<u32> {
        match self.topology {
            Topology::BcZf { m } | Topology::BcDpc { m } => Some(m),
            _ => None,
        }
    }

    /// Equivalent parallel-channel profile, indexed by original user.
    ///
    /// ZF gives every user M-K+1 degrees of freedom. DPC encodes users in
    /// decreasing-weight order and the j-th encoded user sees M-j+1.
    pub fn equivalent_profile(&self) -> AntennaProfile {
        let k = self.k();
        let n = match &self.topology {
            Topology::ParallelIdentical { nt } => vec![*nt; k],
            Topology::ParallelDifferent { profile } => profile.as_slice().to_vec(),
            Topology::BcZf { m } => vec![m - k as u32 + 1; k],
            Topology::BcDpc { m } => {
                let mut n = vec![0; k];
                for (j, &user) in self.weights.descending_order().iter().enumerate() {
                    n[user] = m - j as u32;
                }
                n
            }
        };
        AntennaProfile(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn renormalization_sums_to_one_and_is_idempotent() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100_000 {
            let k = rng.random_range(1..=12);
            let raw: Vec<f64> = (0..k).map(|_| rng.random_range(1e-6..1.0)).collect();
            let sum: f64 = raw.iter().sum();
            let w = Weights::new(raw.iter().map(|v| v / sum).collect()).unwrap();
            assert_eq!(w.as_slice().iter().sum::<f64>(), 1.0);
            assert!(w.as_slice().iter().all(|&v| v > 0.0));
            assert_eq!(validate_weights(w.as_slice()).unwrap(), w);
        }
    }

    #[test]
    fn accepts_uniform_and_rational_weights() {
        assert_eq!(validate_weights(&[0.5, 0.5]).unwrap().as_slice(), &[0.5, 0.5]);
        assert_eq!(validate_weights(&[0.6, 0.4]).unwrap().as_slice(), &[0.6, 0.4]);
    }

    #[test]
    fn rejects_bad_sum() {
        assert!(matches!(validate_weights(&[0.7, 0.4]), Err(Error::BadSum { .. })));
    }

    #[test]
    fn rejects_non_positive_and_empty() {
        assert_eq!(
            validate_weights(&[1.0, 0.0]),
            Err(Error::NonPositiveWeight { index: 1, value: 0.0 })
        );
        assert!(matches!(
            validate_weights(&[1.5, -0.5]),
            Err(Error::NonPositiveWeight { .. })
        ));
        assert!(matches!(
            validate_weights(&[f64::NAN, 1.0]),
            Err(Error::NonPositiveWeight { .. })
        ));
        assert_eq!(validate_weights(&[]), Err(Error::EmptyWeights));
    }

    #[test]
    fn renormalizes_within_tolerance() {
        let w = validate_weights(&[0.5 + 4e-10, 0.5]).unwrap();
        assert_eq!(w.as_slice().iter().sum::<f64>(), 1.0);
        assert_eq!(Weights::new(w.as_slice().to_vec()).unwrap(), w);
    }

    #[test]
    fn ordering_examples() {
        let w = validate_weights(&[0.5, 0.5]).unwrap();
        let n = AntennaProfile::new(vec![2, 1]).unwrap();
        assert_eq!(ordering(&w, &n).unwrap().perm(), &[1, 0]);

        let w = validate_weights(&[2.0 / 3.0, 1.0 / 3.0]).unwrap();
        assert_eq!(ordering(&w, &n).unwrap().perm(), &[0, 1]);

        let w = validate_weights(&[1.0]).unwrap();
        let n = AntennaProfile::new(vec![3]).unwrap();
        assert_eq!(ordering(&w, &n).unwrap().perm(), &[0]);
    }

    #[test]
    fn ordering_treats_rounding_noise_as_tie() {
        // 0.6/3 and 0.4/2 differ only in the last ulp.
        let w = validate_weights(&[0.6, 0.4]).unwrap();
        let n = AntennaProfile::new(vec![3, 2]).unwrap();
        assert_eq!(ordering(&w, &n).unwrap().perm(), &[0, 1]);
    }

    #[test]
    fn ordering_dimension_mismatch() {
        let w = validate_weights(&[0.5, 0.5]).unwrap();
        let n = AntennaProfile::new(vec![1, 2, 3]).unwrap();
        assert_eq!(
            ordering(&w, &n),
            Err(Error::DimensionMismatch {
                expected: 2,
                found: 3
            })
        );
    }

    #[test]
    fn inverse_and_then() {
        let w = validate_weights(&[0.1, 0.2, 0.3, 0.4]).unwrap();
        let n = AntennaProfile::new(vec![1, 1, 1, 1]).unwrap();
        let t = ordering(&w, &n).unwrap();
        assert_eq!(t.perm(), &[3, 2, 1, 0]);
        assert_eq!(t.then(&t.inverse()), ChannelOrdering::identity(4));
        assert_eq!(t.inverse().then(&t), ChannelOrdering::identity(4));
    }

    #[test]
    fn profile_validation() {
        assert_eq!(AntennaProfile::new(vec![]), Err(Error::EmptyProfile));
        assert_eq!(
            AntennaProfile::new(vec![2, 0]),
            Err(Error::ZeroAntennas { index: 1 })
        );
        assert_eq!(AntennaProfile::new(vec![3, 2, 1]).unwrap().total_diversity(), 6);
    }

    #[test]
    fn broadcast_requires_enough_antennas() {
        let w = Weights::uniform(3).unwrap();
        assert_eq!(
            Scenario::bc_zf(2, w.clone()),
            Err(Error::TooManyUsers {
                users: 3,
                antennas: 2
            })
        );
        assert!(Scenario::bc_dpc(3, w).is_ok());
    }

    #[test]
    fn equivalent_profiles() {
        let w = validate_weights(&[0.4, 0.6]).unwrap();
        let zf = Scenario::bc_zf(3, w.clone()).unwrap();
        assert_eq!(zf.equivalent_profile().as_slice(), &[2, 2]);
        // user 1 carries the larger weight so it is encoded first
        let dpc = Scenario::bc_dpc(3, w).unwrap();
        assert_eq!(dpc.equivalent_profile().as_slice(), &[2, 3]);
    }

    #[test]
    fn scenario_kind_round_trip() {
        for kind in [
            ScenarioKind::ParallelIdentical,
            ScenarioKind::ParallelDifferent,
            ScenarioKind::BcZf,
            ScenarioKind::BcDpc,
        ] {
            assert_eq!(kind.as_str().parse::<ScenarioKind>().unwrap(), kind);
        }
        assert!("mimo".parse::<ScenarioKind>().is_err());
    }
}
