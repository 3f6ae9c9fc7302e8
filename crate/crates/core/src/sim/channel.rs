use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Draws one circularly-symmetric complex Gaussian with E|z|² = 1.
pub fn sample_cn<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Random stream of shard `shard` for a run seeded with `seed`.
pub fn shard_rng(seed: u64, shard: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shard);
    rng
}

/// K x M channel realization; row `k` is the channel vector of user `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrix {
    users: usize,
    antennas: usize,
    entries: Vec<Complex64>,
}

impl ChannelMatrix {
    pub fn zeros(users: usize, antennas: usize) -> Self {
        Self {
            users,
            antennas,
            entries: vec![Complex64::new(0.0, 0.0); users * antennas],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let users = rows.len();
        let antennas = rows.first().map_or(0, Vec::len);
        if users == 0 || antennas == 0 {
            return Err(Error::InvalidParameter("channel matrix must be non-empty".into()));
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != antennas) {
            return Err(Error::DimensionMismatch {
                expected: antennas,
                found: bad.len(),
            });
        }
        Ok(Self {
            users,
            antennas,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn users(&self) -> usize {
        self.users
    }

    pub fn antennas(&self) -> usize {
        self.antennas
    }

    pub fn row(&self, k: usize) -> &[Complex64] {
        &self.entries[k * self.antennas..(k + 1) * self.antennas]
    }

    pub fn row_norm_sqr(&self, k: usize) -> f64 {
        self.row(k).iter().map(Complex64::norm_sqr).sum()
    }

    /// Overwrites every entry with a fresh CN(0, 1) draw.
    pub fn resample<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        for z in &mut self.entries {
            *z = sample_cn(rng);
        }
    }
}

/// K x M matrix with i.i.d. CN(0, 1) entries.
pub fn sample_channel<R: Rng + ?Sized>(m: usize, k: usize, rng: &mut R) -> ChannelMatrix {
    let mut h = ChannelMatrix::zeros(k, m);
    h.resample(rng);
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_stream_same_matrix() {
        let a = sample_channel(4, 2, &mut shard_rng(7, 3));
        let b = sample_channel(4, 2, &mut shard_rng(7, 3));
        assert_eq!(a, b);
        let c = sample_channel(4, 2, &mut shard_rng(7, 4));
        assert_ne!(a, c);
    }

    #[test]
    fn layout() {
        let h = sample_channel(3, 2, &mut shard_rng(1, 0));
        assert_eq!((h.users(), h.antennas()), (2, 3));
        assert_eq!(h.row(1).len(), 3);
    }

    #[test]
    fn ragged_rows_rejected() {
        let z = Complex64::new(1.0, 0.0);
        assert!(ChannelMatrix::from_rows(vec![vec![z, z], vec![z]]).is_err());
        assert!(ChannelMatrix::from_rows(vec![]).is_err());
    }

    #[test]
    fn entry_power_is_unit() {
        let mut rng = shard_rng(11, 0);
        let n = 200_000;
        let mean = (0..n).map(|_| sample_cn(&mut rng).norm_sqr()).sum::<f64>() / n as f64;
        assert!((mean - 1.0).abs() < 0.02, "{mean}");
    }

    #[test]
    fn row_power_matches_antenna_count() {
        // E‖h‖² = M; the std of the estimate is sqrt(M / n) ≈ 0.0017
        let mut rng = shard_rng(5, 0);
        let mut h = ChannelMatrix::zeros(1, 3);
        let n = 1_000_000;
        let mut acc = 0.0;
        for _ in 0..n {
            h.resample(&mut rng);
            acc += h.row_norm_sqr(0);
        }
        assert!((acc / n as f64 - 3.0).abs() < 0.01);
    }
}
