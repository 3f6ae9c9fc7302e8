//! Effective per-user gains of the precoded broadcast channel.
//!
//! ZF: user i keeps the part of h_i orthogonal to every other user's
//! channel. DPC: user i only has to avoid the users encoded before it.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::model::{Scenario, Topology};
use crate::sim::channel::{sample_cn, ChannelMatrix};

/// Relative residual norm below which a row counts as linearly dependent.
const RANK_TOL: f64 = 1e-10;

/// Per-user effective gains γ_i (squared norms), indexed by original user.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveGains(pub Vec<f64>);

impl EffectiveGains {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

fn inner(q: &[Complex64], v: &[Complex64]) -> Complex64 {
    q.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(Complex64::norm_sqr).sum()
}

/// Removes from `v` its components along the orthonormal `basis`.
///
/// Two Gram-Schmidt passes keep the residual orthogonal to working precision.
pub fn project_out(v: &mut [Complex64], basis: &[Vec<Complex64>]) {
    for _ in 0..2 {
        for q in basis {
            let c = inner(q, v);
            for (x, qi) in v.iter_mut().zip(q) {
                *x -= c * qi;
            }
        }
    }
}

/// Orthonormal basis of the rows `rows` of `h`; `user` labels the error.
fn orthonormal_basis(h: &ChannelMatrix, rows: &[usize], user: usize) -> Result<Vec<Vec<Complex64>>> {
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(rows.len());
    for &j in rows {
        let mut v = h.row(j).to_vec();
        let before = norm_sqr(&v);
        project_out(&mut v, &basis);
        let after = norm_sqr(&v);
        if !(after > RANK_TOL * RANK_TOL * before) {
            log::debug!("rank deficient interference set for user {user}");
            return Err(Error::RankDeficient { user });
        }
        let scale = 1.0 / after.sqrt();
        v.iter_mut().for_each(|x| *x *= scale);
        basis.push(v);
    }
    Ok(basis)
}

fn check_dims(h: &ChannelMatrix) -> Result<()> {
    if h.users() > h.antennas() {
        return Err(Error::TooManyUsers {
            users: h.users(),
            antennas: h.antennas() as u32,
        });
    }
    Ok(())
}

/// ZF projections g_i: h_i projected onto the null space of all other rows.
pub fn zf_projections(h: &ChannelMatrix) -> Result<Vec<Vec<Complex64>>> {
    check_dims(h)?;
    let k = h.users();
    (0..k)
        .map(|i| {
            let others: Vec<usize> = (0..k).filter(|&j| j != i).collect();
            let basis = orthonormal_basis(h, &others, i)?;
            let mut g = h.row(i).to_vec();
            project_out(&mut g, &basis);
            Ok(g)
        })
        .collect()
}

/// DPC projections f_i: h_i projected onto the null space of the rows
/// encoded before it in `encode_order`. Returned in original user indexing.
pub fn dpc_projections(h: &ChannelMatrix, encode_order: &[usize]) -> Result<Vec<Vec<Complex64>>> {
    check_dims(h)?;
    let k = h.users();
    if encode_order.len() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            found: encode_order.len(),
        });
    }
    let mut seen = vec![false; k];
    for &u in encode_order {
        if u >= k || std::mem::replace(&mut seen[u], true) {
            return Err(Error::InvalidParameter(format!(
                "{encode_order:?} is not a permutation"
            )));
        }
    }
    let mut out = vec![Vec::new(); k];
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(k);
    for &user in encode_order {
        let mut f = h.row(user).to_vec();
        let before = norm_sqr(&f);
        project_out(&mut f, &basis);
        let after = norm_sqr(&f);
        out[user] = f.clone();
        // the residual doubles as the next basis vector
        if basis.len() + 1 < k {
            if !(after > RANK_TOL * RANK_TOL * before) {
                return Err(Error::RankDeficient { user });
            }
            let scale = 1.0 / after.sqrt();
            basis.push(f.into_iter().map(|x| x * scale).collect());
        }
    }
    Ok(out)
}

/// ZF gains ‖g_i‖².
pub fn zf_gains(h: &ChannelMatrix) -> Result<EffectiveGains> {
    Ok(EffectiveGains(
        zf_projections(h)?.iter().map(|g| norm_sqr(g)).collect(),
    ))
}

/// DPC gains ‖f_i‖² under `encode_order` (first entry is encoded first).
pub fn dpc_gains(h: &ChannelMatrix, encode_order: &[usize]) -> Result<EffectiveGains> {
    Ok(EffectiveGains(
        dpc_projections(h, encode_order)?
            .iter()
            .map(|f| norm_sqr(f))
            .collect(),
    ))
}

/// Draws effective gains for a scenario, one realization at a time.
#[derive(Debug, Clone)]
pub struct GainSampler {
    mode: Mode,
    k: usize,
}

#[derive(Debug, Clone)]
enum Mode {
    /// Independent MISO links with the given antenna counts.
    Parallel(Vec<u32>),
    Zf(ChannelMatrix),
    Dpc(ChannelMatrix, Vec<usize>),
}

impl GainSampler {
    pub fn new(scenario: &Scenario) -> Self {
        let k = scenario.k();
        let mode = match scenario.topology() {
            Topology::ParallelIdentical { .. } | Topology::ParallelDifferent { .. } => {
                Mode::Parallel(scenario.equivalent_profile().as_slice().to_vec())
            }
            Topology::BcZf { m } => Mode::Zf(ChannelMatrix::zeros(k, *m as usize)),
            Topology::BcDpc { m } => Mode::Dpc(
                ChannelMatrix::zeros(k, *m as usize),
                scenario.weights().descending_order(),
            ),
        };
        Self { mode, k }
    }

    pub fn users(&self) -> usize {
        self.k
    }

    /// Writes one realization of γ into `out` (length K).
    pub fn sample_into<R: Rng + ?Sized>(&mut self, rng: &mut R, out: &mut [f64]) -> Result<()> {
        match &mut self.mode {
            Mode::Parallel(profile) => {
                for (g, &n) in out.iter_mut().zip(profile.iter()) {
                    *g = (0..n).map(|_| sample_cn(rng).norm_sqr()).sum();
                }
            }
            Mode::Zf(h) => {
                h.resample(rng);
                out.copy_from_slice(zf_gains(h)?.as_slice());
            }
            Mode::Dpc(h, order) => {
                h.resample(rng);
                out.copy_from_slice(dpc_gains(h, order)?.as_slice());
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::channel::{sample_channel, shard_rng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_user_keeps_full_norm() {
        let h = sample_channel(3, 1, &mut shard_rng(2, 0));
        let g = zf_gains(&h).unwrap();
        assert!((g.0[0] - h.row_norm_sqr(0)).abs() < 1e-12);
        let f = dpc_gains(&h, &[0]).unwrap();
        assert!((f.0[0] - h.row_norm_sqr(0)).abs() < 1e-12);
    }

    #[test]
    fn orthogonal_rows_are_untouched() {
        let h = ChannelMatrix::from_rows(vec![
            vec![c(1.0, 1.0), c(0.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 2.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(-3.0, 0.0)],
        ])
        .unwrap();
        let norms: Vec<f64> = (0..3).map(|k| h.row_norm_sqr(k)).collect();
        assert_eq!(zf_gains(&h).unwrap().0, norms);
        assert_eq!(dpc_gains(&h, &[2, 0, 1]).unwrap().0, norms);
    }

    #[test]
    fn dpc_first_user_full_norm_and_order_respected() {
        let h = sample_channel(3, 2, &mut shard_rng(9, 1));
        let f = dpc_gains(&h, &[1, 0]).unwrap();
        assert!((f.0[1] - h.row_norm_sqr(1)).abs() < 1e-12);
        assert!(f.0[0] < h.row_norm_sqr(0));
    }

    #[test]
    fn zf_shrinks_and_dpc_last_matches_zf() {
        // The last encoded DPC user sees every other user, like ZF.
        let h = sample_channel(4, 3, &mut shard_rng(3, 0));
        let g = zf_gains(&h).unwrap();
        let f = dpc_gains(&h, &[0, 1, 2]).unwrap();
        for i in 0..3 {
            assert!(g.0[i] <= h.row_norm_sqr(i) + 1e-12);
            assert!(g.0[i] >= 0.0);
        }
        assert!((g.0[2] - f.0[2]).abs() < 1e-10 * g.0[2].max(1.0));
    }

    #[test]
    fn projections_are_orthogonal_to_interference() {
        let mut rng = shard_rng(21, 0);
        for _ in 0..200 {
            let h = sample_channel(4, 3, &mut rng);
            let scale: f64 = (0..3).map(|k| h.row_norm_sqr(k)).sum::<f64>();
            let zf = zf_projections(&h).unwrap();
            for (i, g) in zf.iter().enumerate() {
                for j in (0..3).filter(|&j| j != i) {
                    assert!(inner(h.row(j), g).norm() <= 1e-10 * scale);
                }
            }
            let dpc = dpc_projections(&h, &[2, 0, 1]).unwrap();
            let order = [2, 0, 1];
            for (pos, &user) in order.iter().enumerate() {
                for &prior in &order[..pos] {
                    assert!(inner(h.row(prior), &dpc[user]).norm() <= 1e-10 * scale);
                }
            }
        }
    }

    #[test]
    fn dependent_rows_are_rank_deficient() {
        // A single interferer is never dependent: parallel rows just give zero gain.
        let row = vec![c(1.0, 0.5), c(-0.3, 0.2)];
        let h = ChannelMatrix::from_rows(vec![row.clone(), row.iter().map(|z| z * 2.0).collect()]).unwrap();
        assert!(zf_gains(&h).unwrap().0.iter().all(|&g| g < 1e-20));
        assert!(dpc_gains(&h, &[0, 1]).unwrap().0[1] < 1e-20);

        let z = c(0.0, 0.0);
        let h = ChannelMatrix::from_rows(vec![
            vec![c(1.0, 0.5), c(-0.3, 0.2), z],
            vec![c(-2.0, -1.0), c(0.6, -0.4), z],
            vec![z, c(1.0, 0.0), c(0.0, 1.0)],
        ])
        .unwrap();
        assert_eq!(zf_gains(&h), Err(Error::RankDeficient { user: 2 }));
        assert_eq!(dpc_gains(&h, &[0, 1, 2]), Err(Error::RankDeficient { user: 1 }));
    }

    #[test]
    fn rejects_more_users_than_antennas_and_bad_orders() {
        let h = sample_channel(2, 3, &mut shard_rng(0, 0));
        assert!(matches!(zf_gains(&h), Err(Error::TooManyUsers { .. })));
        let h = sample_channel(3, 2, &mut shard_rng(0, 0));
        assert!(dpc_gains(&h, &[0, 0]).is_err());
        assert!(dpc_gains(&h, &[0]).is_err());
    }
}
