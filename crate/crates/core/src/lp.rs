//! Independent solvers for the outage-exponent linear program
//!
//! ```text
//! minimize   Σ c_i v_i
//! subject to Σ a_i v_i ≥ b,   0 ≤ v_i ≤ u_i
//! ```
//!
//! in either the α-form (`c = n`, `a = μ`, `u = 1`) or the scaled form
//! `x = n α` (`c = 1`, `a = μ / n`, `u = n`). Neither solver sorts by the
//! per-antenna weight, so both stay independent of [`crate::analytic::lp_greedy`].

use crate::analytic::ExponentSolution;
use crate::error::{Error, Result};
use crate::model::{AntennaProfile, Weights};

/// Largest K accepted by [`lp_vertex`].
pub const VERTEX_MAX_K: usize = 16;
/// Largest K accepted by [`lp_grid`].
pub const GRID_MAX_K: usize = 4;
/// Smallest lattice resolution accepted by [`lp_grid`].
pub const GRID_MIN_RESOLUTION: u32 = 50;

const FEAS_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpForm {
    /// Variables α_i ∈ [0, 1].
    Alpha,
    /// Variables x_i = n_i α_i ∈ [0, n_i].
    Scaled,
}

/// One instance of the outage-exponent program.
#[derive(Debug, Clone, PartialEq)]
pub struct LpInstance {
    antennas: Vec<f64>,
    weights: Vec<f64>,
    bound: f64,
    form: LpForm,
}

impl LpInstance {
    /// Instance with diversity costs `antennas`, constraint weights `weights`
    /// and right-hand side `bound = 1 - r/K`.
    pub fn new(antennas: Vec<f64>, weights: Vec<f64>, bound: f64, form: LpForm) -> Result<Self> {
        if antennas.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                expected: antennas.len(),
                found: weights.len(),
            });
        }
        if antennas.is_empty() {
            return Err(Error::InvalidInstance("no variables".into()));
        }
        if antennas
            .iter()
            .chain(&weights)
            .any(|&v| !(v > 0.0 && v.is_finite()))
        {
            return Err(Error::InvalidInstance(
                "coefficients must be positive and finite".into(),
            ));
        }
        if !(0.0..=1.0).contains(&bound) {
            return Err(Error::InvalidInstance(format!("bound {bound} outside [0, 1]")));
        }
        Ok(Self {
            antennas,
            weights,
            bound,
            form,
        })
    }

    /// The program whose optimum is the tradeoff value at multiplexing gain `r`.
    pub fn for_rate(profile: &AntennaProfile, weights: &Weights, r: f64, form: LpForm) -> Result<Self> {
        let kf = weights.len() as f64;
        if !(0.0..=kf).contains(&r) {
            return Err(Error::OutOfRange { r, max: kf });
        }
        Self::new(
            profile.as_slice().iter().map(|&n| f64::from(n)).collect(),
            weights.as_slice().to_vec(),
            1.0 - r / kf,
            form,
        )
    }

    pub fn k(&self) -> usize {
        self.antennas.len()
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn form(&self) -> LpForm {
        self.form
    }

    /// (cost, constraint coefficient, upper bound) of variable `i`.
    fn variable(&self, i: usize) -> (f64, f64, f64) {
        let (n, mu) = (self.antennas[i], self.weights[i]);
        match self.form {
            LpForm::Alpha => (n, mu, 1.0),
            LpForm::Scaled => (1.0, mu / n, n),
        }
    }

    fn to_alpha(&self, values: &[f64]) -> Vec<f64> {
        values
            .iter()
            .enumerate()
            .map(|(i, &v)| (v / self.variable(i).2).clamp(0.0, 1.0))
            .collect()
    }

    /// Σ μ_i α_i - b for an α vector; non-negative when feasible.
    pub fn slack(&self, alpha: &[f64]) -> f64 {
        self.weights.iter().zip(alpha).map(|(m, a)| m * a).sum::<f64>() - self.bound
    }
}

/// Exact optimum by enumerating basic solutions.
///
/// With a single covering constraint, every vertex has all variables at a
/// box bound except at most one, which then makes the constraint tight. All
/// (upper-bound subset, fractional variable) pairs are tried.
pub fn lp_vertex(instance: &LpInstance) -> Result<ExponentSolution> {
    let k = instance.k();
    if k > VERTEX_MAX_K {
        return Err(Error::TooLarge {
            size: k,
            max: VERTEX_MAX_K,
        });
    }
    let vars: Vec<(f64, f64, f64)> = (0..k).map(|i| instance.variable(i)).collect();
    let b = instance.bound;

    // (cost, upper-bound mask, fractional variable and its value)
    type Vertex = (f64, u32, Option<(usize, f64)>);
    let mut best: Option<Vertex> = None;
    let mut consider = |cost: f64, mask: u32, frac: Option<(usize, f64)>| {
        if best.as_ref().is_none_or(|(c, _, _)| cost < *c) {
            best = Some((cost, mask, frac));
        }
    };

    for mask in 0u32..(1u32 << k) {
        let (mut cover, mut cost) = (0.0, 0.0);
        for (i, &(c, a, u)) in vars.iter().enumerate() {
            if mask & (1 << i) != 0 {
                cover += a * u;
                cost += c * u;
            }
        }
        if cover >= b - FEAS_EPS {
            consider(cost, mask, None);
            continue;
        }
        for (f, &(c, a, u)) in vars.iter().enumerate() {
            if mask & (1 << f) != 0 {
                continue;
            }
            let v = (b - cover) / a;
            if (-FEAS_EPS..=u + FEAS_EPS).contains(&v) {
                let v = if (u - v).abs() <= FEAS_EPS {
                    u
                } else {
                    v.clamp(0.0, u)
                };
                consider(cost + c * v, mask, Some((f, v)));
            }
        }
    }

    // all-upper is always feasible since Σ μ_i = 1 ≥ b
    let (d, mask, frac) = best.expect("all-upper vertex is feasible");
    let mut values: Vec<f64> = (0..k)
        .map(|i| if mask & (1 << i) != 0 { vars[i].2 } else { 0.0 })
        .collect();
    if let Some((f, v)) = frac {
        values[f] = v;
    }
    Ok(ExponentSolution {
        alpha: instance.to_alpha(&values),
        d,
    })
}

/// Minimum of Σ n_i α_i over the feasible points of the lattice
/// `α ∈ {0, 1/res, …, 1}^K`.
///
/// The lattice is a subset of the feasible region, so the result is never
/// below the true optimum, and rounding the optimum up to the lattice shows
/// it exceeds the optimum by at most `K · max(n_i) / res`.
pub fn lp_grid(instance: &LpInstance, resolution: u32) -> Result<ExponentSolution> {
    let k = instance.k();
    if k > GRID_MAX_K {
        return Err(Error::TooLarge {
            size: k,
            max: GRID_MAX_K,
        });
    }
    if resolution < GRID_MIN_RESOLUTION {
        return Err(Error::InvalidInstance(format!(
            "grid resolution {resolution} below {GRID_MIN_RESOLUTION}"
        )));
    }
    let res = f64::from(resolution);
    // Per lattice step of α_i: cost n_i / res, coverage μ_i / res.
    let step_cost: Vec<f64> = instance.antennas.iter().map(|n| n / res).collect();
    let step_cover: Vec<f64> = instance.weights.iter().map(|m| m / res).collect();

    let mut max_cover_from = vec![0.0; k + 1];
    let mut min_ratio_from = vec![f64::INFINITY; k + 1];
    for i in (0..k).rev() {
        max_cover_from[i] = max_cover_from[i + 1] + step_cover[i] * res;
        min_ratio_from[i] = min_ratio_from[i + 1].min(step_cost[i] / step_cover[i]);
    }

    let mut search = GridSearch {
        res: resolution,
        bound: instance.bound,
        step_cost: &step_cost,
        step_cover: &step_cover,
        max_cover_from,
        min_ratio_from,
        current: vec![0; k],
        best_cost: f64::INFINITY,
        best: vec![resolution; k],
    };
    search.descend(0, 0.0, 0.0);

    let alpha = search.best.iter().map(|&s| f64::from(s) / res).collect();
    let d = instance
        .antennas
        .iter()
        .zip(&search.best)
        .map(|(n, &s)| n * f64::from(s))
        .sum::<f64>()
        / res;
    Ok(ExponentSolution { alpha, d })
}

struct GridSearch<'a> {
    res: u32,
    bound: f64,
    step_cost: &'a [f64],
    step_cover: &'a [f64],
    /// Coverage reachable by setting variables i.. to 1.
    max_cover_from: Vec<f64>,
    /// Smallest cost per unit of coverage among variables i..
    min_ratio_from: Vec<f64>,
    current: Vec<u32>,
    best_cost: f64,
    best: Vec<u32>,
}

impl GridSearch<'_> {
    fn descend(&mut self, i: usize, cost: f64, cover: f64) {
        let last = self.current.len() - 1;
        if i == last {
            let deficit = self.bound - cover - FEAS_EPS;
            let steps = if deficit <= 0.0 {
                0.0
            } else {
                (deficit / self.step_cover[i]).ceil()
            };
            if steps > f64::from(self.res) {
                return;
            }
            let steps = steps as u32;
            let total = cost + self.step_cost[i] * f64::from(steps);
            if total < self.best_cost {
                self.current[i] = steps;
                self.best_cost = total;
                self.best.clone_from(&self.current);
            }
            return;
        }
        for s in (0..=self.res).rev() {
            let cover_here = cover + self.step_cover[i] * f64::from(s);
            if cover_here + self.max_cover_from[i + 1] < self.bound - FEAS_EPS {
                // smaller s only lowers coverage further
                break;
            }
            let cost_here = cost + self.step_cost[i] * f64::from(s);
            let deficit = (self.bound - cover_here).max(0.0);
            if cost_here + deficit * self.min_ratio_from[i + 1] >= self.best_cost {
                continue;
            }
            self.current[i] = s;
            self.descend(i + 1, cost_here, cover_here);
        }
    }
}
