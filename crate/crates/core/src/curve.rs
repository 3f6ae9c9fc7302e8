use serde::Serialize;

use crate::error::{Error, Result};

/// A breakpoint of a piecewise-linear tradeoff curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Corner {
    /// Multiplexing gain.
    pub r: f64,
    /// Diversity gain.
    pub d: f64,
}

/// Piecewise-linear diversity-multiplexing tradeoff given by its corners.
///
/// Corners run from `(0, Σ n_i)` to `(K, 0)` with strictly increasing `r`
/// and non-increasing `d`. Collinear corners are kept.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DmtCurve {
    corners: Vec<Corner>,
}

impl DmtCurve {
    /// Builds a curve from corner points, checking the ordering invariants.
    pub fn from_corners(corners: Vec<Corner>) -> Result<Self> {
        let invalid = |msg: &str| Err(Error::InvalidParameter(format!("curve corners: {msg}")));
        if corners.len() < 2 {
            return invalid("need at least two corners");
        }
        if corners[0].r != 0.0 {
            return invalid("first corner must be at r = 0");
        }
        if corners[corners.len() - 1].d != 0.0 {
            return invalid("last corner must have d = 0");
        }
        for pair in corners.windows(2) {
            if !(pair[1].r > pair[0].r) {
                return invalid("r must be strictly increasing");
            }
            if pair[1].d > pair[0].d {
                return invalid("d must be non-increasing");
            }
        }
        Ok(Self { corners })
    }

    pub fn corners(&self) -> &[Corner] {
        &self.corners
    }

    /// Maximal multiplexing gain (the last corner's abscissa, K).
    pub fn max_multiplexing(&self) -> f64 {
        self.corners[self.corners.len() - 1].r
    }

    /// Maximal diversity, d(0).
    pub fn max_diversity(&self) -> f64 {
        self.corners[0].d
    }

    /// Diversity at multiplexing gain `r`, interpolating between corners.
    ///
    /// Returns the corner ordinate exactly when `r` is a corner abscissa.
    pub fn eval(&self, r: f64) -> Result<f64> {
        let max = self.max_multiplexing();
        if !(0.0..=max).contains(&r) {
            return Err(Error::OutOfRange { r, max });
        }
        // first corner with abscissa >= r
        let idx = self.corners.partition_point(|c| c.r < r);
        let right = self.corners[idx];
        if right.r == r {
            return Ok(right.d);
        }
        let left = self.corners[idx - 1];
        Ok(left.d + (right.d - left.d) * (r - left.r) / (right.r - left.r))
    }

    /// Evaluates the curve on `0, step, 2 step, …` up to K inclusive.
    pub fn sample(&self, step: f64) -> Vec<Corner> {
        let max = self.max_multiplexing();
        let n = (max / step).round() as usize;
        (0..=n)
            .map(|i| {
                let r = if i == n { max } else { (i as f64 * step).min(max) };
                Corner {
                    r,
                    d: self.eval(r).expect("sample point in range"),
                }
            })
            .collect()
    }
}

/// Free-function form of [`DmtCurve::eval`].
pub fn eval_dmt(curve: &DmtCurve, r: f64) -> Result<f64> {
    curve.eval(r)
}
