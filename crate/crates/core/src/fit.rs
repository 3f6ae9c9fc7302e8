//! Empirical diversity: the slope of `-log10 P_out` against `log10 ρ`.

use serde::Serialize;

use crate::curve::DmtCurve;
use crate::error::{Error, Result};
use crate::sim::OutageEstimate;

/// Points with fewer outages than this are excluded from a fit.
pub const MIN_EVENTS: u64 = 20;

/// Default relative tolerance of [`compare`].
pub const DEFAULT_TOLERANCE: f64 = 0.15;

/// Inclusive SNR range in dB.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SnrWindow {
    pub lo_db: f64,
    pub hi_db: f64,
}

impl SnrWindow {
    pub fn new(lo_db: f64, hi_db: f64) -> Result<Self> {
        if !(lo_db <= hi_db) {
            return Err(Error::InvalidParameter(format!(
                "empty SNR window {lo_db}:{hi_db}"
            )));
        }
        Ok(Self { lo_db, hi_db })
    }

    /// Window covering every finite SNR.
    pub fn all() -> Self {
        Self {
            lo_db: f64::MIN,
            hi_db: f64::MAX,
        }
    }

    pub fn contains(&self, db: f64) -> bool {
        db >= self.lo_db - 1e-9 && db <= self.hi_db + 1e-9
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopeFit {
    /// Estimated diversity exponent.
    pub d_hat: f64,
    pub stderr: f64,
    /// Fitted `-log10 P_out` at ρ = 1.
    pub intercept: f64,
    pub window: SnrWindow,
    pub points_used: usize,
    /// SNRs (dB) inside the window dropped for too few events.
    pub dropped_db: Vec<f64>,
}

/// Weighted least-squares line `y = a + b x`; returns `(b, a, stderr(b))`.
///
/// With three or more points the slope error is scaled by the weighted
/// residual variance; with two it follows from the weights alone.
pub fn weighted_line(x: &[f64], y: &[f64], w: &[f64]) -> Result<(f64, f64, f64)> {
    let m = x.len();
    if m < 2 {
        return Err(Error::InsufficientData { usable: m });
    }
    let sw: f64 = w.iter().sum();
    let xm = w.iter().zip(x).map(|(w, x)| w * x).sum::<f64>() / sw;
    let ym = w.iter().zip(y).map(|(w, y)| w * y).sum::<f64>() / sw;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for i in 0..m {
        sxx += w[i] * (x[i] - xm).powi(2);
        sxy += w[i] * (x[i] - xm) * (y[i] - ym);
    }
    if !(sxx > 0.0) {
        return Err(Error::InsufficientData { usable: 1 });
    }
    let slope = sxy / sxx;
    let intercept = ym - slope * xm;
    let stderr = if m > 2 {
        let rss: f64 = (0..m)
            .map(|i| w[i] * (y[i] - intercept - slope * x[i]).powi(2))
            .sum();
        (rss / (m - 2) as f64 / sxx).sqrt()
    } else {
        (1.0 / sxx).sqrt()
    };
    Ok((slope, intercept, stderr))
}

/// Fits the diversity exponent to the estimates inside `window`.
///
/// Each point is weighted by the inverse delta-method variance of
/// `log10 p̂`, `(1 - p) / (n p) / ln²10`.
pub fn fit_slope(estimates: &[OutageEstimate], window: SnrWindow) -> Result<SlopeFit> {
    let mut dropped_db = Vec::new();
    let (mut x, mut y, mut w) = (Vec::new(), Vec::new(), Vec::new());
    for e in estimates.iter().filter(|e| window.contains(e.rho_db)) {
        if e.n_outages < MIN_EVENTS || e.n_outages >= e.n_samples {
            dropped_db.push(e.rho_db);
            continue;
        }
        let p = e.p_hat;
        let var = (1.0 - p) / (e.n_samples as f64 * p) / std::f64::consts::LN_10.powi(2);
        x.push(e.rho_db / 10.0);
        y.push(-p.log10());
        w.push(1.0 / var);
    }
    if x.len() < 2 {
        if !dropped_db.is_empty() {
            return Err(Error::InsufficientEvents {
                dropped_db,
                min_events: MIN_EVENTS,
            });
        }
        return Err(Error::InsufficientData { usable: x.len() });
    }
    if !dropped_db.is_empty() {
        log::info!("fit dropped points at {dropped_db:?} dB (fewer than {MIN_EVENTS} outages)");
    }
    let (d_hat, intercept, stderr) = weighted_line(&x, &y, &w)?;
    Ok(SlopeFit {
        d_hat,
        stderr,
        intercept,
        window,
        points_used: x.len(),
        dropped_db,
    })
}

/// Outcome of checking a fitted exponent against the analytic curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub r: f64,
    pub d_hat: f64,
    pub stderr: f64,
    pub d_analytic: f64,
    pub rel_error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Passes when `|d̂ - d(r)| ≤ tol · d(r) + 2 · stderr`.
pub fn compare(fit: &SlopeFit, curve: &DmtCurve, r: f64, tolerance: f64) -> Result<Verdict> {
    let d = curve.eval(r)?;
    let gap = (fit.d_hat - d).abs();
    let rel_error = if d > 0.0 { gap / d } else { gap };
    Ok(Verdict {
        r,
        d_hat: fit.d_hat,
        stderr: fit.stderr,
        d_analytic: d,
        rel_error,
        tolerance,
        pass: gap <= tolerance * d + 2.0 * fit.stderr,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Corner;
    use crate::sim::scalar_rayleigh_outage;

    /// Estimate whose p̂ reproduces `p` to ~1e-15.
    fn exact(rho_db: f64, p: f64) -> OutageEstimate {
        let n: u64 = 1_000_000_000_000_000;
        let n_outages = (p * n as f64).round() as u64;
        let p_hat = n_outages as f64 / n as f64;
        OutageEstimate {
            r: 0.5,
            rho_db,
            n_samples: n,
            n_outages,
            n_discarded: 0,
            p_hat,
            ci_low: p_hat,
            ci_high: p_hat,
        }
    }

    fn line(points: &[(f64, f64)]) -> DmtCurve {
        DmtCurve::from_corners(points.iter().map(|&(r, d)| Corner { r, d }).collect()).unwrap()
    }

    #[test]
    fn exact_power_law() {
        let est: Vec<_> = [10.0, 20.0, 30.0]
            .iter()
            .map(|&db| exact(db, 10f64.powf(-2.0 * db / 10.0)))
            .collect();
        let f = fit_slope(&est, SnrWindow::all()).unwrap();
        assert!((f.d_hat - 2.0).abs() < 1e-9, "{}", f.d_hat);
        assert!(f.stderr < 1e-9);
        assert_eq!(f.points_used, 3);
    }

    #[test]
    fn constant_factor_goes_to_intercept() {
        let est: Vec<_> = [10.0, 20.0, 30.0]
            .iter()
            .map(|&db| exact(db, 7.0 * 10f64.powf(-3.0 * db / 10.0)))
            .collect();
        let f = fit_slope(&est, SnrWindow::all()).unwrap();
        assert!((f.d_hat - 3.0).abs() < 1e-9);
        assert!((f.intercept + 7f64.log10()).abs() < 1e-9);
    }

    #[test]
    fn window_and_event_filtering() {
        let mut est: Vec<_> = [10.0, 20.0, 30.0]
            .iter()
            .map(|&db| exact(db, 10f64.powf(-db / 10.0)))
            .collect();
        est.push(OutageEstimate::from_counts(0.5, 40.0, 1000, 3, 0));
        let f = fit_slope(&est, SnrWindow::new(15.0, 45.0).unwrap()).unwrap();
        assert_eq!(f.points_used, 2);
        assert_eq!(f.dropped_db, vec![40.0]);

        let err = fit_slope(&est, SnrWindow::new(35.0, 45.0).unwrap()).unwrap_err();
        assert_eq!(
            err,
            Error::InsufficientEvents {
                dropped_db: vec![40.0],
                min_events: MIN_EVENTS
            }
        );
        let err = fit_slope(&est, SnrWindow::new(50.0, 60.0).unwrap()).unwrap_err();
        assert_eq!(err, Error::InsufficientData { usable: 0 });
    }

    #[test]
    fn same_snr_points_cannot_fit() {
        let est = vec![exact(10.0, 0.1), exact(10.0, 0.1)];
        assert!(matches!(
            fit_slope(&est, SnrWindow::all()),
            Err(Error::InsufficientData { .. })
        ));
    }

    #[test]
    fn window_validation() {
        assert!(SnrWindow::new(30.0, 20.0).is_err());
        assert!(SnrWindow::new(20.0, 20.0).is_ok());
    }

    #[test]
    fn scalar_closed_form_slope_rises_with_snr() {
        // d = 0.5 asymptotically; finite-SNR slope approaches it from below
        let mut last = 0.0;
        for lo in (10..=40).step_by(5) {
            let lo = f64::from(lo);
            let est: Vec<_> = (0..=4)
                .map(|i| {
                    let db = lo + 2.5 * f64::from(i);
                    exact(db, scalar_rayleigh_outage(10f64.powf(db / 10.0), 0.5))
                })
                .collect();
            let d = fit_slope(&est, SnrWindow::all()).unwrap().d_hat;
            assert!(d > last, "window at {lo} dB: {d} <= {last}");
            assert!(d < 0.5 + 1e-6);
            last = d;
        }
        assert!(last > 0.49);
    }

    #[test]
    fn compare_examples() {
        let c = line(&[(0.0, 4.0), (1.0, 2.0), (2.0, 0.0)]);
        let fit = |d_hat: f64, stderr: f64| SlopeFit {
            d_hat,
            stderr,
            intercept: 0.0,
            window: SnrWindow::all(),
            points_used: 3,
            dropped_db: vec![],
        };
        assert!(compare(&fit(1.9, 0.05), &c, 1.0, 0.15).unwrap().pass);
        assert!(!compare(&fit(1.0, 0.0), &c, 1.0, 0.15).unwrap().pass);
        let v = compare(&fit(2.0, 0.0), &c, 1.0, 0.15).unwrap();
        assert_eq!(v.d_analytic, 2.0);
        assert_eq!(v.rel_error, 0.0);
        assert!(compare(&fit(2.0, 0.0), &c, 3.0, 0.15).is_err());
    }
}
