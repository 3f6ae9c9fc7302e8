//! Estimating the diversity exponent from simulated outage curves and
//! comparing it with the analytic value.
//!
//! High-SNR exponents are approached slowly, so the fit is repeated over
//! sliding SNR windows.
//!
//! ```text
//! cargo run --release --example diversity_slope
//! ```

use wdmt::sim::{outage_sweep, MonteCarloPlan, OperatingPoint};
use wdmt::{compare, fit_slope, validate_weights, Result, Scenario, SnrWindow};

fn main() -> Result<()> {
    let scenario = Scenario::parallel_identical(1, validate_weights(&[1.0])?)?;
    let curve = scenario.dmt_curve()?;
    let r = 0.5;
    let points: Vec<OperatingPoint> = (0..=12)
        .map(|i| OperatingPoint::new(r, 10.0 + 2.5 * f64::from(i)))
        .collect();
    let estimates = outage_sweep(&scenario, &points, MonteCarloPlan::new(2_000_000, 3, 4))?;

    println!("single link, r = {r}, analytic d = {}", curve.eval(r)?);
    for lo in [10.0, 15.0, 20.0, 25.0] {
        let window = SnrWindow::new(lo, lo + 15.0)?;
        let fit = fit_slope(&estimates, window)?;
        let v = compare(&fit, &curve, r, 0.15)?;
        println!(
            "  {lo:4.1}-{:4.1} dB: d_hat = {:.3} +- {:.3}  rel. error {:.1}%  {}",
            lo + 15.0,
            fit.d_hat,
            fit.stderr,
            100.0 * v.rel_error,
            if v.pass { "pass" } else { "fail" }
        );
    }
    Ok(())
}
